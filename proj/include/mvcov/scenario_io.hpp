#pragma once

// Versioned JSON scenario documents.  Loading re-validates every geometric
// invariant; saving always emits the canonical form (rotation as a row-major
// 3x3, fixed key order), and the scenario hash is an FNV-1a digest of the
// canonical compact serialization, so it is independent of the input file's
// formatting or rotation spelling.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "mvcov/covariance.hpp"
#include "mvcov/errors.hpp"
#include "mvcov/geometry.hpp"
#include "mvcov/scenario.hpp"
#include "mvcov/version.hpp"

namespace mvcov {

using Json = nlohmann::ordered_json;

inline std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

namespace detail {

inline Vec3 parse_vec3(const Json& j, const std::string& what) {
  if (!j.is_array() || j.size() != 3)
    throw ValidationError(what + " must be an array of three numbers");
  Vec3 out;
  for (int k = 0; k < 3; ++k) {
    if (!j[k].is_number())
      throw ValidationError(what + " must be an array of three numbers");
    out[k] = j[k].get<double>();
  }
  return out;
}

inline Json vec3_json(const Vec3& v) { return Json::array({v[0], v[1], v[2]}); }

inline Rotation3 parse_rotation(const Json& cam, const std::string& id) {
  const bool has_matrix = cam.contains("rotation");
  const bool has_look_at = cam.contains("look_at");
  if (has_matrix == has_look_at)
    throw ValidationError("camera " + id +
                          ": specify exactly one of rotation / look_at");
  if (has_look_at) {
    const Vec3 target = parse_vec3(cam.at("look_at"), "look_at");
    const Vec3 up = cam.contains("up") ? parse_vec3(cam.at("up"), "up")
                                       : Vec3(0.0, 0.0, 1.0);
    return Rotation3::look_at(parse_vec3(cam.at("center"), "center"), target,
                              up);
  }
  const Json& r = cam.at("rotation");
  Mat3 m;
  if (r.is_array() && r.size() == 3 && r[0].is_array()) {
    for (int i = 0; i < 3; ++i) {
      if (!r[i].is_array() || r[i].size() != 3)
        throw ValidationError("camera " + id + ": rotation must be 3x3");
      for (int j = 0; j < 3; ++j) m(i, j) = r[i][j].get<double>();
    }
  } else if (r.is_array() && r.size() == 9) {
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) m(i, j) = r[3 * i + j].get<double>();
  } else {
    throw ValidationError("camera " + id +
                          ": rotation must be a 3x3 or 9-element array");
  }
  return Rotation3(m);
}

}  // namespace detail

inline Scenario scenario_from_json(const Json& doc) {
  try {
    if (!doc.is_object()) throw ValidationError("scenario must be an object");
    if (!doc.contains("version") || !doc.at("version").is_number_integer() ||
        doc.at("version").get<int>() != kScenarioSchemaVersion)
      throw ValidationError("unsupported scenario file version");

    const std::uint64_t seed =
        doc.contains("seed") ? doc.at("seed").get<std::uint64_t>() : 0;

    const Json& room_j = doc.at("room");
    const Box room{detail::parse_vec3(room_j.at("min"), "room.min"),
                   detail::parse_vec3(room_j.at("max"), "room.max")};

    std::vector<CameraModel> cameras;
    std::vector<std::optional<Vec2>> fovs;
    for (const Json& cam_j : doc.at("cameras")) {
      const std::string id = cam_j.at("id").get<std::string>();
      const Vec3 center = detail::parse_vec3(cam_j.at("center"), "center");
      const Rotation3 rot = detail::parse_rotation(cam_j, id);
      cameras.emplace_back(id, center, rot, cam_j.at("focal").get<double>(),
                           cam_j.at("sigma").get<double>());
      if (cam_j.contains("fov")) {
        const Json& fov = cam_j.at("fov");
        fovs.push_back(Vec2(fov.at("half_width").get<double>(),
                            fov.at("half_height").get<double>()));
      } else {
        fovs.push_back(std::nullopt);
      }
    }

    MPolicy policy = MPolicy::limit();
    if (doc.contains("m_policy")) {
      const Json& pj = doc.at("m_policy");
      const std::string mode = pj.at("mode").get<std::string>();
      if (mode == "limit") {
        policy = MPolicy::limit();
      } else if (mode == "finite") {
        const double m_default = MPolicy::default_finite_m(
            (room.max - room.min).maxCoeff(), cameras.size());
        policy = MPolicy::finite(
            pj.contains("M") ? pj.at("M").get<double>() : m_default);
      } else {
        throw ValidationError("m_policy.mode must be \"limit\" or \"finite\"");
      }
    }

    return Scenario(std::move(cameras), room, policy, seed, std::move(fovs));
  } catch (const Error&) {
    throw;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed scenario file: ") + e.what());
  }
}

inline Json scenario_to_json(const Scenario& s) {
  Json doc;
  doc["version"] = kScenarioSchemaVersion;
  doc["seed"] = s.seed;
  doc["room"] = {{"min", detail::vec3_json(s.room.min)},
                 {"max", detail::vec3_json(s.room.max)}};
  if (s.m_policy.mode == MPolicy::Mode::Limit) {
    doc["m_policy"] = {{"mode", "limit"}};
  } else {
    doc["m_policy"] = {{"mode", "finite"}, {"M", s.m_policy.M}};
  }
  Json cams = Json::array();
  for (std::size_t i = 0; i < s.cameras.size(); ++i) {
    const CameraModel& cam = s.cameras[i];
    Json cj;
    cj["id"] = cam.id;
    cj["center"] = detail::vec3_json(cam.center);
    Json rows = Json::array();
    for (int r = 0; r < 3; ++r)
      rows.push_back(Json::array({cam.rotation.matrix()(r, 0),
                                  cam.rotation.matrix()(r, 1),
                                  cam.rotation.matrix()(r, 2)}));
    cj["rotation"] = rows;
    cj["focal"] = cam.focal_length;
    cj["sigma"] = cam.pixel_noise_std;
    if (s.fov_half_extents[i])
      cj["fov"] = {{"half_width", (*s.fov_half_extents[i])[0]},
                   {"half_height", (*s.fov_half_extents[i])[1]}};
    cams.push_back(std::move(cj));
  }
  doc["cameras"] = std::move(cams);
  return doc;
}

// 16-hex-digit digest of the canonical serialization.
inline std::string scenario_hash(const Scenario& s) {
  const std::uint64_t h = fnv1a64(scenario_to_json(s).dump());
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return std::string(buf);
}

inline Scenario load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open scenario file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  Json doc;
  try {
    doc = Json::parse(buf.str());
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("invalid scenario JSON: ") + e.what());
  }
  return scenario_from_json(doc);
}

inline void save_scenario(const Scenario& s, std::ostream& out) {
  out << scenario_to_json(s).dump(2) << "\n";
}

inline void save_scenario(const Scenario& s, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write scenario file: " + path);
  save_scenario(s, out);
}

}  // namespace mvcov
