#pragma once

// Experiment layer: camera rings, random interior targets, the
// closed-form-vs-Monte-Carlo comparison sweeps, voxel error maps, and
// camera-pair selection.  Every randomized routine derives its streams from
// the scenario seed through fixed fork indices, and every parallel loop
// writes to pre-assigned slots, so all outputs are bit-reproducible.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mvcov/covariance.hpp"
#include "mvcov/errors.hpp"
#include "mvcov/geometry.hpp"
#include "mvcov/montecarlo.hpp"
#include "mvcov/parallel.hpp"
#include "mvcov/rng.hpp"
#include "mvcov/triangulation.hpp"

namespace mvcov {

struct Box {
  Vec3 min;
  Vec3 max;
};

struct Scenario {
  Scenario(std::vector<CameraModel> cameras_, Box room_,
           const MPolicy& m_policy_, std::uint64_t seed_,
           std::vector<std::optional<Vec2>> fov_half_extents_ = {})
      : cameras(std::move(cameras_)),
        room(room_),
        m_policy(m_policy_),
        seed(seed_),
        fov_half_extents(std::move(fov_half_extents_)) {
    if (cameras.empty())
      throw ValidationError("scenario needs at least one camera");
    std::set<std::string> ids;
    for (const CameraModel& cam : cameras)
      if (!ids.insert(cam.id).second)
        throw ValidationError("duplicate camera id: " + cam.id);
    for (int k = 0; k < 3; ++k)
      if (!(room.max[k] > room.min[k]))
        throw ValidationError("room box must have positive volume");
    if (fov_half_extents.empty())
      fov_half_extents.assign(cameras.size(), std::nullopt);
    if (fov_half_extents.size() != cameras.size())
      throw ValidationError("one FOV entry required per camera");
    for (const auto& fov : fov_half_extents)
      if (fov && !((*fov)[0] > 0.0 && (*fov)[1] > 0.0))
        throw ValidationError("FOV half extents must be positive");
  }

  bool in_room(const Vec3& p) const {
    for (int k = 0; k < 3; ++k)
      if (p[k] < room.min[k] || p[k] > room.max[k]) return false;
    return true;
  }

  double room_max_side() const {
    return (room.max - room.min).maxCoeff();
  }

  // Positive depth, plus the rectangular sensor bound when one is set.
  bool sees(std::size_t cam_index, const Vec3& p) const {
    const CameraModel& cam = cameras[cam_index];
    if (!(depth(cam, p) > 0.0)) return false;
    const auto& fov = fov_half_extents[cam_index];
    if (!fov) return true;
    const PixelPoint px = project(cam, p);
    return std::abs(px.u) <= (*fov)[0] && std::abs(px.v) <= (*fov)[1];
  }

  std::size_t index_of(const std::string& id) const {
    for (std::size_t i = 0; i < cameras.size(); ++i)
      if (cameras[i].id == id) return i;
    throw ValidationError("unknown camera id: " + id);
  }

  std::vector<std::size_t> resolve_subset(
      const std::vector<std::string>& ids) const {
    std::vector<std::size_t> out;
    out.reserve(ids.size());
    std::set<std::size_t> seen;
    for (const std::string& id : ids) {
      const std::size_t i = index_of(id);
      if (!seen.insert(i).second)
        throw ValidationError("duplicate camera id in subset: " + id);
      out.push_back(i);
    }
    return out;
  }

  std::vector<CameraModel> cameras;
  Box room;
  MPolicy m_policy;
  std::uint64_t seed;
  std::vector<std::optional<Vec2>> fov_half_extents;
};

inline std::pair<std::vector<CameraModel>, std::vector<PixelPoint>>
resolve_observations(const Scenario& scenario,
                     std::span<const Observation> observations) {
  std::vector<CameraModel> cams;
  std::vector<PixelPoint> pixels;
  cams.reserve(observations.size());
  pixels.reserve(observations.size());
  for (const Observation& obs : observations) {
    cams.push_back(scenario.cameras[scenario.index_of(obs.camera_id)]);
    pixels.push_back(obs.pixel);
  }
  return {std::move(cams), std::move(pixels)};
}

// m cameras equally spaced on a horizontal circle, all aimed at its center,
// sensor rows horizontal (down-axis = world -z).  The room is the circle's
// bounding box, inflated to z in [height-1, height+1] so it has volume.
inline Scenario ring_scenario(int m, double radius, double height,
                              double focal, double sigma,
                              std::uint64_t seed = 0) {
  if (m < 1) throw ValidationError("ring needs at least one camera");
  if (!(radius > 0.0)) throw ValidationError("ring radius must be positive");
  std::vector<CameraModel> cams;
  cams.reserve(static_cast<std::size_t>(m));
  const Vec3 target(0.0, 0.0, height);
  for (int k = 0; k < m; ++k) {
    const double beta = 2.0 * M_PI * static_cast<double>(k) / m;
    const Vec3 center(radius * std::cos(beta), radius * std::sin(beta),
                      height);
    char id[32];
    std::snprintf(id, sizeof(id), "cam%03d", k);
    cams.emplace_back(id, center, Rotation3::look_at(center, target), focal,
                      sigma);
  }
  const Box room{Vec3(-radius, -radius, height - 1.0),
                 Vec3(radius, radius, height + 1.0)};
  return Scenario(std::move(cams), room, MPolicy::limit(), seed);
}

// Fused covariance at `point` under the given policy.  Cameras with zero
// pixel noise admit no measurement Gaussian; a uniformly noiseless set is
// the exact limit (zero covariance), a mixed set is rejected.
inline Covariance3 fused_point_covariance(std::span<const CameraModel> cameras,
                                          const Vec3& point,
                                          const MPolicy& policy) {
  if (cameras.empty()) throw ValidationError("no cameras selected");
  std::size_t zero_sigma = 0;
  for (const CameraModel& cam : cameras)
    if (!(cam.pixel_noise_std > 0.0)) ++zero_sigma;
  if (zero_sigma == cameras.size()) {
    for (const CameraModel& cam : cameras)
      if (!(depth(cam, point) > 0.0))
        throw BehindCamera("point not in front of every selected camera");
    return Covariance3::zero();
  }
  if (zero_sigma > 0)
    throw ValidationError(
        "cannot fuse a mix of zero and non-zero pixel noise cameras");
  std::vector<Information3> infos;
  infos.reserve(cameras.size());
  for (const CameraModel& cam : cameras)
    infos.push_back(single_view_information(cam, point, policy));
  return fuse(infos);
}

namespace detail {

// Fixed fork indices partitioning the scenario seed's stream space.
constexpr std::uint64_t kStreamFig4 = 4;
constexpr std::uint64_t kStreamFig5 = 5;
constexpr std::uint64_t kStreamMap = 6;

inline Vec3 ring_centroid(const Scenario& s) {
  Vec3 c = Vec3::Zero();
  for (const CameraModel& cam : s.cameras) c += cam.center;
  return c / static_cast<double>(s.cameras.size());
}

inline double min_radial_distance(const Scenario& s, const Vec3& centroid) {
  double r = std::numeric_limits<double>::infinity();
  for (const CameraModel& cam : s.cameras) {
    const double dx = cam.center[0] - centroid[0];
    const double dy = cam.center[1] - centroid[1];
    r = std::min(r, std::hypot(dx, dy));
  }
  return r;
}

// Uniform draw in the vertical cylinder (radius, z range) about `center`.
inline Vec3 sample_cylinder_point(const CounterRng& rng, const Vec3& center,
                                  double radius, double z_min, double z_max) {
  const double r = radius * std::sqrt(rng.uniform(0));
  const double phi = 2.0 * M_PI * rng.uniform(1);
  const double z = z_min + (z_max - z_min) * rng.uniform(2);
  return Vec3(center[0] + r * std::cos(phi), center[1] + r * std::sin(phi),
              z);
}

// First m entries of a partial Fisher-Yates shuffle of {0..n-1}.
inline std::vector<std::size_t> sample_camera_subset(const CounterRng& rng,
                                                     std::size_t n,
                                                     std::size_t m) {
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  for (std::size_t k = 0; k < m; ++k) {
    const std::size_t j =
        k + static_cast<std::size_t>(rng.uniform(k) *
                                     static_cast<double>(n - k));
    std::swap(idx[k], idx[std::min(j, n - 1)]);
  }
  idx.resize(m);
  return idx;
}

// Reference covariance for comparisons against sampled triangulation.  A
// finite-M policy is honored verbatim; the Limit policy is replaced by the
// exact large-M limit, which is what the sampled estimator converges to at
// off-axis targets (the rank-2 Limit-mode matrix is not).
inline Covariance3 sampling_reference_covariance(
    std::span<const CameraModel> cameras, const Vec3& point,
    const MPolicy& policy) {
  if (policy.mode == MPolicy::Mode::Finite)
    return fused_point_covariance(cameras, point, policy);
  if (cameras.empty()) throw ValidationError("no cameras selected");
  std::size_t zero_sigma = 0;
  for (const CameraModel& cam : cameras)
    if (!(cam.pixel_noise_std > 0.0)) ++zero_sigma;
  if (zero_sigma == cameras.size()) {
    for (const CameraModel& cam : cameras)
      if (!(depth(cam, point) > 0.0))
        throw BehindCamera("point not in front of every selected camera");
    return Covariance3::zero();
  }
  if (zero_sigma > 0)
    throw ValidationError(
        "cannot fuse a mix of zero and non-zero pixel noise cameras");
  std::vector<Information3> infos;
  infos.reserve(cameras.size());
  for (const CameraModel& cam : cameras)
    infos.push_back(single_view_ray_information(cam, point));
  return fuse(infos);
}

}  // namespace detail

struct Fig4Row {
  int m;
  double mean_percent_diff;
  double std_error;  // standard error of the mean over points
  long long points_used;
};

// Closed form vs Monte Carlo over random camera subsets and random interior
// points: for each m, draw `points_per_m` targets uniformly in the cylinder
// of radius 0.9 R inscribed in the ring (z within +-1 m of the ring plane),
// draw a fresh m-camera subset per target, and average the percent
// difference of the overall standard deviations.
inline std::vector<Fig4Row> run_fig4(const Scenario& base,
                                     const std::vector<int>& m_values,
                                     int points_per_m, const McConfig& mc,
                                     int threads = 1) {
  if (m_values.empty()) throw ValidationError("empty m list");
  const std::size_t n = base.cameras.size();
  for (int m : m_values)
    if (m < 2 || static_cast<std::size_t>(m) > n)
      throw ValidationError("m values must lie in [2, camera count]");
  if (points_per_m < 1)
    throw ValidationError("need at least one point per m");

  const Vec3 centroid = detail::ring_centroid(base);
  const double radius = 0.9 * detail::min_radial_distance(base, centroid);
  if (!(radius > 0.0))
    throw ValidationError("cameras are concentric; no interior volume");
  const double z_min = centroid[2] - 1.0;
  const double z_max = centroid[2] + 1.0;

  const std::size_t total =
      m_values.size() * static_cast<std::size_t>(points_per_m);
  std::vector<double> diffs(total);
  const CounterRng root = CounterRng(base.seed).fork(detail::kStreamFig4);

  parallel_for(total, threads, [&](std::size_t item) {
    const std::size_t im = item / static_cast<std::size_t>(points_per_m);
    const std::size_t ip = item % static_cast<std::size_t>(points_per_m);
    const std::size_t m = static_cast<std::size_t>(m_values[im]);
    const CounterRng stream = root.fork(im).fork(ip);

    const Vec3 point = detail::sample_cylinder_point(stream.fork(0), centroid,
                                                     radius, z_min, z_max);
    const std::vector<std::size_t> subset =
        detail::sample_camera_subset(stream.fork(1), n, m);
    std::vector<CameraModel> cams;
    cams.reserve(m);
    for (std::size_t i : subset) cams.push_back(base.cameras[i]);

    bool all_noiseless = true;
    for (const CameraModel& cam : cams)
      if (cam.pixel_noise_std > 0.0) all_noiseless = false;
    if (all_noiseless) {
      diffs[item] = 0.0;  // exact in the no-noise limit
      return;
    }

    try {
      const Covariance3 theory =
          detail::sampling_reference_covariance(cams, point, base.m_policy);
      McConfig cfg = mc;
      cfg.seed = stream.fork(2).key();
      const McResult result = mc_covariance(cams, point, cfg, 1);
      diffs[item] = percent_std_difference(result, theory);
    } catch (const NumericalError&) {
      // A subset can still be unusable for a particular point (rays parallel
      // within tolerance, or too many degenerate sampling trials).  Drop the
      // point from the average; points_used reports how many survived.
      diffs[item] = std::numeric_limits<double>::quiet_NaN();
    }
  });

  std::vector<Fig4Row> rows;
  rows.reserve(m_values.size());
  for (std::size_t im = 0; im < m_values.size(); ++im) {
    const double* block = diffs.data() + im * points_per_m;
    long long count = 0;
    double mean = 0.0;
    for (int i = 0; i < points_per_m; ++i)
      if (!std::isnan(block[i])) {
        mean += block[i];
        ++count;
      }
    if (count == 0)
      throw TooFewValidTrials("every sampled point was degenerate for m=" +
                              std::to_string(m_values[im]));
    mean /= static_cast<double>(count);
    double sem = 0.0;
    if (count > 1) {
      double ss = 0.0;
      for (int i = 0; i < points_per_m; ++i)
        if (!std::isnan(block[i]))
          ss += (block[i] - mean) * (block[i] - mean);
      sem = std::sqrt(ss / static_cast<double>(count - 1) /
                      static_cast<double>(count));
    }
    rows.push_back(Fig4Row{m_values[im], mean, sem, count});
  }
  return rows;
}

struct Fig5Row {
  double angle_rad;
  EllipseSection theory;
  EllipseSection mc;
};

// Two cameras on the ring separated by each requested angle, both observing
// the ring center; the fused covariance and its Monte Carlo estimate are
// sliced in the ring plane.
inline std::vector<Fig5Row> run_fig5(const Scenario& ring,
                                     const std::vector<double>& angles,
                                     const McConfig& mc, int threads = 1) {
  const std::size_t m = ring.cameras.size();
  if (m < 2) throw NotEnoughCameras("ring needs at least two cameras");
  const double step = 2.0 * M_PI / static_cast<double>(m);
  const Vec3 center = detail::ring_centroid(ring);
  const Vec3 normal(0.0, 0.0, 1.0);

  std::vector<Fig5Row> rows;
  rows.reserve(angles.size());
  const CounterRng root = CounterRng(mc.seed).fork(detail::kStreamFig5);
  for (std::size_t ai = 0; ai < angles.size(); ++ai) {
    const double angle = angles[ai];
    const long long k = std::llround(angle / step);
    if (k < 1 || k >= static_cast<long long>(m) ||
        std::abs(angle - static_cast<double>(k) * step) > 1e-9)
      throw ValidationError("angle is not a multiple of the ring spacing");

    const std::vector<CameraModel> pair = {ring.cameras[0],
                                           ring.cameras[static_cast<std::size_t>(k)]};
    const Covariance3 theory =
        fused_point_covariance(pair, center, MPolicy::limit());

    McConfig cfg = mc;
    cfg.seed = root.fork(ai).key();
    const McResult result = mc_covariance(pair, center, cfg, threads);

    rows.push_back(Fig5Row{angle,
                           sigma_ellipse_slice(theory, normal, center),
                           sigma_ellipse_slice(result.sample_cov, normal,
                                               center)});
  }
  return rows;
}

struct ErrorMap {
  int nx, ny, nz;
  Vec3 origin;   // center of voxel (0, 0, 0)
  Vec3 spacing;  // positive
  std::vector<double> std_values;  // NaN marks unreconstructable voxels
  std::vector<int> visible_counts;

  std::size_t index(int i, int j, int k) const {
    return static_cast<std::size_t>(i) +
           static_cast<std::size_t>(nx) *
               (static_cast<std::size_t>(j) +
                static_cast<std::size_t>(ny) * static_cast<std::size_t>(k));
  }

  Vec3 voxel_center(int i, int j, int k) const {
    return origin + Vec3(i * spacing[0], j * spacing[1], k * spacing[2]);
  }
};

namespace detail {

inline ErrorMap empty_map(const Scenario& scenario, int nx, int ny, int nz) {
  if (nx < 1 || ny < 1 || nz < 1)
    throw ValidationError("grid dims must be >= 1");
  const Vec3 extent = scenario.room.max - scenario.room.min;
  const Vec3 spacing(extent[0] / nx, extent[1] / ny, extent[2] / nz);
  ErrorMap map{nx,
               ny,
               nz,
               scenario.room.min + 0.5 * spacing,
               spacing,
               std::vector<double>(static_cast<std::size_t>(nx) * ny * nz),
               std::vector<int>(static_cast<std::size_t>(nx) * ny * nz)};
  return map;
}

inline std::vector<std::size_t> subset_or_all(
    const Scenario& scenario,
    const std::optional<std::vector<std::string>>& subset_ids) {
  if (subset_ids) return scenario.resolve_subset(*subset_ids);
  std::vector<std::size_t> all(scenario.cameras.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  return all;
}

inline void check_uniform_sigma(const Scenario& scenario,
                                const std::vector<std::size_t>& subset) {
  std::size_t zeros = 0;
  for (std::size_t i : subset)
    if (!(scenario.cameras[i].pixel_noise_std > 0.0)) ++zeros;
  if (zeros != 0 && zeros != subset.size())
    throw ValidationError(
        "cannot map a mix of zero and non-zero pixel noise cameras");
}

}  // namespace detail

// Closed-form reconstruction quality on a voxel grid spanning the room.
// Voxels seen by fewer than two cameras (or with a singular fusion) carry a
// NaN marker instead of raising.
inline ErrorMap error_map(
    const Scenario& scenario, int nx, int ny, int nz,
    const std::optional<std::vector<std::string>>& subset_ids = std::nullopt,
    int threads = 1) {
  ErrorMap map = detail::empty_map(scenario, nx, ny, nz);
  const std::vector<std::size_t> subset =
      detail::subset_or_all(scenario, subset_ids);
  detail::check_uniform_sigma(scenario, subset);
  const std::size_t total = map.std_values.size();

  parallel_for(total, threads, [&](std::size_t v) {
    const int i = static_cast<int>(v % static_cast<std::size_t>(nx));
    const int j = static_cast<int>((v / nx) % static_cast<std::size_t>(ny));
    const int k = static_cast<int>(v / (static_cast<std::size_t>(nx) * ny));
    const Vec3 p = map.voxel_center(i, j, k);

    std::vector<CameraModel> visible;
    for (std::size_t c : subset)
      if (scenario.sees(c, p)) visible.push_back(scenario.cameras[c]);
    map.visible_counts[v] = static_cast<int>(visible.size());
    if (visible.size() < 2) {
      map.std_values[v] = std::numeric_limits<double>::quiet_NaN();
      return;
    }
    try {
      map.std_values[v] = overall_std(
          fused_point_covariance(visible, p, MPolicy::limit()));
    } catch (const NumericalError&) {
      map.std_values[v] = std::numeric_limits<double>::quiet_NaN();
    }
  });
  return map;
}

// Monte Carlo counterpart of error_map: per-voxel sampled overall std with
// the same visibility rule and NaN markers.
inline ErrorMap mc_error_map(
    const Scenario& scenario, int nx, int ny, int nz, const McConfig& mc,
    const std::optional<std::vector<std::string>>& subset_ids = std::nullopt,
    int threads = 1) {
  ErrorMap map = detail::empty_map(scenario, nx, ny, nz);
  const std::vector<std::size_t> subset =
      detail::subset_or_all(scenario, subset_ids);
  detail::check_uniform_sigma(scenario, subset);
  const std::size_t total = map.std_values.size();
  const CounterRng root = CounterRng(mc.seed).fork(detail::kStreamMap);

  parallel_for(total, threads, [&](std::size_t v) {
    const int i = static_cast<int>(v % static_cast<std::size_t>(nx));
    const int j = static_cast<int>((v / nx) % static_cast<std::size_t>(ny));
    const int k = static_cast<int>(v / (static_cast<std::size_t>(nx) * ny));
    const Vec3 p = map.voxel_center(i, j, k);

    std::vector<CameraModel> visible;
    for (std::size_t c : subset)
      if (scenario.sees(c, p)) visible.push_back(scenario.cameras[c]);
    map.visible_counts[v] = static_cast<int>(visible.size());
    if (visible.size() < 2) {
      map.std_values[v] = std::numeric_limits<double>::quiet_NaN();
      return;
    }
    bool all_noiseless = true;
    for (const CameraModel& cam : visible)
      if (cam.pixel_noise_std > 0.0) all_noiseless = false;
    if (all_noiseless) {
      map.std_values[v] = 0.0;
      return;
    }
    try {
      McConfig cfg = mc;
      cfg.seed = root.fork(v).key();
      map.std_values[v] = overall_std(mc_covariance(visible, p, cfg, 1).sample_cov);
    } catch (const NumericalError&) {
      map.std_values[v] = std::numeric_limits<double>::quiet_NaN();
    }
  });
  return map;
}

struct PairScore {
  std::string camera_id_a;  // lexicographically <= camera_id_b
  std::string camera_id_b;
  double quality;  // overall_std of the pair-fused covariance, meters
};

struct PairRanking {
  std::vector<PairScore> pairs;  // ascending by quality
};

// Score every visible camera pair at `point` by the overall std of its
// Limit-mode fusion, ascending.  Pairs whose fusion is singular (collinear
// geometry) cannot reconstruct and are omitted.
inline PairRanking rank_pairs(const Scenario& scenario, const Vec3& point) {
  std::vector<std::size_t> visible;
  for (std::size_t c = 0; c < scenario.cameras.size(); ++c)
    if (scenario.sees(c, point)) visible.push_back(c);
  if (visible.size() < 2)
    throw NoVisiblePair("fewer than two cameras see the point");

  PairRanking ranking;
  for (std::size_t a = 0; a < visible.size(); ++a)
    for (std::size_t b = a + 1; b < visible.size(); ++b) {
      const std::vector<CameraModel> pair = {scenario.cameras[visible[a]],
                                             scenario.cameras[visible[b]]};
      double quality;
      try {
        quality = overall_std(
            fused_point_covariance(pair, point, MPolicy::limit()));
      } catch (const SingularInformation&) {
        continue;
      }
      std::string id_a = pair[0].id, id_b = pair[1].id;
      if (id_b < id_a) std::swap(id_a, id_b);
      ranking.pairs.push_back(PairScore{id_a, id_b, quality});
    }
  if (ranking.pairs.empty())
    throw NoVisiblePair("no camera pair can reconstruct the point");

  std::stable_sort(ranking.pairs.begin(), ranking.pairs.end(),
                   [](const PairScore& x, const PairScore& y) {
                     if (x.quality != y.quality) return x.quality < y.quality;
                     if (x.camera_id_a != y.camera_id_a)
                       return x.camera_id_a < y.camera_id_a;
                     return x.camera_id_b < y.camera_id_b;
                   });
  return ranking;
}

struct GreedySelection {
  std::vector<std::string> camera_ids;   // selection order; first two = best pair
  std::vector<double> overall_std_steps; // fused std after 2, 3, ..., k cameras
};

// Best pair first, then repeatedly add the camera that minimizes the fused
// overall std; exact ties go to the lexicographically smallest id.
inline GreedySelection greedy_select(const Scenario& scenario,
                                     const Vec3& point, int k) {
  if (k < 2) throw ValidationError("selection size must be >= 2");
  std::vector<std::size_t> visible;
  for (std::size_t c = 0; c < scenario.cameras.size(); ++c)
    if (scenario.sees(c, point)) visible.push_back(c);
  if (static_cast<std::size_t>(k) > visible.size())
    throw NotEnoughCameras("fewer visible cameras than requested");

  const PairRanking ranking = rank_pairs(scenario, point);
  const PairScore& best = ranking.pairs.front();

  GreedySelection sel;
  sel.camera_ids = {best.camera_id_a, best.camera_id_b};
  sel.overall_std_steps = {best.quality};

  std::set<std::size_t> chosen = {scenario.index_of(best.camera_id_a),
                                  scenario.index_of(best.camera_id_b)};
  while (sel.camera_ids.size() < static_cast<std::size_t>(k)) {
    double best_std = std::numeric_limits<double>::infinity();
    std::size_t best_cam = 0;
    std::string best_id;
    for (std::size_t c : visible) {
      if (chosen.count(c)) continue;
      std::vector<CameraModel> cams;
      cams.reserve(chosen.size() + 1);
      for (std::size_t i : chosen) cams.push_back(scenario.cameras[i]);
      cams.push_back(scenario.cameras[c]);
      const double value = overall_std(
          fused_point_covariance(cams, point, MPolicy::limit()));
      const std::string& id = scenario.cameras[c].id;
      if (value < best_std ||
          (value == best_std && id < best_id)) {
        best_std = value;
        best_cam = c;
        best_id = id;
      }
    }
    chosen.insert(best_cam);
    sel.camera_ids.push_back(best_id);
    sel.overall_std_steps.push_back(best_std);
  }
  return sel;
}

}  // namespace mvcov
