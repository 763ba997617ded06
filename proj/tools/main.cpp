// Command-line surface of the covariance toolkit: scenario files in,
// deterministic JSON/CSV reports out.  Exit codes: 0 success, 2 input or
// validation failure, 3 numerical failure, 4 internal error; failures print
// a machine-readable JSON object on stderr.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mvcov/covariance.hpp"
#include "mvcov/csv.hpp"
#include "mvcov/errors.hpp"
#include "mvcov/montecarlo.hpp"
#include "mvcov/scenario.hpp"
#include "mvcov/scenario_io.hpp"
#include "mvcov/version.hpp"

namespace {

using mvcov::Json;
using mvcov::Vec3;

struct GlobalOpts {
  std::optional<std::uint64_t> seed;
  int threads = 1;
  std::optional<std::string> output;
  std::optional<std::string> format;
};

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

std::string resolve_format(const GlobalOpts& g, const std::string& def,
                           bool csv_allowed, bool json_allowed) {
  const std::string fmt = g.format.value_or(def);
  if ((fmt == "csv" && !csv_allowed) || (fmt == "json" && !json_allowed))
    throw mvcov::ValidationError("format \"" + fmt +
                                 "\" is not available for this command");
  return fmt;
}

void emit(const std::string& text, const std::optional<std::string>& path) {
  if (!path) {
    std::fwrite(text.data(), 1, text.size(), stdout);
    return;
  }
  std::ofstream out(*path, std::ios::binary);
  if (!out) throw mvcov::ValidationError("cannot write output file: " + *path);
  out << text;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : text) {
    if (c == sep) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(cur);
  return parts;
}

double parse_double(const std::string& text, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size() || !std::isfinite(v))
      throw std::invalid_argument(what);
    return v;
  } catch (const std::exception&) {
    throw mvcov::ValidationError("cannot parse " + what + ": \"" + text +
                                 "\"");
  }
}

Vec3 parse_point(const std::string& text) {
  const std::vector<std::string> parts = split(text, ',');
  if (parts.size() != 3)
    throw mvcov::ValidationError("point must be \"x,y,z\": \"" + text + "\"");
  return Vec3(parse_double(parts[0], "point.x"),
              parse_double(parts[1], "point.y"),
              parse_double(parts[2], "point.z"));
}

std::vector<int> parse_m_list(const std::string& text) {
  std::vector<int> values;
  for (const std::string& part : split(text, ',')) {
    if (part.empty()) continue;
    const double v = parse_double(part, "m value");
    const int m = static_cast<int>(v);
    if (v != m) throw mvcov::ValidationError("m values must be integers");
    values.push_back(m);
  }
  if (values.empty()) throw mvcov::ValidationError("empty m list");
  return values;
}

void parse_dims(const std::string& text, int& nx, int& ny, int& nz) {
  std::string norm = text;
  for (char& c : norm)
    if (c == 'X') c = 'x';
  const std::vector<std::string> parts = split(norm, 'x');
  if (parts.size() != 3)
    throw mvcov::ValidationError("dims must be \"NXxNYxNZ\": \"" + text +
                                 "\"");
  const auto parse_dim = [](const std::string& p) {
    const double v = parse_double(p, "grid dim");
    const int n = static_cast<int>(v);
    if (v != n || n < 1)
      throw mvcov::ValidationError("grid dims must be positive integers");
    return n;
  };
  nx = parse_dim(parts[0]);
  ny = parse_dim(parts[1]);
  nz = parse_dim(parts[2]);
}

mvcov::Estimator parse_estimator(const std::string& name) {
  if (name == "gls") return mvcov::Estimator::Gls;
  if (name == "midpoint") return mvcov::Estimator::Midpoint;
  throw mvcov::ValidationError("estimator must be gls or midpoint");
}

Json vec3_json(const Vec3& v) { return Json::array({v[0], v[1], v[2]}); }

Json mat3_json(const mvcov::Mat3& m) {
  Json rows = Json::array();
  for (int i = 0; i < 3; ++i)
    rows.push_back(Json::array({m(i, 0), m(i, 1), m(i, 2)}));
  return rows;
}

Json make_report(const std::string& command) {
  Json report;
  report["command"] = command;
  report["version"] = mvcov::kVersion;
  return report;
}

std::string json_text(const Json& j) { return j.dump(2) + "\n"; }

std::vector<mvcov::CameraModel> select_cameras(
    const mvcov::Scenario& scenario,
    const std::optional<std::string>& subset_csv) {
  if (!subset_csv) return scenario.cameras;
  std::vector<std::string> ids;
  for (const std::string& id : split(*subset_csv, ','))
    if (!id.empty()) ids.push_back(id);
  if (ids.empty()) throw mvcov::ValidationError("empty camera subset");
  std::vector<mvcov::CameraModel> cams;
  for (std::size_t i : scenario.resolve_subset(ids))
    cams.push_back(scenario.cameras[i]);
  return cams;
}

// ---------------------------------------------------------------------------
// Subcommands

int cmd_ring_gen(int m, double radius, double height, double focal,
                 double sigma, const GlobalOpts& g) {
  const mvcov::Scenario ring = mvcov::ring_scenario(
      m, radius, height, focal, sigma, g.seed.value_or(0));
  resolve_format(g, "json", false, true);
  emit(json_text(mvcov::scenario_to_json(ring)), g.output);
  return 0;
}

int cmd_eval(const std::string& scenario_path, const std::string& point_str,
             const std::optional<std::string>& subset, const GlobalOpts& g) {
  Stopwatch watch;
  const mvcov::Scenario scenario = mvcov::load_scenario(scenario_path);
  const Vec3 point = parse_point(point_str);
  if (!scenario.in_room(point))
    throw mvcov::ValidationError("query point lies outside the room box");
  const std::vector<mvcov::CameraModel> cams =
      select_cameras(scenario, subset);

  const mvcov::Covariance3 fused =
      mvcov::fused_point_covariance(cams, point, scenario.m_policy);

  Json report = make_report("eval");
  report["scenario_hash"] = mvcov::scenario_hash(scenario);
  Json& results = report["results"];
  results["point"] = vec3_json(point);
  if (scenario.m_policy.mode == mvcov::MPolicy::Mode::Limit) {
    results["m_policy"] = {{"mode", "limit"}};
  } else {
    results["m_policy"] = {{"mode", "finite"}, {"M", scenario.m_policy.M}};
  }
  Json per_camera = Json::array();
  for (const mvcov::CameraModel& cam : cams) {
    const double f_prime = mvcov::depth(cam, point);
    per_camera.push_back(
        {{"id", cam.id},
         {"f_prime", f_prime},
         {"s", cam.pixel_noise_std * f_prime / cam.focal_length}});
  }
  results["cameras"] = std::move(per_camera);
  results["covariance"] = mat3_json(fused.matrix);
  results["overall_std"] = mvcov::overall_std(fused);
  report["timings"] = {{"total_seconds", watch.seconds()}};

  resolve_format(g, "json", false, true);
  emit(json_text(report), g.output);
  return 0;
}

int cmd_mc_compare(const std::string& scenario_path,
                   const std::string& point_str, long long trials,
                   const std::string& estimator, const GlobalOpts& g) {
  Stopwatch watch;
  const mvcov::Scenario scenario = mvcov::load_scenario(scenario_path);
  const Vec3 point = parse_point(point_str);

  const mvcov::Covariance3 theory = mvcov::fused_point_covariance(
      scenario.cameras, point, scenario.m_policy);

  mvcov::McConfig cfg;
  cfg.trials = trials;
  cfg.seed = g.seed.value_or(scenario.seed);
  cfg.estimator = parse_estimator(estimator);
  Stopwatch mc_watch;
  const mvcov::McResult mc =
      mvcov::mc_covariance(scenario.cameras, point, cfg, g.threads);
  const double mc_seconds = mc_watch.seconds();

  const double percent = (theory.trace() > 0.0)
                             ? mvcov::percent_std_difference(mc, theory)
                             : 0.0;  // exact no-noise limit

  Json report = make_report("mc-compare");
  report["scenario_hash"] = mvcov::scenario_hash(scenario);
  Json& results = report["results"];
  results["point"] = vec3_json(point);
  results["estimator"] = estimator;
  results["trials"] = trials;
  results["trials_used"] = mc.trials_used;
  results["seed"] = cfg.seed;
  results["theory_covariance"] = mat3_json(theory.matrix);
  results["mc_covariance"] = mat3_json(mc.sample_cov.matrix);
  results["mc_mean_error"] = vec3_json(mc.sample_mean_error);
  results["overall_std_theory"] = mvcov::overall_std(theory);
  results["overall_std_mc"] = mvcov::overall_std(mc.sample_cov);
  results["percent_std_difference"] = percent;
  report["timings"] = {{"mc_seconds", mc_seconds},
                       {"total_seconds", watch.seconds()}};

  resolve_format(g, "json", false, true);
  emit(json_text(report), g.output);
  return 0;
}

int cmd_fig4(const std::string& m_list_str, int points, long long trials,
             const std::string& estimator, int ring_cameras, double radius,
             double height, double focal, double sigma, const GlobalOpts& g) {
  Stopwatch watch;
  const std::vector<int> m_values = parse_m_list(m_list_str);
  const mvcov::Scenario ring = mvcov::ring_scenario(
      ring_cameras, radius, height, focal, sigma, g.seed.value_or(0));

  mvcov::McConfig cfg;
  cfg.trials = trials;
  cfg.estimator = parse_estimator(estimator);
  const std::vector<mvcov::Fig4Row> rows =
      mvcov::run_fig4(ring, m_values, points, cfg, g.threads);

  const std::string fmt = resolve_format(g, "csv", true, true);
  if (fmt == "csv") {
    mvcov::csv::Table table;
    table.header = {"m", "mean_percent_diff", "stderr", "points_used"};
    for (const mvcov::Fig4Row& row : rows)
      table.rows.push_back({mvcov::csv::format_int(row.m),
                            mvcov::csv::format_double(row.mean_percent_diff),
                            mvcov::csv::format_double(row.std_error),
                            mvcov::csv::format_int(row.points_used)});
    emit(table.serialize(), g.output);
    return 0;
  }

  Json report = make_report("fig4");
  report["scenario_hash"] = mvcov::scenario_hash(ring);
  Json rows_json = Json::array();
  for (const mvcov::Fig4Row& row : rows)
    rows_json.push_back({{"m", row.m},
                         {"mean_percent_diff", row.mean_percent_diff},
                         {"stderr", row.std_error},
                         {"points_used", row.points_used}});
  report["results"] = {{"trials", trials},
                       {"points_per_m", points},
                       {"estimator", estimator},
                       {"rows", std::move(rows_json)}};
  report["timings"] = {{"total_seconds", watch.seconds()}};
  emit(json_text(report), g.output);
  return 0;
}

int cmd_fig5(long long trials, const std::optional<std::string>& polyline,
             const GlobalOpts& g) {
  Stopwatch watch;
  const mvcov::Scenario ring =
      mvcov::ring_scenario(16, 10.0, 0.0, 0.01, 1e-5, g.seed.value_or(0));
  const std::vector<double> angles = {M_PI / 8, M_PI / 4, 3 * M_PI / 8,
                                      M_PI / 2};
  mvcov::McConfig cfg;
  cfg.trials = trials;
  cfg.seed = g.seed.value_or(0);
  const std::vector<mvcov::Fig5Row> rows =
      mvcov::run_fig5(ring, angles, cfg, g.threads);

  Vec3 u, v;
  mvcov::plane_basis(Vec3(0.0, 0.0, 1.0), u, v);

  if (polyline) {
    mvcov::csv::Table poly;
    poly.header = {"angle_rad", "curve", "k", "x", "y", "z"};
    for (const mvcov::Fig5Row& row : rows) {
      const auto add_curve = [&](const char* name,
                                 const mvcov::EllipseSection& sec) {
        for (int k = 0; k < 64; ++k) {
          const double t = 2.0 * M_PI * k / 64.0;
          const Vec3 p = sec.center + sec.major * std::cos(t) * sec.major_dir +
                         sec.minor * std::sin(t) * sec.minor_dir;
          poly.rows.push_back({mvcov::csv::format_double(row.angle_rad), name,
                               mvcov::csv::format_int(k),
                               mvcov::csv::format_double(p[0]),
                               mvcov::csv::format_double(p[1]),
                               mvcov::csv::format_double(p[2])});
        }
      };
      add_curve("theory", row.theory);
      add_curve("mc", row.mc);
    }
    std::ofstream out(*polyline, std::ios::binary);
    if (!out)
      throw mvcov::ValidationError("cannot write polyline file: " + *polyline);
    out << poly.serialize();
  }

  const std::string fmt = resolve_format(g, "csv", true, true);
  if (fmt == "csv") {
    mvcov::csv::Table table;
    table.header = {"angle_rad",  "theory_major", "theory_minor", "mc_major",
                    "mc_minor",   "theory_angle_deg", "mc_angle_deg"};
    for (const mvcov::Fig5Row& row : rows)
      table.rows.push_back(
          {mvcov::csv::format_double(row.angle_rad),
           mvcov::csv::format_double(row.theory.major),
           mvcov::csv::format_double(row.theory.minor),
           mvcov::csv::format_double(row.mc.major),
           mvcov::csv::format_double(row.mc.minor),
           mvcov::csv::format_double(
               mvcov::in_plane_angle_deg(row.theory.major_dir, u, v)),
           mvcov::csv::format_double(
               mvcov::in_plane_angle_deg(row.mc.major_dir, u, v))});
    emit(table.serialize(), g.output);
    return 0;
  }

  Json report = make_report("fig5");
  report["scenario_hash"] = mvcov::scenario_hash(ring);
  Json rows_json = Json::array();
  for (const mvcov::Fig5Row& row : rows)
    rows_json.push_back(
        {{"angle_rad", row.angle_rad},
         {"theory_major", row.theory.major},
         {"theory_minor", row.theory.minor},
         {"mc_major", row.mc.major},
         {"mc_minor", row.mc.minor},
         {"theory_angle_deg",
          mvcov::in_plane_angle_deg(row.theory.major_dir, u, v)},
         {"mc_angle_deg", mvcov::in_plane_angle_deg(row.mc.major_dir, u, v)}});
  report["results"] = {{"trials", trials}, {"rows", std::move(rows_json)}};
  report["timings"] = {{"total_seconds", watch.seconds()}};
  emit(json_text(report), g.output);
  return 0;
}

int cmd_error_map(const std::string& scenario_path, const std::string& dims,
                  const std::optional<std::string>& subset, bool with_mc,
                  long long trials, const std::string& estimator,
                  const GlobalOpts& g) {
  Stopwatch watch;
  if (!g.output)
    throw mvcov::ValidationError(
        "error-map requires --output for the grid CSV");
  int nx = 0, ny = 0, nz = 0;
  parse_dims(dims, nx, ny, nz);
  const mvcov::Scenario scenario = mvcov::load_scenario(scenario_path);

  std::optional<std::vector<std::string>> subset_ids;
  if (subset) {
    subset_ids.emplace();
    for (const std::string& id : split(*subset, ','))
      if (!id.empty()) subset_ids->push_back(id);
    if (subset_ids->empty())
      throw mvcov::ValidationError("empty camera subset");
  }

  Stopwatch closed_watch;
  const mvcov::ErrorMap closed =
      mvcov::error_map(scenario, nx, ny, nz, subset_ids, g.threads);
  const double closed_seconds = closed_watch.seconds();

  std::optional<mvcov::ErrorMap> sampled;
  double mc_seconds = 0.0;
  if (with_mc) {
    mvcov::McConfig cfg;
    cfg.trials = trials;
    cfg.seed = g.seed.value_or(scenario.seed);
    cfg.estimator = parse_estimator(estimator);
    Stopwatch mc_watch;
    sampled = mvcov::mc_error_map(scenario, nx, ny, nz, cfg, subset_ids,
                                  g.threads);
    mc_seconds = mc_watch.seconds();
  }

  mvcov::csv::Table table;
  table.header = {"i", "j", "k", "x", "y", "z", "visible_cameras",
                  "overall_std"};
  if (with_mc) table.header.push_back("mc_overall_std");
  for (int k = 0; k < nz; ++k)
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) {
        const std::size_t v = closed.index(i, j, k);
        const Vec3 p = closed.voxel_center(i, j, k);
        std::vector<std::string> row = {
            mvcov::csv::format_int(i),
            mvcov::csv::format_int(j),
            mvcov::csv::format_int(k),
            mvcov::csv::format_double(p[0]),
            mvcov::csv::format_double(p[1]),
            mvcov::csv::format_double(p[2]),
            mvcov::csv::format_int(closed.visible_counts[v]),
            mvcov::csv::format_double(closed.std_values[v])};
        if (with_mc)
          row.push_back(mvcov::csv::format_double(sampled->std_values[v]));
        table.rows.push_back(std::move(row));
      }
  emit(table.serialize(), g.output);

  long long reconstructable = 0;
  for (double s : closed.std_values)
    if (!std::isnan(s)) ++reconstructable;

  Json report = make_report("error-map");
  report["scenario_hash"] = mvcov::scenario_hash(scenario);
  Json& results = report["results"];
  results["dims"] = Json::array({nx, ny, nz});
  results["origin"] = vec3_json(closed.origin);
  results["spacing"] = vec3_json(closed.spacing);
  results["voxels"] = nx * static_cast<long long>(ny) * nz;
  results["reconstructable"] = reconstructable;
  results["grid_csv"] = *g.output;
  if (with_mc) {
    results["mc_trials"] = trials;
    results["mc_estimator"] = estimator;
  }
  Json timings = {{"closed_form_seconds", closed_seconds},
                  {"total_seconds", watch.seconds()}};
  if (with_mc) {
    timings["mc_seconds"] = mc_seconds;
    timings["speed_ratio"] = mc_seconds / std::max(closed_seconds, 1e-9);
  }
  report["timings"] = std::move(timings);

  resolve_format(g, "json", false, true);
  std::string text = json_text(report);
  std::fwrite(text.data(), 1, text.size(), stdout);
  return 0;
}

int cmd_select(const std::string& scenario_path, const std::string& point_str,
               int k, const GlobalOpts& g) {
  Stopwatch watch;
  const mvcov::Scenario scenario = mvcov::load_scenario(scenario_path);
  const Vec3 point = parse_point(point_str);

  const mvcov::PairRanking ranking = mvcov::rank_pairs(scenario, point);
  const mvcov::GreedySelection greedy =
      mvcov::greedy_select(scenario, point, k);

  Json report = make_report("select");
  report["scenario_hash"] = mvcov::scenario_hash(scenario);
  Json& results = report["results"];
  results["point"] = vec3_json(point);
  results["k"] = k;
  Json pairs = Json::array();
  for (const mvcov::PairScore& p : ranking.pairs)
    pairs.push_back({{"camera_a", p.camera_id_a},
                     {"camera_b", p.camera_id_b},
                     {"quality", p.quality}});
  results["ranking"] = std::move(pairs);
  results["greedy"] = {{"camera_ids", greedy.camera_ids},
                       {"overall_std_steps", greedy.overall_std_steps}};
  report["timings"] = {{"total_seconds", watch.seconds()}};

  resolve_format(g, "json", false, true);
  emit(json_text(report), g.output);
  return 0;
}

void print_error(const char* type, const std::string& message) {
  Json err;
  err["error"] = {{"type", type}, {"message", message}};
  std::string text = err.dump() + "\n";
  std::fwrite(text.data(), 1, text.size(), stderr);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Closed-form 3D reconstruction-error covariance toolkit"};
  app.set_version_flag("--version", mvcov::kVersion);
  app.require_subcommand(1);

  GlobalOpts global;
  app.add_option("--seed", global.seed, "Override the scenario seed");
  app.add_option("--threads", global.threads, "Worker threads")
      ->check(CLI::Range(1, 4096));
  app.add_option("--output", global.output, "Write the payload to this path");
  app.add_option("--format", global.format, "Output format")
      ->check(CLI::IsMember({"json", "csv"}));

  // ring-gen
  auto* ring_gen = app.add_subcommand("ring-gen", "Emit a ring scenario file");
  ring_gen->fallthrough();
  int rg_m = 16;
  double rg_radius = 10.0, rg_height = 0.0, rg_focal = 0.01, rg_sigma = 1e-5;
  ring_gen->add_option("--m", rg_m, "Camera count");
  ring_gen->add_option("--radius", rg_radius, "Ring radius (m)");
  ring_gen->add_option("--height", rg_height, "Ring height (m)");
  ring_gen->add_option("--focal", rg_focal, "Focal length (m)");
  ring_gen->add_option("--sigma", rg_sigma, "Pixel noise std (m)");

  // eval
  auto* eval = app.add_subcommand("eval", "Fused covariance at a point");
  eval->fallthrough();
  std::string ev_scenario, ev_point;
  std::optional<std::string> ev_subset;
  eval->add_option("--scenario", ev_scenario, "Scenario JSON path")
      ->required();
  eval->add_option("--point", ev_point, "Query point \"x,y,z\"")->required();
  eval->add_option("--subset", ev_subset, "Comma-separated camera ids");

  // mc-compare
  auto* mcc = app.add_subcommand("mc-compare",
                                 "Closed form vs Monte Carlo at a point");
  mcc->fallthrough();
  std::string mcc_scenario, mcc_point, mcc_estimator = "gls";
  long long mcc_trials = 10000;
  mcc->add_option("--scenario", mcc_scenario, "Scenario JSON path")
      ->required();
  mcc->add_option("--point", mcc_point, "Query point \"x,y,z\"")->required();
  mcc->add_option("--trials", mcc_trials, "Monte Carlo trials");
  mcc->add_option("--estimator", mcc_estimator, "gls or midpoint")
      ->check(CLI::IsMember({"gls", "midpoint"}));

  // fig4
  auto* fig4 = app.add_subcommand(
      "fig4", "Percent std difference vs camera count (ring experiment)");
  fig4->fallthrough();
  std::string f4_mlist = "2,4,16,64", f4_estimator = "gls";
  int f4_points = 200, f4_ring = 256;
  long long f4_trials = 10000;
  double f4_radius = 10.0, f4_height = 0.0, f4_focal = 0.01, f4_sigma = 1e-5;
  fig4->add_option("--m-list", f4_mlist, "Comma-separated camera counts");
  fig4->add_option("--points", f4_points, "Random target points per m")
      ->check(CLI::Range(1, 1000000));
  fig4->add_option("--trials", f4_trials, "Monte Carlo trials per point");
  fig4->add_option("--estimator", f4_estimator, "gls or midpoint")
      ->check(CLI::IsMember({"gls", "midpoint"}));
  fig4->add_option("--ring-cameras", f4_ring, "Cameras on the base ring");
  fig4->add_option("--radius", f4_radius, "Ring radius (m)");
  fig4->add_option("--height", f4_height, "Ring height (m)");
  fig4->add_option("--focal", f4_focal, "Focal length (m)");
  fig4->add_option("--sigma", f4_sigma, "Pixel noise std (m)");

  // fig5
  auto* fig5 = app.add_subcommand(
      "fig5", "Two-camera 1-sigma ellipses vs separation angle");
  fig5->fallthrough();
  long long f5_trials = 100000;
  std::optional<std::string> f5_polyline;
  fig5->add_option("--trials", f5_trials, "Monte Carlo trials per angle");
  fig5->add_option("--polyline", f5_polyline,
                   "Also write 64-point 1-sigma curves to this CSV");

  // error-map
  auto* emap = app.add_subcommand("error-map",
                                  "Closed-form quality map on a voxel grid");
  emap->fallthrough();
  std::string em_scenario, em_dims = "10x10x10", em_estimator = "gls";
  std::optional<std::string> em_subset;
  bool em_with_mc = false;
  long long em_trials = 10000;
  emap->add_option("--scenario", em_scenario, "Scenario JSON path")
      ->required();
  emap->add_option("--dims", em_dims, "Grid dims \"NXxNYxNZ\"");
  emap->add_option("--subset", em_subset, "Comma-separated camera ids");
  emap->add_flag("--with-mc", em_with_mc,
                 "Also compute the Monte Carlo map and the speed ratio");
  emap->add_option("--trials", em_trials, "Monte Carlo trials per voxel");
  emap->add_option("--estimator", em_estimator, "gls or midpoint")
      ->check(CLI::IsMember({"gls", "midpoint"}));

  // select
  auto* select = app.add_subcommand(
      "select", "Rank camera pairs and greedily grow the best subset");
  select->fallthrough();
  std::string sel_scenario, sel_point;
  int sel_k = 2;
  select->add_option("--scenario", sel_scenario, "Scenario JSON path")
      ->required();
  select->add_option("--point", sel_point, "Query point \"x,y,z\"")
      ->required();
  select->add_option("--k", sel_k, "Subset size");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    print_error("ParseError", e.what());
    return 2;
  }

  try {
    if (app.got_subcommand(ring_gen))
      return cmd_ring_gen(rg_m, rg_radius, rg_height, rg_focal, rg_sigma,
                          global);
    if (app.got_subcommand(eval))
      return cmd_eval(ev_scenario, ev_point, ev_subset, global);
    if (app.got_subcommand(mcc))
      return cmd_mc_compare(mcc_scenario, mcc_point, mcc_trials, mcc_estimator,
                            global);
    if (app.got_subcommand(fig4))
      return cmd_fig4(f4_mlist, f4_points, f4_trials, f4_estimator, f4_ring,
                      f4_radius, f4_height, f4_focal, f4_sigma, global);
    if (app.got_subcommand(fig5))
      return cmd_fig5(f5_trials, f5_polyline, global);
    if (app.got_subcommand(emap))
      return cmd_error_map(em_scenario, em_dims, em_subset, em_with_mc,
                           em_trials, em_estimator, global);
    if (app.got_subcommand(select))
      return cmd_select(sel_scenario, sel_point, sel_k, global);
    print_error("ParseError", "no subcommand given");
    return 2;
  } catch (const mvcov::ValidationError& e) {
    print_error(e.kind(), e.what());
    return 2;
  } catch (const mvcov::NumericalError& e) {
    print_error(e.kind(), e.what());
    return 3;
  } catch (const std::exception& e) {
    print_error("InternalError", e.what());
    return 4;
  }
}
