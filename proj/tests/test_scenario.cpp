#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "mvcov/scenario.hpp"

using namespace mvcov;

namespace {

bool rel_near(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b));
}

CameraModel aimed_camera(const std::string& id, const Vec3& center,
                         const Vec3& target, double sigma = 1e-5) {
  return CameraModel(id, center, Rotation3::look_at(center, target), 0.01,
                     sigma);
}

// Two orthogonal cameras at depth 5 with room around the origin.
Scenario orthogonal_scenario(double sigma) {
  std::vector<CameraModel> cams = {
      aimed_camera("a", Vec3(5, 0, 0), Vec3::Zero(), sigma),
      aimed_camera("b", Vec3(0, 5, 0), Vec3::Zero(), sigma)};
  const Box room{Vec3(-0.5, -0.5, -0.5), Vec3(0.5, 0.5, 0.5)};
  return Scenario(std::move(cams), room, MPolicy::limit(), 0);
}

}  // namespace

TEST_CASE("ring scenario layout", "[scenario]") {
  const Scenario s = ring_scenario(4, 10.0, 0.0, 0.01, 2e-5, 7);
  REQUIRE(s.cameras.size() == 4);
  CHECK(s.seed == 7);
  CHECK(s.m_policy.mode == MPolicy::Mode::Limit);

  const std::vector<Vec3> expected = {
      Vec3(10, 0, 0), Vec3(0, 10, 0), Vec3(-10, 0, 0), Vec3(0, -10, 0)};
  for (int k = 0; k < 4; ++k) {
    CHECK((s.cameras[k].center - expected[k]).norm() <= 1e-8);
    // Aimed at the ring center, rows horizontal.
    CHECK((s.cameras[k].rotation.axis() -
           (Vec3::Zero() - s.cameras[k].center).normalized())
              .norm() <= 1e-12);
    CHECK((s.cameras[k].rotation.down() - Vec3(0, 0, -1)).norm() <= 1e-12);
    CHECK(s.cameras[k].focal_length == 0.01);
    CHECK(s.cameras[k].pixel_noise_std == 2e-5);
  }
  CHECK(s.cameras[0].id == "cam000");
  CHECK(s.cameras[3].id == "cam003");

  CHECK((s.room.min - Vec3(-10, -10, -1)).norm() == 0.0);
  CHECK((s.room.max - Vec3(10, 10, 1)).norm() == 0.0);
  CHECK(s.room_max_side() == 20.0);

  CHECK_THROWS_AS(ring_scenario(0, 10.0, 0.0, 0.01, 2e-5, 0),
                  ValidationError);
  CHECK_THROWS_AS(ring_scenario(4, -1.0, 0.0, 0.01, 2e-5, 0),
                  ValidationError);
}

TEST_CASE("ring scenario spacing for larger rings", "[scenario]") {
  const Scenario s = ring_scenario(256, 5.0, 1.5, 0.01, 2e-5, 0);
  REQUIRE(s.cameras.size() == 256);
  const double step = 2.0 * M_PI / 256.0;
  for (int k = 0; k + 1 < 256; ++k) {
    const Vec3 a = s.cameras[k].center - Vec3(0, 0, 1.5);
    const Vec3 b = s.cameras[k + 1].center - Vec3(0, 0, 1.5);
    const double angle = std::acos(std::clamp(
        a.dot(b) / (a.norm() * b.norm()), -1.0, 1.0));
    CHECK(std::abs(angle - step) <= 1e-9);
  }
  // Unique ids with fixed-width numbering.
  CHECK(s.cameras[255].id == "cam255");
}

TEST_CASE("scenario validation", "[scenario]") {
  const Box room{Vec3(-1, -1, -1), Vec3(1, 1, 1)};
  std::vector<CameraModel> dup = {
      aimed_camera("x", Vec3(5, 0, 0), Vec3::Zero()),
      aimed_camera("x", Vec3(0, 5, 0), Vec3::Zero())};
  CHECK_THROWS_AS(Scenario(dup, room, MPolicy::limit(), 0), ValidationError);

  std::vector<CameraModel> one = {aimed_camera("x", Vec3(5, 0, 0),
                                               Vec3::Zero())};
  CHECK_THROWS_AS(Scenario({}, room, MPolicy::limit(), 0), ValidationError);

  const Box flat{Vec3(-1, -1, 0), Vec3(1, 1, 0)};
  CHECK_THROWS_AS(Scenario(one, flat, MPolicy::limit(), 0), ValidationError);

  // FOV list must match the camera count and be positive.
  CHECK_THROWS_AS(
      Scenario(one, room, MPolicy::limit(), 0,
               {std::optional<Vec2>(Vec2(0.001, 0.001)), std::nullopt}),
      ValidationError);
  CHECK_THROWS_AS(Scenario(one, room, MPolicy::limit(), 0,
                           {std::optional<Vec2>(Vec2(-0.001, 0.001))}),
                  ValidationError);
}

TEST_CASE("visibility uses depth and the optional sensor bound",
          "[scenario]") {
  std::vector<CameraModel> cams = {
      CameraModel("c", Vec3::Zero(), Rotation3::identity(), 0.01, 1e-5)};
  const Box room{Vec3(-2, -2, 0.1), Vec3(2, 2, 10)};

  const Scenario open(cams, room, MPolicy::limit(), 0);
  CHECK(open.sees(0, Vec3(0, 0, 5)));
  CHECK(open.sees(0, Vec3(100, 0, 0.01)));  // extreme angle, no FOV bound
  CHECK_FALSE(open.sees(0, Vec3(0, 0, -5)));

  const Scenario bounded(cams, room, MPolicy::limit(), 0,
                         {std::optional<Vec2>(Vec2(0.001, 0.002))});
  CHECK(bounded.sees(0, Vec3(0, 0, 5)));
  CHECK(bounded.sees(0, Vec3(0.49, 0, 5)));        // u = 0.00098
  CHECK_FALSE(bounded.sees(0, Vec3(0.6, 0, 5)));   // u = 0.0012
  CHECK(bounded.sees(0, Vec3(0, 0.9, 5)));         // v = 0.0018
  CHECK_FALSE(bounded.sees(0, Vec3(0, 1.1, 5)));
}

TEST_CASE("camera ids resolve to indices exactly once", "[scenario]") {
  const Scenario s = ring_scenario(8, 5.0, 0.0, 0.01, 2e-5, 0);
  CHECK(s.index_of("cam003") == 3);
  CHECK_THROWS_AS(s.index_of("nope"), ValidationError);

  const std::vector<std::size_t> subset =
      s.resolve_subset({"cam005", "cam001"});
  REQUIRE(subset.size() == 2);
  CHECK(subset[0] == 5);
  CHECK(subset[1] == 1);
  CHECK_THROWS_AS(s.resolve_subset({"cam001", "cam001"}), ValidationError);

  const std::vector<Observation> obs = {Observation{"cam002", {1e-4, 0}},
                                        Observation{"cam006", {0, -1e-4}}};
  const auto [cams, pixels] = resolve_observations(s, obs);
  REQUIRE(cams.size() == 2);
  CHECK(cams[0].id == "cam002");
  CHECK(cams[1].id == "cam006");
  CHECK(pixels[0].u == 1e-4);
  CHECK(pixels[1].v == -1e-4);
}

TEST_CASE("room membership is inclusive of the boundary", "[scenario]") {
  const Scenario s = orthogonal_scenario(1e-5);
  CHECK(s.in_room(Vec3(0, 0, 0)));
  CHECK(s.in_room(Vec3(0.5, 0.5, 0.5)));
  CHECK(s.in_room(Vec3(-0.5, 0, 0)));
  CHECK_FALSE(s.in_room(Vec3(0.50001, 0, 0)));
}

TEST_CASE("fused point covariance across scenario cameras", "[scenario]") {
  const Scenario s = orthogonal_scenario(2e-5);
  const double sigma_space = 2e-5 * 5.0 / 0.01;  // 0.01

  const Covariance3 fused =
      fused_point_covariance(s.cameras, Vec3::Zero(), MPolicy::limit());
  CHECK(rel_near(overall_std(fused), sigma_space * std::sqrt(2.5), 1e-12));

  // All-noiseless cameras: zero covariance, but visibility still checked.
  const Scenario clean = orthogonal_scenario(0.0);
  const Covariance3 zero =
      fused_point_covariance(clean.cameras, Vec3::Zero(), MPolicy::limit());
  CHECK(zero.matrix.cwiseAbs().maxCoeff() == 0.0);
  CHECK_THROWS_AS(fused_point_covariance(clean.cameras, Vec3(50, 0, 0),
                                         MPolicy::limit()),
                  BehindCamera);

  // Mixed noise: no consistent weighting exists.
  std::vector<CameraModel> mixed = {
      aimed_camera("a", Vec3(5, 0, 0), Vec3::Zero(), 1e-5),
      aimed_camera("b", Vec3(0, 5, 0), Vec3::Zero(), 0.0)};
  CHECK_THROWS_AS(
      fused_point_covariance(mixed, Vec3::Zero(), MPolicy::limit()),
      ValidationError);

  CHECK_THROWS_AS(
      fused_point_covariance(std::vector<CameraModel>{}, Vec3::Zero(),
                             MPolicy::limit()),
      ValidationError);
}

TEST_CASE("ring center covariance has the ring symmetry", "[scenario]") {
  const Scenario s = ring_scenario(8, 5.0, 0.0, 0.01, 2e-5, 0);
  const Covariance3 fused =
      fused_point_covariance(s.cameras, Vec3::Zero(), MPolicy::limit());

  // x and y are equivalent directions for the full ring.
  CHECK(rel_near(fused.matrix(0, 0), fused.matrix(1, 1), 1e-10));
  CHECK(std::abs(fused.matrix(0, 1)) <= 1e-10 * fused.matrix.trace());

  // Relabeling the cameras (rotating the list) changes nothing, bit for bit.
  std::vector<CameraModel> rotated(s.cameras.begin() + 3, s.cameras.end());
  rotated.insert(rotated.end(), s.cameras.begin(), s.cameras.begin() + 3);
  const Covariance3 again =
      fused_point_covariance(rotated, Vec3::Zero(), MPolicy::limit());
  CHECK((fused.matrix - again.matrix).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("full ring fusion matches the closed form at the center",
          "[scenario]") {
  // For m cameras on the ring, each contributes (1/s^2)(I - psi psi^T); at
  // the center the angles average out and trace(Sigma) = 5 s^2 / m.
  for (int m : {4, 8, 16}) {
    const Scenario s = ring_scenario(m, 5.0, 0.0, 0.01, 2e-5, 0);
    const double sigma_space = 2e-5 * 5.0 / 0.01;
    const Covariance3 fused =
        fused_point_covariance(s.cameras, Vec3::Zero(), MPolicy::limit());
    CHECK(rel_near(overall_std(fused),
                   sigma_space * std::sqrt(5.0 / m), 1e-12));
  }
}

TEST_CASE("subset sampler draws distinct indices deterministically",
          "[scenario]") {
  const CounterRng rng(5);
  const auto subset = detail::sample_camera_subset(rng, 16, 6);
  REQUIRE(subset.size() == 6);
  std::set<std::size_t> unique(subset.begin(), subset.end());
  CHECK(unique.size() == 6);
  for (std::size_t i : subset) CHECK(i < 16);

  const auto again = detail::sample_camera_subset(rng, 16, 6);
  CHECK(subset == again);
  const auto other = detail::sample_camera_subset(rng.fork(1), 16, 6);
  CHECK(subset != other);

  const auto all = detail::sample_camera_subset(rng, 5, 5);
  std::set<std::size_t> full(all.begin(), all.end());
  CHECK(full.size() == 5);
}

TEST_CASE("cylinder sampler stays inside its bounds", "[scenario]") {
  const CounterRng rng(13);
  const Vec3 center(1.0, -2.0, 3.0);
  for (int t = 0; t < 500; ++t) {
    const Vec3 p = detail::sample_cylinder_point(rng.fork(t), center, 4.5,
                                                 2.0, 4.0);
    const double r = std::hypot(p[0] - center[0], p[1] - center[1]);
    CHECK(r <= 4.5);
    CHECK(p[2] >= 2.0);
    CHECK(p[2] <= 4.0);
  }
}

TEST_CASE("percent-difference sweep rows", "[scenario]") {
  const Scenario noiseless = ring_scenario(8, 5.0, 0.0, 0.01, 0.0, 3);
  McConfig mc;
  mc.trials = 200;

  const auto rows = run_fig4(noiseless, {2, 4}, 10, mc);
  REQUIRE(rows.size() == 2);
  for (const auto& row : rows) {
    CHECK(row.points_used == 10);
    CHECK(row.mean_percent_diff == 0.0);
    CHECK(row.std_error == 0.0);
  }
  CHECK(rows[0].m == 2);
  CHECK(rows[1].m == 4);

  const Scenario noisy = ring_scenario(8, 5.0, 0.0, 0.01, 2e-5, 3);
  McConfig mc2;
  mc2.trials = 1500;
  const auto rows2 = run_fig4(noisy, {2, 4}, 25, mc2);
  for (const auto& row : rows2) {
    CHECK(std::isfinite(row.mean_percent_diff));
    CHECK(row.mean_percent_diff > 0.0);
    CHECK(row.mean_percent_diff < 10.0);
    CHECK(row.std_error >= 0.0);
    // Two distinct rays determine all three axes unless the point sits on
    // the line through both centers, so every sampled point survives.
    CHECK(row.points_used == 25);
  }

  // Even a head-on two-camera ring reconstructs every off-chord point.
  const Scenario diametric = ring_scenario(2, 5.0, 0.0, 0.01, 2e-5, 3);
  const auto pair_rows = run_fig4(diametric, {2}, 5, mc2);
  REQUIRE(pair_rows.size() == 1);
  CHECK(pair_rows[0].points_used == 5);
  CHECK(std::isfinite(pair_rows[0].mean_percent_diff));
  CHECK(pair_rows[0].mean_percent_diff < 10.0);

  // Noise far beyond the sensor scale degenerates most sampling trials, so
  // every point is dropped and the sweep aborts.
  const Scenario hopeless = ring_scenario(2, 5.0, 0.0, 0.01, 0.5, 3);
  CHECK_THROWS_AS(run_fig4(hopeless, {2}, 5, mc2), TooFewValidTrials);

  // Bitwise determinism, including across thread counts.
  const auto again = run_fig4(noisy, {2, 4}, 25, mc2, 1);
  const auto threaded = run_fig4(noisy, {2, 4}, 25, mc2, 3);
  for (std::size_t i = 0; i < rows2.size(); ++i) {
    CHECK(rows2[i].mean_percent_diff == again[i].mean_percent_diff);
    CHECK(rows2[i].std_error == again[i].std_error);
    CHECK(rows2[i].mean_percent_diff == threaded[i].mean_percent_diff);
    CHECK(rows2[i].std_error == threaded[i].std_error);
  }

  CHECK_THROWS_AS(run_fig4(noisy, {}, 10, mc2), ValidationError);
  CHECK_THROWS_AS(run_fig4(noisy, {1}, 10, mc2), ValidationError);
  CHECK_THROWS_AS(run_fig4(noisy, {9}, 10, mc2), ValidationError);
  CHECK_THROWS_AS(run_fig4(noisy, {2}, 0, mc2), ValidationError);
}

TEST_CASE("pair-angle sweep theory matches the two-camera closed form",
          "[scenario]") {
  const Scenario ring = ring_scenario(16, 5.0, 0.0, 0.01, 2e-5, 0);
  const double s = 2e-5 * 5.0 / 0.01;  // 0.01
  McConfig mc;
  mc.trials = 20000;
  mc.seed = 11;

  const std::vector<double> angles = {M_PI / 8.0, M_PI / 4.0, M_PI / 2.0};
  const auto rows = run_fig5(ring, angles, mc);
  REQUIRE(rows.size() == 3);

  for (std::size_t i = 0; i < rows.size(); ++i) {
    const double c = std::cos(angles[i]);
    const double expected_major = s / std::sqrt(1.0 - c);
    const double expected_minor = s / std::sqrt(1.0 + c);
    CHECK(rel_near(rows[i].theory.major, expected_major, 1e-9));
    CHECK(rel_near(rows[i].theory.minor, expected_minor, 1e-9));
    // Monte Carlo within 5% at this trial count.
    CHECK(rel_near(rows[i].mc.major, expected_major, 5e-2));
    CHECK(rel_near(rows[i].mc.minor, expected_minor, 5e-2));
  }
  // Smaller separation, larger major axis.
  CHECK(rows[0].theory.major > rows[1].theory.major);
  CHECK(rows[1].theory.major > rows[2].theory.major);

  CHECK_THROWS_AS(run_fig5(ring, {M_PI / 7.0}, mc), ValidationError);
  CHECK_THROWS_AS(run_fig5(ring, {0.0}, mc), ValidationError);
  const Scenario single = ring_scenario(1, 5.0, 0.0, 0.01, 2e-5, 0);
  CHECK_THROWS_AS(run_fig5(single, {M_PI}, mc), NotEnoughCameras);
}

TEST_CASE("closed-form error map over the room grid", "[scenario]") {
  const Scenario s = orthogonal_scenario(2e-5);
  const ErrorMap map = error_map(s, 1, 1, 1);
  REQUIRE(map.std_values.size() == 1);
  CHECK(map.visible_counts[0] == 2);
  // Sole voxel center is the room center = ring target.
  CHECK((map.voxel_center(0, 0, 0) - Vec3::Zero()).norm() <= 1e-15);
  CHECK(rel_near(map.std_values[0], 0.01 * std::sqrt(2.5), 1e-12));

  const Scenario ring = ring_scenario(8, 5.0, 0.0, 0.01, 2e-5, 0);
  const ErrorMap grid = error_map(ring, 4, 4, 2);
  REQUIRE(grid.std_values.size() == 32);
  for (std::size_t v = 0; v < grid.std_values.size(); ++v) {
    CHECK(grid.visible_counts[v] >= 2);
    CHECK(std::isfinite(grid.std_values[v]));
    CHECK(grid.std_values[v] > 0.0);
  }

  // Restricting to one camera leaves every voxel unreconstructable.
  const ErrorMap solo = error_map(ring, 2, 2, 1,
                                  std::vector<std::string>{"cam000"});
  for (std::size_t v = 0; v < solo.std_values.size(); ++v) {
    CHECK(solo.visible_counts[v] == 1);
    CHECK(std::isnan(solo.std_values[v]));
  }

  CHECK_THROWS_AS(error_map(ring, 0, 1, 1), ValidationError);
}

TEST_CASE("more cameras never degrade a voxel", "[scenario]") {
  const Scenario ring = ring_scenario(16, 5.0, 0.0, 0.01, 2e-5, 0);
  std::vector<std::string> half;
  for (int k = 0; k < 8; ++k) half.push_back(ring.cameras[2 * k].id);

  const ErrorMap full = error_map(ring, 3, 3, 2);
  const ErrorMap subset = error_map(ring, 3, 3, 2, half);
  for (std::size_t v = 0; v < full.std_values.size(); ++v) {
    REQUIRE(std::isfinite(subset.std_values[v]));
    CHECK(full.std_values[v] <= subset.std_values[v] + 1e-12);
  }
}

TEST_CASE("sampled error map tracks the closed form", "[scenario]") {
  const Scenario ring = ring_scenario(8, 5.0, 0.0, 0.01, 2e-5, 0);
  McConfig mc;
  mc.trials = 400;
  mc.seed = 21;

  const ErrorMap theory = error_map(ring, 2, 2, 2);
  const ErrorMap sampled = mc_error_map(ring, 2, 2, 2, mc);
  REQUIRE(sampled.std_values.size() == 8);
  for (std::size_t v = 0; v < 8; ++v) {
    CHECK(rel_near(sampled.std_values[v], theory.std_values[v], 0.3));
  }

  // Determinism across thread counts.
  const ErrorMap t1 = mc_error_map(ring, 2, 2, 2, mc, std::nullopt, 1);
  const ErrorMap t3 = mc_error_map(ring, 2, 2, 2, mc, std::nullopt, 3);
  for (std::size_t v = 0; v < 8; ++v)
    CHECK(t1.std_values[v] == t3.std_values[v]);

  // All-noiseless cameras: exact zeros instead of a Monte Carlo run.
  const Scenario clean = ring_scenario(8, 5.0, 0.0, 0.01, 0.0, 0);
  const ErrorMap zeros = mc_error_map(clean, 2, 2, 1, mc);
  for (double v : zeros.std_values) CHECK(v == 0.0);
}

TEST_CASE("mixed-noise subsets cannot be mapped", "[scenario]") {
  std::vector<CameraModel> cams = {
      aimed_camera("a", Vec3(5, 0, 0), Vec3::Zero(), 1e-5),
      aimed_camera("b", Vec3(0, 5, 0), Vec3::Zero(), 0.0)};
  const Box room{Vec3(-1, -1, -1), Vec3(1, 1, 1)};
  const Scenario s(cams, room, MPolicy::limit(), 0);
  CHECK_THROWS_AS(error_map(s, 2, 2, 2), ValidationError);
  McConfig mc;
  CHECK_THROWS_AS(mc_error_map(s, 2, 2, 2, mc), ValidationError);
}

TEST_CASE("pair ranking prefers orthogonal baselines", "[scenario]") {
  const Scenario ring = ring_scenario(16, 5.0, 0.0, 0.01, 2e-5, 0);
  const double s = 0.01;
  const PairRanking ranking = rank_pairs(ring, Vec3::Zero());
  // C(16, 2) = 120 minus the 8 diametric pairs, whose anti-parallel viewing
  // directions leave depth unconstrained and are skipped as unusable.
  REQUIRE(ranking.pairs.size() == 112);

  // Ascending by quality.
  for (std::size_t i = 0; i + 1 < ranking.pairs.size(); ++i)
    CHECK(ranking.pairs[i].quality <= ranking.pairs[i + 1].quality);

  const auto circular_separation = [&](const PairScore& p) {
    const int a = std::stoi(p.camera_id_a.substr(3));
    const int b = std::stoi(p.camera_id_b.substr(3));
    const int d = std::abs(a - b);
    return std::min(d, 16 - d);
  };

  // The best pairs are exactly the 90-degree ones (circular separation 4),
  // and their quality matches the closed form s (2 / sin^2 + 1/2)^(1/2).
  for (std::size_t i = 0; i < 16; ++i) {
    CHECK(circular_separation(ranking.pairs[i]) == 4);
    CHECK(rel_near(ranking.pairs[i].quality, s * std::sqrt(2.5), 1e-9));
  }

  // Every surviving pair matches the closed form for its separation angle,
  // and none of them is diametric.
  for (const PairScore& p : ranking.pairs) {
    CHECK(circular_separation(p) != 8);
    const double theta = 2.0 * M_PI * circular_separation(p) / 16.0;
    const double sin2 = std::sin(theta) * std::sin(theta);
    const double expected = s * std::sqrt(2.0 / sin2 + 0.5);
    CHECK(rel_near(p.quality, expected, 1e-9));
    CHECK(p.camera_id_a < p.camera_id_b);
  }
}

TEST_CASE("pair ranking failure modes", "[scenario]") {
  // Both cameras behind the point.
  std::vector<CameraModel> cams = {
      aimed_camera("a", Vec3(10, 0, 0), Vec3::Zero()),
      aimed_camera("b", Vec3(12, 0, 0), Vec3::Zero())};
  const Box room{Vec3(-20, -20, -1), Vec3(30, 20, 1)};
  const Scenario s(cams, room, MPolicy::limit(), 0);
  CHECK_THROWS_AS(rank_pairs(s, Vec3(20, 0, 0)), NoVisiblePair);

  // Both see the point but their rays are collinear: no usable pair.
  CHECK_THROWS_AS(rank_pairs(s, Vec3(0, 0, 0)), NoVisiblePair);
}

TEST_CASE("greedy selection on the ring", "[scenario]") {
  const Scenario ring = ring_scenario(16, 5.0, 0.0, 0.01, 2e-5, 0);
  const double s = 0.01;

  const GreedySelection sel = greedy_select(ring, Vec3::Zero(), 4);
  REQUIRE(sel.camera_ids.size() == 4);
  REQUIRE(sel.overall_std_steps.size() == 3);

  // Best pair: one of the sixteen 90-degree pairs (their qualities agree to
  // round-off, so which one wins is unspecified but deterministic).
  const auto ring_index = [](const std::string& id) {
    return std::stoi(id.substr(3));
  };
  const int d0 =
      std::abs(ring_index(sel.camera_ids[0]) - ring_index(sel.camera_ids[1]));
  CHECK(std::min(d0, 16 - d0) == 4);
  CHECK(rel_near(sel.overall_std_steps[0], s * std::sqrt(2.5), 1e-9));

  // Monotone improvement, no repeats.
  CHECK(sel.overall_std_steps[1] <= sel.overall_std_steps[0] + 1e-15);
  CHECK(sel.overall_std_steps[2] <= sel.overall_std_steps[1] + 1e-15);
  std::set<std::string> unique(sel.camera_ids.begin(), sel.camera_ids.end());
  CHECK(unique.size() == 4);

  // Selecting everything ends at the full-ring fused value.
  const GreedySelection all = greedy_select(ring, Vec3::Zero(), 16);
  CHECK(rel_near(all.overall_std_steps.back(), s * std::sqrt(5.0 / 16.0),
                 1e-12));

  CHECK_THROWS_AS(greedy_select(ring, Vec3::Zero(), 1), ValidationError);
  CHECK_THROWS_AS(greedy_select(ring, Vec3::Zero(), 17), NotEnoughCameras);
}

TEST_CASE("greedy selection is near-optimal on small instances",
          "[scenario]") {
  const Scenario ring = ring_scenario(8, 5.0, 0.0, 0.01, 2e-5, 0);
  const Vec3 point(0.5, 0.3, 0.1);  // off-center to break symmetry ties

  for (int k : {3, 4}) {
    const GreedySelection sel = greedy_select(ring, point, k);
    const double greedy = sel.overall_std_steps.back();

    // Exhaustive oracle over all k-subsets.
    double best = std::numeric_limits<double>::infinity();
    std::vector<bool> mask(8, false);
    std::fill(mask.begin(), mask.begin() + k, true);
    std::sort(mask.begin(), mask.end());  // lexicographically first mask
    do {
      std::vector<CameraModel> subset;
      for (int i = 0; i < 8; ++i)
        if (mask[i]) subset.push_back(ring.cameras[i]);
      if (static_cast<int>(subset.size()) != k) continue;
      best = std::min(
          best, overall_std(fused_point_covariance(subset, point,
                                                   MPolicy::limit())));
    } while (std::next_permutation(mask.begin(), mask.end()));

    CHECK(greedy <= 1.1 * best);
    CHECK(greedy >= best - 1e-15);
  }
}
