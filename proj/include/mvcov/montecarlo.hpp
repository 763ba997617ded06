#pragma once

// Sampling oracle for the closed-form covariance: simulate noisy pixel
// measurements, triangulate, and accumulate the sample covariance of the
// reconstruction errors about zero with an (N-1) denominator.
//
// Reproducibility contract: trial t, camera j draws its two pixel noise
// components from the stream seed->fork(t)->fork(j), trials are accumulated
// in fixed chunks of 1024 with compensated sums, and chunks are reduced in
// index order — so the result is bit-identical for any thread count.

#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "mvcov/covariance.hpp"
#include "mvcov/errors.hpp"
#include "mvcov/geometry.hpp"
#include "mvcov/linalg.hpp"
#include "mvcov/parallel.hpp"
#include "mvcov/rng.hpp"
#include "mvcov/triangulation.hpp"

namespace mvcov {

enum class Estimator { Gls, Midpoint };

struct McConfig {
  long long trials = 10000;  // N >= 2
  std::uint64_t seed = 0;
  Estimator estimator = Estimator::Gls;
  int gls_iterations = 2;
};

struct McResult {
  Covariance3 sample_cov;  // Eq.-style second moment about zero, (N-1) denom
  Vec3 sample_mean_error;
  long long trials_used;
};

// Noiseless projection plus an isotropic 2D Gaussian of std sigma_e.
inline PixelPoint sample_measurement(const CameraModel& camera,
                                     const Vec3& point, const CounterRng& rng) {
  PixelPoint px = project(camera, point);
  if (camera.pixel_noise_std > 0.0) {
    px.u += camera.pixel_noise_std * rng.gaussian(0);
    px.v += camera.pixel_noise_std * rng.gaussian(1);
  }
  return px;
}

namespace detail {

struct McChunkSums {
  // Upper-triangle order: (0,0) (0,1) (0,2) (1,1) (1,2) (2,2).
  std::array<double, 6> ee{};
  std::array<double, 6> ee_comp{};
  std::array<double, 3> e{};
  std::array<double, 3> e_comp{};
  long long used = 0;
  long long degenerate = 0;
};

constexpr long long kMcChunk = 1024;

}  // namespace detail

inline McResult mc_covariance(std::span<const CameraModel> cameras,
                              const Vec3& point, const McConfig& config,
                              int threads = 1) {
  if (config.trials < 2) throw ValidationError("Monte Carlo needs N >= 2");
  if (cameras.size() < 2)
    throw InsufficientObservations("Monte Carlo needs >= 2 cameras");
  for (const CameraModel& cam : cameras)
    if (!(depth(cam, point) > 0.0))
      throw BehindCamera("Monte Carlo point not visible from every camera");

  const long long n_trials = config.trials;
  const long long n_chunks =
      (n_trials + detail::kMcChunk - 1) / detail::kMcChunk;
  std::vector<detail::McChunkSums> chunks(
      static_cast<std::size_t>(n_chunks));
  const CounterRng root(config.seed);

  parallel_for(
      static_cast<std::size_t>(n_chunks), threads,
      [&](std::size_t c) {
        detail::McChunkSums& out = chunks[c];
        const long long begin = static_cast<long long>(c) * detail::kMcChunk;
        const long long end = std::min(begin + detail::kMcChunk, n_trials);
        std::vector<PixelPoint> pixels(cameras.size());
        for (long long t = begin; t < end; ++t) {
          const CounterRng trial_rng =
              root.fork(static_cast<std::uint64_t>(t));
          for (std::size_t j = 0; j < cameras.size(); ++j)
            pixels[j] = sample_measurement(
                cameras[j], point, trial_rng.fork(static_cast<std::uint64_t>(j)));
          Vec3 estimate;
          try {
            estimate = (config.estimator == Estimator::Gls)
                           ? triangulate_gls(cameras, pixels,
                                             config.gls_iterations)
                           : triangulate_midpoint(cameras, pixels);
          } catch (const DegenerateGeometry&) {
            ++out.degenerate;
            continue;
          }
          const Vec3 e = reconstruction_error(point, estimate);
          int k = 0;
          for (int i = 0; i < 3; ++i)
            for (int j = i; j < 3; ++j, ++k)
              neumaier_add(out.ee[k], out.ee_comp[k], e[i] * e[j]);
          for (int i = 0; i < 3; ++i)
            neumaier_add(out.e[i], out.e_comp[i], e[i]);
          ++out.used;
        }
      });

  detail::McChunkSums total;
  for (const detail::McChunkSums& c : chunks) {
    for (int k = 0; k < 6; ++k)
      neumaier_add(total.ee[k], total.ee_comp[k], c.ee[k] + c.ee_comp[k]);
    for (int i = 0; i < 3; ++i)
      neumaier_add(total.e[i], total.e_comp[i], c.e[i] + c.e_comp[i]);
    total.used += c.used;
    total.degenerate += c.degenerate;
  }

  if (total.degenerate * 100 > n_trials || total.used < 2)
    throw TooFewValidTrials("more than 1% of trials were degenerate");

  const double denom = static_cast<double>(total.used - 1);
  Mat3 cov;
  int k = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j, ++k) {
      const double v = (total.ee[k] + total.ee_comp[k]) / denom;
      cov(i, j) = v;
      cov(j, i) = v;
    }
  Vec3 mean;
  for (int i = 0; i < 3; ++i)
    mean[i] = (total.e[i] + total.e_comp[i]) /
              static_cast<double>(total.used);
  return McResult{Covariance3(cov), mean, total.used};
}

// Sweep metric: percent difference between sampled and theoretical overall
// standard deviations.
inline double percent_std_difference(const McResult& mc,
                                     const Covariance3& theory) {
  const double tr = theory.trace();
  if (!(tr > 0.0)) throw ZeroTheory("theoretical covariance has zero trace");
  const double st = std::sqrt(tr);
  const double sm = overall_std(mc.sample_cov);
  return 100.0 * std::abs(sm - st) / st;
}

}  // namespace mvcov
