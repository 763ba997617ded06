#pragma once

// Point reconstruction from two or more pixel measurements: an unweighted
// midpoint (linear least squares on perpendicular ray distances) and an
// iterated generalized-least-squares refinement of the pixel residuals
// (Gauss-Newton with per-camera measurement weights).

#include <cmath>
#include <span>
#include <string>

#include "mvcov/errors.hpp"
#include "mvcov/geometry.hpp"
#include "mvcov/linalg.hpp"

namespace mvcov {

struct Observation {
  std::string camera_id;  // resolvable in the active scenario
  PixelPoint pixel;
};

inline Vec3 reconstruction_error(const Vec3& true_point, const Vec3& estimate) {
  return estimate - true_point;
}

namespace detail {

inline void check_observations(std::span<const CameraModel> cameras,
                               std::span<const PixelPoint> pixels) {
  if (cameras.size() != pixels.size())
    throw ValidationError("one pixel measurement required per camera");
  if (cameras.size() < 2)
    throw InsufficientObservations("triangulation needs >= 2 observations");
}

}  // namespace detail

// Point minimizing the sum of squared perpendicular distances to all
// back-projected rays (closed-form 3x3 normal equations).  Degenerate when
// every ray is parallel to the first within 1e-12 on |cos|.
inline Vec3 triangulate_midpoint(std::span<const CameraModel> cameras,
                                 std::span<const PixelPoint> pixels) {
  detail::check_observations(cameras, pixels);
  const std::size_t n = cameras.size();

  Mat3 a = Mat3::Zero();
  Vec3 b = Vec3::Zero();
  Vec3 d0;
  bool any_nonparallel = false;
  for (std::size_t j = 0; j < n; ++j) {
    const Ray ray = back_project(cameras[j], pixels[j]);
    if (j == 0)
      d0 = ray.direction;
    else if (std::abs(d0.dot(ray.direction)) < 1.0 - 1e-12)
      any_nonparallel = true;
    const Mat3 proj = Mat3::Identity() - ray.direction * ray.direction.transpose();
    a += proj;
    b += proj * ray.origin;
  }
  if (!any_nonparallel)
    throw DegenerateGeometry("all back-projected rays are parallel");

  Vec3 x;
  if (!try_solve_spd3(a, b, x))
    throw DegenerateGeometry("midpoint normal equations are singular");
  return x;
}

// Iterated GLS on the pixel residuals: starting from the midpoint, each pass
// linearizes every camera's projection about the current estimate and solves
// the 1/sigma_e^2-weighted normal equations (Gauss-Newton).  With equal noise
// levels the weights cancel, so cameras that all have sigma_e = 0 fall back
// to unit weights.
inline Vec3 triangulate_gls(std::span<const CameraModel> cameras,
                            std::span<const PixelPoint> pixels,
                            int iterations = 2) {
  detail::check_observations(cameras, pixels);
  if (iterations < 0) throw ValidationError("iterations must be >= 0");
  const std::size_t n = cameras.size();

  bool any_zero_sigma = false, any_positive_sigma = false;
  for (const CameraModel& cam : cameras)
    (cam.pixel_noise_std > 0.0 ? any_positive_sigma : any_zero_sigma) = true;
  if (any_zero_sigma && any_positive_sigma)
    throw ValidationError(
        "GLS cannot mix zero and non-zero pixel noise cameras");
  const bool unit_weights = !any_positive_sigma;

  Vec3 x = triangulate_midpoint(cameras, pixels);
  for (int it = 0; it < iterations; ++it) {
    Mat3 h = Mat3::Zero();
    Vec3 g = Vec3::Zero();
    for (std::size_t j = 0; j < n; ++j) {
      const CameraModel& cam = cameras[j];
      const Vec3 rel = x - cam.center;
      const double z = rel.dot(cam.rotation.axis());
      if (!(z > 0.0))
        throw DegenerateGeometry("GLS iterate fell behind a camera");
      const double w =
          unit_weights ? 1.0
                       : 1.0 / (cam.pixel_noise_std * cam.pixel_noise_std);
      const double k = cam.focal_length / z;
      const double rx = rel.dot(cam.rotation.right());
      const double ry = rel.dot(cam.rotation.down());
      // Projection Jacobian rows and residual at the current estimate.
      const Vec3 ju =
          k * (cam.rotation.right() - (rx / z) * cam.rotation.axis());
      const Vec3 jv =
          k * (cam.rotation.down() - (ry / z) * cam.rotation.axis());
      const double ru = k * rx - pixels[j].u;
      const double rv = k * ry - pixels[j].v;
      h += w * (ju * ju.transpose() + jv * jv.transpose());
      g += w * (ru * ju + rv * jv);
    }
    Vec3 step;
    if (!try_solve_spd3(h, g, step))
      throw SingularInformation("GLS normal equations are singular");
    x -= step;
  }
  return x;
}

}  // namespace mvcov
