#pragma once

// Pinhole camera geometry.  Conventions, used consistently everywhere:
//   - rotation columns are (right, down, optical axis) in world coordinates,
//     right-handed, det = +1;
//   - sensor u runs along `right`, v along `down`, both measured in the same
//     metric unit as the focal length (metres throughout the toolkit);
//   - depth of a world point is its coordinate along the optical axis.

#include <cmath>
#include <string>
#include <utility>

#include "mvcov/errors.hpp"
#include "mvcov/linalg.hpp"

namespace mvcov {

class Rotation3 {
 public:
  explicit Rotation3(const Mat3& m) : m_(m) {
    const double ortho = (m_.transpose() * m_ - Mat3::Identity())
                             .cwiseAbs()
                             .maxCoeff();
    if (!(ortho <= 1e-12))
      throw ValidationError("rotation matrix is not orthonormal");
    if (!(std::abs(m_.determinant() - 1.0) <= 1e-12))
      throw ValidationError("rotation matrix must have determinant +1");
  }

  static Rotation3 identity() { return Rotation3(Mat3::Identity()); }

  // Orientation whose optical axis points from `center` to `target`, with the
  // sensor row direction horizontal w.r.t. `up` (down-axis as anti-parallel
  // to `up` as the geometry allows).
  static Rotation3 look_at(const Vec3& center, const Vec3& target,
                           const Vec3& up = Vec3::UnitZ()) {
    Vec3 axis = target - center;
    const double n = axis.norm();
    if (!(n > 1e-150))
      throw DegenerateDirection("look_at: target coincides with center");
    axis /= n;
    Vec3 right = axis.cross(up);
    const double rn = right.norm();
    if (!(rn > 1e-12))
      throw DegenerateDirection("look_at: view direction parallel to up");
    right /= rn;
    const Vec3 down = axis.cross(right);
    Mat3 m;
    m.col(0) = right;
    m.col(1) = down;
    m.col(2) = axis;
    return Rotation3(m);
  }

  const Mat3& matrix() const { return m_; }
  Vec3 right() const { return m_.col(0); }
  Vec3 down() const { return m_.col(1); }
  Vec3 axis() const { return m_.col(2); }

 private:
  Mat3 m_;
};

struct PixelPoint {
  double u = 0.0;  // metric sensor coordinate along `right`
  double v = 0.0;  // metric sensor coordinate along `down`
};

struct Ray {
  Ray(const Vec3& o, const Vec3& d) : origin(o), direction(d) {
    if (!(std::abs(direction.norm() - 1.0) <= 1e-12))
      throw ValidationError("ray direction must be unit length");
  }
  Vec3 origin;
  Vec3 direction;  // unit
};

struct CameraModel {
  CameraModel(std::string id_, const Vec3& center_, const Rotation3& rotation_,
              double focal_length_, double pixel_noise_std_)
      : id(std::move(id_)),
        center(center_),
        rotation(rotation_),
        focal_length(focal_length_),
        pixel_noise_std(pixel_noise_std_) {
    if (id.empty()) throw ValidationError("camera id must be non-empty");
    for (char c : id)
      if (c == ',' || c == '\n' || c == '\r')
        throw ValidationError("camera id must not contain commas or newlines");
    if (!center.allFinite())
      throw ValidationError("camera center must be finite");
    if (!(std::isfinite(focal_length) && focal_length > 0.0))
      throw ValidationError("focal length must be positive");
    if (!(std::isfinite(pixel_noise_std) && pixel_noise_std >= 0.0))
      throw ValidationError("pixel noise std must be non-negative");
  }

  std::string id;
  Vec3 center;
  Rotation3 rotation;
  double focal_length;     // metres
  double pixel_noise_std;  // metres, on the sensor plane
};

// Signed distance of `p` along the optical axis.
inline double depth(const CameraModel& cam, const Vec3& p) {
  return (p - cam.center).dot(cam.rotation.axis());
}

// Unit vector from the optical center towards `p`.
inline Vec3 viewing_direction(const CameraModel& cam, const Vec3& p) {
  Vec3 d = p - cam.center;
  const double n = d.norm();
  if (!(n > 1e-150))
    throw DegenerateDirection("viewing_direction: point at camera center");
  return d / n;
}

// Perspective projection onto the metric sensor plane at distance
// focal_length.  Points at or behind the optical center are rejected.
inline PixelPoint project(const CameraModel& cam, const Vec3& p) {
  const Vec3 rel = p - cam.center;
  const double z = rel.dot(cam.rotation.axis());
  if (!(z > 0.0)) throw BehindCamera("project: point not in front of camera");
  const double x = rel.dot(cam.rotation.right());
  const double y = rel.dot(cam.rotation.down());
  return PixelPoint{cam.focal_length * x / z, cam.focal_length * y / z};
}

// Orthonormal basis of the plane parallel to the image plane, in world
// coordinates: the camera right and down axes.
inline Mat32 image_plane_basis(const CameraModel& cam) {
  Mat32 basis;
  basis.col(0) = cam.rotation.right();
  basis.col(1) = cam.rotation.down();
  return basis;
}

// Ray through the optical center and the sensor point (u, v, f).
inline Ray back_project(const CameraModel& cam, const PixelPoint& px) {
  const Vec3 dir_cam(px.u, px.v, cam.focal_length);
  const Vec3 dir = cam.rotation.matrix() * dir_cam;
  return Ray(cam.center, dir / dir.norm());
}

}  // namespace mvcov
