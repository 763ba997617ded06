#pragma once

// Closed-form reconstruction-error covariance for a single viewing camera and
// its fusion across cameras.
//
// Per-camera model: a pixel measurement with noise std sigma_e constrains the
// target in the two image-plane directions but not along the viewing ray.
// With s = sigma_e * f' / f (f' = depth of the target plane) the covariance is
//
//     Sigma = M * psi psi^T + s^2 * Psi Psi^T
//
// where psi is the unit viewing direction, Psi the (3x2) image-plane basis and
// M a huge depth variance standing in for "no information along the ray".
// Fusion is minimum-variance: Sigma_i = (sum_j Sigma_ij^{-1})^{-1}.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <optional>
#include <vector>

#include "mvcov/errors.hpp"
#include "mvcov/geometry.hpp"
#include "mvcov/linalg.hpp"

namespace mvcov {

struct MPolicy {
  enum class Mode { Finite, Limit };

  Mode mode = Mode::Limit;
  double M = 0.0;  // meters^2, used only in Finite mode

  static MPolicy limit() { return MPolicy{Mode::Limit, 0.0}; }

  static MPolicy finite(double m_squared) {
    if (!(std::isfinite(m_squared) && m_squared > 0.0))
      throw ValidationError("Finite M must be positive");
    return MPolicy{Mode::Finite, m_squared};
  }

  // Default Finite M: the room's max side times the camera count, scaled by
  // 1e3 and squared so the ray-direction variance dwarfs any real depth
  // uncertainty without wrecking double-precision conditioning.
  static double default_finite_m(double room_max_side, std::size_t cameras) {
    return std::pow(1e3 * room_max_side * static_cast<double>(cameras), 2);
  }
};

namespace detail {

// Symmetric-by-construction V * diag(d) * V^T (mirrored entries are assigned,
// not recomputed, so the result is bitwise symmetric).
inline Mat3 congruence_diag(const Mat3& v, const Vec3& d) {
  Mat3 out;
  for (int i = 0; i < 3; ++i) {
    for (int j = i; j < 3; ++j) {
      double acc = 0.0;
      for (int k = 0; k < 3; ++k) acc += (v(i, k) * v(j, k)) * d[k];
      out(i, j) = acc;
      out(j, i) = acc;
    }
  }
  return out;
}

inline Mat3 symmetric_outer(const Vec3& a, double w) {
  Mat3 out;
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) {
      const double x = w * (a[i] * a[j]);
      out(i, j) = x;
      out(j, i) = x;
    }
  return out;
}

}  // namespace detail

struct Covariance3 {
  explicit Covariance3(const Mat3& m) : matrix(m) {
    const double scale = matrix.cwiseAbs().maxCoeff();
    const double asym = (matrix - matrix.transpose()).cwiseAbs().maxCoeff();
    if (scale > 0.0 && !(asym <= 1e-10 * scale))
      throw ValidationError("covariance must be symmetric");
    const double tr = matrix.trace();
    const double lambda_min = sym_eig3(matrix).values[0];
    if (!(lambda_min >= -1e-10 * std::max(tr, 0.0)))
      throw ValidationError("covariance must be PSD up to round-off");
  }

  static Covariance3 zero() { return Covariance3(Mat3::Zero()); }

  double trace() const { return matrix.trace(); }

  Mat3 matrix;
};

struct Information3 {
  Information3(const Mat3& m, int rank_) : matrix(m), rank(rank_) {
    if (rank < 0 || rank > 3)
      throw ValidationError("information rank must be in [0, 3]");
    const double scale = matrix.cwiseAbs().maxCoeff();
    const double asym = (matrix - matrix.transpose()).cwiseAbs().maxCoeff();
    if (scale > 0.0 && !(asym <= 1e-10 * scale))
      throw ValidationError("information must be symmetric");
    const SymEig3 eig = sym_eig3(matrix);
    const double tr = matrix.trace();
    if (!(eig.values[0] >= -1e-10 * std::max(tr, 0.0)))
      throw ValidationError("information must be PSD up to round-off");
    // Finite-M matrices are numerically rank-deficient long before they are
    // symbolically so; only demand that no phantom rank appears.
    int numeric = 0;
    for (int k = 0; k < 3; ++k)
      if (eig.values[k] > 1e-12 * tr) ++numeric;
    if (numeric > rank)
      throw ValidationError("information numeric rank exceeds declared rank");
  }

  Mat3 matrix;
  int rank;  // symbolic, from construction
};

// One camera's view of one target point, reduced to the quantities the
// covariance formula needs.
struct MeasurementGaussian {
  MeasurementGaussian(const Vec3& psi_, const Mat32& plane_basis_,
                      double propagated_std_, const MPolicy& policy_)
      : psi(psi_),
        plane_basis(plane_basis_),
        propagated_std(propagated_std_),
        policy(policy_) {
    if (!(std::abs(psi.norm() - 1.0) <= 1e-12))
      throw ValidationError("psi must be a unit vector");
    const Mat2 gram = plane_basis.transpose() * plane_basis;
    if (!((gram - Mat2::Identity()).cwiseAbs().maxCoeff() <= 1e-12))
      throw ValidationError("plane basis must be orthonormal");
    if (!(std::isfinite(propagated_std) && propagated_std > 0.0))
      throw ValidationError("propagated std must be positive");
  }

  Vec3 psi;          // unit viewing direction, camera -> target
  Mat32 plane_basis; // columns: image-plane directions in world coordinates
  double propagated_std;  // s = sigma_e * f' / f, meters
  MPolicy policy;
};

// Builds the measurement model for `camera` observing `point`.  The optional
// sigma override supports position-dependent noise models without touching
// the camera itself.
inline MeasurementGaussian measurement_gaussian(
    const CameraModel& camera, const Vec3& point, const MPolicy& policy,
    std::optional<double> sigma_override = std::nullopt) {
  const double f_prime = depth(camera, point);
  if (!(f_prime > 0.0))
    throw BehindCamera("measurement model requires positive depth");
  const double sigma = sigma_override.value_or(camera.pixel_noise_std);
  if (!(sigma > 0.0))
    throw ValidationError(
        "camera with zero pixel noise has no measurement Gaussian");
  const double s = sigma * f_prime / camera.focal_length;
  return MeasurementGaussian(viewing_direction(camera, point),
                             image_plane_basis(camera), s, policy);
}

inline Covariance3 single_view_covariance(const MeasurementGaussian& g) {
  if (g.policy.mode == MPolicy::Mode::Limit)
    throw LimitModeHasNoCovariance(
        "Limit-mode measurement has no finite covariance");
  const double s2 = g.propagated_std * g.propagated_std;
  Mat3 m = detail::symmetric_outer(g.psi, g.policy.M);
  m += detail::symmetric_outer(g.plane_basis.col(0), s2);
  m += detail::symmetric_outer(g.plane_basis.col(1), s2);
  return Covariance3(m);
}

inline Covariance3 single_view_covariance(const CameraModel& camera,
                                          const Vec3& point,
                                          const MPolicy& policy) {
  return single_view_covariance(measurement_gaussian(camera, point, policy));
}

// Inverse of the single-view covariance.  The covariance factors as
// B diag(M, s^2, s^2) B^T with B = [psi  Psi_1  Psi_2], so the inverse is
// assembled exactly from the rows of B^{-1} (cross products over det(B)).
// det(B) = psi . (Psi_1 x Psi_2) = cos of the off-axis angle, positive for
// any target in front of the camera.
inline Information3 single_view_information(const MeasurementGaussian& g) {
  const double s2 = g.propagated_std * g.propagated_std;
  const Vec3 p1 = g.plane_basis.col(0);
  const Vec3 p2 = g.plane_basis.col(1);

  if (g.policy.mode == MPolicy::Mode::Limit) {
    Mat3 m = detail::symmetric_outer(p1, 1.0 / s2);
    m += detail::symmetric_outer(p2, 1.0 / s2);
    return Information3(m, 2);
  }

  const double M = g.policy.M;
  // Conditioning estimate: kappa(Sigma) <= (max/min of {M, s^2}) *
  // (1 + sin a)/(1 - sin a), sin a = |Psi^T psi| (off-axis overlap).
  const double sin_a = std::min((g.plane_basis.transpose() * g.psi).norm(), 1.0);
  const double spread =
      std::max(M, s2) / std::min(M, s2) * (1.0 + sin_a) /
      std::max(1.0 - sin_a, 1e-300);
  if (!(spread <= 1e15))
    throw SingularCovariance(
        "single-view covariance condition number exceeds 1e15");

  const Vec3 axis = p1.cross(p2);
  const double det = g.psi.dot(axis);
  const Vec3 r1 = axis / det;
  const Vec3 r2 = p2.cross(g.psi) / det;
  const Vec3 r3 = g.psi.cross(p1) / det;
  Mat3 m = detail::symmetric_outer(r1, 1.0 / M);
  m += detail::symmetric_outer(r2, 1.0 / s2);
  m += detail::symmetric_outer(r3, 1.0 / s2);
  return Information3(m, 3);
}

inline Information3 single_view_information(const CameraModel& camera,
                                            const Vec3& point,
                                            const MPolicy& policy) {
  return single_view_information(measurement_gaussian(camera, point, policy));
}

// Exact M -> infinity limit of the single-view information: the 1/M row of
// the inverse above drops out, leaving a rank-2 form whose null space is the
// ray psi.  Off the optical axis this is NOT the Limit-mode matrix (whose
// null space is the camera axis); it is the information a sampled pinhole
// measurement actually carries, so it is the right reference when comparing
// against simulated triangulation.
inline Information3 single_view_ray_information(const MeasurementGaussian& g) {
  const double s2 = g.propagated_std * g.propagated_std;
  const Vec3 p1 = g.plane_basis.col(0);
  const Vec3 p2 = g.plane_basis.col(1);

  const double sin_a = std::min((g.plane_basis.transpose() * g.psi).norm(), 1.0);
  if (!((1.0 + sin_a) / std::max(1.0 - sin_a, 1e-300) <= 1e15))
    throw SingularCovariance(
        "ray grazes the image plane; information is not representable");

  const double det = g.psi.dot(p1.cross(p2));
  const Vec3 r2 = p2.cross(g.psi) / det;
  const Vec3 r3 = g.psi.cross(p1) / det;
  Mat3 m = detail::symmetric_outer(r2, 1.0 / s2);
  m += detail::symmetric_outer(r3, 1.0 / s2);
  return Information3(m, 2);
}

inline Information3 single_view_ray_information(const CameraModel& camera,
                                                const Vec3& point) {
  return single_view_ray_information(
      measurement_gaussian(camera, point, MPolicy::limit()));
}

// Minimum-variance fusion: invert the summed information.  Inputs are sorted
// into a canonical (entrywise lexicographic) order before summation so the
// result is bitwise independent of caller ordering.
inline Covariance3 fuse(const std::vector<Information3>& infos) {
  if (infos.empty())
    throw ValidationError("fuse requires at least one information matrix");

  std::vector<std::size_t> order(infos.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     const Mat3& ma = infos[a].matrix;
                     const Mat3& mb = infos[b].matrix;
                     for (int i = 0; i < 3; ++i)
                       for (int j = 0; j < 3; ++j) {
                         if (ma(i, j) < mb(i, j)) return true;
                         if (ma(i, j) > mb(i, j)) return false;
                       }
                     return false;
                   });

  Mat3 sum = Mat3::Zero();
  for (std::size_t idx : order) sum += infos[idx].matrix;

  const SymEig3 eig = sym_eig3(sum);
  if (!(eig.values[0] > 1e-12 * std::max(eig.values[2], 0.0)))
    throw SingularInformation(
        "summed information is rank deficient (parallel rays?)");
  const Vec3 inv = eig.values.cwiseInverse();
  return Covariance3(detail::congruence_diag(eig.vectors, inv));
}

inline double overall_std(const Covariance3& cov) {
  return std::sqrt(std::max(cov.trace(), 0.0));
}

struct EllipseSection {
  EllipseSection(const Vec3& center_, double major_, double minor_,
                 const Vec3& major_dir_, const Vec3& minor_dir_)
      : center(center_),
        major(major_),
        minor(minor_),
        major_dir(major_dir_),
        minor_dir(minor_dir_) {
    if (!(major >= minor && minor > 0.0))
      throw ValidationError("ellipse axes must satisfy a >= b > 0");
  }

  Vec3 center;
  double major;  // meters
  double minor;  // meters
  Vec3 major_dir;
  Vec3 minor_dir;
};

// 1-sigma level curve of `cov` restricted to the plane through `center` with
// the given unit normal; axis lengths are the square roots of the in-plane
// covariance eigenvalues.
inline EllipseSection sigma_ellipse_slice(const Covariance3& cov,
                                          const Vec3& plane_normal,
                                          const Vec3& center) {
  if (!(std::abs(plane_normal.norm() - 1.0) <= 1e-12))
    throw ValidationError("plane normal must be a unit vector");
  Vec3 u, v;
  plane_basis(plane_normal, u, v);
  Mat2 section;
  section(0, 0) = u.dot(cov.matrix * u);
  section(1, 1) = v.dot(cov.matrix * v);
  const double cross = u.dot(cov.matrix * v);
  section(0, 1) = cross;
  section(1, 0) = cross;

  const SymEig2 eig = sym_eig2(section);
  if (!(eig.values[0] >= 1e-18))
    throw DegenerateSection("in-plane covariance eigenvalue below 1e-18 m^2");
  const Vec3 minor_dir =
      u * eig.vectors(0, 0) + v * eig.vectors(1, 0);
  const Vec3 major_dir =
      u * eig.vectors(0, 1) + v * eig.vectors(1, 1);
  return EllipseSection(center, std::sqrt(eig.values[1]),
                        std::sqrt(eig.values[0]), major_dir, minor_dir);
}

// Angle of `dir` within the (u, v) plane, degrees in (-90, 90].
inline double in_plane_angle_deg(const Vec3& dir, const Vec3& u,
                                 const Vec3& v) {
  double deg = std::atan2(dir.dot(v), dir.dot(u)) * 180.0 / M_PI;
  if (deg > 90.0) deg -= 180.0;
  if (deg <= -90.0) deg += 180.0;
  return deg;
}

}  // namespace mvcov
