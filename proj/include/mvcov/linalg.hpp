#pragma once

// Small deterministic linear-algebra kernels used by the covariance and
// triangulation code.  Everything here is branch-for-branch reproducible
// across thread counts and runs: cyclic Jacobi with a fixed rotation order,
// Cholesky with an explicit pivot gate, and a fixed-convention plane basis.
// Eigen is used only as the matrix/vector container type.

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <Eigen/LU>

#include <algorithm>
#include <array>
#include <cmath>

namespace mvcov {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat2 = Eigen::Matrix2d;
using Mat3 = Eigen::Matrix3d;
using Mat32 = Eigen::Matrix<double, 3, 2>;

// Compensated (Neumaier) accumulation; keeps chunked Monte Carlo sums
// independent of how work is split across threads.
inline void neumaier_add(double& sum, double& comp, double x) {
  const double t = sum + x;
  if (std::abs(sum) >= std::abs(x))
    comp += (sum - t) + x;
  else
    comp += (x - t) + sum;
  sum = t;
}

namespace detail {

// Sign convention: the first component whose magnitude exceeds
// 1e-12 * max|v_i| is made positive.  Makes eigenvectors reproducible.
template <typename Vec>
inline void orient_eigenvector(Vec& v) {
  double m = 0.0;
  for (int i = 0; i < v.size(); ++i) m = std::max(m, std::abs(v[i]));
  if (m == 0.0) return;
  for (int i = 0; i < v.size(); ++i) {
    if (std::abs(v[i]) > 1e-12 * m) {
      if (v[i] < 0.0) v = -v;
      return;
    }
  }
}

}  // namespace detail

struct SymEig2 {
  Vec2 values;   // ascending
  Mat2 vectors;  // columns, orthonormal, deterministic sign
};

struct SymEig3 {
  Vec3 values;   // ascending
  Mat3 vectors;  // columns, orthonormal, deterministic sign
};

// Cyclic Jacobi for a symmetric 2x2.  One rotation diagonalizes exactly.
inline SymEig2 sym_eig2(const Mat2& a_in) {
  Mat2 a = 0.5 * (a_in + a_in.transpose());
  Mat2 v = Mat2::Identity();
  const double apq = a(0, 1);
  if (apq != 0.0) {
    const double tau = (a(1, 1) - a(0, 0)) / (2.0 * apq);
    const double t =
        (tau == 0.0) ? 1.0
                     : ((tau > 0.0 ? 1.0 : -1.0) /
                        (std::abs(tau) + std::sqrt(1.0 + tau * tau)));
    const double c = 1.0 / std::sqrt(1.0 + t * t);
    const double s = t * c;
    const double app = a(0, 0), aqq = a(1, 1);
    a(0, 0) = app - t * apq;
    a(1, 1) = aqq + t * apq;
    a(0, 1) = a(1, 0) = 0.0;
    v(0, 0) = c;
    v(0, 1) = s;
    v(1, 0) = -s;
    v(1, 1) = c;
  }
  SymEig2 out;
  int order[2] = {0, 1};
  if (a(1, 1) < a(0, 0)) std::swap(order[0], order[1]);
  for (int k = 0; k < 2; ++k) {
    out.values[k] = a(order[k], order[k]);
    out.vectors.col(k) = v.col(order[k]);
  }
  for (int k = 0; k < 2; ++k) {
    Vec2 col = out.vectors.col(k);
    detail::orient_eigenvector(col);
    out.vectors.col(k) = col;
  }
  return out;
}

// Cyclic Jacobi for a symmetric 3x3.  Fixed sweep order (0,1),(0,2),(1,2);
// converges to |off-diagonal| <= 1e-14 * ||A||_F in a handful of sweeps.
inline SymEig3 sym_eig3(const Mat3& a_in) {
  Mat3 a = 0.5 * (a_in + a_in.transpose());
  Mat3 v = Mat3::Identity();
  const double scale = a.norm();
  const double tol = 1e-14 * (scale > 0.0 ? scale : 1.0);
  constexpr int kPairs[3][2] = {{0, 1}, {0, 2}, {1, 2}};

  for (int sweep = 0; sweep < 64; ++sweep) {
    const double off = std::sqrt(a(0, 1) * a(0, 1) + a(0, 2) * a(0, 2) +
                                 a(1, 2) * a(1, 2));
    if (off <= tol) break;
    for (const auto& pq : kPairs) {
      const int p = pq[0], q = pq[1];
      const double apq = a(p, q);
      if (apq == 0.0) continue;
      const double tau = (a(q, q) - a(p, p)) / (2.0 * apq);
      const double t =
          (tau == 0.0) ? 1.0
                       : ((tau > 0.0 ? 1.0 : -1.0) /
                          (std::abs(tau) + std::sqrt(1.0 + tau * tau)));
      const double c = 1.0 / std::sqrt(1.0 + t * t);
      const double s = t * c;
      a(p, p) -= t * apq;
      a(q, q) += t * apq;
      a(p, q) = a(q, p) = 0.0;
      const int r = 3 - p - q;  // the remaining index
      const double arp = a(r, p), arq = a(r, q);
      a(r, p) = a(p, r) = c * arp - s * arq;
      a(r, q) = a(q, r) = s * arp + c * arq;
      for (int i = 0; i < 3; ++i) {
        const double vip = v(i, p), viq = v(i, q);
        v(i, p) = c * vip - s * viq;
        v(i, q) = s * vip + c * viq;
      }
    }
  }

  std::array<int, 3> order = {0, 1, 2};
  std::stable_sort(order.begin(), order.end(),
                   [&](int i, int j) { return a(i, i) < a(j, j); });
  SymEig3 out;
  for (int k = 0; k < 3; ++k) {
    out.values[k] = a(order[k], order[k]);
    out.vectors.col(k) = v.col(order[k]);
  }
  for (int k = 0; k < 3; ++k) {
    Vec3 col = out.vectors.col(k);
    detail::orient_eigenvector(col);
    out.vectors.col(k) = col;
  }
  return out;
}

// Cholesky solve of a symmetric positive-definite 3x3.  Returns false when a
// pivot falls below 1e-13 of the largest diagonal entry (numerically
// semidefinite / indefinite input).
inline bool try_solve_spd3(const Mat3& a, const Vec3& b, Vec3& x) {
  const double scale =
      std::max({std::abs(a(0, 0)), std::abs(a(1, 1)), std::abs(a(2, 2))});
  if (!(scale > 0.0)) return false;
  const double gate = 1e-13 * scale;

  double l[3][3] = {};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j <= i; ++j) {
      double s = a(i, j);
      for (int k = 0; k < j; ++k) s -= l[i][k] * l[j][k];
      if (i == j) {
        if (s <= gate) return false;
        l[i][i] = std::sqrt(s);
      } else {
        l[i][j] = s / l[j][j];
      }
    }
  }
  // Forward then backward substitution.
  double y[3];
  for (int i = 0; i < 3; ++i) {
    double s = b[i];
    for (int k = 0; k < i; ++k) s -= l[i][k] * y[k];
    y[i] = s / l[i][i];
  }
  for (int i = 2; i >= 0; --i) {
    double s = y[i];
    for (int k = i + 1; k < 3; ++k) s -= l[k][i] * x[k];
    x[i] = s / l[i][i];
  }
  return true;
}

// Deterministic orthonormal basis (u, v) of the plane with the given unit
// normal; u is built from the world axis least aligned with the normal
// (lowest index wins ties) and v = n x u completes a right-handed triad.
inline void plane_basis(const Vec3& unit_normal, Vec3& u, Vec3& v) {
  int k = 0;
  for (int i = 1; i < 3; ++i)
    if (std::abs(unit_normal[i]) < std::abs(unit_normal[k])) k = i;
  Vec3 e = Vec3::Zero();
  e[k] = 1.0;
  u = (e - unit_normal * unit_normal[k]).normalized();
  v = unit_normal.cross(u);
}

}  // namespace mvcov
