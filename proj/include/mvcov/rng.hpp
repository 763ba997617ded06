#pragma once

// Counter-based, splittable random streams.  Every draw is a pure function of
// (key, draw index), and child streams are derived by hashing (key, fork
// index), so Monte Carlo trials can be sharded across any number of workers
// and still produce the same numbers in the same places.  Gaussians come from
// the inverse normal CDF (Wichura's PPND16 rational approximations), keeping
// the uniform->normal map single-draw and platform independent.

#include <cstdint>
#include <cmath>

#include "mvcov/errors.hpp"

namespace mvcov {

// splitmix64 finalizer: bijective on 64-bit words, strong avalanche.
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline std::uint64_t hash_combine64(std::uint64_t key, std::uint64_t v) {
  return mix64(key ^ (0x9E3779B97F4A7C15ULL + v + (key << 6) + (key >> 2)));
}

// Inverse of the standard normal CDF (AS 241, PPND16): |error| < 1e-15 for
// p in (0, 1).
inline double inverse_normal_cdf(double p) {
  if (!(p > 0.0 && p < 1.0))
    throw ValidationError("inverse normal CDF requires p in (0, 1)");
  const double q = p - 0.5;
  if (std::abs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    const double num =
        (((((((2.5090809287301226727e3 * r + 3.3430575583588128105e4) * r +
              6.7265770927008700853e4) * r + 4.5921953931549871457e4) * r +
            1.3731693765509461125e4) * r + 1.9715909503065514427e3) * r +
          1.3314166789178437745e2) * r + 3.3871328727963666080e0);
    const double den =
        (((((((5.2264952788528545610e3 * r + 2.8729085735721942674e4) * r +
              3.9307895800092710610e4) * r + 2.1213794301586595867e4) * r +
            5.3941960214247511077e3) * r + 6.8718700749205790830e2) * r +
          4.2313330701600911252e1) * r + 1.0);
    return q * num / den;
  }
  double r = (q < 0.0) ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  double x;
  if (r <= 5.0) {
    r -= 1.6;
    const double num =
        (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
              2.41780725177450611770e-1) * r + 1.27045825245236838258e0) * r +
            3.64784832476320460504e0) * r + 5.76949722146069140550e0) * r +
          4.63033784615654529590e0) * r + 1.42343711074968357734e0);
    const double den =
        (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
              1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
            6.89767334985100004550e-1) * r + 1.67638483018380384940e0) * r +
          2.05319162663775882187e0) * r + 1.0);
    x = num / den;
  } else {
    r -= 5.0;
    const double num =
        (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
              1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
            2.96560571828504891230e-1) * r + 1.78482653991729133580e0) * r +
          5.46378491116411436990e0) * r + 6.65790464350110377720e0);
    const double den =
        (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
              1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
            1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
          5.99832206555887937690e-1) * r + 1.0);
    x = num / den;
  }
  return (q < 0.0) ? -x : x;
}

class CounterRng {
 public:
  explicit CounterRng(std::uint64_t key) : key_(key) {}

  // Independent child stream; fork indices and draw indices live in separate
  // hashed domains so fork(i).uniform(j) never aliases uniform(k).
  CounterRng fork(std::uint64_t index) const {
    return CounterRng(hash_combine64(key_ ^ kForkTag, index));
  }

  // Uniform on the open interval (0, 1): 52 random bits centered in the bin.
  // Every value (k + 0.5) * 2^-52 is exactly representable, so the ends can
  // never round to 0 or 1 (53 bits would put the top value on a rounding tie
  // with 1.0).
  double uniform(std::uint64_t draw) const {
    const std::uint64_t bits = hash_combine64(key_ ^ kDrawTag, draw);
    return (static_cast<double>(bits >> 12) + 0.5) * 0x1.0p-52;
  }

  double gaussian(std::uint64_t draw) const {
    return inverse_normal_cdf(uniform(draw));
  }

  std::uint64_t key() const { return key_; }

 private:
  static constexpr std::uint64_t kForkTag = 0xA076'1D64'78BD'642FULL;
  static constexpr std::uint64_t kDrawTag = 0xE703'7ED1'A0B4'28DBULL;

  std::uint64_t key_;
};

}  // namespace mvcov
