#pragma once
// Seeded randomness with a stable cross-platform sequence: uniforms are built
// directly from mt19937_64 output and normals via Box-Muller, so results do
// not depend on the standard library's distribution implementations.

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>

#include "entkit/qmath.hpp"

namespace entkit {

class Prng {
 public:
  explicit Prng(std::uint64_t seed) : engine_(mix(seed)) {}

  // Independent stream k of a base seed; used to nest optimizer restarts.
  static Prng streamed(std::uint64_t seed, std::uint64_t stream) {
    return Prng(mix(seed) ^ mix(stream * 0x9e3779b97f4a7c15ULL + 0x2545f4914f6cdd1dULL));
  }

  double uniform() {  // [0, 1)
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
  }

  cplx complex_normal() {
    const double re = normal();
    const double im = normal();
    return cplx{re, im};
  }

  std::size_t index(std::size_t n) {
    if (n == 0) throw std::invalid_argument("Prng::index: empty range");
    return static_cast<std::size_t>(uniform() * static_cast<double>(n)) % n;
  }

 private:
  // splitmix64 finalizer decorrelates nearby seeds.
  static std::uint64_t mix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

  std::mt19937_64 engine_;
};

inline Vec random_state_vector(Prng& rng, std::size_t dim) {
  Vec v(dim);
  for (auto& x : v) x = rng.complex_normal();
  const double n = std::sqrt(norm_sq(v));
  for (auto& x : v) x /= n;
  return v;
}

inline Mat random_gaussian(Prng& rng, std::size_t rows, std::size_t cols) {
  Mat g(rows, cols);
  for (auto& x : g.data()) x = rng.complex_normal();
  return g;
}

// Haar-like isometry: orthonormalized columns of a Gaussian matrix.
inline Mat random_isometry(Prng& rng, std::size_t rows, std::size_t cols) {
  if (cols > rows) throw std::invalid_argument("random_isometry: cols > rows");
  return orthonormal_columns(random_gaussian(rng, rows, cols));
}

inline Mat random_unitary(Prng& rng, std::size_t n) {
  return random_isometry(rng, n, n);
}

// Wishart sample G G^dagger: Hermitian, positive semidefinite, full rank
// almost surely.
inline Mat random_psd(Prng& rng, std::size_t dim) {
  const Mat g = random_gaussian(rng, dim, dim);
  return g * adjoint(g);
}

// Random full-rank density matrix G G^dagger / tr.
inline Mat random_density_matrix(Prng& rng, std::size_t dim) {
  const Mat g = random_gaussian(rng, dim, dim);
  Mat rho = g * adjoint(g);
  const double tr = trace(rho).real();
  rho *= cplx{1.0 / tr, 0.0};
  return rho;
}

}  // namespace entkit
