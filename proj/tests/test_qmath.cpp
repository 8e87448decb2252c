#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "entkit/qmath.hpp"
#include "entkit/rng.hpp"

using namespace entkit;

namespace {

Mat pauli_x() {
  Mat m(2, 2);
  m(0, 1) = cplx{1.0, 0.0};
  m(1, 0) = cplx{1.0, 0.0};
  return m;
}

Mat pauli_y() {
  Mat m(2, 2);
  m(0, 1) = cplx{0.0, -1.0};
  m(1, 0) = cplx{0.0, 1.0};
  return m;
}

}  // namespace

TEST_CASE("matrix arithmetic basics") {
  Mat a(2, 2);
  a(0, 0) = cplx{1.0, 0.0};
  a(0, 1) = cplx{0.0, 2.0};
  Mat b = a;
  b += a;
  CHECK(b(0, 1) == cplx{0.0, 4.0});
  b -= a;
  CHECK(max_abs_diff(a, b) == 0.0);

  const Mat prod = a * Mat::identity(2);
  CHECK(max_abs_diff(prod, a) == 0.0);
  CHECK(trace(a) == cplx{1.0, 0.0});

  const Mat adj = adjoint(a);
  CHECK(adj(1, 0) == cplx{0.0, -2.0});
}

TEST_CASE("inner product conjugates the first argument") {
  const Vec a{cplx{0.0, 1.0}, cplx{1.0, 0.0}};
  const Vec b{cplx{1.0, 0.0}, cplx{0.0, 0.0}};
  CHECK(inner(a, b) == cplx{0.0, -1.0});
  CHECK(norm_sq(a) == doctest::Approx(2.0));
}

TEST_CASE("tensor matches the explicit double loop") {
  Prng rng(3);
  Vec a(3), b(4);
  for (auto& x : a) x = rng.complex_normal();
  for (auto& x : b) x = rng.complex_normal();
  const Vec t = tensor(a, b);
  REQUIRE(t.size() == 12);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 4; ++j)
      CHECK(t[i * 4 + j] == a[i] * b[j]);
}

TEST_CASE("eigensolver on hand-checked 2x2 matrices") {
  for (const Mat& m : {pauli_x(), pauli_y()}) {
    const EigResult eig = hermitian_eig(m);
    REQUIRE(eig.values.size() == 2);
    CHECK(eig.values[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(eig.values[1] == doctest::Approx(-1.0).epsilon(1e-12));

    Mat rebuilt(2, 2);
    for (std::size_t k = 0; k < 2; ++k)
      for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j)
          rebuilt(i, j) += eig.values[k] * eig.vectors(i, k) *
                           std::conj(eig.vectors(j, k));
    CHECK(max_abs_diff(rebuilt, m) < 1e-12);
  }
}

TEST_CASE("eigensolver sorts a diagonal matrix descending") {
  Mat m(3, 3);
  m(0, 0) = cplx{-1.0, 0.0};
  m(1, 1) = cplx{5.0, 0.0};
  m(2, 2) = cplx{2.0, 0.0};
  const EigResult eig = hermitian_eig(m);
  CHECK(eig.values[0] == doctest::Approx(5.0));
  CHECK(eig.values[1] == doctest::Approx(2.0));
  CHECK(eig.values[2] == doctest::Approx(-1.0));
}

TEST_CASE("eigensolver rejects non-hermitian input") {
  Mat m(2, 2);
  m(0, 1) = cplx{1.0, 0.0};
  CHECK_THROWS(hermitian_eig(m));
}

TEST_CASE("partial trace of a product splits cleanly") {
  Prng rng(5);
  const Mat a = random_density_matrix(rng, 2);
  const Mat b = random_density_matrix(rng, 3);
  const Mat joint = tensor(a, b);
  CHECK(max_abs_diff(partial_trace(joint, {2, 3}, {0}), a) < 1e-12);
  CHECK(max_abs_diff(partial_trace(joint, {2, 3}, {1}), b) < 1e-12);
  CHECK(std::abs(trace(partial_trace(joint, {2, 3}, {0})).real() - 1.0) <
        1e-12);
}

TEST_CASE("subsystem permutation relabels amplitudes") {
  // 2x3 product |1> x |2| has flat index 1*3+2=5; swapped it sits at 2*2+1.
  Vec v(6, cplx{0.0, 0.0});
  v[5] = cplx{1.0, 0.0};
  const Vec w = permute_subsystems(v, {2, 3}, {1, 0});
  CHECK(w[2 * 2 + 1] == cplx{1.0, 0.0});
  CHECK(norm_sq(w) == doctest::Approx(1.0));

  Prng rng(11);
  const Mat a = random_density_matrix(rng, 2);
  const Mat b = random_density_matrix(rng, 3);
  const Mat swapped = permute_subsystems(tensor(a, b), {2, 3}, {1, 0});
  CHECK(max_abs_diff(swapped, tensor(b, a)) < 1e-12);
}

TEST_CASE("apply_local acts on the addressed subsystem only") {
  // X on the middle qubit of |000> gives |010>.
  Vec v(8, cplx{0.0, 0.0});
  v[0] = cplx{1.0, 0.0};
  const Vec w = apply_local(pauli_x(), v, {2, 2, 2}, 1);
  CHECK(w[2] == cplx{1.0, 0.0});
  CHECK(norm_sq(w) == doctest::Approx(1.0));
}

TEST_CASE("sandwich_local matches apply_local on projectors") {
  Prng rng(13);
  const Vec psi = random_state_vector(rng, 8);
  const Mat rho = outer(psi);
  Mat proj(2, 2);
  proj(0, 0) = cplx{1.0, 0.0};

  const Mat lhs = sandwich_local(proj, rho, {2, 2, 2}, 0);
  const Mat rhs = outer(apply_local(proj, psi, {2, 2, 2}, 0));
  CHECK(max_abs_diff(lhs, rhs) < 1e-12);
}

TEST_CASE("schmidt of a Bell pair is flat") {
  const double s = 1.0 / std::sqrt(2.0);
  const Vec bell{cplx{s, 0.0}, {}, {}, cplx{s, 0.0}};
  const SchmidtDecomposition sd = schmidt(bell, 2, 2);
  REQUIRE(sd.probabilities.size() == 2);
  CHECK(sd.probabilities[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(sd.probabilities[1] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(entropy_bits(sd.probabilities) == doctest::Approx(1.0));
}

TEST_CASE("schmidt handles subnormalized input and rectangular shapes") {
  Prng rng(17);
  Vec psi = random_state_vector(rng, 8 * 3);
  for (auto& x : psi) x *= 0.5;  // squared norm 1/4
  const SchmidtDecomposition sd = schmidt(psi, 8, 3);
  REQUIRE(sd.probabilities.size() == 3);
  double total = 0.0;
  for (double p : sd.probabilities) total += p;
  CHECK(total == doctest::Approx(0.25).epsilon(1e-12));

  const Vec back = schmidt_reconstruct(sd, 8, 3);
  double worst = 0.0;
  for (std::size_t i = 0; i < psi.size(); ++i)
    worst = std::max(worst, std::abs(psi[i] - back[i]));
  CHECK(worst < 1e-9);
}

TEST_CASE("schmidt rejects zero vectors and bad shapes") {
  CHECK_THROWS(schmidt(Vec(6, cplx{0.0, 0.0}), 2, 3));
  CHECK_THROWS(schmidt(Vec(5, cplx{1.0, 0.0}), 2, 3));
}

TEST_CASE("entropy_bits on hand values") {
  const double p1[] = {1.0, 0.0};
  CHECK(entropy_bits(p1) == 0.0);
  const double p2[] = {0.5, 0.5};
  CHECK(entropy_bits(p2) == doctest::Approx(1.0));
  const double p3[] = {0.3, 0.3, 0.2, 0.2};
  CHECK(entropy_bits(p3) ==
        doctest::Approx(1.9709505944546687).epsilon(1e-14));
  const double bad[] = {1.1, -0.1};
  CHECK_THROWS(entropy_bits(bad));
}

TEST_CASE("purity separates pure from mixed") {
  Prng rng(19);
  const Mat pure = outer(random_state_vector(rng, 4));
  CHECK(purity(pure) == doctest::Approx(1.0).epsilon(1e-12));
  Mat mixed = Mat::identity(4);
  mixed *= cplx{0.25, 0.0};
  CHECK(purity(mixed) == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("orthonormal_columns yields an isometry") {
  Prng rng(23);
  const Mat g = random_gaussian(rng, 6, 3);
  const Mat q = orthonormal_columns(g);
  CHECK(max_abs_diff(adjoint(q) * q, Mat::identity(3)) < 1e-12);
}

TEST_CASE("vn_entropy of the maximally mixed qubit is 1") {
  Mat rho = Mat::identity(2);
  rho *= cplx{0.5, 0.0};
  CHECK(vn_entropy(rho) == doctest::Approx(1.0).epsilon(1e-12));
}
