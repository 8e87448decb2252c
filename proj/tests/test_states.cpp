#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>

#include "entkit/measures.hpp"
#include "entkit/qmath.hpp"
#include "entkit/states.hpp"

using namespace entkit;

namespace {

// Flat index of basis ket (a, b, c) in the 8x4x2 layout, first party slowest.
std::size_t idx(std::size_t a, std::size_t b, std::size_t c) {
  return (a * 4 + b) * 2 + c;
}

}  // namespace

TEST_CASE("party helpers validate labels and dims") {
  const std::vector<PartySpace> parties{{"A", 2}, {"B", 3}};
  CHECK(total_dim(parties) == 6);
  CHECK(party_index(parties, "B") == 1);
  CHECK_THROWS(party_index(parties, "C"));
  CHECK_THROWS(validate_parties({{"A", 2}, {"A", 2}}));
  CHECK_THROWS(validate_parties({{"", 2}}));
  CHECK_THROWS(validate_parties({{"A", 0}}));
}

TEST_CASE("state constructors reject malformed input") {
  CHECK_THROWS(PureState({{"A", 2}}, Vec{cplx{1.0, 0.0}, cplx{1.0, 0.0}}));
  CHECK_THROWS(PureState({{"A", 2}}, Vec{cplx{1.0, 0.0}}));  // dim mismatch

  Mat not_herm(2, 2);
  not_herm(0, 0) = cplx{0.5, 0.0};
  not_herm(0, 1) = cplx{0.5, 0.0};
  not_herm(1, 1) = cplx{0.5, 0.0};
  CHECK_THROWS(DensityOperator({{"A", 2}}, not_herm));

  Mat wrong_trace = Mat::identity(2);
  CHECK_THROWS(DensityOperator({{"A", 2}}, wrong_trace));
}

TEST_CASE("the 8x4x2 state matches its amplitude table") {
  const PureState phi = make_phi();
  REQUIRE(phi.dim() == 64);
  REQUIRE(phi.parties().size() == 3);
  CHECK(phi.parties()[0].label == "A");
  CHECK(phi.parties()[0].dim == 8);
  CHECK(phi.parties()[1].dim == 4);
  CHECK(phi.parties()[2].dim == 2);

  const double q = 0.25;
  const cplx z{q / std::sqrt(2.0), q / std::sqrt(2.0)};  // (1+i)/(4 sqrt 2)
  const cplx r{std::sqrt(2.0) * q, 0.0};
  std::map<std::size_t, cplx> table;
  table[idx(0, 0, 0)] = cplx{q, 0.0};
  table[idx(0, 0, 1)] = cplx{0.0, q};
  table[idx(1, 1, 0)] = cplx{q, 0.0};
  table[idx(1, 1, 1)] = cplx{q, 0.0};
  table[idx(2, 2, 0)] = cplx{q, 0.0};
  table[idx(2, 2, 1)] = cplx{0.0, -q};
  table[idx(3, 3, 0)] = cplx{q, 0.0};
  table[idx(3, 3, 1)] = cplx{-q, 0.0};
  table[idx(4, 0, 0)] = z;
  table[idx(4, 0, 1)] = z;
  table[idx(5, 1, 0)] = r;
  table[idx(6, 2, 0)] = z;
  table[idx(6, 2, 1)] = z;
  table[idx(7, 3, 0)] = r;

  const Vec& amp = phi.amplitudes();
  std::size_t nonzero = 0;
  for (std::size_t i = 0; i < amp.size(); ++i) {
    const auto it = table.find(i);
    if (it != table.end()) {
      ++nonzero;
      CHECK(std::abs(amp[i] - it->second) < 1e-15);
    } else {
      CHECK(std::abs(amp[i]) < 1e-15);
    }
  }
  CHECK(nonzero == 14);
  CHECK(norm_sq(amp) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("helper-basis components carry the right weights") {
  const Vec u0 = make_u(0);
  const Vec u1 = make_u(1);
  REQUIRE(u0.size() == 32);
  REQUIRE(u1.size() == 32);
  CHECK(norm_sq(u0) == doctest::Approx(0.625).epsilon(1e-14));
  CHECK(norm_sq(u1) == doctest::Approx(0.375).epsilon(1e-14));
  const cplx ov = inner(u0, u1);
  CHECK(ov.real() == doctest::Approx(0.125).epsilon(1e-12));
  CHECK(std::abs(ov.imag()) < 1e-15);

  // The components are the C-basis slices of the full state. Both sides are
  // entered independently, so they agree to rounding rather than bitwise.
  const PureState phi = make_phi();
  const Vec& amp = phi.amplitudes();
  for (std::size_t j = 0; j < 32; ++j) {
    CHECK(std::abs(amp[2 * j] - u0[j]) < 1e-15);
    CHECK(std::abs(amp[2 * j + 1] - u1[j]) < 1e-15);
  }

  // Their outer products sum to the AB marginal.
  const Mat rho_ab = reduce_to(phi, {"A", "B"}).matrix();
  Mat sum = outer(u0);
  sum += outer(u1);
  CHECK(max_abs_diff(rho_ab, sum) < 1e-12);

  CHECK_THROWS(make_u(2));
}

TEST_CASE("Bell states are the standard four") {
  const double s = 1.0 / std::sqrt(2.0);
  const Vec expected[4] = {
      {cplx{s, 0.0}, {}, {}, cplx{s, 0.0}},
      {cplx{s, 0.0}, {}, {}, cplx{-s, 0.0}},
      {{}, cplx{s, 0.0}, cplx{s, 0.0}, {}},
      {{}, cplx{s, 0.0}, cplx{-s, 0.0}, {}},
  };
  for (int k = 0; k < 4; ++k) {
    const PureState b = make_bell(k);
    REQUIRE(b.dim() == 4);
    for (std::size_t i = 0; i < 4; ++i)
      CHECK(std::abs(b.amplitudes()[i] - expected[k][i]) < 1e-15);
    CHECK(entropy_of_entanglement(b, parse_cut("A:B")) ==
          doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK_THROWS(make_bell(4));
}

TEST_CASE("embedded maximally entangled states") {
  const PureState me = make_max_entangled(5, 3);
  CHECK(me.dim() == 15);
  CHECK(entropy_of_entanglement(me, parse_cut("A:B")) ==
        doctest::Approx(std::log2(3.0)).epsilon(1e-12));
  CHECK(is_max_entangled(make_max_entangled(4, 4), parse_cut("A:B")));
  CHECK_THROWS(make_max_entangled(2, 3));  // helper side too large
}

TEST_CASE("mixed catalog state is an equal mixture of flagged Bell-type states") {
  const DensityOperator rho = make_mixed_example();
  REQUIRE(rho.dim() == 16);
  CHECK(rho.parties()[0].dim == 4);
  CHECK(rho.parties()[1].dim == 2);
  CHECK(rho.parties()[2].dim == 2);
  CHECK(purity(rho.matrix()) == doctest::Approx(0.25).epsilon(1e-12));

  // The four AB components are mutually orthogonal and maximally entangled.
  for (int i = 1; i <= 4; ++i) {
    const Vec ab = make_mixed_ab(i);
    CHECK(norm_sq(ab) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(norm_sq(make_mixed_flag(i)) == doctest::Approx(1.0).epsilon(1e-12));
    const auto sd = schmidt(ab, 4, 2);
    CHECK(sd.probabilities[0] == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(sd.probabilities[1] == doctest::Approx(0.5).epsilon(1e-9));
    for (int j = 1; j < i; ++j)
      CHECK(std::abs(inner(make_mixed_ab(j), ab)) < 1e-12);
  }

  // Rebuild the mixture: sum_i |ab_i x flag_i><...| / 4.
  Mat rebuilt(16, 16);
  for (int i = 1; i <= 4; ++i) {
    Mat term = outer(tensor(make_mixed_ab(i), make_mixed_flag(i)));
    term *= cplx{0.25, 0.0};
    rebuilt += term;
  }
  CHECK(max_abs_diff(rebuilt, rho.matrix()) < 1e-12);

  CHECK_THROWS(make_mixed_ab(0));
  CHECK_THROWS(make_mixed_flag(5));
}

TEST_CASE("reduce_to keeps the requested parties in the requested order") {
  const PureState phi = make_phi();
  const DensityOperator ab = reduce_to(phi, {"A", "B"});
  CHECK(ab.dim() == 32);
  CHECK(ab.parties()[0].label == "A");

  const DensityOperator ba = reduce_to(phi, {"B", "A"});
  CHECK(ba.dim() == 32);
  CHECK(ba.parties()[0].label == "B");
  const Mat back = permute_subsystems(ba.matrix(), {4, 8}, {1, 0});
  CHECK(max_abs_diff(back, ab.matrix()) < 1e-12);

  // B marginal of the catalog state is maximally mixed.
  const Mat rho_b = reduce_to(phi, {"B"}).matrix();
  Mat quarter = Mat::identity(4);
  quarter *= cplx{0.25, 0.0};
  CHECK(max_abs_diff(rho_b, quarter) < 1e-12);

  CHECK_THROWS(reduce_to(phi, {"A", "B", "C"}));  // not a proper subset
  CHECK_THROWS(reduce_to(phi, {}));
}

TEST_CASE("purification round-trips the operator it extends") {
  const DensityOperator rho = make_mixed_example();
  const PureState psi = purify(rho);
  REQUIRE(psi.parties().size() == 4);
  CHECK(psi.parties()[3].label == "D");  // first unused letter
  CHECK(psi.parties()[3].dim == 4);      // rank of the mixture

  const Mat back = reduce_to(psi, {"A", "B", "C"}).matrix();
  CHECK(max_abs_diff(back, rho.matrix()) < 1e-9);

  // A pure input purifies with a one-dimensional ancilla.
  const PureState bell = make_bell(0);
  Mat bm = outer(bell.amplitudes());
  const PureState ext = purify(DensityOperator(bell.parties(), bm), "Z");
  CHECK(ext.parties().back().label == "Z");
  CHECK(ext.parties().back().dim == 1);
}
