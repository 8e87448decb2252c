#pragma once
// Assisted-entanglement computation: a seeded concave-roof maximizer over
// ensemble decompositions, an exhaustive scan of the two-vector span of the
// 8x4x2 catalog state for maximally entangled members, and the two-copy
// combination analysis showing the span stays clear of maximal entanglement
// when a second copy is attached.

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "entkit/ensembles.hpp"
#include "entkit/measures.hpp"
#include "entkit/qmath.hpp"
#include "entkit/states.hpp"

namespace entkit {

struct EoaConfig {
  std::size_t restarts = 64;
  std::size_t max_ensemble_size = 0;  // 0 picks rank^2
  std::uint64_t seed = 1;
  std::size_t refine_iters = 200;  // compass-search sweep budget per restart
  std::size_t threads = 1;
};

struct EoaResult {
  double value = 0.0;  // best average found; a certified lower bound
  Ensemble certificate;
  std::size_t restarts_used = 0;
  double upper_bound = 0.0;
};

// min(S(rho_A), S(rho_B)) over the bipartite marginals.
double eoa_upper_bound(const Mat& rho_ab, std::size_t dim_a, std::size_t dim_b);
double eoa_upper_bound(const PureState& psi, const std::string& helper_label);

// Maximizes the average root measure over ensemble decompositions of rho by
// compass search on isometries applied to the family `us`. Restart 0 starts
// from the identity-padded isometry (so the supplied family itself is always
// a floor); later restarts are seeded random isometries on independent
// streams, making results deterministic for fixed (seed, restarts) and
// independent of the thread count, and nested in the restart count.
EoaResult eoa_optimize(const Mat& rho_ab, std::size_t dim_a, std::size_t dim_b,
                       const std::vector<Vec>& us, const RootMeasure& measure,
                       const EoaConfig& cfg = {});
// Tripartite convenience form: the named helper party is traced out and the
// remaining two parties, in state order, form the bipartite cut.
EoaResult eoa_optimize(const PureState& psi, const std::string& helper_label,
                       const RootMeasure& measure, const EoaConfig& cfg = {});

// Normalized squared Schmidt coefficients of x*u0 + y*u1 across the 8:4 cut,
// descending, computed by building the vector and decomposing it. The global
// phase is canonicalized (first nonzero of x, y made real positive) before
// building, so phase-rotated inputs agree. Throws on x = y = 0.
std::array<double, 4> span_deficit_oracle(cplx x, cplx y);

// max - min of span_deficit_oracle(x, y).
double span_deficit(cplx x, cplx y);

// Closed-form candidate for the unnormalized spectrum that carries a 1/2 on
// the |x+y|^2 contribution of entries 1 and 3. It disagrees with the direct
// computation above, which is authoritative; this variant is kept verbatim
// so comparison reports can show both.
std::array<double, 4> span_probs_closed_form(cplx x, cplx y);

struct SpanScanConfig {
  std::size_t grid_points = 512;  // per axis; >= 64 required
  std::size_t refine_iters = 200;
};

struct SpanScanResult {
  double min_deficit = 0.0;
  cplx x, y;  // argmin on the unit sphere, global phase fixed
  std::size_t samples = 0;
};

// Minimizes span_deficit over the projective (x, y) sphere parameterized as
// x = cos(alpha), y = sin(alpha) e^{i beta} on a grid over
// [0, pi/2] x [0, 2pi), then compass-refines (alpha, beta) from the best
// cell. min_deficit is the oracle value at the returned argmin.
SpanScanResult span_scan(const SpanScanConfig& cfg = {});

// Overlap tables of the 8-dim column family behind make_u: squared norms of
// the two families and their cross inner products, indexed by the 4-dim
// basis label they attach to.
struct UColumnTables {
  std::array<double, 4> n0, n1;
  std::array<cplx, 4> h;
};
const UColumnTables& u_column_tables();

// A linear combination of the two-copy products u_{i1} (x) u_{i2} with unit
// coefficient vector coeffs[2*i1 + i2], plus the derived overlap tables of
// its single-copy blocks: mu[b][s] and eta[s] describe the 8-dim components
// sitting over first-copy basis label s when the second copy carries u_b.
struct NCopyCombo {
  std::size_t n = 2;
  std::array<cplx, 4> coeffs{};
  std::array<std::array<double, 4>, 2> mu{};
  std::array<cplx, 4> eta{};
};

// Validates n == 2 and a unit coefficient vector, and fills the tables.
NCopyCombo make_ncopy_combo(std::size_t n, const std::vector<cplx>& coeffs);

// One row of squared Schmidt coefficients from its mu/eta values.
std::array<double, 4> lambda_row(double mu0, double mu1, cplx eta);

// The full 4 x 4 table lambda[s][k] for the assembled two-copy state; its
// entries sum to the squared norm of that state.
std::array<std::array<double, 4>, 4> ncopy_lambda_analytic(
    const NCopyCombo& combo);

// The 1024-dim two-copy vector laid out as (A1 A2 B1 B2), so the Schmidt cut
// is the leading 64 against the trailing 16.
Vec assemble_two_copy(const std::array<cplx, 4>& coeffs);

// max - min of the 16 normalized squared Schmidt coefficients of the
// assembled state.
double two_copy_deficit(const std::array<cplx, 4>& coeffs);

struct NCopyScanResult {
  double min_deficit = 0.0;
  std::array<cplx, 4> coeffs{};  // argmin
  std::size_t samples = 0;
};

// Minimum two-copy deficit over seeded random unit coefficient vectors.
// Only n = 2 is supported.
NCopyScanResult ncopy_deficit_scan(std::size_t n, std::size_t samples,
                                   std::uint64_t seed);

}  // namespace entkit
