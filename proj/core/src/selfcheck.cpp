#include "entkit/selfcheck.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <limits>

#include "entkit/assistance.hpp"
#include "entkit/ensembles.hpp"
#include "entkit/locc.hpp"
#include "entkit/measures.hpp"
#include "entkit/qmath.hpp"
#include "entkit/rng.hpp"
#include "entkit/states.hpp"

namespace entkit {

namespace {

constexpr double kFailure = std::numeric_limits<double>::infinity();

PureState random_bipartite(Prng& rng, std::size_t da, std::size_t db) {
  return PureState({{"A", da}, {"B", db}},
                   random_state_vector(rng, da * db));
}

PureState random_tripartite(Prng& rng, std::size_t da, std::size_t db,
                            std::size_t dc) {
  return PureState({{"A", da}, {"B", db}, {"C", dc}},
                   random_state_vector(rng, da * db * dc));
}

// Splitting the rows of a unitary along a projector partition always yields
// a trace-preserving Kraus pair.
Instrument partition_instrument(Prng& rng, const std::string& party,
                                std::size_t d) {
  const Mat u = random_unitary(rng, d);
  const std::size_t split = 1 + rng.index(d - 1);
  Mat k0(d, d), k1(d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      (i < split ? k0 : k1)(i, j) = u(i, j);
  return Instrument{party, {{"lo", std::move(k0)}, {"hi", std::move(k1)}}};
}

double trace_preservation_worst(Prng& rng, std::size_t) {
  const std::size_t da = 2 + rng.index(3), db = 2 + rng.index(3);
  const Mat rho = random_density_matrix(rng, da * db);
  const std::vector<std::size_t> dims{da, db};
  double worst = 0.0;
  for (std::size_t side = 0; side < 2; ++side) {
    const Mat red = partial_trace(rho, dims, {side});
    worst = std::max(worst, std::abs(trace(red).real() - 1.0));
  }
  return worst;
}

double schmidt_reconstruction_worst(Prng& rng, std::size_t i) {
  static const std::pair<std::size_t, std::size_t> shapes[] = {
      {2, 2}, {3, 2}, {4, 4}, {5, 7}, {8, 4}, {16, 8}, {64, 16}};
  const auto [da, db] = shapes[i % std::size(shapes)];
  const Vec psi = random_state_vector(rng, da * db);
  const Vec back = schmidt_reconstruct(schmidt(psi, da, db), da, db);
  double worst = 0.0;
  for (std::size_t k = 0; k < psi.size(); ++k)
    worst = std::max(worst, std::abs(psi[k] - back[k]));
  return worst;
}

double entropy_additivity_worst(Prng& rng, std::size_t) {
  const std::size_t da1 = 2 + rng.index(2), db1 = 2 + rng.index(2);
  const std::size_t da2 = 2 + rng.index(2), db2 = 2 + rng.index(2);
  const Vec psi1 = random_state_vector(rng, da1 * db1);
  const Vec psi2 = random_state_vector(rng, da2 * db2);
  const double e1 = entropy_bits(schmidt(psi1, da1, db1).probabilities);
  const double e2 = entropy_bits(schmidt(psi2, da2, db2).probabilities);

  const Vec joint = permute_subsystems(tensor(psi1, psi2),
                                       {da1, db1, da2, db2}, {0, 2, 1, 3});
  const double e = entropy_bits(
      schmidt(joint, da1 * da2, db1 * db2).probabilities);
  return std::abs(e - (e1 + e2));
}

double unitary_invariance_worst(Prng& rng, std::size_t) {
  const std::size_t da = 2 + rng.index(3), db = 2 + rng.index(3);
  const Vec psi = random_state_vector(rng, da * db);
  const std::vector<std::size_t> dims{da, db};
  Vec rotated = apply_local(random_unitary(rng, da), psi, dims, 0);
  rotated = apply_local(random_unitary(rng, db), rotated, dims, 1);

  const auto p = schmidt(psi, da, db).probabilities;
  const auto q = schmidt(rotated, da, db).probabilities;
  double worst = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k)
    worst = std::max(worst, std::abs(p[k] - q[k]));
  worst = std::max(worst, std::abs(entropy_bits(p) - entropy_bits(q)));
  return worst;
}

double pure_marginal_worst(Prng& rng, std::size_t) {
  const std::size_t da = 2 + rng.index(4), db = 2 + rng.index(4);
  const Vec psi = random_state_vector(rng, da * db);
  const std::vector<std::size_t> dims{da, db};
  const double sa = vn_entropy(reduced_density(psi, dims, {0}));
  const double sb = vn_entropy(reduced_density(psi, dims, {1}));
  return std::abs(sa - sb);
}

double eig_reconstruction_worst(Prng& rng, std::size_t) {
  const std::size_t n = 16;
  const Mat g = random_gaussian(rng, n, n);
  Mat h = g + adjoint(g);
  h *= cplx{0.5, 0.0};
  const EigResult eig = hermitian_eig(h);

  Mat rebuilt(n, n);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        rebuilt(i, j) +=
            eig.values[k] * eig.vectors(i, k) * std::conj(eig.vectors(j, k));
  const Mat gram = adjoint(eig.vectors) * eig.vectors;
  return std::max(max_abs_diff(rebuilt, h),
                  max_abs_diff(gram, Mat::identity(n)));
}

double tensor_oracle_worst(Prng& rng, std::size_t) {
  const std::size_t na = 3 + rng.index(4), nb = 3 + rng.index(4);
  Vec a(na), b(nb);
  for (auto& x : a) x = rng.complex_normal();
  for (auto& x : b) x = rng.complex_normal();
  const Vec t = tensor(a, b);
  double worst = 0.0;
  for (std::size_t i = 0; i < na; ++i)
    for (std::size_t j = 0; j < nb; ++j)
      worst = std::max(worst, std::abs(t[i * nb + j] - a[i] * b[j]));
  return worst;
}

double isometry_rebuild_worst(Prng& rng, std::size_t) {
  const std::size_t dim = 4 + rng.index(3);
  const Mat rho = random_density_matrix(rng, dim);
  const std::vector<Vec> us = canonical_vectors(rho);
  const std::size_t r = us.size();
  const std::size_t m = r + rng.index(3);
  const Ensemble ens = ensemble_from_isometry(us, random_isometry(rng, m, r));

  Mat rebuilt(dim, dim);
  for (const auto& [w, state] : ens.entries()) {
    Mat proj = outer(state);
    proj *= cplx{w, 0.0};
    rebuilt += proj;
  }
  return max_abs_diff(rebuilt, rho);
}

double helper_measurement_worst(Prng& rng, std::size_t i) {
  static const PureState phi = make_phi();
  const bool use_phi = (i % 2) == 0;
  const PureState psi =
      use_phi ? phi : random_tripartite(rng, 2, 2, 2);
  const std::size_t dc = psi.parties().back().dim;
  const Povm povm = refine_povm(random_povm(rng, dc, 2));
  const Ensemble ens = ensemble_from_charlie_povm(psi, "C", povm);

  std::vector<std::string> keep;
  for (const auto& p : psi.parties())
    if (p.label != "C") keep.push_back(p.label);
  const Mat expected = reduce_to(psi, keep).matrix();

  Mat rebuilt(expected.rows(), expected.cols());
  for (const auto& [w, state] : ens.entries()) {
    Mat proj = outer(state);
    proj *= cplx{w, 0.0};
    rebuilt += proj;
  }
  return max_abs_diff(rebuilt, expected);
}

double span_membership_worst(Prng& rng, std::size_t) {
  static const PureState phi = make_phi();
  static const Mat basis = [] {
    Mat cols(32, 2);
    const Vec u0 = make_u(0), u1 = make_u(1);
    for (std::size_t i = 0; i < 32; ++i) {
      cols(i, 0) = u0[i];
      cols(i, 1) = u1[i];
    }
    return orthonormal_columns(cols);
  }();

  const Povm povm = refine_povm(random_povm(rng, 2, 2));
  const Ensemble ens = ensemble_from_charlie_povm(phi, "C", povm);
  double worst = 0.0;
  for (const auto& [w, state] : ens.entries()) {
    // Residual after projecting onto the two-vector span.
    Vec proj(32, cplx{0.0, 0.0});
    for (std::size_t c = 0; c < 2; ++c) {
      Vec col(32);
      for (std::size_t i = 0; i < 32; ++i) col[i] = basis(i, c);
      const cplx a = inner(col, state);
      for (std::size_t i = 0; i < 32; ++i) proj[i] += a * col[i];
    }
    double residual = 0.0;
    for (std::size_t i = 0; i < 32; ++i)
      residual += std::norm(state[i] - proj[i]);
    worst = std::max(worst, std::sqrt(residual));
  }
  return worst;
}

double restart_monotonicity_worst(Prng& rng, std::size_t) {
  const PureState psi = random_tripartite(rng, 2, 2, 2);
  const RootMeasure& measure = root_measure("entropy");
  EoaConfig cfg;
  cfg.refine_iters = 40;
  cfg.seed = rng.index(1u << 20);
  cfg.restarts = 2;
  const double low = eoa_optimize(psi, "C", measure, cfg).value;
  cfg.restarts = 4;
  const double high = eoa_optimize(psi, "C", measure, cfg).value;
  return std::max(0.0, low - high);
}

double refinement_weights_worst(Prng& rng, std::size_t) {
  const std::size_t dim = 2 + rng.index(3);
  const Povm povm = random_povm(rng, dim, 2 + rng.index(2));
  const Povm fine = refine_povm(povm);
  validate_povm(fine, dim);

  const Mat rho = random_density_matrix(rng, dim);
  double worst = 0.0;
  for (const auto& [label, element] : povm) {
    double coarse = trace(element * rho).real();
    double split = 0.0;
    for (const auto& [fine_label, piece] : fine)
      if (fine_label.rfind(label + ".", 0) == 0)
        split += trace(piece * rho).real();
    worst = std::max(worst, std::abs(coarse - split));
  }
  return worst;
}

double concavity_bound_worst(Prng& rng, std::size_t) {
  const std::size_t da = 2 + rng.index(2), db = 2 + rng.index(2);
  const std::size_t dc = 2 + rng.index(2);
  const PureState psi = random_tripartite(rng, da, db, dc);
  const Povm povm = refine_povm(random_povm(rng, dc, 2));
  const Ensemble ens = ensemble_from_charlie_povm(psi, "C", povm);
  const double avg = ens.average(root_measure("entropy"), da, db);
  const double bound =
      eoa_upper_bound(reduce_to(psi, {"A", "B"}).matrix(), da, db);
  return std::max(0.0, avg - bound);
}

double span_phase_worst(Prng& rng, std::size_t) {
  const double a = rng.uniform() * 3.14159 / 2.0;
  const cplx x{std::cos(a), 0.0};
  const cplx y = std::sin(a) * std::polar(1.0, rng.uniform() * 6.28);
  const cplx phase = std::polar(1.0, rng.uniform() * 6.28);
  const auto base = span_deficit_oracle(x, y);
  const auto rotated = span_deficit_oracle(phase * x, phase * y);
  double worst = 0.0;
  for (std::size_t k = 0; k < 4; ++k)
    worst = std::max(worst, std::abs(base[k] - rotated[k]));
  return worst;
}

double protocol_probability_worst(Prng& rng, std::size_t i) {
  Protocol proto;
  proto.root.instrument = partition_instrument(rng, "A", 2);
  for (const char* label : {"lo", "hi"}) {
    ProtocolNode child;
    child.instrument = partition_instrument(rng, "B", 2);
    child.children.emplace_back("lo", ProtocolNode{});
    child.children.emplace_back("hi", ProtocolNode{});
    proto.root.children.emplace_back(label, std::move(child));
  }

  std::vector<BranchOutcome> leaves;
  if ((i % 2) == 0) {
    leaves = run_protocol(random_tripartite(rng, 2, 2, 2), proto);
  } else {
    const Mat rho = random_density_matrix(rng, 4);
    leaves = run_protocol(DensityOperator({{"A", 2}, {"B", 2}}, rho), proto);
  }
  double total = 0.0;
  for (const auto& leaf : leaves) total += leaf.probability;
  return std::abs(total - 1.0);
}

// One optimizer run, then many random measurement-induced ensembles: none
// may beat the optimized value by more than the pass slack.
double povm_below_optimum_worst(Prng& rng, std::size_t) {
  static const PureState phi = make_phi();
  const RootMeasure& entropy = root_measure("entropy");
  EoaConfig cfg;
  cfg.restarts = 8;
  cfg.refine_iters = 100;
  cfg.seed = rng.index(1u << 20);
  const double optimum = eoa_optimize(phi, "C", entropy, cfg).value;

  double worst = 0.0;
  for (int k = 0; k < 50; ++k) {
    const Povm povm = refine_povm(random_povm(rng, 2, 2));
    const double avg =
        ensemble_from_charlie_povm(phi, "C", povm).average(entropy, 8, 4);
    worst = std::max(worst, avg - optimum);
  }
  return std::max(0.0, worst);
}

double entropy_bound_worst(Prng& rng, std::size_t) {
  const std::size_t da = 2 + rng.index(5), db = 2 + rng.index(5);
  const PureState psi = random_bipartite(rng, da, db);
  const double e = entropy_of_entanglement(psi, parse_cut("A:B"));
  const double bound = std::log2(static_cast<double>(std::min(da, db)));
  return std::max(0.0, e - bound);
}

struct Family {
  const char* name;
  double tolerance;
  std::size_t divisor;  // instances / divisor, at least 2
  double (*run)(Prng&, std::size_t);
};

}  // namespace

std::vector<PropertyReport> run_property_suites(std::uint64_t seed,
                                                std::size_t instances) {
  static const Family families[] = {
      {"partial_trace_preserves_trace", 1e-10, 1, trace_preservation_worst},
      {"schmidt_reconstructs_state", 1e-9, 1, schmidt_reconstruction_worst},
      {"entropy_adds_over_products", 1e-8, 1, entropy_additivity_worst},
      {"schmidt_unitary_invariant", 1e-9, 1, unitary_invariance_worst},
      {"pure_marginals_share_entropy", 1e-9, 1, pure_marginal_worst},
      {"eig_reconstructs_matrix", 1e-9, 4, eig_reconstruction_worst},
      {"tensor_matches_direct_product", 0.0, 1, tensor_oracle_worst},
      {"isometry_rows_rebuild_target", 1e-8, 1, isometry_rebuild_worst},
      {"helper_measurement_rebuilds_marginal", 1e-8, 1,
       helper_measurement_worst},
      {"collapsed_states_stay_in_span", 1e-9, 1, span_membership_worst},
      {"more_restarts_never_hurt", 0.0, 50, restart_monotonicity_worst},
      {"refinement_splits_weights", 1e-9, 1, refinement_weights_worst},
      {"ensemble_average_below_marginal_entropy", 1e-9, 1,
       concavity_bound_worst},
      {"span_deficit_phase_invariant", 1e-12, 1, span_phase_worst},
      {"protocol_probabilities_sum_to_one", 1e-9, 1,
       protocol_probability_worst},
      {"measurement_ensembles_below_optimum", 1e-3, 50,
       povm_below_optimum_worst},
      {"entropy_respects_dimension_bound", 1e-12, 1, entropy_bound_worst},
  };

  std::vector<PropertyReport> reports;
  for (std::size_t f = 0; f < std::size(families); ++f) {
    const Family& fam = families[f];
    Prng rng = Prng::streamed(seed, f);
    PropertyReport report;
    report.name = fam.name;
    report.instances = std::max<std::size_t>(instances / fam.divisor, 2);
    report.tolerance = fam.tolerance;
    try {
      for (std::size_t i = 0; i < report.instances; ++i)
        report.worst = std::max(report.worst, fam.run(rng, i));
    } catch (const std::exception&) {
      report.worst = kFailure;
    }
    report.pass = report.worst <= report.tolerance;
    reports.push_back(std::move(report));
  }
  return reports;
}

}  // namespace entkit
