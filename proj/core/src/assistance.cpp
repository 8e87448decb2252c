#include "entkit/assistance.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <thread>

#include "entkit/rng.hpp"

namespace entkit {

double eoa_upper_bound(const Mat& rho_ab, std::size_t dim_a,
                       std::size_t dim_b) {
  if (dim_a * dim_b != rho_ab.rows() || rho_ab.rows() != rho_ab.cols())
    throw std::invalid_argument("eoa_upper_bound: dimension mismatch");
  const std::vector<std::size_t> dims{dim_a, dim_b};
  const double sa = vn_entropy(partial_trace(rho_ab, dims, {0}));
  const double sb = vn_entropy(partial_trace(rho_ab, dims, {1}));
  return std::min(sa, sb);
}

double eoa_upper_bound(const PureState& psi, const std::string& helper_label) {
  if (psi.parties().size() != 3)
    throw std::invalid_argument("eoa_upper_bound: state must have 3 parties");
  std::vector<std::string> others;
  for (const auto& p : psi.parties())
    if (p.label != helper_label) others.push_back(p.label);
  if (others.size() != 2)
    throw std::invalid_argument("eoa_upper_bound: unknown helper label");
  const DensityOperator rho = reduce_to(psi, others);
  return eoa_upper_bound(rho.matrix(), rho.parties()[0].dim,
                         rho.parties()[1].dim);
}

namespace {

// Unitary single-coordinate moves on the rows of an isometry: one phase per
// row, then a real and an imaginary plane rotation per row pair. Together
// these generate the full unitary freedom on the left.
std::size_t coordinate_count(std::size_t m) { return m + m * (m - 1); }

void apply_coordinate(Mat& v, std::size_t coord, double delta) {
  const std::size_t m = v.rows();
  const std::size_t r = v.cols();
  if (coord < m) {
    const cplx phase = std::polar(1.0, delta);
    for (std::size_t j = 0; j < r; ++j) v(coord, j) *= phase;
    return;
  }
  std::size_t idx = coord - m;
  const bool imag_variant = (idx % 2) != 0;
  std::size_t pair = idx / 2;
  // Row pair (p, q), p < q, in lexicographic order.
  std::size_t p = 0;
  while (pair >= m - 1 - p) {
    pair -= m - 1 - p;
    ++p;
  }
  const std::size_t q = p + 1 + pair;

  const double c = std::cos(delta);
  const double s = std::sin(delta);
  const cplx off = imag_variant ? cplx{0.0, -s} : cplx{-s, 0.0};
  const cplx off2 = imag_variant ? cplx{0.0, -s} : cplx{s, 0.0};
  for (std::size_t j = 0; j < r; ++j) {
    const cplx vp = v(p, j);
    const cplx vq = v(q, j);
    v(p, j) = c * vp + off * vq;
    v(q, j) = off2 * vp + c * vq;
  }
}

Mat identity_padded(std::size_t m, std::size_t r) {
  Mat v(m, r);
  for (std::size_t j = 0; j < r; ++j) v(j, j) = cplx{1.0, 0.0};
  return v;
}

struct RoofObjective {
  const std::vector<Vec>* us;
  const RootMeasure* measure;
  std::size_t dim_a, dim_b;

  double operator()(const Mat& v) const {
    return ensemble_from_isometry(*us, v).average(*measure, dim_a, dim_b);
  }
};

// Greedy compass search over the coordinates above; the step halves from 0.1
// to 1e-6 whenever a sweep yields no improvement. Returns the best value and
// leaves v at the corresponding point.
double compass_refine(Mat& v, const RoofObjective& f, std::size_t max_sweeps) {
  double best = f(v);
  double step = 0.1;
  const std::size_t ncoords = coordinate_count(v.rows());
  for (std::size_t sweep = 0; sweep < max_sweeps && step >= 1e-6; ++sweep) {
    bool improved = false;
    for (std::size_t coord = 0; coord < ncoords; ++coord) {
      for (const double sign : {1.0, -1.0}) {
        Mat candidate = v;
        apply_coordinate(candidate, coord, sign * step);
        const double val = f(candidate);
        if (val > best) {
          v = std::move(candidate);
          best = val;
          improved = true;
        }
      }
    }
    if (!improved) {
      step *= 0.5;
      // Rotations drift off the isometry manifold at rounding scale; snap
      // back so long refinements stay valid.
      v = orthonormal_columns(std::move(v));
      best = f(v);
    }
  }
  return best;
}

}  // namespace

EoaResult eoa_optimize(const Mat& rho_ab, std::size_t dim_a, std::size_t dim_b,
                       const std::vector<Vec>& us, const RootMeasure& measure,
                       const EoaConfig& cfg) {
  if (cfg.restarts < 1)
    throw std::invalid_argument("eoa_optimize: restarts must be >= 1");
  if (cfg.threads < 1)
    throw std::invalid_argument("eoa_optimize: threads must be >= 1");
  const std::vector<Vec> family = canonical_vectors(rho_ab, us);
  const std::size_t r = family.size();
  const std::size_t m =
      cfg.max_ensemble_size == 0 ? r * r : cfg.max_ensemble_size;
  if (m < r)
    throw std::invalid_argument(
        "eoa_optimize: max_ensemble_size below the operator rank");
  if (dim_a * dim_b != rho_ab.rows())
    throw std::invalid_argument("eoa_optimize: cut dimension mismatch");

  const RoofObjective objective{&family, &measure, dim_a, dim_b};

  struct Outcome {
    double value = 0.0;
    Mat v;
  };
  std::vector<Outcome> outcomes(cfg.restarts);
  auto run_range = [&](std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) {
      Mat v;
      if (k == 0) {
        v = identity_padded(m, r);
      } else {
        Prng rng = Prng::streamed(cfg.seed, k);
        v = random_isometry(rng, m, r);
      }
      const double value = compass_refine(v, objective, cfg.refine_iters);
      outcomes[k] = Outcome{value, std::move(v)};
    }
  };

  const std::size_t workers = std::min(cfg.threads, cfg.restarts);
  if (workers <= 1) {
    run_range(0, cfg.restarts);
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (cfg.restarts + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
      const std::size_t begin = w * chunk;
      const std::size_t end = std::min(begin + chunk, cfg.restarts);
      if (begin >= end) break;
      pool.emplace_back(run_range, begin, end);
    }
    for (auto& t : pool) t.join();
  }

  // Deterministic merge: highest value, ties to the lowest restart index.
  std::size_t best = 0;
  for (std::size_t k = 1; k < cfg.restarts; ++k)
    if (outcomes[k].value > outcomes[best].value) best = k;

  Ensemble certificate = ensemble_from_isometry(family, outcomes[best].v);
  const double value = certificate.average(measure, dim_a, dim_b);
  return EoaResult{value, std::move(certificate), cfg.restarts,
                   eoa_upper_bound(rho_ab, dim_a, dim_b)};
}

EoaResult eoa_optimize(const PureState& psi, const std::string& helper_label,
                       const RootMeasure& measure, const EoaConfig& cfg) {
  if (psi.parties().size() != 3)
    throw std::invalid_argument("eoa_optimize: state must have 3 parties");
  std::vector<std::string> others;
  for (const auto& p : psi.parties())
    if (p.label != helper_label) others.push_back(p.label);
  if (others.size() != 2)
    throw std::invalid_argument("eoa_optimize: unknown helper label");
  const DensityOperator rho = reduce_to(psi, others);
  return eoa_optimize(rho.matrix(), rho.parties()[0].dim, rho.parties()[1].dim,
                      canonical_vectors(rho.matrix()), measure, cfg);
}

namespace {

// Fix the global phase so the first nonzero coefficient is real positive.
std::pair<cplx, cplx> canonicalize_phase(cplx x, cplx y) {
  const cplx lead = std::abs(x) > 0.0 ? x : y;
  const double mag = std::abs(lead);
  if (mag == 0.0)
    throw std::invalid_argument("span coefficients must not both be zero");
  const cplx phase = std::conj(lead) / mag;
  return {x * phase, y * phase};
}

}  // namespace

std::array<double, 4> span_deficit_oracle(cplx x, cplx y) {
  const auto [cx, cy] = canonicalize_phase(x, y);
  static const Vec u0 = make_u(0);
  static const Vec u1 = make_u(1);
  Vec v(32);
  for (std::size_t i = 0; i < 32; ++i) v[i] = cx * u0[i] + cy * u1[i];

  const auto probs = schmidt(v, 8, 4).probabilities;
  double total = 0.0;
  for (double p : probs) total += p;
  std::array<double, 4> out{};
  for (std::size_t i = 0; i < 4; ++i) out[i] = probs[i] / total;
  return out;
}

double span_deficit(cplx x, cplx y) {
  const auto probs = span_deficit_oracle(x, y);
  return probs.front() - probs.back();  // descending order
}

std::array<double, 4> span_probs_closed_form(cplx x, cplx y) {
  const double q = 1.0 / 16.0;
  return {
      q * (std::norm(x + cplx{0.0, 1.0} * y) + 0.5 * std::norm(x + y)),
      q * (std::norm(x + y) + 2.0 * std::norm(x)),
      q * (std::norm(x - cplx{0.0, 1.0} * y) + 0.5 * std::norm(x + y)),
      q * (std::norm(x - y) + 2.0 * std::norm(x)),
  };
}

namespace {

double sphere_deficit(double alpha, double beta) {
  const cplx x{std::cos(alpha), 0.0};
  const cplx y = std::sin(alpha) * std::polar(1.0, beta);
  if (std::abs(x) == 0.0 && std::abs(y) == 0.0) return 1.0;
  return span_deficit(x, y);
}

}  // namespace

SpanScanResult span_scan(const SpanScanConfig& cfg) {
  if (cfg.grid_points < 64)
    throw std::invalid_argument("span_scan: grid_points must be >= 64");
  const std::size_t g = cfg.grid_points;
  const double half_pi = std::numbers::pi / 2.0;
  const double two_pi = 2.0 * std::numbers::pi;

  double best_alpha = 0.0, best_beta = 0.0;
  double best = sphere_deficit(0.0, 0.0);
  for (std::size_t i = 0; i < g; ++i) {
    const double alpha = half_pi * static_cast<double>(i) /
                         static_cast<double>(g - 1);
    for (std::size_t j = 0; j < g; ++j) {
      const double beta = two_pi * static_cast<double>(j) /
                          static_cast<double>(g);
      const double d = sphere_deficit(alpha, beta);
      if (d < best) {
        best = d;
        best_alpha = alpha;
        best_beta = beta;
      }
    }
  }

  // Compass refinement from the best grid cell, step starting at the cell
  // size and halving on stuck sweeps.
  double step = two_pi / static_cast<double>(g);
  for (std::size_t sweep = 0; sweep < cfg.refine_iters && step >= 1e-10;
       ++sweep) {
    bool improved = false;
    const double da[] = {step, -step, 0.0, 0.0};
    const double db[] = {0.0, 0.0, step, -step};
    for (int k = 0; k < 4; ++k) {
      const double d = sphere_deficit(best_alpha + da[k], best_beta + db[k]);
      if (d < best) {
        best = d;
        best_alpha += da[k];
        best_beta += db[k];
        improved = true;
      }
    }
    if (!improved) step *= 0.5;
  }

  SpanScanResult out;
  out.x = cplx{std::cos(best_alpha), 0.0};
  out.y = std::sin(best_alpha) * std::polar(1.0, best_beta);
  out.min_deficit = span_deficit(out.x, out.y);
  out.samples = g * g;
  return out;
}

const UColumnTables& u_column_tables() {
  static const UColumnTables tables = [] {
    const Vec u0 = make_u(0);
    const Vec u1 = make_u(1);
    UColumnTables t;
    for (std::size_t k = 0; k < 4; ++k) {
      Vec c0(8), c1(8);
      for (std::size_t a = 0; a < 8; ++a) {
        c0[a] = u0[a * 4 + k];
        c1[a] = u1[a * 4 + k];
      }
      t.n0[k] = norm_sq(c0);
      t.n1[k] = norm_sq(c1);
      t.h[k] = inner(c0, c1);
    }
    return t;
  }();
  return tables;
}

NCopyCombo make_ncopy_combo(std::size_t n, const std::vector<cplx>& coeffs) {
  if (n != 2)
    throw std::invalid_argument("ncopy combos support n = 2 only");
  if (coeffs.size() != 4)
    throw std::invalid_argument("ncopy combo needs 4 coefficients");
  double norm = 0.0;
  for (const cplx& c : coeffs) norm += std::norm(c);
  if (std::abs(norm - 1.0) > 1e-9)
    throw std::invalid_argument("ncopy coefficients must form a unit vector");

  const UColumnTables& t = u_column_tables();
  NCopyCombo combo;
  combo.n = 2;
  std::copy(coeffs.begin(), coeffs.end(), combo.coeffs.begin());

  // Block b of the second copy pairs first-copy coefficients
  // (x_b, y_b) = (coeffs[b], coeffs[2 + b]) with the two column families.
  const cplx x0 = coeffs[0], x1 = coeffs[1];
  const cplx y0 = coeffs[2], y1 = coeffs[3];
  for (std::size_t s = 0; s < 4; ++s) {
    const auto mu_of = [&](cplx x, cplx y) {
      return std::norm(x) * t.n0[s] + std::norm(y) * t.n1[s] +
             2.0 * std::real(std::conj(x) * y * t.h[s]);
    };
    combo.mu[0][s] = mu_of(x0, y0);
    combo.mu[1][s] = mu_of(x1, y1);
    combo.eta[s] = std::conj(x0) * x1 * t.n0[s] + std::conj(y0) * y1 * t.n1[s] +
                   std::conj(x0) * y1 * t.h[s] +
                   std::conj(y0) * x1 * std::conj(t.h[s]);
  }
  return combo;
}

std::array<double, 4> lambda_row(double mu0, double mu1, cplx eta) {
  const UColumnTables& t = u_column_tables();
  std::array<double, 4> row{};
  for (std::size_t k = 0; k < 4; ++k)
    row[k] = mu0 * t.n0[k] + mu1 * t.n1[k] + 2.0 * std::real(eta * t.h[k]);
  return row;
}

std::array<std::array<double, 4>, 4> ncopy_lambda_analytic(
    const NCopyCombo& combo) {
  std::array<std::array<double, 4>, 4> table{};
  for (std::size_t s = 0; s < 4; ++s)
    table[s] = lambda_row(combo.mu[0][s], combo.mu[1][s], combo.eta[s]);
  return table;
}

Vec assemble_two_copy(const std::array<cplx, 4>& coeffs) {
  static const std::array<Vec, 2> u{make_u(0), make_u(1)};
  // tensor() yields (A1 B1 A2 B2); regroup so both 8-dim factors lead.
  Vec grouped(32 * 32, cplx{0.0, 0.0});
  for (std::size_t i1 = 0; i1 < 2; ++i1)
    for (std::size_t i2 = 0; i2 < 2; ++i2) {
      const cplx c = coeffs[2 * i1 + i2];
      if (c == cplx{0.0, 0.0}) continue;
      const Vec prod = tensor(u[i1], u[i2]);
      for (std::size_t f = 0; f < prod.size(); ++f) grouped[f] += c * prod[f];
    }
  return permute_subsystems(grouped, {8, 4, 8, 4}, {0, 2, 1, 3});
}

double two_copy_deficit(const std::array<cplx, 4>& coeffs) {
  const Vec chi = assemble_two_copy(coeffs);
  const auto probs = schmidt(chi, 64, 16).probabilities;
  double total = 0.0;
  for (double p : probs) total += p;
  return (probs.front() - probs.back()) / total;
}

NCopyScanResult ncopy_deficit_scan(std::size_t n, std::size_t samples,
                                   std::uint64_t seed) {
  if (n != 2)
    throw std::invalid_argument("ncopy deficit scan supports n = 2 only");
  if (samples < 1)
    throw std::invalid_argument("ncopy deficit scan needs samples >= 1");

  Prng rng(seed);
  NCopyScanResult out;
  out.samples = samples;
  out.min_deficit = 2.0;  // above any possible spread of a unit spectrum
  for (std::size_t i = 0; i < samples; ++i) {
    std::array<cplx, 4> coeffs;
    double norm = 0.0;
    for (cplx& c : coeffs) {
      c = rng.complex_normal();
      norm += std::norm(c);
    }
    const double inv = 1.0 / std::sqrt(norm);
    for (cplx& c : coeffs) c *= inv;
    const double d = two_copy_deficit(coeffs);
    if (d < out.min_deficit) {
      out.min_deficit = d;
      out.coeffs = coeffs;
    }
  }
  return out;
}

}  // namespace entkit
