#include "entkit/ensembles.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "entkit/rng.hpp"

namespace entkit {

namespace {

constexpr double kDropWeight = 1e-14;

}  // namespace

Ensemble Ensemble::checked(Mat target, std::vector<WeightedState> entries) {
  if (target.rows() != target.cols())
    throw std::invalid_argument("Ensemble: non-square target");
  if (entries.empty()) throw std::invalid_argument("Ensemble: no entries");

  double total = 0.0;
  Mat rebuilt(target.rows(), target.cols());
  for (const auto& e : entries) {
    if (e.weight <= 0.0)
      throw std::invalid_argument("Ensemble: non-positive weight");
    if (e.state.size() != target.rows())
      throw std::invalid_argument("Ensemble: entry dimension mismatch");
    if (std::abs(norm_sq(e.state) - 1.0) > 1e-9)
      throw std::invalid_argument("Ensemble: entry is not normalized");
    total += e.weight;
    rebuilt += cplx{e.weight, 0.0} * outer(e.state);
  }
  if (std::abs(total - 1.0) > 1e-9)
    throw std::invalid_argument("Ensemble: weights do not sum to 1");
  if (max_abs_diff(rebuilt, target) > 1e-8)
    throw std::invalid_argument("Ensemble: entries do not reconstruct the target");

  Ensemble out;
  out.target_ = std::move(target);
  out.entries_ = std::move(entries);
  return out;
}

double Ensemble::average(const RootMeasure& measure, std::size_t dim_a,
                         std::size_t dim_b) const {
  if (dim_a * dim_b != target_.rows())
    throw std::invalid_argument("Ensemble::average: cut dimension mismatch");
  double acc = 0.0;
  for (const auto& e : entries_)
    acc += e.weight * measure.evaluate(e.state, dim_a, dim_b);
  return acc;
}

void validate_isometry(const Mat& v, double tol) {
  if (v.rows() < v.cols())
    throw std::invalid_argument("isometry must have rows >= cols");
  const Mat gram = adjoint(v) * v;
  if (max_abs_diff(gram, Mat::identity(v.cols())) > tol)
    throw std::invalid_argument("matrix is not an isometry");
}

void validate_povm(const Povm& povm, std::size_t dim, double tol) {
  if (povm.empty()) throw std::invalid_argument("POVM has no elements");
  Mat total(dim, dim);
  for (const auto& [label, e] : povm) {
    if (e.rows() != dim || e.cols() != dim)
      throw std::invalid_argument("POVM element dimension mismatch: " + label);
    if (!is_hermitian(e, 1e-9))
      throw std::invalid_argument("POVM element is not Hermitian: " + label);
    const EigResult eig = hermitian_eig(e);
    if (eig.values.back() < -1e-10)
      throw std::invalid_argument("POVM element is not PSD: " + label);
    total += e;
  }
  if (max_abs_diff(total, Mat::identity(dim)) > tol)
    throw std::invalid_argument("POVM elements do not sum to identity");
}

std::vector<Vec> canonical_vectors(const Mat& rho) {
  if (rho.rows() != rho.cols())
    throw std::invalid_argument("canonical_vectors: non-square operator");
  const EigResult eig = hermitian_eig(rho);
  std::vector<Vec> us;
  for (std::size_t j = 0; j < eig.values.size(); ++j) {
    if (eig.values[j] <= 1e-10) break;  // descending order
    Vec u(rho.rows());
    const double w = std::sqrt(eig.values[j]);
    for (std::size_t x = 0; x < rho.rows(); ++x) u[x] = w * eig.vectors(x, j);
    us.push_back(std::move(u));
  }
  if (us.empty()) throw std::invalid_argument("canonical_vectors: zero operator");
  return us;
}

std::vector<Vec> canonical_vectors(const Mat& rho, std::vector<Vec> given) {
  if (given.empty())
    throw std::invalid_argument("canonical_vectors: empty family");
  Mat rebuilt(rho.rows(), rho.cols());
  for (const Vec& u : given) {
    if (u.size() != rho.rows())
      throw std::invalid_argument("canonical_vectors: dimension mismatch");
    rebuilt += outer(u);
  }
  if (max_abs_diff(rebuilt, rho) > 1e-9)
    throw std::invalid_argument(
        "canonical_vectors: family does not reconstruct the operator");
  return given;
}

Ensemble ensemble_from_isometry(const std::vector<Vec>& us, const Mat& v) {
  if (us.empty()) throw std::invalid_argument("ensemble_from_isometry: no vectors");
  if (v.cols() != us.size())
    throw std::invalid_argument("ensemble_from_isometry: isometry width mismatch");
  validate_isometry(v);

  const std::size_t n = us.front().size();
  Mat target(n, n);
  for (const Vec& u : us) target += outer(u);

  std::vector<WeightedState> entries;
  for (std::size_t i = 0; i < v.rows(); ++i) {
    Vec mixed(n, cplx{0.0, 0.0});
    for (std::size_t j = 0; j < us.size(); ++j) {
      const cplx w = v(i, j);
      if (w == cplx{0.0, 0.0}) continue;
      for (std::size_t x = 0; x < n; ++x) mixed[x] += w * us[j][x];
    }
    const double weight = norm_sq(mixed);
    if (weight < kDropWeight) continue;
    const double inv = 1.0 / std::sqrt(weight);
    for (cplx& x : mixed) x *= inv;
    entries.push_back({weight, std::move(mixed)});
  }
  return Ensemble::checked(std::move(target), std::move(entries));
}

Ensemble ensemble_from_charlie_povm(const PureState& psi,
                                    const std::string& measured_label,
                                    const Povm& povm) {
  const std::size_t c_idx = psi.party_index(measured_label);
  const std::size_t dim_c = psi.parties()[c_idx].dim;
  validate_povm(povm, dim_c);

  // Move the measured party last so outcomes contract the trailing index.
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < psi.parties().size(); ++i)
    if (i != c_idx) order.push_back(i);
  order.push_back(c_idx);
  const Vec moved = permute_subsystems(psi.amplitudes(), psi.dims(), order);
  const std::size_t dim_rest = psi.dim() / dim_c;

  std::vector<WeightedState> entries;
  for (const auto& [label, element] : povm) {
    const EigResult eig = hermitian_eig(element);
    if (eig.values.size() > 1 && eig.values[1] > 1e-10)
      throw std::invalid_argument(
          "POVM element has rank > 1 (refine it first): " + label);
    if (eig.values[0] <= 1e-10) continue;  // null element contributes nothing

    // E = |f><f| with f = sqrt(lambda) * leading eigenvector.
    const double scale = std::sqrt(eig.values[0]);
    Vec collapsed(dim_rest, cplx{0.0, 0.0});
    for (std::size_t x = 0; x < dim_rest; ++x)
      for (std::size_t c = 0; c < dim_c; ++c)
        collapsed[x] +=
            scale * std::conj(eig.vectors(c, 0)) * moved[x * dim_c + c];

    const double weight = norm_sq(collapsed);
    if (weight < kDropWeight) continue;
    const double inv = 1.0 / std::sqrt(weight);
    for (cplx& x : collapsed) x *= inv;
    entries.push_back({weight, std::move(collapsed)});
  }

  std::vector<std::size_t> keep(psi.parties().size() - 1);
  std::iota(keep.begin(), keep.end(), 0);
  std::vector<std::size_t> new_dims;
  for (std::size_t q : order) new_dims.push_back(psi.dims()[q]);
  Mat target = reduced_density(moved, new_dims, keep);
  return Ensemble::checked(std::move(target), std::move(entries));
}

Povm random_povm(Prng& rng, std::size_t dim, std::size_t elements) {
  if (dim == 0 || elements == 0)
    throw std::invalid_argument("random_povm: empty request");
  std::vector<Mat> blocks;
  Mat sum(dim, dim);
  for (std::size_t i = 0; i < elements; ++i) {
    blocks.push_back(random_psd(rng, dim));
    sum += blocks.back();
  }

  // Whitening by S^{-1/2} turns the blocks into a complete POVM.
  const EigResult eig = hermitian_eig(sum);
  Mat inv_sqrt(dim, dim);
  for (std::size_t k = 0; k < dim; ++k) {
    if (eig.values[k] <= 1e-12)
      throw std::runtime_error("random_povm: degenerate Wishart sum");
    const double w = 1.0 / std::sqrt(eig.values[k]);
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t j = 0; j < dim; ++j)
        inv_sqrt(i, j) += w * eig.vectors(i, k) * std::conj(eig.vectors(j, k));
  }

  Povm out;
  for (std::size_t i = 0; i < elements; ++i)
    out.push_back({std::to_string(i), inv_sqrt * blocks[i] * inv_sqrt});
  return out;
}

Povm refine_povm(const Povm& povm) {
  Povm out;
  for (const auto& [label, element] : povm) {
    const EigResult eig = hermitian_eig(element);
    for (std::size_t k = 0; k < eig.values.size(); ++k) {
      if (eig.values[k] <= 1e-12) continue;
      Vec f(element.rows());
      const double w = std::sqrt(eig.values[k]);
      for (std::size_t x = 0; x < element.rows(); ++x)
        f[x] = w * eig.vectors(x, k);
      out.push_back({label + "." + std::to_string(k), outer(f)});
    }
  }
  return out;
}

}  // namespace entkit
