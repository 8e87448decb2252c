#include "entkit/states.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

namespace entkit {

namespace {

constexpr double kNormTol = 1e-9;

void check_finite(const Vec& v, const char* who) {
  for (const cplx& x : v)
    if (!std::isfinite(x.real()) || !std::isfinite(x.imag()))
      throw std::invalid_argument(std::string(who) + ": non-finite entry");
}

}  // namespace

std::vector<std::size_t> dims_of(const std::vector<PartySpace>& parties) {
  std::vector<std::size_t> d;
  d.reserve(parties.size());
  for (const auto& p : parties) d.push_back(p.dim);
  return d;
}

std::size_t total_dim(const std::vector<PartySpace>& parties) {
  std::size_t n = 1;
  for (const auto& p : parties) n *= p.dim;
  return n;
}

std::size_t party_index(const std::vector<PartySpace>& parties,
                        const std::string& label) {
  for (std::size_t i = 0; i < parties.size(); ++i)
    if (parties[i].label == label) return i;
  throw std::invalid_argument("unknown party label: " + label);
}

void validate_parties(const std::vector<PartySpace>& parties) {
  if (parties.empty())
    throw std::invalid_argument("state needs at least one party");
  std::set<std::string> seen;
  for (const auto& p : parties) {
    if (p.label.empty())
      throw std::invalid_argument("party label must be nonempty");
    if (p.dim < 1) throw std::invalid_argument("party dimension must be >= 1");
    if (!seen.insert(p.label).second)
      throw std::invalid_argument("duplicate party label: " + p.label);
  }
}

PureState::PureState(std::vector<PartySpace> parties, Vec amplitudes)
    : parties_(std::move(parties)), amp_(std::move(amplitudes)) {
  validate_parties(parties_);
  if (total_dim(parties_) != amp_.size())
    throw std::invalid_argument("PureState: dimension/amplitude mismatch");
  check_finite(amp_, "PureState");
  if (std::abs(norm_sq(amp_) - 1.0) > kNormTol)
    throw std::invalid_argument("PureState: vector is not normalized");
}

DensityOperator::DensityOperator(std::vector<PartySpace> parties, Mat matrix)
    : parties_(std::move(parties)), m_(std::move(matrix)) {
  validate_parties(parties_);
  if (m_.rows() != m_.cols())
    throw std::invalid_argument("DensityOperator: non-square matrix");
  if (total_dim(parties_) != m_.rows())
    throw std::invalid_argument("DensityOperator: dimension mismatch");
  check_finite(m_.data(), "DensityOperator");
  if (!is_hermitian(m_, 1e-9))
    throw std::invalid_argument("DensityOperator: matrix is not Hermitian");
  if (std::abs(trace(m_) - cplx{1.0, 0.0}) > kNormTol)
    throw std::invalid_argument("DensityOperator: trace is not 1");
}

namespace {

// Shared permute-then-trace plumbing: returns (order, kept parties) with the
// kept labels first, in the caller's order.
std::pair<std::vector<std::size_t>, std::vector<PartySpace>> reduce_plan(
    const std::vector<PartySpace>& parties,
    const std::vector<std::string>& keep) {
  if (keep.empty() || keep.size() >= parties.size())
    throw std::invalid_argument("reduce_to: keep must be a proper nonempty subset");
  std::vector<std::size_t> order;
  std::vector<PartySpace> kept;
  std::vector<bool> used(parties.size(), false);
  for (const auto& label : keep) {
    const std::size_t i = party_index(parties, label);
    if (used[i]) throw std::invalid_argument("reduce_to: duplicate label " + label);
    used[i] = true;
    order.push_back(i);
    kept.push_back(parties[i]);
  }
  for (std::size_t i = 0; i < parties.size(); ++i)
    if (!used[i]) order.push_back(i);
  return {order, kept};
}

}  // namespace

DensityOperator reduce_to(const PureState& psi,
                          const std::vector<std::string>& keep) {
  auto [order, kept] = reduce_plan(psi.parties(), keep);
  const Vec moved = permute_subsystems(psi.amplitudes(), psi.dims(), order);
  std::vector<std::size_t> new_dims;
  for (std::size_t q : order) new_dims.push_back(psi.dims()[q]);
  std::vector<std::size_t> keep_idx(keep.size());
  std::iota(keep_idx.begin(), keep_idx.end(), 0);
  return DensityOperator(kept, reduced_density(moved, new_dims, keep_idx));
}

DensityOperator reduce_to(const DensityOperator& rho,
                          const std::vector<std::string>& keep) {
  auto [order, kept] = reduce_plan(rho.parties(), keep);
  const Mat moved = permute_subsystems(rho.matrix(), rho.dims(), order);
  std::vector<std::size_t> new_dims;
  for (std::size_t q : order) new_dims.push_back(rho.dims()[q]);
  std::vector<std::size_t> keep_idx(keep.size());
  std::iota(keep_idx.begin(), keep_idx.end(), 0);
  return DensityOperator(kept, partial_trace(moved, new_dims, keep_idx));
}

PureState make_phi() {
  const cplx one{1.0, 0.0};
  const cplx im{0.0, 1.0};
  const double s = 1.0 / std::sqrt(2.0);
  // Charlie-basis columns the four groups attach to.
  const Vec c0{one, cplx{0.0, 0.0}};
  const Vec c1{cplx{0.0, 0.0}, one};
  const Vec cpi{cplx{s, 0.0}, cplx{0.0, s}};    // (|0> + i|1>)/sqrt2
  const Vec cmi{cplx{s, 0.0}, cplx{0.0, -s}};   // (|0> - i|1>)/sqrt2

  struct Term {
    int a, b;
    cplx w;
    const Vec* c;
  };
  const Term terms[] = {
      {0, 0, one, &c0},  {1, 1, one, &c0},  {2, 2, one, &c0},  {3, 3, one, &c0},
      {0, 0, im, &c1},   {1, 1, one, &c1},  {2, 2, -im, &c1},  {3, 3, -one, &c1},
      {4, 0, one, &cpi}, {5, 1, one, &cpi}, {6, 2, one, &cpi}, {7, 3, one, &cpi},
      {4, 0, im, &cmi},  {5, 1, one, &cmi}, {6, 2, im, &cmi},  {7, 3, one, &cmi},
  };

  Vec amp(64, cplx{0.0, 0.0});
  for (const Term& t : terms)
    for (int c = 0; c < 2; ++c)
      amp[static_cast<std::size_t>((t.a * 4 + t.b) * 2 + c)] +=
          0.25 * t.w * (*t.c)[static_cast<std::size_t>(c)];
  return PureState({{"A", 8}, {"B", 4}, {"C", 2}}, std::move(amp));
}

Vec make_u(int b) {
  if (b != 0 && b != 1) throw std::invalid_argument("make_u: b must be 0 or 1");
  const cplx one{1.0, 0.0};
  const cplx im{0.0, 1.0};
  const cplx z = cplx{1.0, 1.0} / std::sqrt(2.0);
  const cplx r2{std::sqrt(2.0), 0.0};

  Vec u(32, cplx{0.0, 0.0});
  auto put = [&u](int a, int k, cplx w) {
    u[static_cast<std::size_t>(a * 4 + k)] = 0.25 * w;
  };
  if (b == 0) {
    put(0, 0, one); put(4, 0, z);
    put(1, 1, one); put(5, 1, r2);
    put(2, 2, one); put(6, 2, z);
    put(3, 3, one); put(7, 3, r2);
  } else {
    put(0, 0, im);  put(4, 0, z);
    put(1, 1, one);
    put(2, 2, -im); put(6, 2, z);
    put(3, 3, -one);
  }
  return u;
}

PureState make_bell(int k) {
  if (k < 0 || k > 3) throw std::invalid_argument("make_bell: k must be 0..3");
  const double s = 1.0 / std::sqrt(2.0);
  Vec amp(4, cplx{0.0, 0.0});
  const double sign = (k % 2 == 0) ? s : -s;
  if (k < 2) {
    amp[0] = cplx{s, 0.0};     // |00>
    amp[3] = cplx{sign, 0.0};  // |11>
  } else {
    amp[1] = cplx{s, 0.0};     // |01>
    amp[2] = cplx{sign, 0.0};  // |10>
  }
  return PureState({{"A", 2}, {"B", 2}}, std::move(amp));
}

PureState make_max_entangled(std::size_t dim_a, std::size_t dim_b) {
  if (dim_b > dim_a)
    throw std::invalid_argument("make_max_entangled: requires dim_b <= dim_a");
  if (dim_b == 0) throw std::invalid_argument("make_max_entangled: zero dim");
  const double s = 1.0 / std::sqrt(static_cast<double>(dim_b));
  Vec amp(dim_a * dim_b, cplx{0.0, 0.0});
  for (std::size_t k = 0; k < dim_b; ++k) amp[k * dim_b + k] = cplx{s, 0.0};
  return PureState({{"A", dim_a}, {"B", dim_b}}, std::move(amp));
}

Vec make_mixed_ab(int i) {
  if (i < 1 || i > 4)
    throw std::invalid_argument("make_mixed_ab: i must be 1..4");
  const double s = 1.0 / std::sqrt(2.0);
  // (|a0 b0> + |a1 b1>)/sqrt2 on 4x2, flat index a*2 + b.
  const int a0[] = {0, 0, 2, 2}, b0[] = {1, 0, 1, 0};
  const int a1[] = {1, 1, 3, 3}, b1[] = {0, 1, 0, 1};
  Vec v(8, cplx{0.0, 0.0});
  v[static_cast<std::size_t>(a0[i - 1] * 2 + b0[i - 1])] = cplx{s, 0.0};
  v[static_cast<std::size_t>(a1[i - 1] * 2 + b1[i - 1])] = cplx{s, 0.0};
  return v;
}

Vec make_mixed_flag(int i) {
  if (i < 1 || i > 4)
    throw std::invalid_argument("make_mixed_flag: i must be 1..4");
  const double s = 1.0 / std::sqrt(2.0);
  switch (i) {
    case 1: return {cplx{1.0, 0.0}, cplx{0.0, 0.0}};  // |0>
    case 2: return {cplx{0.0, 0.0}, cplx{1.0, 0.0}};  // |1>
    case 3: return {cplx{s, 0.0}, cplx{s, 0.0}};      // |+>
    default: return {cplx{s, 0.0}, cplx{-s, 0.0}};    // |->
  }
}

DensityOperator make_mixed_example() {
  Mat rho(16, 16);
  for (int i = 1; i <= 4; ++i) {
    const Vec component = tensor(make_mixed_ab(i), make_mixed_flag(i));
    rho += cplx{0.25, 0.0} * outer(component);
  }
  return DensityOperator({{"A", 4}, {"B", 2}, {"C", 2}}, std::move(rho));
}

PureState purify(const DensityOperator& rho, std::string ancilla_label) {
  const auto& parties = rho.parties();
  if (ancilla_label.empty()) {
    // Prefer the conventional third-party letter, then later ones, then A, B.
    const std::string pool = "CDEFGHIJKLMNOPQRSTUVWXYZAB";
    for (char c : pool) {
      const std::string candidate(1, c);
      if (std::none_of(parties.begin(), parties.end(),
                       [&](const PartySpace& p) { return p.label == candidate; })) {
        ancilla_label = candidate;
        break;
      }
    }
    if (ancilla_label.empty())
      throw std::invalid_argument("purify: no free ancilla label");
  } else if (std::any_of(parties.begin(), parties.end(),
                         [&](const PartySpace& p) { return p.label == ancilla_label; })) {
    throw std::invalid_argument("purify: ancilla label already in use");
  }

  const EigResult eig = hermitian_eig(rho.matrix());
  std::size_t rank = 0;
  for (double p : eig.values)
    if (p > 1e-10) ++rank;
  if (rank == 0) throw std::invalid_argument("purify: zero operator");

  const std::size_t n = rho.dim();
  Vec amp(n * rank, cplx{0.0, 0.0});
  for (std::size_t j = 0; j < rank; ++j) {
    const double w = std::sqrt(eig.values[j]);
    for (std::size_t x = 0; x < n; ++x)
      amp[x * rank + j] = w * eig.vectors(x, j);
  }
  std::vector<PartySpace> out = parties;
  out.push_back({ancilla_label, rank});
  return PureState(std::move(out), std::move(amp));
}

}  // namespace entkit
