#include "entkit/locc.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace entkit {

namespace {

constexpr double kPruneProbability = 1e-14;

void validate_instrument(const Instrument& ins,
                         const std::vector<PartySpace>& parties) {
  const std::size_t target = party_index(parties, ins.party);
  const std::size_t d = parties[target].dim;
  if (ins.operators.empty())
    throw std::invalid_argument("instrument has no operators");
  Mat sum(d, d);
  for (const auto& [label, k] : ins.operators) {
    if (label.empty())
      throw std::invalid_argument("instrument outcome label is empty");
    if (k.rows() != d || k.cols() != d)
      throw std::invalid_argument("instrument operator does not match party " +
                                  ins.party);
    sum += adjoint(k) * k;
  }
  if (max_abs_diff(sum, Mat::identity(d)) > 1e-9)
    throw std::invalid_argument("instrument on " + ins.party +
                                " is not trace preserving");
}

// Collapse by one Kraus operator; yields the branch probability and the
// renormalized state, or no state at all when the branch is pruned.
std::pair<double, std::optional<PureState>> apply_outcome(
    const PureState& psi, const Mat& k, std::size_t target) {
  Vec v = apply_local(k, psi.amplitudes(), psi.dims(), target);
  const double p = norm_sq(v);
  if (p <= kPruneProbability) return {p, std::nullopt};
  const double inv = 1.0 / std::sqrt(p);
  for (cplx& x : v) x *= inv;
  return {p, PureState(psi.parties(), std::move(v))};
}

std::pair<double, std::optional<DensityOperator>> apply_outcome(
    const DensityOperator& rho, const Mat& k, std::size_t target) {
  Mat m = sandwich_local(k, rho.matrix(), rho.dims(), target);
  const double p = trace(m).real();
  if (p <= kPruneProbability) return {p, std::nullopt};
  m *= cplx{1.0 / p, 0.0};
  return {p, DensityOperator(rho.parties(), std::move(m))};
}

template <typename State>
void descend(const State& state, double prob, const ProtocolNode& node,
             std::vector<std::string>& transcript,
             std::vector<BranchOutcome>& out) {
  if (node.is_leaf()) {
    if (!node.children.empty())
      throw std::invalid_argument("protocol leaf must not have children");
    out.push_back(BranchOutcome{prob, state, transcript});
    return;
  }
  const Instrument& ins = *node.instrument;
  validate_instrument(ins, state.parties());
  const std::size_t target = party_index(state.parties(), ins.party);

  for (const auto& [label, k] : ins.operators) {
    const auto [p, next] = apply_outcome(state, k, target);
    if (!next) continue;  // pruned outcomes need no branch
    transcript.push_back(ins.party + ":" + label);
    if (node.children.empty()) {
      // Childless instrument node: measure and stop.
      out.push_back(BranchOutcome{prob * p, *next, transcript});
    } else {
      const auto child = std::find_if(
          node.children.begin(), node.children.end(),
          [&label](const auto& c) { return c.first == label; });
      if (child == node.children.end())
        throw std::invalid_argument("protocol has no branch for outcome " +
                                    label);
      descend(*next, prob * p, child->second, transcript, out);
    }
    transcript.pop_back();
  }
}

template <typename State>
std::vector<BranchOutcome> run_impl(const State& state,
                                    const Protocol& protocol) {
  std::vector<BranchOutcome> out;
  std::vector<std::string> transcript;
  descend(state, 1.0, protocol.root, transcript, out);

  std::sort(out.begin(), out.end(),
            [](const BranchOutcome& a, const BranchOutcome& b) {
              return a.transcript < b.transcript;
            });
  std::set<std::vector<std::string>> seen;
  double total = 0.0;
  for (const auto& leaf : out) {
    total += leaf.probability;
    if (!seen.insert(leaf.transcript).second)
      throw std::invalid_argument("protocol produced duplicate transcripts");
  }
  if (std::abs(total - 1.0) > 1e-9)
    throw std::runtime_error("branch probabilities do not sum to 1");
  return out;
}

}  // namespace

std::vector<BranchOutcome> run_protocol(const PureState& psi,
                                        const Protocol& protocol) {
  return run_impl(psi, protocol);
}

std::vector<BranchOutcome> run_protocol(const DensityOperator& rho,
                                        const Protocol& protocol) {
  return run_impl(rho, protocol);
}

namespace {

// State vector of a leaf restricted to the cut parties, in cut order, plus
// the dimensions on either side of the cut. Throws when the restriction is
// not pure, since a root measure has no value there.
std::pair<Vec, std::pair<std::size_t, std::size_t>> leaf_across_cut(
    const std::variant<PureState, DensityOperator>& state, const Cut& cut) {
  std::vector<std::string> keep = cut.left;
  keep.insert(keep.end(), cut.right.begin(), cut.right.end());

  const std::vector<PartySpace>& parties =
      std::holds_alternative<PureState>(state)
          ? std::get<PureState>(state).parties()
          : std::get<DensityOperator>(state).parties();

  Vec psi;
  std::vector<PartySpace> kept;
  if (keep.size() < parties.size()) {
    const DensityOperator rho =
        std::holds_alternative<PureState>(state)
            ? reduce_to(std::get<PureState>(state), keep)
            : reduce_to(std::get<DensityOperator>(state), keep);
    if (purity(rho.matrix()) < 1.0 - 1e-9)
      throw std::runtime_error(
          "protocol leaf is mixed across the requested cut");
    const EigResult eig = hermitian_eig(rho.matrix());
    psi.resize(rho.matrix().rows());
    for (std::size_t i = 0; i < psi.size(); ++i) psi[i] = eig.vectors(i, 0);
    kept = rho.parties();
  } else {
    // The cut covers every party; just reorder to cut order.
    std::vector<std::size_t> order;
    for (const auto& label : keep) {
      order.push_back(party_index(parties, label));
      kept.push_back(parties[order.back()]);
    }
    if (std::holds_alternative<PureState>(state)) {
      const PureState& ps = std::get<PureState>(state);
      psi = permute_subsystems(ps.amplitudes(), ps.dims(), order);
    } else {
      const DensityOperator& rho = std::get<DensityOperator>(state);
      const Mat moved = permute_subsystems(rho.matrix(), rho.dims(), order);
      if (purity(moved) < 1.0 - 1e-9)
        throw std::runtime_error(
            "protocol leaf is mixed across the requested cut");
      const EigResult eig = hermitian_eig(moved);
      psi.resize(moved.rows());
      for (std::size_t i = 0; i < psi.size(); ++i) psi[i] = eig.vectors(i, 0);
    }
  }

  std::size_t dim_l = 1, dim_r = 1;
  for (std::size_t i = 0; i < cut.left.size(); ++i) dim_l *= kept[i].dim;
  for (std::size_t i = cut.left.size(); i < kept.size(); ++i)
    dim_r *= kept[i].dim;
  return {std::move(psi), {dim_l, dim_r}};
}

}  // namespace

double average_final_entanglement(const std::vector<BranchOutcome>& leaves,
                                  const Cut& cut, const RootMeasure& measure) {
  if (leaves.empty())
    throw std::invalid_argument("no protocol leaves to average over");
  double total = 0.0;
  for (const auto& leaf : leaves) {
    const auto [psi, dims] = leaf_across_cut(leaf.state, cut);
    total += leaf.probability * measure.evaluate(psi, dims.first, dims.second);
  }
  return total;
}

namespace {

Mat level_projector(std::size_t dim, std::size_t first, std::size_t last) {
  Mat p(dim, dim);
  for (std::size_t i = first; i <= last; ++i) p(i, i) = cplx{1.0, 0.0};
  return p;
}

Mat rank_one(const Vec& v) { return outer(v); }

ProtocolNode helper_node(const std::string& label_a, const Vec& a,
                         const std::string& label_b, const Vec& b) {
  ProtocolNode node;
  node.instrument = Instrument{
      "C", {{label_a, rank_one(a)}, {label_b, rank_one(b)}}};
  node.children.emplace_back(label_a, ProtocolNode{});
  node.children.emplace_back(label_b, ProtocolNode{});
  return node;
}

}  // namespace

Protocol collaboration_protocol_phi() {
  const double s = 1.0 / std::sqrt(2.0);
  const Vec plus_i{{s, 0.0}, {0.0, s}};
  const Vec minus_i{{s, 0.0}, {0.0, -s}};
  const Vec zero{{1.0, 0.0}, {0.0, 0.0}};
  const Vec one{{0.0, 0.0}, {1.0, 0.0}};

  ProtocolNode root;
  root.instrument = Instrument{"A",
                               {{"0", level_projector(8, 0, 3)},
                                {"1", level_projector(8, 4, 7)}}};
  root.children.emplace_back("0", helper_node("0", zero, "1", one));
  root.children.emplace_back("1", helper_node("+i", plus_i, "-i", minus_i));
  return Protocol{std::move(root)};
}

Protocol collaboration_protocol_mixed() {
  const double s = 1.0 / std::sqrt(2.0);
  const Vec plus{{s, 0.0}, {s, 0.0}};
  const Vec minus{{s, 0.0}, {-s, 0.0}};
  const Vec zero{{1.0, 0.0}, {0.0, 0.0}};
  const Vec one{{0.0, 0.0}, {1.0, 0.0}};

  ProtocolNode root;
  root.instrument = Instrument{"A",
                               {{"01", level_projector(4, 0, 1)},
                                {"23", level_projector(4, 2, 3)}}};
  root.children.emplace_back("01", helper_node("0", zero, "1", one));
  root.children.emplace_back("23", helper_node("+", plus, "-", minus));
  return Protocol{std::move(root)};
}

CharlieOutcomeProfile charlie_weight_support(const Mat& element) {
  if (element.rows() != 2 || element.cols() != 2)
    throw std::invalid_argument("helper element must be 2x2");
  if (!is_hermitian(element))
    throw std::invalid_argument("helper element must be Hermitian");
  const EigResult eig = hermitian_eig(element);
  for (double v : eig.values)
    if (v < -1e-10)
      throw std::invalid_argument("helper element must be positive");

  const double s = 1.0 / std::sqrt(2.0);
  const std::array<Vec, 4> flags{Vec{{1.0, 0.0}, {0.0, 0.0}},
                                 Vec{{0.0, 0.0}, {1.0, 0.0}},
                                 Vec{{s, 0.0}, {s, 0.0}},
                                 Vec{{s, 0.0}, {-s, 0.0}}};

  CharlieOutcomeProfile profile;
  double total = 0.0;
  for (std::size_t i = 0; i < 4; ++i) {
    profile.weights[i] = inner(flags[i], mat_vec(element, flags[i])).real();
    total += profile.weights[i];
  }
  if (total <= 1e-12)
    throw std::invalid_argument("helper element has vanishing weight");
  for (double& w : profile.weights) {
    w /= total;
    if (w > 1e-12) ++profile.support;
    profile.purity += w * w;
  }
  return profile;
}

}  // namespace entkit
