#include "entkit/measures.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace entkit {

Cut parse_cut(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos || text.find(':', colon + 1) != std::string::npos)
    throw std::invalid_argument("cut must contain exactly one ':': " + text);
  Cut cut;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (i == colon) continue;
    (i < colon ? cut.left : cut.right).emplace_back(1, text[i]);
  }
  if (cut.left.empty() || cut.right.empty())
    throw std::invalid_argument("cut sides must both be nonempty: " + text);
  std::vector<std::string> all = cut.left;
  all.insert(all.end(), cut.right.begin(), cut.right.end());
  std::sort(all.begin(), all.end());
  if (std::adjacent_find(all.begin(), all.end()) != all.end())
    throw std::invalid_argument("cut repeats a party label: " + text);
  return cut;
}

std::tuple<Vec, std::size_t, std::size_t> split_by_cut(const PureState& psi,
                                                       const Cut& cut) {
  if (cut.left.empty() || cut.right.empty())
    throw std::invalid_argument("cut sides must both be nonempty");
  if (cut.left.size() + cut.right.size() != psi.parties().size())
    throw std::invalid_argument("cut must name every party of the state");

  std::vector<std::size_t> order;
  std::size_t dim_left = 1, dim_right = 1;
  std::vector<bool> used(psi.parties().size(), false);
  for (const auto& label : cut.left) {
    const std::size_t i = psi.party_index(label);
    if (used[i]) throw std::invalid_argument("cut repeats party " + label);
    used[i] = true;
    order.push_back(i);
    dim_left *= psi.parties()[i].dim;
  }
  for (const auto& label : cut.right) {
    const std::size_t i = psi.party_index(label);
    if (used[i]) throw std::invalid_argument("cut repeats party " + label);
    used[i] = true;
    order.push_back(i);
    dim_right *= psi.parties()[i].dim;
  }
  return {permute_subsystems(psi.amplitudes(), psi.dims(), order), dim_left,
          dim_right};
}

std::vector<double> schmidt_probabilities(const PureState& psi,
                                          const Cut& cut) {
  const auto [flat, da, db] = split_by_cut(psi, cut);
  return schmidt(flat, da, db).probabilities;
}

double entropy_of_entanglement(const PureState& psi, const Cut& cut) {
  const auto probs = schmidt_probabilities(psi, cut);
  return entropy_bits(probs);
}

double max_ent_deficit(const PureState& psi, const Cut& cut) {
  const auto probs = schmidt_probabilities(psi, cut);
  const auto [lo, hi] = std::minmax_element(probs.begin(), probs.end());
  return *hi - *lo;
}

bool is_max_entangled(const PureState& psi, const Cut& cut, double tol) {
  return max_ent_deficit(psi, cut) <= tol;
}

namespace {

std::map<std::string, RootMeasure> build_registry() {
  std::map<std::string, RootMeasure> reg;
  reg["entropy"] = RootMeasure{
      "entropy", false,
      [](const Vec& psi, std::size_t dim_a, std::size_t dim_b) {
        return entropy_bits(schmidt(psi, dim_a, dim_b).probabilities);
      }};
  return reg;
}

const std::map<std::string, RootMeasure>& registry() {
  static const std::map<std::string, RootMeasure> reg = build_registry();
  return reg;
}

}  // namespace

const RootMeasure& root_measure(const std::string& name) {
  const auto& reg = registry();
  const auto it = reg.find(name);
  if (it == reg.end()) {
    std::string known;
    for (const auto& [k, v] : reg) known += (known.empty() ? "" : ", ") + k;
    throw std::invalid_argument("unknown measure '" + name + "' (known: " + known + ")");
  }
  return it->second;
}

std::vector<std::string> root_measure_names() {
  std::vector<std::string> names;
  for (const auto& [k, v] : registry()) names.push_back(k);
  return names;
}

}  // namespace entkit
