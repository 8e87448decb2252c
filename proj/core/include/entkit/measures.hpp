#pragma once
// Bipartite entanglement quantities evaluated across party cuts, and the
// pluggable pure-state measure interface the assisted-entanglement optimizer
// averages over.

#include <cstddef>
#include <functional>
#include <string>
#include <tuple>
#include <vector>

#include "entkit/qmath.hpp"
#include "entkit/states.hpp"

namespace entkit {

// A bipartition of party labels, e.g. {A,B} : {C}.
struct Cut {
  std::vector<std::string> left;
  std::vector<std::string> right;
};

// Parses "AB:C" style cuts; each character names one party.
Cut parse_cut(const std::string& text);

// Flattens psi into a bipartite vector (left block, right block) following
// the cut's party order. The cut must name each party of psi exactly once.
std::tuple<Vec, std::size_t, std::size_t> split_by_cut(const PureState& psi,
                                                       const Cut& cut);

// Squared Schmidt coefficients across the cut, descending, with zeros kept so
// the list always has min(dimLeft, dimRight) entries.
std::vector<double> schmidt_probabilities(const PureState& psi, const Cut& cut);

// Entropy of the reduced operator on either side of the cut, in bits.
double entropy_of_entanglement(const PureState& psi, const Cut& cut);

// Spread (max - min) of the squared Schmidt coefficients; zero exactly for
// maximally entangled states, and zeros in the spectrum count.
double max_ent_deficit(const PureState& psi, const Cut& cut);

bool is_max_entangled(const PureState& psi, const Cut& cut, double tol = 1e-9);

// Named measure on bipartite pure states, given as a flat vector plus block
// dimensions. No shipped measure accepts mixed inputs.
struct RootMeasure {
  std::string name;
  bool mixed_capable = false;
  std::function<double(const Vec&, std::size_t, std::size_t)> evaluate;
};

// Lookup by name; throws listing the known names on a miss.
const RootMeasure& root_measure(const std::string& name);
std::vector<std::string> root_measure_names();

}  // namespace entkit
