#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "entkit/measures.hpp"
#include "entkit/qmath.hpp"
#include "entkit/states.hpp"

namespace entkit {

// One round of local measurement: a labelled Kraus family acting on a single
// party. The operators must be square with the party's dimension and satisfy
// sum_i K_i^dag K_i = I within 1e-9.
struct Instrument {
  std::string party;
  std::vector<std::pair<std::string, Mat>> operators;
};

// A measurement tree. Interior nodes carry an instrument plus one child per
// surviving outcome label; the child chosen at runtime depends on the
// outcome, which is what lets later parties adapt their basis to earlier
// results. An instrument node with no children measures and stops, and
// outcomes whose branch probability falls below the pruning threshold do not
// need a child.
struct ProtocolNode {
  std::optional<Instrument> instrument;
  std::vector<std::pair<std::string, ProtocolNode>> children;

  bool is_leaf() const { return !instrument.has_value(); }
};

struct Protocol {
  ProtocolNode root;
};

// Terminal branch of a protocol run. The state keeps every party of the
// input; measured parties are simply collapsed. Transcript entries read
// "party:outcome" in measurement order.
struct BranchOutcome {
  double probability = 0.0;
  std::variant<PureState, DensityOperator> state;
  std::vector<std::string> transcript;
};

// Runs the tree, pruning branches with probability <= 1e-14. Results are
// sorted by transcript; probabilities sum to 1 within 1e-9.
std::vector<BranchOutcome> run_protocol(const PureState& psi,
                                        const Protocol& protocol);
std::vector<BranchOutcome> run_protocol(const DensityOperator& rho,
                                        const Protocol& protocol);

// Probability-weighted average of `measure` across `cut`, evaluated on each
// leaf after tracing out parties absent from the cut. Every leaf must be pure
// across the cut (reduction purity >= 1 - 1e-9); otherwise this throws, since
// a root measure has no defined value there.
double average_final_entanglement(const std::vector<BranchOutcome>& leaves,
                                  const Cut& cut, const RootMeasure& measure);

// Two-stage collaboration protocol for the 8x4x2 catalog state: Alice splits
// her space into the lower and upper four levels, then the 2-level helper
// measures {|0>,|1>} or {|+i>,|-i>} depending on her outcome. All four leaves
// are maximally entangled across A:B.
Protocol collaboration_protocol_phi();

// Collaboration protocol for the 4x2x2 mixed catalog state: Alice splits
// {0,1} vs {2,3}, the helper measures {|0>,|1>} or {|+>,|->} accordingly.
// Each leaf collapses the mixture to a single maximally entangled pure state.
Protocol collaboration_protocol_mixed();

// Outcome profile of a single helper POVM element on the mixed catalog
// state: the element picks the branch ensemble {q_i} with q_i proportional
// to <f_i|E|f_i> over the four flag states |0>,|1>,|+>,|->.
struct CharlieOutcomeProfile {
  std::array<double, 4> weights{};  // normalized, indexed by flag
  std::size_t support = 0;          // weights above 1e-12
  double purity = 0.0;              // sum of squared weights
};

// Requires a 2x2 Hermitian PSD element with trace above 1e-12.
CharlieOutcomeProfile charlie_weight_support(const Mat& element);

}  // namespace entkit
