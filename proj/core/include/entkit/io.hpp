#pragma once

#include <string>
#include <variant>

#include "entkit/locc.hpp"
#include "entkit/states.hpp"

namespace entkit {

using AnyState = std::variant<PureState, DensityOperator>;

// Loads a state from a catalog name or a JSON file path. Catalog names:
// "phi", "mixed", "bell0".."bell3", "maxent:AxB" (for example "maxent:4x4").
// File format:
//   {"kind": "pure",  "dims": [...], "amplitudes": [[re, im], ...]}
//   {"kind": "mixed", "dims": [...], "entries":    [[re, im], ...]}
// with amplitudes/entries flat in row-major order and an optional "labels"
// array naming the parties (default "A", "B", ...). With `renormalize` the
// norm or trace is rescaled to 1; otherwise an off-by-more-than-1e-9 input
// is rejected.
AnyState load_state(const std::string& source, bool renormalize = false);

void save_state(const AnyState& state, const std::string& path);

// Loads a protocol from a catalog name ("phi", "mixed") or a JSON file path.
// Nodes are {"party": ..., "operators": {label: [[re, im], ...]},
// "children": {label: node}}; a leaf is {}, and "children" may be omitted or
// empty for a final measurement round. Operator matrices are flat row-major
// over the measured party's dimension. Outcomes load in sorted label order.
Protocol load_protocol(const std::string& source);

void save_protocol(const Protocol& protocol, const std::string& path);

}  // namespace entkit
