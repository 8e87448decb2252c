#pragma once
// Randomized property families exercising the whole library: each family
// draws many random instances, records the worst deviation from an identity
// or bound that must hold exactly or within floating-point slack, and passes
// when that worst case stays below its tolerance. The same suites back the
// property test binary and the reproduction report.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace entkit {

struct PropertyReport {
  std::string name;
  std::size_t instances = 0;
  double worst = 0.0;      // largest deviation seen
  double tolerance = 0.0;  // pass bound for `worst`
  bool pass = false;
};

// Runs every family with deterministic per-family random streams derived
// from `seed`. `instances` is the budget per family; families that run the
// optimizer or other expensive paths use a fraction of it.
std::vector<PropertyReport> run_property_suites(std::uint64_t seed,
                                                std::size_t instances = 200);

}  // namespace entkit
