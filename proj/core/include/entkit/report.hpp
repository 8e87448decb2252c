#pragma once
// End-to-end reproduction of every headline result as a typed claim list.
// Each claim carries the computed number, its pass condition, and enough
// detail to audit the run; the JSON form is stable for fixed seed so two
// runs can be compared byte for byte (modulo runtimes).

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace entkit {

struct ClaimRecord {
  std::string id;
  int criterion = 0;  // acceptance criterion number; 0 marks meta claims
  std::string expected;
  double computed = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  double runtime_seconds = 0.0;
  std::string details;  // serialized JSON object with supporting data
};

struct ReproductionConfig {
  std::uint64_t seed = 1;
  std::size_t restarts = 64;
  std::size_t threads = 1;
};

struct ReportDocument {
  std::string tool_version;
  std::uint64_t seed = 1;
  std::size_t restarts = 64;
  std::size_t threads = 1;
  std::vector<ClaimRecord> claims;
  double total_seconds = 0.0;
  bool all_pass = false;
};

ReportDocument run_reproduction(const ReproductionConfig& cfg = {});

// Serialized document; with include_runtimes off, per-claim and total times
// are omitted so output is byte-identical across runs at a fixed seed.
std::string report_json(const ReportDocument& doc,
                        bool include_runtimes = true);
void write_report(const ReportDocument& doc, const std::string& path,
                  bool include_runtimes = true);

}  // namespace entkit
