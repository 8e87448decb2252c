#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "entkit/selfcheck.hpp"

using namespace entkit;

TEST_CASE("randomized property suites hold at two seeds") {
  for (const std::uint64_t seed : {1ull, 2026ull}) {
    const auto reports = run_property_suites(seed, 120);
    REQUIRE(reports.size() >= 15);
    for (const auto& r : reports) {
      INFO("suite ", r.name, " seed ", seed, " worst ", r.worst,
           " tolerance ", r.tolerance);
      CHECK(r.pass);
      CHECK(r.worst <= r.tolerance);
      CHECK(r.instances >= 2);
    }
  }
}
