#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>

#include "entkit/assistance.hpp"
#include "entkit/ensembles.hpp"
#include "entkit/io.hpp"
#include "entkit/locc.hpp"
#include "entkit/measures.hpp"
#include "entkit/report.hpp"
#include "entkit/states.hpp"
#include "entkit/version.hpp"

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string join(const std::vector<std::string>& parts, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

struct ReproduceArgs {
  std::string out = "report.json";
  std::uint64_t seed = 1;
  std::size_t restarts = 64;
  std::size_t threads = 1;
};

int cmd_reproduce(const ReproduceArgs& args) {
  entkit::ReproductionConfig cfg;
  cfg.seed = args.seed;
  cfg.restarts = args.restarts;
  cfg.threads = args.threads;
  const entkit::ReportDocument doc = entkit::run_reproduction(cfg);
  entkit::write_report(doc, args.out);

  for (const auto& c : doc.claims)
    std::printf("[%s] %-34s criterion=%d computed=%s (%s)\n",
                c.pass ? "PASS" : "FAIL", c.id.c_str(), c.criterion,
                fmt(c.computed).c_str(), c.expected.c_str());
  std::printf("report written to %s (%s s)\n", args.out.c_str(),
              fmt(doc.total_seconds).c_str());
  std::puts(doc.all_pass ? "all claims pass" : "some claims FAILED");
  return doc.all_pass ? 0 : 1;
}

struct MeasureArgs {
  std::string state;
  std::string cut;
  std::string measure = "entropy";
  bool renormalize = false;
};

int cmd_measure(const MeasureArgs& args) {
  const entkit::AnyState any = entkit::load_state(args.state,
                                                  args.renormalize);
  if (!std::holds_alternative<entkit::PureState>(any)) {
    std::fprintf(stderr, "error: %s is a mixed state; this measure is "
                         "defined on pure states\n",
                 args.state.c_str());
    return 1;
  }
  const auto& psi = std::get<entkit::PureState>(any);
  const entkit::Cut cut = entkit::parse_cut(args.cut);
  const auto& measure = entkit::root_measure(args.measure);
  const auto [vec, dim_l, dim_r] = entkit::split_by_cut(psi, cut);
  std::printf("%s\n", fmt(measure.evaluate(vec, dim_l, dim_r)).c_str());
  return 0;
}

struct EoaArgs {
  std::string state;
  std::string helper = "C";
  std::string measure = "entropy";
  std::uint64_t seed = 1;
  std::size_t restarts = 64;
  std::size_t max_ensemble = 0;
  std::size_t refine_iters = 200;
  std::size_t threads = 1;
};

int cmd_eoa(const EoaArgs& args) {
  const entkit::AnyState any = entkit::load_state(args.state);
  entkit::EoaConfig cfg;
  cfg.restarts = args.restarts;
  cfg.max_ensemble_size = args.max_ensemble;
  cfg.seed = args.seed;
  cfg.refine_iters = args.refine_iters;
  cfg.threads = args.threads;
  const auto& measure = entkit::root_measure(args.measure);

  entkit::EoaResult res = [&] {
    if (std::holds_alternative<entkit::PureState>(any))
      return entkit::eoa_optimize(std::get<entkit::PureState>(any),
                                  args.helper, measure, cfg);
    const auto& rho = std::get<entkit::DensityOperator>(any);
    if (rho.parties().size() != 2)
      throw std::runtime_error(
          "mixed input must be bipartite; tripartite states must be pure");
    return entkit::eoa_optimize(rho.matrix(), rho.parties()[0].dim,
                                rho.parties()[1].dim,
                                entkit::canonical_vectors(rho.matrix()),
                                measure, cfg);
  }();

  std::printf("value %s\n", fmt(res.value).c_str());
  std::printf("upper_bound %s\n", fmt(res.upper_bound).c_str());
  std::printf("restarts %zu\n", res.restarts_used);
  for (const auto& entry : res.certificate.entries())
    std::printf("member weight=%s\n", fmt(entry.weight).c_str());
  return 0;
}

struct SimulateArgs {
  std::string state;
  std::string protocol;
  std::string cut;
  bool renormalize = false;
};

int cmd_simulate(const SimulateArgs& args) {
  const entkit::AnyState any = entkit::load_state(args.state,
                                                  args.renormalize);
  const entkit::Protocol proto = entkit::load_protocol(args.protocol);
  const std::vector<entkit::BranchOutcome> leaves =
      std::holds_alternative<entkit::PureState>(any)
          ? entkit::run_protocol(std::get<entkit::PureState>(any), proto)
          : entkit::run_protocol(std::get<entkit::DensityOperator>(any),
                                 proto);

  for (const auto& leaf : leaves)
    std::printf("leaf %-24s p=%s\n", join(leaf.transcript, " ").c_str(),
                fmt(leaf.probability).c_str());
  if (!args.cut.empty()) {
    const entkit::Cut cut = entkit::parse_cut(args.cut);
    const auto& measure = entkit::root_measure("entropy");
    std::printf("average %s\n",
                fmt(entkit::average_final_entanglement(leaves, cut,
                                                       measure)).c_str());
  }
  return 0;
}

struct ScanArgs {
  std::size_t grid = 512;
  std::size_t refine = 200;
  std::size_t ncopy = 0;
  std::size_t samples = 10000;
  std::uint64_t seed = 1;
};

int cmd_scan(const ScanArgs& args) {
  if (args.ncopy != 0) {
    const entkit::NCopyScanResult res =
        entkit::ncopy_deficit_scan(args.ncopy, args.samples, args.seed);
    std::printf("min_deficit %s over %zu samples\n",
                fmt(res.min_deficit).c_str(), res.samples);
    for (const entkit::cplx& c : res.coeffs)
      std::printf("coefficient %s %s\n", fmt(c.real()).c_str(),
                  fmt(c.imag()).c_str());
    return res.min_deficit > 0.0 ? 0 : 1;
  }

  entkit::SpanScanConfig cfg;
  cfg.grid_points = args.grid;
  cfg.refine_iters = args.refine;
  const entkit::SpanScanResult res = entkit::span_scan(cfg);
  std::printf("min_deficit %s over %zu samples\n",
              fmt(res.min_deficit).c_str(), res.samples);
  std::printf("at x=(%s, %s) y=(%s, %s)\n", fmt(res.x.real()).c_str(),
              fmt(res.x.imag()).c_str(), fmt(res.y.real()).c_str(),
              fmt(res.y.imag()).c_str());

  // Closed-form comparison table on fixed probes: the printed formula does
  // not match the direct spectrum, which is why the scan trusts the latter.
  const double s = 1.0 / std::sqrt(2.0);
  const std::pair<entkit::cplx, entkit::cplx> probes[] = {
      {{1.0, 0.0}, {0.0, 0.0}},
      {{0.0, 0.0}, {1.0, 0.0}},
      {{s, 0.0}, {s, 0.0}},
      {{s, 0.0}, {0.0, s}},
  };
  for (const auto& [x, y] : probes) {
    const auto direct = entkit::span_deficit_oracle(x, y);
    auto closed = entkit::span_probs_closed_form(x, y);
    double total = 0.0;
    for (double v : closed) total += v;
    for (double& v : closed) v /= total;
    std::sort(closed.rbegin(), closed.rend());
    std::printf("probe x=(%s, %s) y=(%s, %s)\n", fmt(x.real()).c_str(),
                fmt(x.imag()).c_str(), fmt(y.real()).c_str(),
                fmt(y.imag()).c_str());
    std::printf("  direct      %s %s %s %s\n", fmt(direct[0]).c_str(),
                fmt(direct[1]).c_str(), fmt(direct[2]).c_str(),
                fmt(direct[3]).c_str());
    std::printf("  closed_form %s %s %s %s\n", fmt(closed[0]).c_str(),
                fmt(closed[1]).c_str(), fmt(closed[2]).c_str(),
                fmt(closed[3]).c_str());
  }
  return res.min_deficit > 0.0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"entanglement measures, ensemble optimization, and "
               "collaboration protocols"};
  app.set_version_flag("--version", entkit::kVersion);
  app.require_subcommand(1);

  ReproduceArgs rep;
  CLI::App* reproduce =
      app.add_subcommand("reproduce", "run every headline claim and write "
                                      "a JSON report");
  reproduce->add_option("--out", rep.out, "report path");
  reproduce->add_option("--seed", rep.seed, "base random seed");
  reproduce->add_option("--restarts", rep.restarts, "optimizer restarts");
  reproduce->add_option("--threads", rep.threads, "optimizer threads");

  MeasureArgs meas;
  CLI::App* measure =
      app.add_subcommand("measure", "evaluate a pure-state measure across "
                                    "a cut");
  measure->add_option("--state", meas.state, "catalog name or JSON file")
      ->required();
  measure->add_option("--cut", meas.cut, "cut such as AB:C")->required();
  measure->add_option("--measure", meas.measure, "measure name");
  measure->add_flag("--renormalize", meas.renormalize,
                    "rescale an unnormalized input");

  EoaArgs eoa;
  CLI::App* eoa_cmd = app.add_subcommand(
      "eoa", "optimize the assisted entanglement over decompositions");
  eoa_cmd->add_option("--state", eoa.state, "catalog name or JSON file")
      ->required();
  eoa_cmd->add_option("--helper", eoa.helper,
                      "measuring party of a tripartite pure state");
  eoa_cmd->add_option("--measure", eoa.measure, "measure name");
  eoa_cmd->add_option("--seed", eoa.seed, "base random seed");
  eoa_cmd->add_option("--restarts", eoa.restarts, "optimizer restarts");
  eoa_cmd->add_option("--max-ensemble", eoa.max_ensemble,
                      "ensemble size cap (0 picks rank^2)");
  eoa_cmd->add_option("--refine-iters", eoa.refine_iters,
                      "compass sweeps per restart");
  eoa_cmd->add_option("--threads", eoa.threads, "worker threads");

  SimulateArgs sim;
  CLI::App* simulate =
      app.add_subcommand("simulate", "run a measurement protocol and list "
                                     "the branch outcomes");
  simulate->add_option("--state", sim.state, "catalog name or JSON file")
      ->required();
  simulate->add_option("--protocol", sim.protocol,
                       "protocol file or catalog name (phi, mixed)")
      ->required();
  simulate->add_option("--cut", sim.cut,
                       "also average the leaf entanglement across this cut");
  simulate->add_flag("--renormalize", sim.renormalize,
                     "rescale an unnormalized input");

  ScanArgs scan;
  CLI::App* scan_cmd = app.add_subcommand(
      "scan", "search the two-vector span (default) or random doubled "
              "combinations (--ncopy 2) for the flattest spectrum");
  scan_cmd->add_option("--grid", scan.grid, "span grid points per axis");
  scan_cmd->add_option("--refine", scan.refine, "refinement sweeps");
  scan_cmd->add_option("--ncopy", scan.ncopy,
                       "number of copies for the doubled-state scan");
  scan_cmd->add_option("--samples", scan.samples, "doubled-scan samples");
  scan_cmd->add_option("--seed", scan.seed, "doubled-scan seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*reproduce) return cmd_reproduce(rep);
    if (*measure) return cmd_measure(meas);
    if (*eoa_cmd) return cmd_eoa(eoa);
    if (*simulate) return cmd_simulate(sim);
    if (*scan_cmd) return cmd_scan(scan);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 2;
}
