#include "entkit/report.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <stdexcept>

#include <json.hpp>

#include "entkit/assistance.hpp"
#include "entkit/ensembles.hpp"
#include "entkit/locc.hpp"
#include "entkit/measures.hpp"
#include "entkit/qmath.hpp"
#include "entkit/rng.hpp"
#include "entkit/selfcheck.hpp"
#include "entkit/states.hpp"
#include "entkit/version.hpp"

namespace entkit {

namespace {

using nlohmann::json;

// Pinned outputs of the two deterministic scans: regression constants from
// the first verified run. The span scan has no random input at the default
// grid; the two-copy scan is pinned at seed 1 only.
constexpr double kSpanDeficitReference = 0.0838045251941;
constexpr double kTwoCopyDeficitReference = 0.0447308338576;

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                       start)
      .count();
}

void run_claim(ReportDocument& doc, const char* id, int criterion,
               const char* expected, double tolerance,
               const std::function<void(ClaimRecord&)>& fill) {
  ClaimRecord c;
  c.id = id;
  c.criterion = criterion;
  c.expected = expected;
  c.tolerance = tolerance;
  const auto start = std::chrono::steady_clock::now();
  try {
    fill(c);
  } catch (const std::exception& e) {
    c.pass = false;
    c.details = json{{"error", e.what()}}.dump();
  }
  c.runtime_seconds = seconds_since(start);
  doc.claims.push_back(std::move(c));
}

json leaf_json(const std::vector<BranchOutcome>& leaves, const Cut& cut,
               const RootMeasure& measure) {
  json out = json::array();
  for (const auto& leaf : leaves) {
    BranchOutcome alone = leaf;
    alone.probability = 1.0;
    out.push_back({{"transcript", leaf.transcript},
                   {"probability", leaf.probability},
                   {"value", average_final_entanglement({alone}, cut,
                                                        measure)}});
  }
  return out;
}

json certificate_json(const Ensemble& ens, const RootMeasure& measure,
                      std::size_t dim_a, std::size_t dim_b) {
  json out = json::array();
  for (const auto& [weight, state] : ens.entries())
    out.push_back({{"weight", weight},
                   {"value", measure.evaluate(state, dim_a, dim_b)}});
  return out;
}

double spread16(const std::array<std::array<double, 4>, 4>& table) {
  double lo = table[0][0], hi = table[0][0];
  for (const auto& row : table)
    for (double v : row) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  return hi - lo;
}

const ClaimRecord& find_claim(const ReportDocument& doc, const char* id) {
  for (const auto& c : doc.claims)
    if (c.id == id) return c;
  throw std::logic_error(std::string("claim not recorded yet: ") + id);
}

}  // namespace

ReportDocument run_reproduction(const ReproductionConfig& cfg) {
  ReportDocument doc;
  doc.tool_version = kVersion;
  doc.seed = cfg.seed;
  doc.restarts = cfg.restarts;
  doc.threads = cfg.threads;
  const auto started = std::chrono::steady_clock::now();

  const RootMeasure& entropy = root_measure("entropy");
  const Cut cut_ab = parse_cut("A:B");

  run_claim(doc, "eoc_phi", 1, "2 within 1e-9", 1e-9, [&](ClaimRecord& c) {
    const auto leaves =
        run_protocol(make_phi(), collaboration_protocol_phi());
    c.computed = average_final_entanglement(leaves, cut_ab, entropy);
    c.pass = std::abs(c.computed - 2.0) <= c.tolerance;
    c.details = json{{"leaves", leaf_json(leaves, cut_ab, entropy)}}.dump();
  });

  run_claim(doc, "span_min_deficit", 2,
            "positive, matching the pinned scan value within 1e-6", 1e-6,
            [&](ClaimRecord& c) {
              const SpanScanResult res = span_scan();
              c.computed = res.min_deficit;
              const bool positive = res.min_deficit > 0.0;
              const bool pinned =
                  std::abs(res.min_deficit - kSpanDeficitReference) <=
                  c.tolerance;
              c.pass = positive && pinned;
              c.details = json{{"x", {res.x.real(), res.x.imag()}},
                               {"y", {res.y.real(), res.y.imag()}},
                               {"grid_samples", res.samples},
                               {"reference", kSpanDeficitReference}}
                              .dump();
            });

  run_claim(doc, "eoa_phi", 2,
            "at least 1.9502050593046014 and strictly below 2", 1e-3,
            [&](ClaimRecord& c) {
              const DensityOperator rho = reduce_to(make_phi(), {"A", "B"});
              EoaConfig ecfg;
              ecfg.restarts = cfg.restarts;
              ecfg.seed = cfg.seed;
              ecfg.threads = cfg.threads;
              const EoaResult res =
                  eoa_optimize(rho.matrix(), 8, 4, {make_u(0), make_u(1)},
                               entropy, ecfg);
              c.computed = res.value;
              c.pass = res.value >= 1.9512050593046014 - c.tolerance &&
                       res.value < 2.0;
              c.details =
                  json{{"upper_bound", res.upper_bound},
                       {"restarts", res.restarts_used},
                       {"certificate",
                        certificate_json(res.certificate, entropy, 8, 4)}}
                      .dump();
            });

  run_claim(doc, "eoc_exceeds_eoa", 3,
            "collaboration beats assistance by at least 1e-3", 1e-3,
            [&](ClaimRecord& c) {
              const ClaimRecord& eoc = find_claim(doc, "eoc_phi");
              const ClaimRecord& eoa = find_claim(doc, "eoa_phi");
              c.computed = eoc.computed - eoa.computed;
              c.pass = eoc.pass && eoa.pass && c.computed >= c.tolerance;
              c.details = json{{"collaboration", eoc.computed},
                               {"assistance", eoa.computed}}
                              .dump();
            });

  run_claim(doc, "eoa_mixed_2qubit", 4,
            "1 within 1e-6 via four near-Bell members", 1e-6,
            [&](ClaimRecord& c) {
              Mat rho = Mat::identity(4);
              rho *= cplx{0.25, 0.0};
              EoaConfig ecfg;
              ecfg.restarts = cfg.restarts;
              ecfg.seed = cfg.seed;
              ecfg.threads = cfg.threads;
              ecfg.max_ensemble_size = 4;
              const EoaResult res = eoa_optimize(
                  rho, 2, 2, canonical_vectors(rho), entropy, ecfg);
              c.computed = res.value;

              double worst_deficit = 0.0;
              for (const auto& [w, state] : res.certificate.entries()) {
                const auto p = schmidt(state, 2, 2).probabilities;
                worst_deficit =
                    std::max(worst_deficit, p.front() - p.back());
              }
              c.pass = std::abs(res.value - 1.0) <= c.tolerance &&
                       res.certificate.entries().size() == 4 &&
                       worst_deficit <= 1e-2;
              c.details =
                  json{{"members", res.certificate.entries().size()},
                       {"worst_member_deficit", worst_deficit},
                       {"certificate",
                        certificate_json(res.certificate, entropy, 2, 2)}}
                      .dump();
            });

  run_claim(doc, "eoa_product", 4, "0 within 1e-9", 1e-9,
            [&](ClaimRecord& c) {
              const Vec psi{cplx{1.0, 0.0}, {}, {}, {}};
              EoaConfig ecfg;
              ecfg.restarts = 4;
              ecfg.seed = cfg.seed;
              const EoaResult res = eoa_optimize(
                  outer(psi), 2, 2, canonical_vectors(outer(psi)), entropy,
                  ecfg);
              c.computed = res.value;
              c.pass = std::abs(res.value) <= c.tolerance;
            });

  run_claim(doc, "mixed_eoc", 5, "1 within 1e-9", 1e-9, [&](ClaimRecord& c) {
    const auto leaves =
        run_protocol(make_mixed_example(), collaboration_protocol_mixed());
    c.computed = average_final_entanglement(leaves, cut_ab, entropy);
    c.pass = std::abs(c.computed - 1.0) <= c.tolerance;
    c.details = json{{"leaves", leaf_json(leaves, cut_ab, entropy)}}.dump();
  });

  {
    // One sampling pass feeds both helper-outcome claims.
    std::size_t min_support = 4;
    double max_purity = 0.0;
    bool sampled = false;
    const std::size_t samples = 10000;
    auto ensure_sampling = [&] {
      if (sampled) return;
      sampled = true;
      for (int i = 1; i <= 4; ++i) {
        const auto p = charlie_weight_support(outer(make_mixed_flag(i)));
        min_support = std::min(min_support, p.support);
        max_purity = std::max(max_purity, p.purity);
      }
      Prng rng = Prng::streamed(cfg.seed, 7001);
      for (std::size_t i = 0; i < samples; ++i) {
        const auto p = charlie_weight_support(random_psd(rng, 2));
        min_support = std::min(min_support, p.support);
        max_purity = std::max(max_purity, p.purity);
      }
    };

    run_claim(doc, "mixed_charlie_support_min", 5,
              "every helper outcome keeps at least 3 components", 0.0,
              [&](ClaimRecord& c) {
                ensure_sampling();
                c.computed = static_cast<double>(min_support);
                c.pass = min_support >= 3;
                c.details = json{{"samples", samples + 4}}.dump();
              });

    run_claim(doc, "mixed_charlie_purity_max", 5,
              "every helper outcome stays below purity 1/2", 0.5,
              [&](ClaimRecord& c) {
                ensure_sampling();
                c.computed = max_purity;
                c.pass = max_purity < c.tolerance;
                c.details = json{{"samples", samples + 4}}.dump();
              });
  }

  run_claim(doc, "ncopy_lambda_max_err", 6,
            "analytic doubled spectrum matches direct within 1e-9", 1e-9,
            [&](ClaimRecord& c) {
              Prng rng = Prng::streamed(cfg.seed, 7002);
              double worst = 0.0;
              for (int k = 0; k < 1000; ++k) {
                std::vector<cplx> coeffs(4);
                double n = 0.0;
                for (cplx& x : coeffs) {
                  x = rng.complex_normal();
                  n += std::norm(x);
                }
                for (cplx& x : coeffs) x /= std::sqrt(n);

                const NCopyCombo combo = make_ncopy_combo(2, coeffs);
                std::vector<double> analytic;
                for (const auto& row : ncopy_lambda_analytic(combo))
                  analytic.insert(analytic.end(), row.begin(), row.end());
                std::sort(analytic.rbegin(), analytic.rend());

                const auto direct =
                    schmidt(assemble_two_copy(combo.coeffs), 64, 16)
                        .probabilities;
                for (std::size_t i = 0; i < 16; ++i)
                  worst = std::max(worst,
                                   std::abs(analytic[i] - direct[i]));
              }
              c.computed = worst;
              c.pass = worst <= c.tolerance;
              c.details = json{{"samples", 1000}}.dump();
            });

  run_claim(doc, "ncopy_equal_lambda_conditions", 6,
            "violating any flatness condition leaves the doubled spectrum "
            "uneven (spread above 1e-12)",
            1e-12, [&](ClaimRecord& c) {
              const double s = 1.0 / std::sqrt(2.0);
              json d;

              // Cross term alive at the combo level.
              const auto eta_combo = ncopy_lambda_analytic(make_ncopy_combo(
                  2, {cplx{s, 0.0}, {}, {}, cplx{s, 0.0}}));
              d["combo_cross_term"] = spread16(eta_combo);

              // Unequal block weights at the combo level.
              const auto block_combo = ncopy_lambda_analytic(
                  make_ncopy_combo(2, {cplx{1.0, 0.0}, {}, {}, {}}));
              d["combo_unequal_blocks"] = spread16(block_combo);

              // Remaining single-condition violations are not reachable by
              // any unit combo (a vanishing cross term with equal blocks
              // forces the trivial table), so they are probed directly on
              // the row map with consistent synthetic inputs.
              std::array<std::array<double, 4>, 4> synth{};
              for (std::size_t row = 0; row < 4; ++row)
                synth[row] = lambda_row(0.125, 0.125, cplx{0.0625, 0.0});
              d["synthetic_cross_real"] = spread16(synth);
              for (std::size_t row = 0; row < 4; ++row)
                synth[row] = lambda_row(0.125, 0.125, cplx{0.0, 0.0625});
              d["synthetic_cross_imag"] = spread16(synth);

              const double t[4] = {0.4, 0.3, 0.2, 0.1};
              for (std::size_t row = 0; row < 4; ++row)
                synth[row] = lambda_row(t[row], t[row], cplx{0.0, 0.0});
              d["synthetic_row_variation"] = spread16(synth);

              double min_spread = 1.0;
              for (const auto& [key, value] : d.items())
                min_spread = std::min(min_spread, value.get<double>());
              c.computed = min_spread;
              c.pass = min_spread > c.tolerance;
              c.details = d.dump();
            });

  run_claim(doc, "span_closed_form_probes", 7,
            "probe deficits all positive and the printed closed form "
            "disagrees with the direct spectrum by more than 1e-6",
            1e-6, [&](ClaimRecord& c) {
              const double s = 1.0 / std::sqrt(2.0);
              const std::pair<cplx, cplx> probes[] = {
                  {cplx{1.0, 0.0}, cplx{0.0, 0.0}},
                  {cplx{0.0, 0.0}, cplx{1.0, 0.0}},
                  {cplx{s, 0.0}, cplx{s, 0.0}},
                  {cplx{s, 0.0}, cplx{0.0, s}},
              };
              json rows = json::array();
              double min_deficit = 1.0;
              double max_disc = 0.0;
              for (const auto& [x, y] : probes) {
                const auto direct = span_deficit_oracle(x, y);
                auto closed = span_probs_closed_form(x, y);
                double total = 0.0;
                for (double v : closed) total += v;
                for (double& v : closed) v /= total;
                std::sort(closed.rbegin(), closed.rend());

                double disc = 0.0;
                for (std::size_t i = 0; i < 4; ++i)
                  disc = std::max(disc, std::abs(direct[i] - closed[i]));
                min_deficit =
                    std::min(min_deficit, direct.front() - direct.back());
                max_disc = std::max(max_disc, disc);
                rows.push_back({{"x", {x.real(), x.imag()}},
                                {"y", {y.real(), y.imag()}},
                                {"direct", direct},
                                {"closed_form", closed},
                                {"discrepancy", disc}});
              }
              c.computed = max_disc;
              c.pass = min_deficit > 0.0 && max_disc > c.tolerance;
              c.details = json{{"probes", rows},
                               {"min_deficit", min_deficit}}
                              .dump();
            });

  run_claim(doc, "ncopy_min_deficit", 8,
            "positive; at seed 1 matching the pinned scan within 1e-6", 1e-6,
            [&](ClaimRecord& c) {
              const NCopyScanResult res =
                  ncopy_deficit_scan(2, 10000, cfg.seed);
              c.computed = res.min_deficit;
              const bool positive = res.min_deficit > 0.0;
              const bool pinned =
                  cfg.seed != 1 ||
                  std::abs(res.min_deficit - kTwoCopyDeficitReference) <=
                      c.tolerance;
              c.pass = positive && pinned;
              json coeffs = json::array();
              for (const cplx& x : res.coeffs)
                coeffs.push_back({x.real(), x.imag()});
              c.details = json{{"samples", res.samples},
                               {"coefficients", coeffs},
                               {"reference", kTwoCopyDeficitReference}}
                              .dump();
            });

  run_claim(doc, "property_suites", 9, "every property family passes", 0.0,
            [&](ClaimRecord& c) {
              const auto reports = run_property_suites(cfg.seed, 200);
              std::size_t passing = 0;
              json fams = json::array();
              for (const auto& r : reports) {
                passing += r.pass ? 1 : 0;
                fams.push_back({{"name", r.name},
                                {"instances", r.instances},
                                {"worst", r.worst},
                                {"tolerance", r.tolerance},
                                {"pass", r.pass}});
              }
              c.computed = static_cast<double>(passing);
              c.pass = passing == reports.size();
              c.details = json{{"families", fams},
                               {"total", reports.size()}}
                              .dump();
            });

  run_claim(doc, "runtime_budgets", 0,
            "protocol under 1 s, scans plus optimizer under 300 s, total "
            "under 600 s",
            600.0, [&](ClaimRecord& c) {
              const double protocol =
                  find_claim(doc, "eoc_phi").runtime_seconds;
              const double optimization =
                  find_claim(doc, "span_min_deficit").runtime_seconds +
                  find_claim(doc, "eoa_phi").runtime_seconds;
              double total = 0.0;
              for (const auto& claim : doc.claims)
                total += claim.runtime_seconds;
              c.computed = total;
              c.pass = protocol < 1.0 && optimization < 300.0 &&
                       total < 600.0;
              c.details = json{{"protocol_seconds", protocol},
                               {"optimization_seconds", optimization}}
                              .dump();
            });

  doc.total_seconds = seconds_since(started);
  doc.all_pass = std::all_of(doc.claims.begin(), doc.claims.end(),
                             [](const ClaimRecord& c) { return c.pass; });
  return doc;
}

std::string report_json(const ReportDocument& doc, bool include_runtimes) {
  json j;
  j["tool"] = {{"name", "entkit"}, {"version", doc.tool_version}};
  j["seed"] = doc.seed;
  j["restarts"] = doc.restarts;
  j["threads"] = doc.threads;
  j["claims"] = json::array();
  for (const auto& c : doc.claims) {
    json cj{{"id", c.id},
            {"criterion", c.criterion},
            {"expected", c.expected},
            {"computed", c.computed},
            {"tolerance", c.tolerance},
            {"pass", c.pass},
            {"details",
             c.details.empty() ? json::object() : json::parse(c.details)}};
    if (include_runtimes) cj["runtime_seconds"] = c.runtime_seconds;
    j["claims"].push_back(std::move(cj));
  }
  if (include_runtimes) j["total_seconds"] = doc.total_seconds;
  j["all_pass"] = doc.all_pass;
  return j.dump(2) + "\n";
}

void write_report(const ReportDocument& doc, const std::string& path,
                  bool include_runtimes) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << report_json(doc, include_runtimes);
}

}  // namespace entkit
