#include <cstdio>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "twjscc/converse.hpp"
#include "twjscc/hybrid.hpp"
#include "twjscc/info.hpp"
#include "twjscc/model_io.hpp"
#include "twjscc/parallel.hpp"
#include "twjscc/rd.hpp"
#include "twjscc/region.hpp"
#include "twjscc/simulate.hpp"
#include "twjscc/twc_region.hpp"
#include "twjscc/wyner_ziv.hpp"

namespace {

using nlohmann::json;
using namespace twjscc;

void emit(const std::string& out_path, const std::string& content) {
  if (out_path.empty() || out_path == "-")
    std::cout << content;
  else
    write_file(out_path, content);
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i)
    g[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  g.back() = hi;
  return g;
}

RateRatio parse_rate(const std::string& text) {
  int k = 0, n = 0;
  if (std::sscanf(text.c_str(), "%d/%d", &k, &n) != 2 || k < 1 || n < 1)
    throw CLI::ValidationError("--rate", "expected K/N with positive integers");
  return {k, n};
}

json region_json(const RegionBoundary& region) {
  json j;
  j["points"] = json::array();
  for (const Point2& p : region.points) j["points"].push_back({p.x, p.y});
  j["hull"] = json::array();
  for (const Point2& p : region.hull) j["hull"].push_back({p.x, p.y});
  return j;
}

json report_json(const AchievabilityReport& rep) {
  return json{{"lhs1", rep.lhs1},          {"rhs1", rep.rhs1},
              {"lhs2", rep.lhs2},          {"rhs2", rep.rhs2},
              {"d1", rep.d1},              {"d2", rep.d2},
              {"feasible1", rep.feasible1}, {"feasible2", rep.feasible2},
              {"feasible", rep.feasible()}, {"margin", rep.margin}};
}

// The worked binary example: sources uniform on {(0,0),(0,1),(1,1)}, user 1
// heard through an AND channel, user 2 through an additive channel with
// crossover 0.05, Hamming distortion both ways.
Model example1_model() {
  const double t = 1.0 / 3.0;
  JointSourcePMF src(2, 2, {t, t, 0.0, t});
  const double eps = 0.05;
  std::vector<double> trans(16, 0.0);
  for (std::size_t x1 = 0; x1 < 2; ++x1) {
    for (std::size_t x2 = 0; x2 < 2; ++x2) {
      const std::size_t y2 = x1 & x2;
      for (std::size_t z = 0; z < 2; ++z) {
        const std::size_t y1 = x1 ^ x2 ^ z;
        trans[((x1 * 2 + x2) * 2 + y1) * 2 + y2] += z ? eps : 1 - eps;
      }
    }
  }
  return Model{std::move(src), TwoWayChannel(2, 2, 2, 2, std::move(trans)),
               DistortionMatrix::hamming(2), DistortionMatrix::hamming(2)};
}

// Uncoded direction 1->2; direction 2->1 separate coding with U2 = (V2, W2),
// V2 uniform and independent, W2 = S2, X2 = V2.  Terminal 2 reads S1 off the
// AND channel when it sent V2 = 1 and falls back to the best guess under S2.
HybridScheme example1_mixed_scheme() {
  HybridScheme sch;
  sch.pu1_s1 = CondPMF::constant_output(2, 1, 0);
  sch.pu2_s2 = CondPMF(2, 4);
  sch.pu2_s2.set_row(0, std::vector<double>{0.5, 0.0, 0.5, 0.0});
  sch.pu2_s2.set_row(1, std::vector<double>{0.0, 0.5, 0.0, 0.5});
  sch.f1 = {0, 1};
  sch.f2.resize(8);
  for (std::size_t u2 = 0; u2 < 4; ++u2)
    for (std::size_t s2 = 0; s2 < 2; ++s2) sch.f2[u2 * 2 + s2] = u2 / 2;
  sch.g1.resize(4 * 1 * 2 * 2);
  for (std::size_t u2 = 0; u2 < 4; ++u2)
    for (std::size_t k = 0; k < 4; ++k) sch.g1[u2 * 4 + k] = u2 % 2;
  sch.g2.resize(1 * 4 * 2 * 2);
  for (std::size_t u2 = 0; u2 < 4; ++u2)
    for (std::size_t s2 = 0; s2 < 2; ++s2)
      for (std::size_t y2 = 0; y2 < 2; ++y2)
        sch.g2[(u2 * 2 + s2) * 2 + y2] = (u2 / 2 == 1) ? y2 : 0;
  return sch;
}

struct CurveOpts {
  std::string model_path, out;
  std::size_t grid = 33;
  int source = 1;
  int restarts = 8;
  std::uint64_t seed = 1;
  std::size_t threads = 0;
};

void add_curve_flags(CLI::App* cmd, CurveOpts& o) {
  cmd->add_option("--model", o.model_path, "model JSON path")->required();
  cmd->add_option("--out", o.out, "output CSV path (default stdout)");
  cmd->add_option("--grid", o.grid, "number of distortion grid points")
      ->check(CLI::Range(std::size_t{2}, std::size_t{100000}));
  cmd->add_option("--source", o.source, "which source to compress (1 or 2)")
      ->check(CLI::Range(1, 2));
}

int run_curve(const CurveOpts& o, int kind) {  // 0 rd, 1 cond, 2 wz
  const Model m = load_model(o.model_path);
  const SourceSelect which =
      o.source == 1 ? SourceSelect::kFirst : SourceSelect::kSecond;
  const DistortionMatrix& dm = o.source == 1 ? m.distortion1 : m.distortion2;
  RDCurve curve;
  if (kind == 0) {
    const ProbVec marg =
        o.source == 1 ? m.source.marginal1() : m.source.marginal2();
    const auto grid = linspace(0, rd_max_distortion(marg, dm), o.grid);
    curve = rd_curve(marg, dm, grid);
  } else {
    const auto grid = linspace(
        0, conditional_rd_max_distortion(m.source, dm, which), o.grid);
    if (kind == 1) {
      curve = conditional_rd_curve(m.source, dm, grid, which);
    } else {
      curve.points.reserve(grid.size());
      for (double target : grid) {
        const WZResult r = wz_rd(m.source, dm, target, o.restarts, o.seed,
                                 which, effective_thread_count(o.threads));
        curve.points.push_back({target, r.rate, 0.0});
      }
    }
  }
  emit(o.out, curve_to_csv(curve));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "finite-alphabet tools for lossy transmission of correlated sources "
      "over two-way channels"};
  app.require_subcommand(1);
  int rc = 0;

  CurveOpts rd_opts, cond_opts, wz_opts;
  auto* c_rd = app.add_subcommand("rd", "standard rate-distortion curve");
  add_curve_flags(c_rd, rd_opts);
  c_rd->callback([&] { rc = run_curve(rd_opts, 0); });

  auto* c_cond =
      app.add_subcommand("cond-rd", "conditional rate-distortion curve");
  add_curve_flags(c_cond, cond_opts);
  c_cond->callback([&] { rc = run_curve(cond_opts, 1); });

  auto* c_wz = app.add_subcommand(
      "wz-rd", "Wyner-Ziv rate-distortion curve (upper estimates)");
  add_curve_flags(c_wz, wz_opts);
  c_wz->add_option("--restarts", wz_opts.restarts, "solver restarts")
      ->check(CLI::PositiveNumber);
  c_wz->add_option("--seed", wz_opts.seed, "solver seed");
  c_wz->add_option("--threads", wz_opts.threads,
                   "worker cap (0 = TWJSCC_THREADS or all cores)");
  c_wz->callback([&] { rc = run_curve(wz_opts, 2); });

  struct {
    std::string model_path, out, bound = "both";
    std::size_t resolution = 17;
    int restarts = 8;
    std::uint64_t seed = 1;
    double tol = 1e-2;
  } cap;
  auto* c_cap =
      app.add_subcommand("capacity", "capacity inner/outer bound regions");
  c_cap->add_option("--model", cap.model_path, "model JSON path")->required();
  c_cap->add_option("--out", cap.out, "output CSV path (default stdout)");
  c_cap->add_option("--bound", cap.bound, "inner, outer, or both")
      ->check(CLI::IsMember({"inner", "outer", "both"}));
  c_cap->add_option("--resolution", cap.resolution, "input simplex grid")
      ->check(CLI::Range(std::size_t{2}, std::size_t{4096}));
  c_cap->add_option("--restarts", cap.restarts, "outer-bound climb restarts")
      ->check(CLI::PositiveNumber);
  c_cap->add_option("--seed", cap.seed, "outer-bound climb seed");
  c_cap->add_option("--tol", cap.tol, "coincidence tolerance")
      ->check(CLI::PositiveNumber);
  c_cap->callback([&] {
    const Model m = load_model(cap.model_path);
    if (cap.bound == "inner") {
      emit(cap.out, region_to_csv(inner_region(m.channel, cap.resolution)));
      return;
    }
    if (cap.bound == "outer") {
      emit(cap.out, region_to_csv(outer_region(m.channel, cap.resolution,
                                               cap.restarts, cap.seed)));
      return;
    }
    const RegionBoundary inner = inner_region(m.channel, cap.resolution);
    const RegionBoundary outer =
        outer_region(m.channel, cap.resolution, cap.restarts, cap.seed);
    std::string csv = "kind,x,y\n";
    auto rows = [&](const char* prefix, const RegionBoundary& r) {
      for (const Point2& p : r.points)
        csv += std::string(prefix) + "_point," + format_double(p.x) + "," +
               format_double(p.y) + "\n";
      for (const Point2& p : r.hull)
        csv += std::string(prefix) + "_hull," + format_double(p.x) + "," +
               format_double(p.y) + "\n";
    };
    rows("inner", inner);
    rows("outer", outer);
    emit(cap.out, csv);
    const double gap = hausdorff_gap(inner.hull, outer.hull);
    std::cout << "coincidence gap: " << format_double(gap)
              << (gap <= cap.tol ? " (bounds coincide within tol)\n"
                                 : " (bounds differ beyond tol)\n");
  });

  struct {
    std::string model_path, scheme_path, out;
    std::vector<double> target;
    std::size_t budget = 2000;
    std::uint64_t seed = 1;
    std::size_t threads = 0;
  } hyb;
  auto* c_hyb = app.add_subcommand(
      "hybrid", "evaluate a scheme file or search for a target distortion");
  c_hyb->add_option("--model", hyb.model_path, "model JSON path")->required();
  c_hyb->add_option("--out", hyb.out, "output JSON path (default stdout)");
  c_hyb->add_option("--scheme", hyb.scheme_path, "scheme JSON path");
  c_hyb->add_option("--target", hyb.target, "target distortion pair D1,D2")
      ->delimiter(',')
      ->expected(2);
  c_hyb->add_option("--budget", hyb.budget, "search evaluation budget")
      ->check(CLI::PositiveNumber);
  c_hyb->add_option("--seed", hyb.seed, "search seed");
  c_hyb->add_option("--threads", hyb.threads,
                    "worker cap (0 = TWJSCC_THREADS or all cores)");
  c_hyb->callback([&] {
    const Model m = load_model(hyb.model_path);
    json j;
    bool feasible = false;
    if (!hyb.scheme_path.empty()) {
      const HybridScheme sch = load_scheme(hyb.scheme_path);
      const AchievabilityReport rep =
          evaluate_scheme(m.source, m.channel, sch, m.distortion1,
                          m.distortion2);
      j = report_json(rep);
      feasible = rep.feasible();
      if (hyb.target.size() == 2) {
        const bool meets = rep.d1 <= hyb.target[0] + 1e-9 &&
                           rep.d2 <= hyb.target[1] + 1e-9;
        j["meetsTarget"] = meets;
        feasible = feasible && meets;
      }
    } else if (hyb.target.size() == 2) {
      const SearchOutcome res = search_hybrid(
          m.source, m.channel, m.distortion1, m.distortion2,
          {hyb.target[0], hyb.target[1]}, hyb.budget, hyb.seed,
          effective_thread_count(hyb.threads));
      feasible = res.feasible;
      j["report"] = report_json(res.report);
      j["feasible"] = res.feasible;
      j["evaluations"] = res.evaluations;
      j["budgetExhausted"] = res.budget_exhausted;
      j["scheme"] = json::parse(scheme_to_json(res.scheme));
    } else {
      throw CLI::ValidationError("hybrid",
                                 "supply --scheme or --target D1,D2");
    }
    emit(hyb.out, j.dump(2) + "\n");
    rc = feasible ? 0 : 3;
  });

  struct {
    std::string model_path, out, rate = "1/1";
    std::size_t grid = 33;
    double tol = 5e-3;
    int restarts = 8;
    std::uint64_t seed = 1;
  } reg;
  auto* c_reg = app.add_subcommand(
      "region", "distortion outer bound, SSCC inner bound, hypothesis flags");
  c_reg->add_option("--model", reg.model_path, "model JSON path")->required();
  c_reg->add_option("--out", reg.out, "output JSON path (default stdout)");
  c_reg->add_option("--rate", reg.rate, "source symbols per channel use, K/N");
  c_reg->add_option("--grid", reg.grid, "distortion grid points")
      ->check(CLI::Range(std::size_t{2}, std::size_t{4096}));
  c_reg->add_option("--tol", reg.tol, "hypothesis tolerance in bits")
      ->check(CLI::PositiveNumber);
  c_reg->add_option("--restarts", reg.restarts, "Wyner-Ziv solver restarts")
      ->check(CLI::PositiveNumber);
  c_reg->add_option("--seed", reg.seed, "solver seed");
  c_reg->callback([&] {
    const Model m = load_model(reg.model_path);
    const DistortionRegionReport rep = theorem3_region(
        m.source, m.channel, m.distortion1, m.distortion2,
        parse_rate(reg.rate), reg.tol, reg.grid, reg.restarts, reg.seed);
    json j;
    j["outer"] = region_json(rep.outer);
    j["innerSSCC"] = region_json(rep.inner_sscc);
    j["hypothesisFlags"] = {{"wzEqualsCond1", rep.flags.wz_equals_cond1},
                            {"wzEqualsCond2", rep.flags.wz_equals_cond2},
                            {"boundsCoincide", rep.flags.bounds_coincide},
                            {"gapWz1", rep.flags.gap_wz1},
                            {"gapWz2", rep.flags.gap_wz2},
                            {"gapBounds", rep.flags.gap_bounds}};
    if (rep.exact)
      j["exact"] = region_json(*rep.exact);
    else
      j["exact"] = nullptr;
    emit(reg.out, j.dump(2) + "\n");
  });

  struct {
    std::string out, tally;
    std::uint64_t samples = 1000000;
    std::uint64_t seed = 1;
    std::size_t threads = 0;
  } ex1;
  auto* c_ex1 = app.add_subcommand(
      "example1", "canned end-to-end report on the worked binary example");
  c_ex1->add_option("--out", ex1.out, "output JSON path (default stdout)");
  c_ex1->add_option("--tally", ex1.tally,
                    "also write raw sample counts as s1,s2,y1,y2,count CSV");
  c_ex1->add_option("--samples", ex1.samples,
                    "Monte Carlo sample count (0 skips sampling)");
  c_ex1->add_option("--seed", ex1.seed, "Monte Carlo seed");
  c_ex1->add_option("--threads", ex1.threads,
                    "worker cap (0 = TWJSCC_THREADS or all cores)");
  c_ex1->callback([&] {
    const Model m = example1_model();
    json j;
    j["model"] = json::parse(model_to_json(m));
    j["seed"] = ex1.seed;
    j["samples"] = ex1.samples;

    const HybridScheme uncoded = make_uncoded(
        m.source, m.channel, DecoderRule::kMap, m.distortion1, m.distortion2);
    const auto [e1, e2] = exact_distortion(m.source, m.channel, uncoded,
                                           m.distortion1, m.distortion2);
    const bool ok_exact =
        std::abs(e1 - 0.0) <= 1e-12 && std::abs(e2 - 1.0 / 30.0) <= 1e-12;
    j["uncoded"] = {{"exactD1", e1}, {"exactD2", e2}};

    bool ok_mc = true;
    if (ex1.samples > 0) {
      std::vector<std::uint64_t> tally;
      const SimResult sim = monte_carlo(
          m.source, m.channel, uncoded, m.distortion1, m.distortion2,
          ex1.samples, ex1.seed, effective_thread_count(ex1.threads),
          ex1.tally.empty() ? nullptr : &tally);
      ok_mc = sim.within_five_sigma;
      j["monteCarlo"] = {{"d1Hat", sim.d1_hat},
                         {"d2Hat", sim.d2_hat},
                         {"stderr1", sim.stderr1},
                         {"stderr2", sim.stderr2},
                         {"within5Sigma", sim.within_five_sigma}};
      if (!ex1.tally.empty()) {
        std::string csv = "s1,s2,y1,y2,count\n";
        const auto [n1, n2] = std::pair{m.source.n1(), m.source.n2()};
        const auto [ny1, ny2] = std::pair{m.channel.ny1(), m.channel.ny2()};
        for (std::size_t s1 = 0; s1 < n1; ++s1)
          for (std::size_t s2 = 0; s2 < n2; ++s2)
            for (std::size_t y1 = 0; y1 < ny1; ++y1)
              for (std::size_t y2 = 0; y2 < ny2; ++y2)
                csv += std::to_string(s1) + "," + std::to_string(s2) + "," +
                       std::to_string(y1) + "," + std::to_string(y2) + "," +
                       std::to_string(
                           tally[((s1 * n2 + s2) * ny1 + y1) * ny2 + y2]) +
                       "\n";
        write_file(ex1.tally, csv);
      }
    } else {
      j["monteCarlo"] = nullptr;
    }

    const AchievabilityReport mixed =
        evaluate_scheme(m.source, m.channel, example1_mixed_scheme(),
                        m.distortion1, m.distortion2);
    j["mixedScheme"] = report_json(mixed);

    // Separate coding needs H(S1|S2) and H(S2|S1) (both 2/3) under the two
    // channel rates simultaneously; sweep a product-input grid.
    const double lhs = entropy_bits(m.source.mass()) -
                       entropy_bits(m.source.marginal2().mass());
    double best_margin = -std::numeric_limits<double>::infinity();
    for (const auto& p1 : simplex_grid(2, 33)) {
      for (const auto& p2 : simplex_grid(2, 33)) {
        const RatePair r =
            inner_rate_point(m.channel, ProbVec(p1), ProbVec(p2));
        best_margin =
            std::max(best_margin, std::min(r.r1 - lhs, r.r2 - lhs));
      }
    }
    const bool ok_sscc = best_margin < -1e-9;
    j["ssccImpossibility"] = {{"conditionalEntropy", lhs},
                              {"bestMargin", best_margin},
                              {"impossible", ok_sscc}};

    const RegionBoundary inner = inner_region(m.channel);
    const RegionBoundary outer = outer_region(m.channel);
    const double gap = hausdorff_gap(inner.hull, outer.hull);
    bool ok_cap = true;
    for (const Point2& v : inner.hull)
      ok_cap = ok_cap && region_contains(outer, v, 1e-9);
    j["capacity"] = {{"gap", gap}, {"innerWithinOuter", ok_cap}};

    j["assertions"] = {{"uncodedExact", ok_exact},
                       {"monteCarloWithin5Sigma", ok_mc},
                       {"mixedSchemeFeasible", mixed.feasible()},
                       {"ssccImpossible", ok_sscc},
                       {"capacityInnerWithinOuter", ok_cap}};
    emit(ex1.out, j.dump(2) + "\n");
    rc = (ok_exact && ok_mc && mixed.feasible() && ok_sscc && ok_cap) ? 0 : 3;
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const ConvergenceError& e) {
    std::cerr << json{{"error", e.what()},
                      {"class", "convergence"},
                      {"lastDistortion", e.last_iterate.distortion},
                      {"lastRate", e.last_iterate.rate}}
                     .dump()
              << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << json{{"error", e.what()}, {"class", "numerical"}}.dump()
              << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << json{{"error", e.what()}, {"class", "usage"}}.dump() << "\n";
    return 1;
  }
  return rc;
}
