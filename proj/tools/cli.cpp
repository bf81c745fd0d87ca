#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <memory>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "mtlab/errors.hpp"
#include "mtlab/functionals.hpp"
#include "mtlab/io.hpp"
#include "mtlab/kernels.hpp"
#include "mtlab/probes.hpp"
#include "mtlab/rearrange.hpp"

namespace mtlab::cli {
namespace {

using io::json;

struct Params {
  std::string in, out;
  int n = 2;
  int grid = 400;
  double beta = 1.0;
  double alpha = 0.0;
  double p = 2.0;
  double tol = 1e-9;
  double rmax = 5.0;
  double rmin = 1e-4;
  double r = 0.01;
  double eta = 0.01;
  double k = 0.0;
  double R = 0.5;
  int restarts = 20;
  std::uint64_t seed = 0;
  std::vector<double> alphas;
  std::string rule = "decade";
};

struct Context {
  std::string command;
  json config = json::object();
  json warnings = json::array();
  Params prm;
};

json to_json_vec(std::span<const double> v) { return std::vector<double>(v.begin(), v.end()); }

json report(const Context& ctx, json result) {
  return json{{"tool", "mtlab"},
              {"version", kVersion},
              {"command", ctx.command},
              {"config", ctx.config},
              {"seed", ctx.prm.seed},
              {"warnings", ctx.warnings},
              {"result", std::move(result)}};
}

void emit(const Context& ctx, const std::string& text, std::ostream& out) {
  if (ctx.prm.out.empty()) {
    out << text;
  } else {
    io::write_file(ctx.prm.out, text);
  }
}

std::shared_ptr<const RadialSpace> trumpet_or_input(const Context& ctx) {
  const Params& p = ctx.prm;
  if (!p.in.empty()) {
    auto s = std::make_shared<const RadialSpace>(io::space_from_json(io::read_file(p.in)));
    if (s->dimension() != p.n) fail_input("--n differs from the dimension stored in " + p.in);
    return s;
  }
  return std::make_shared<const RadialSpace>(trumpet_space(p.n, p.beta, p.rmax, p.grid));
}

// Trumpet reaching at least the given volume.
std::shared_ptr<const RadialSpace> covering_trumpet(const Params& p, double volume) {
  const Trumpet t = make_trumpet(p.n, p.beta);
  double r = 1.0;
  while (trumpet_ball_volume(t, r) < 1.01 * volume && r < 200.0) r *= 1.5;
  return std::make_shared<const RadialSpace>(trumpet_space(p.n, p.beta, r, p.grid));
}

io::GraphInput graph_with_values(const Context& ctx) {
  io::GraphInput g = io::graph_from_json(io::read_file(ctx.prm.in));
  if (!g.values) fail_input(ctx.prm.in + ": every vertex needs a value 'u'");
  return g;
}

json function_json(const RadialFunction& u) {
  return json{{"knots", to_json_vec(u.knots())}, {"values", to_json_vec(u.values())}};
}

json domination_json(const DominationReport& d) {
  return json{{"dominated", d.dominated}, {"capacityOk", d.capacityOk}, {"worstGap", d.worstGap},
              {"worstVolume", d.worstVolume}, {"checked", d.checked}};
}

json cmd_profile(Context& ctx) {
  auto s = trumpet_or_input(ctx);
  const ProfileTable table = profile_table(*s);
  const WindowedEstimate cone = cone_angle(*s);
  if (!cone.reliable) ctx.warnings.push_back("cone angle window spread " + std::to_string(cone.spread));
  const IsoInvariants inv = iso_invariants(table, {ctx.prm.n});
  return json{{"space", s->label()},
              {"coneAngle", cone.value},
              {"cheegerSlope", inv.cheegerSlope},
              {"isoDimension", inv.isoDimension},
              {"profile", io::to_json(table)}};
}

json cmd_synthesize(Context& ctx) {
  const ProfileTable table = io::profile_from_json(io::read_file(ctx.prm.in));
  const SynthesisResult res = synthesize_from_profile(table, ctx.prm.n);
  if (!res.asymptote.reliable) ctx.warnings.push_back("small-volume asymptote still drifting");
  return json{{"alpha", res.alpha}, {"coneAngle", res.coneAngle}, {"steps", res.steps},
              {"space", io::to_json(res.space)}};
}

json cmd_rearrange(Context& ctx) {
  const io::GraphInput g = graph_with_values(ctx);
  const DiscreteFunction u{g.space, *g.values};
  auto target = covering_trumpet(ctx.prm, g.space->total_measure());
  json result;
  const MedianResult med = median(u.measured());
  result["median"] = med.c;
  MeasuredFunction positive = u.measured();
  for (double& x : positive.values) x = std::max(x, 0.0);
  if (std::any_of(u.values.begin(), u.values.end(), [](double x) { return x < 0.0; })) {
    ctx.warnings.push_back("negative values clipped to 0 before rearranging");
  }
  const RadialFunction hat = decreasing_rearrangement(positive, target);
  result["target"] = target->label();
  result["rearranged"] = function_json(hat);
  const PolyaSzegoReport ps = polya_szego_check(DiscreteFunction{g.space, positive.values}, *target, ctx.prm.p);
  result["polyaSzego"] = {{"lhs", ps.lhs}, {"rhs", ps.rhs}, {"sourceCoarea", ps.sourceCoarea},
                          {"lhsInfinite", ps.lhsInfinite}, {"holds", ps.holds}};
  if (!ps.holds) ctx.warnings.push_back("rearranged energy exceeds the Cheeger energy");
  return result;
}

json mt_json(const MTReport& r) {
  return json{{"energy", r.energy}, {"functionalValue", r.overflow ? json(nullptr) : json(r.functionalValue)},
              {"logValue", r.logValue}, {"overflow", r.overflow}, {"admissible", r.admissible}};
}

json cmd_mt_eval(Context& ctx) {
  const Params& p = ctx.prm;
  const MTParams params{p.n, p.alpha};
  MTReport rep;
  json result;
  if (!p.in.empty()) {
    const io::GraphInput g = graph_with_values(ctx);
    rep = mt_functional(DiscreteFunction{g.space, *g.values}, params);
    result["source"] = "graph";
  } else {
    auto s = std::make_shared<const RadialSpace>(trumpet_space(p.n, p.beta, p.rmax, p.grid));
    ScanSettings st = default_scan_settings(*s, p.eta);
    const MoserProbe probe{p.n, st.theta, p.eta, st.R, p.r};
    validate(probe);
    rep = mt_functional(moser_function(probe, s), params);
    result["source"] = "moser probe on " + s->label();
    result["probe"] = {{"theta", probe.theta}, {"eta", probe.eta}, {"R", probe.R}, {"r", probe.r},
                       {"t0", probe.t0()}, {"C", probe.C()}};
  }
  if (rep.overflow) ctx.warnings.push_back("functional value above 1e300; see logValue");
  if (!rep.admissible) ctx.warnings.push_back("input energy exceeds 1");
  result["threshold"] = mt_threshold(p.n, std::min(1.0, p.beta));
  result["report"] = mt_json(rep);
  return result;
}

VerdictRule parse_rule(const std::string& s) {
  if (s == "decade") return VerdictRule::DecadeHeuristic;
  if (s == "trend") return VerdictRule::GrowthTrend;
  fail_input("--rule must be 'decade' or 'trend'");
}

std::string csv_number(double x) {
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

std::string cmd_mt_scan(Context& ctx) {
  const Params& p = ctx.prm;
  std::vector<double> alphas = p.alphas;
  if (alphas.empty()) {
    if (!ctx.config.contains("alpha")) fail_input("mt-scan needs --alphas or --alpha");
    alphas.push_back(p.alpha);
  }
  auto s = std::make_shared<const RadialSpace>(trumpet_space(p.n, p.beta, p.rmax, p.grid));
  ScanSettings st = default_scan_settings(*s, p.eta);
  st.rule = parse_rule(p.rule);
  const BlowupScan scan = blowup_scan(s, alphas, decade_grid(st.R, p.rmin), st);
  std::ostringstream os;
  os << "# mtlab " << kVersion << " mt-scan\n";
  os << "# config " << ctx.config.dump() << "\n";
  os << "# seed " << p.seed << "\n";
  os << "# space " << s->label() << " theta=" << csv_number(st.theta) << " eta=" << csv_number(st.eta)
     << " R=" << csv_number(st.R) << " threshold=" << csv_number(mt_threshold(p.n, std::min(1.0, p.beta)))
     << "\n";
  for (const AlphaVerdict& v : scan.verdicts) {
    os << "# verdict alpha=" << csv_number(v.alpha) << " " << verdict_name(v.verdict)
       << " decade_factor=" << csv_number(v.decadeFactor) << " relative_change=" << csv_number(v.relativeChange)
       << "\n";
  }
  os << "alpha [1],r [length],value [volume],log_value [log volume],energy [1],verdict [-]\n";
  std::size_t row = 0;
  for (const AlphaVerdict& v : scan.verdicts) {
    for (; row < scan.rows.size() && scan.rows[row].alpha == v.alpha; ++row) {
      const ScanRow& r = scan.rows[row];
      os << csv_number(r.alpha) << "," << csv_number(r.r) << ","
         << (r.overflow ? std::string("inf") : csv_number(r.value)) << "," << csv_number(r.logValue) << ","
         << csv_number(r.energy) << "," << verdict_name(v.verdict) << "\n";
    }
    if (v.verdict == Verdict::Inconclusive) {
      ctx.warnings.push_back("inconclusive verdict at alpha = " + csv_number(v.alpha));
    }
  }
  return os.str();
}

json cmd_threshold(Context& ctx) {
  const Params& p = ctx.prm;
  auto s = trumpet_or_input(ctx);
  ThresholdOptions opts;
  opts.eta = p.eta;
  opts.rMin = ctx.config.contains("rmin") ? p.rmin : 1e-12;
  opts.rule = ctx.config.contains("rule") ? parse_rule(p.rule) : VerdictRule::GrowthTrend;
  const ThresholdEstimate est = threshold_estimate(s, p.n, opts);
  if (!est.found) ctx.warnings.push_back("no estimate: " + est.note);
  return json{{"found", est.found}, {"estimate", est.estimate}, {"bracket", {est.lo, est.hi}},
              {"reference", est.reference}, {"coneAngle", est.coneAngle}, {"R", est.R},
              {"iterations", est.iterations}, {"relativeToReference", est.found ? est.estimate / est.reference : 0.0}};
}

json cmd_cheeger(Context& ctx) {
  const Params& p = ctx.prm;
  const io::GraphInput g = io::graph_from_json(io::read_file(p.in));
  SpectralGapOptions opts;
  opts.seed = p.seed;
  opts.restarts = p.restarts;
  const CheegerInequalityReport rep = cheeger_inequality_check(*g.space, p.p, opts);
  if (!rep.holds) ctx.warnings.push_back("lambda_p estimate below h^p / p^p");
  return json{{"h", rep.h}, {"witness", rep.witnessSet}, {"p", p.p}, {"lambdaP", rep.lambdaPEstimate},
              {"bound", rep.bound}, {"holds", rep.holds}, {"witnessFunction", rep.witnessFunction},
              {"kernels", kernels::isa_name(kernels::active_isa())}};
}

json cmd_compact_cert(Context& ctx) {
  const Params& p = ctx.prm;
  const io::GraphInput g = graph_with_values(ctx);
  const DiscreteFunction u{g.space, *g.values};
  const MeasuredFunction mu = u.measured();
  json result;
  const MedianGapReport gap = median_average_gap_check(mu, std::max(1.0, p.p));
  result["medianGap"] = {{"median", gap.median}, {"mean", gap.mean}, {"lhs", gap.lhs}, {"rhs", gap.rhs},
                         {"holds", gap.holds}};
  auto target = covering_trumpet(p, 0.5 * g.space->total_measure());
  const MedianSplit split = double_rearrangement(mu, target);
  const double c = split.c;
  const double pe = p.p;
  auto F = [c, pe](double x) { return std::pow(std::abs(x - c), pe); };
  const SplitIdentityReport id = split_identity_check(split, F, u, std::max(p.p, 1.0 + 1e-9));
  result["split"] = {{"median", c}, {"omegaVolume", split.omegaVolume}, {"uPlus", function_json(split.uPlus)},
                     {"uMinus", function_json(split.uMinus)}};
  result["identity"] = {{"lhs", id.lhs}, {"rhs", id.rhs}, {"relativeError", id.relativeError},
                        {"holds", id.identityHolds}, {"gradPlus", id.gradPlus}, {"gradMinus", id.gradMinus},
                        {"cheegerEnergy", id.cheegerEnergy}, {"gradientHolds", id.gradientHolds}};
  if (!id.gradientHolds) ctx.warnings.push_back("rearranged parts carry more energy than the source");
  try {
    const Step2Report s2 = step2_certificate(split, p.n, p.beta, id.cheegerEnergy);
    result["step2"] = {{"C6", s2.C6}, {"gradPlus", s2.gradPlus}, {"gradMinus", s2.gradMinus},
                       {"lemmaBound", s2.lemmaBound}, {"bound", s2.bound}, {"holds", s2.holds}};
  } catch (const PreconditionError& e) {
    ctx.warnings.push_back(std::string("step2 not applicable: ") + e.what());
  }
  if (c > 0.0) {
    const Step3Report s3 = step3_envelope(p.n, p.R, c);
    result["step3"] = {{"R", p.R}, {"minNumeric", s3.minNumeric}, {"minClosed", s3.minClosed},
                       {"relativeError", s3.relativeError}, {"holds", s3.holds}};
  }
  return result;
}

json cmd_bishop_gromov(Context& ctx) {
  const Params& p = ctx.prm;
  const ModelSpace m = make_model_space(p.n, p.k);
  GrowthSamples g;
  if (!p.in.empty()) {
    g = io::growth_from_json(io::read_file(p.in));
  } else {
    const double top = std::min(p.rmax, 0.99 * m.horizon());
    std::vector<double> perims;
    for (int i = 1; i <= p.grid; ++i) {
      const double r = top * i / p.grid;
      g.radii.push_back(r);
      g.ballVolumes.push_back(model_ball_volume(m, r));
      perims.push_back(model_sphere_area(m, r));
    }
    g.perimeters = perims;
  }
  const BishopGromovReport rep = bishop_gromov_check(g, m, p.tol);
  if (rep.worstViolation > 0.0) ctx.warnings.push_back("comparison violated at sample " + std::to_string(rep.worstIndex));
  return json{{"monotoneVolumeRatio", rep.monotoneVolumeRatio}, {"perimeterRatioMonotone", rep.perimeterRatioMonotone},
              {"perimeterLeqVolumeRatio", rep.perimeterLeqVolumeRatio}, {"worstViolation", rep.worstViolation},
              {"worstIndex", rep.worstIndex}, {"perimetersChecked", rep.perimetersChecked},
              {"samples", g.radii.size()}};
}

void echo_config(Context& ctx, CLI::App* sub) {
  for (const CLI::Option* opt : sub->get_options()) {
    if (opt->count() == 0 || opt->get_name() == "--help") continue;
    std::string name = opt->get_name();
    name.erase(0, name.find_first_not_of('-'));
    const auto& res = opt->results();
    ctx.config[name] = res.size() == 1 ? json(res.front()) : json(res);
  }
  ctx.config["seed"] = ctx.prm.seed;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"mtlab: rearrangement and Moser-Trudinger laboratory", "mtlab"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  Context ctx;
  Params& p = ctx.prm;

  auto add_common = [&](CLI::App* s) {
    s->add_option("--out", p.out, "output path (stdout when absent)");
    s->add_option("--seed", p.seed, "seed for randomized steps")->capture_default_str();
  };
  auto add_space = [&](CLI::App* s) {
    s->add_option("--beta", p.beta, "trumpet cone angle in (0, 1]")->capture_default_str();
    s->add_option("--grid", p.grid, "radial grid nodes")->capture_default_str();
    s->add_option("--rmax", p.rmax, "outer radius of the grid")->capture_default_str();
  };

  auto* profile = app.add_subcommand("profile", "radial profile of a trumpet or of a space JSON");
  profile->add_option("--n", p.n, "dimension")->required();
  profile->add_option("--in", p.in, "space JSON (default: trumpet)");
  add_space(profile);
  add_common(profile);

  auto* synth = app.add_subcommand("synthesize", "radial space from a profile JSON");
  synth->add_option("--in", p.in, "profile JSON")->required();
  synth->add_option("--n", p.n, "dimension")->required();
  add_common(synth);

  auto* rearr = app.add_subcommand("rearrange", "decreasing rearrangement of a graph function onto a trumpet");
  rearr->add_option("--in", p.in, "graph JSON with per-vertex u")->required();
  rearr->add_option("--n", p.n, "target dimension")->required();
  rearr->add_option("--p", p.p, "energy exponent")->capture_default_str();
  add_space(rearr);
  add_common(rearr);

  auto* eval = app.add_subcommand("mt-eval", "MT functional of a graph function or of a Moser probe");
  eval->add_option("--n", p.n, "dimension / exponent m")->required();
  eval->add_option("--alpha", p.alpha, "MT exponent")->required();
  eval->add_option("--in", p.in, "graph JSON with per-vertex u (default: Moser probe)");
  eval->add_option("--r", p.r, "probe inner radius")->capture_default_str();
  eval->add_option("--eta", p.eta, "perimeter slack")->capture_default_str();
  add_space(eval);
  add_common(eval);

  auto* scan = app.add_subcommand("mt-scan", "Moser-probe blow-up scan (CSV)");
  scan->add_option("--n", p.n, "dimension")->required();
  scan->add_option("--alphas", p.alphas, "alpha grid")->delimiter(',');
  scan->add_option("--alpha", p.alpha, "single alpha");
  scan->add_option("--rmin", p.rmin, "smallest probe radius")->capture_default_str();
  scan->add_option("--eta", p.eta, "perimeter slack")->capture_default_str();
  scan->add_option("--rule", p.rule, "verdict rule: decade or trend")->capture_default_str();
  add_space(scan);
  add_common(scan);

  auto* thr = app.add_subcommand("threshold", "bisection for the MT threshold");
  thr->add_option("--n", p.n, "dimension")->required();
  thr->add_option("--in", p.in, "space JSON (default: trumpet)");
  thr->add_option("--rmin", p.rmin, "smallest probe radius (default 1e-12)");
  thr->add_option("--eta", p.eta, "perimeter slack")->capture_default_str();
  thr->add_option("--rule", p.rule, "verdict rule: decade or trend (default trend)");
  add_space(thr);
  add_common(thr);

  auto* chg = app.add_subcommand("cheeger", "Cheeger constant and p-spectral gap of a graph");
  chg->add_option("--in", p.in, "graph JSON")->required();
  chg->add_option("--p", p.p, "exponent")->capture_default_str();
  chg->add_option("--restarts", p.restarts, "random restarts")->capture_default_str();
  add_common(chg);

  auto* cc = app.add_subcommand("compact-cert", "median split certificates of a graph function");
  cc->add_option("--in", p.in, "graph JSON with per-vertex u")->required();
  cc->add_option("--n", p.n, "target dimension")->required();
  cc->add_option("--p", p.p, "exponent")->capture_default_str();
  cc->add_option("--R", p.R, "envelope ratio in (0, 1)")->capture_default_str();
  add_space(cc);
  add_common(cc);

  auto* bg = app.add_subcommand("bishop-gromov", "volume comparison against a constant-curvature model");
  bg->add_option("--n", p.n, "dimension")->required();
  bg->add_option("--k", p.k, "model curvature")->required();
  bg->add_option("--in", p.in, "growth samples JSON (default: exact model data)");
  bg->add_option("--tol", p.tol, "relative tolerance")->capture_default_str();
  bg->add_option("--grid", p.grid, "samples when generating model data")->capture_default_str();
  bg->add_option("--rmax", p.rmax, "largest sampled radius")->capture_default_str();
  add_common(bg);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForVersion&) {
    out << kVersion << "\n";
    return 0;
  } catch (const CLI::Success&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n";
    const auto subs = app.get_subcommands();
    err << (subs.empty() ? app.help() : subs.front()->help());
    return 2;
  }

  CLI::App* sub = app.get_subcommands().front();
  ctx.command = sub->get_name();
  echo_config(ctx, sub);
  try {
    std::string text;
    if (ctx.command == "mt-scan") {
      text = cmd_mt_scan(ctx);
      for (const auto& w : ctx.warnings) err << "warning: " << w.get<std::string>() << "\n";
    } else {
      json result;
      if (ctx.command == "profile") result = cmd_profile(ctx);
      else if (ctx.command == "synthesize") result = cmd_synthesize(ctx);
      else if (ctx.command == "rearrange") result = cmd_rearrange(ctx);
      else if (ctx.command == "mt-eval") result = cmd_mt_eval(ctx);
      else if (ctx.command == "threshold") result = cmd_threshold(ctx);
      else if (ctx.command == "cheeger") result = cmd_cheeger(ctx);
      else if (ctx.command == "compact-cert") result = cmd_compact_cert(ctx);
      else result = cmd_bishop_gromov(ctx);
      text = io::dump(report(ctx, std::move(result)));
    }
    emit(ctx, text, out);
    return 0;
  } catch (const BudgetError& e) {
    err << "budget exceeded: " << e.what() << "\n";
    return 4;
  } catch (const PreconditionError& e) {
    err << "precondition failed: " << e.what() << "\n";
    return 3;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace mtlab::cli
