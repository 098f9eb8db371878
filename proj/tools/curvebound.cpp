// curvebound command-line front end.
//
// Exit codes: 0 every check passed, 1 some check failed, 2 invalid input,
// violated hypothesis, or usage error.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "curvebound/curvebound.hpp"

namespace cb = curvebound;
namespace io = curvebound::io;

namespace {

struct Options {
  std::vector<std::string> inputs;
  std::optional<double> lambda;
  std::optional<double> c;
  std::optional<double> tol;
  std::optional<double> tol_eq;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> n;
  std::optional<double> amplitude;
  std::optional<std::string> kind;
  std::optional<std::string> config;
  std::string mode = "curve-in-disk";
  std::string map;
  std::string out;
  std::string format = "text";
  bool no_timing = false;
};

unsigned worker_count(std::size_t jobs) {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("CURVEBOUND_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v >= 1) n = static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
  }
  return static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(jobs, 1)));
}

/// Runs f(i) for every input on a worker pool; results stay in input order.
template <class F>
std::vector<io::ReportRecord> run_batch(const std::vector<std::string>& inputs, F f) {
  std::vector<io::ReportRecord> out(inputs.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < inputs.size();) out[i] = f(inputs[i]);
  };
  const unsigned n = worker_count(inputs.size());
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < n; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  return out;
}

/// Wraps one command invocation: reads the file, times the body, and turns
/// any library or schema error into an invalid record.
template <class Body>
io::ReportRecord guarded(const std::string& command, const std::string& path, const Options& opt, Body body) {
  io::ReportRecord rec;
  rec.command = command;
  rec.input = path;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    const std::string text = io::read_text(path);
    rec.digest = io::digest(text);
    body(rec, text);
  } catch (const std::exception& e) {
    rec.status = io::Status::invalid;
    rec.message = e.what();
    rec.fields.clear();
    rec.tolerances.clear();
  }
  const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
  rec.wall_time = opt.no_timing ? 0.0 : dt.count();
  return rec;
}

void require_positive_lambda(const Options& opt) {
  if (opt.lambda && !(*opt.lambda > 0.0)) throw cb::error(cb::errc::invalid_input, "--lambda must be positive");
}

// --lambda wins, then the file's meta.lambda; otherwise the curve's own value.
std::optional<double> lambda_for(const io::CurveFile& file, const Options& opt) {
  if (opt.lambda) return opt.lambda;
  return file.meta.lambda;
}

std::string lambda_source(const io::CurveFile& file, const Options& opt, const std::string& fallback) {
  if (opt.lambda) return "supplied";
  return file.meta.lambda ? "meta" : fallback;
}

void add_bound(io::ReportRecord& rec, const cb::BoundReport& rep) {
  rec.set("c", rep.c);
  rec.set("lambda", rep.lambda);
  rec.set("lambda_source", rep.lambda_source);
  rec.set("lambda_hat", rep.lambda_hat);
  rec.set("hypothesis_ok", rep.hypothesis_ok);
  rec.set("length", rep.length);
  rec.set("bound", rep.bound);
  rec.set("slack", rep.slack);
  rec.set("relative_slack", rep.slack / rep.bound);
  rec.set("bound_passed", rep.passed);
  rec.set("equality", rep.equality);
  rec.set("circle_deviation", rep.circle_deviation);
  rec.tol("bound_abs", rep.tolerance);
}

void check_body(io::ReportRecord& rec, const std::string& text, const Options& opt) {
  require_positive_lambda(opt);
  const io::CurveFile file = io::read_curve(text);
  const double tol_eq = opt.tol_eq.value_or(cb::default_tol_eq);
  const double tol_bound = opt.tol.value_or(cb::bound_rel_tol);
  rec.tol("bound_rel", tol_bound);
  rec.tol("equality_rel", tol_eq);
  rec.tol("circle", cb::default_tol_circ);
  rec.tol("hypothesis_rel", cb::hypothesis_rel_tol);
  cb::BoundReport rep;
  if (file.is_polyline()) {
    const auto& curve = file.polyline();
    rec.set("kind", std::string("polyline"));
    rec.set("n", static_cast<std::int64_t>(curve.size()));
    rep = cb::theorem_bound_check(curve, lambda_for(file, opt), tol_eq, cb::default_tol_circ, tol_bound);
    rep.lambda_source = lambda_source(file, opt, rep.lambda_source);
    add_bound(rec, rep);
    const auto conv = cb::is_lambda_convex(curve, rep.lambda, rep.lambda * cb::hypothesis_rel_tol);
    rec.set("lambda_convex", conv.lambda_convex);
    rec.set("argmin_first", static_cast<std::int64_t>(conv.report.argmin_run.first));
    rec.set("argmin_count", static_cast<std::int64_t>(conv.report.argmin_run.count));
  } else {
    const auto& curve = file.support();
    rec.set("kind", std::string("support"));
    rec.set("n", static_cast<std::int64_t>(curve.size()));
    rep = cb::theorem_bound_check(curve, lambda_for(file, opt), tol_eq, cb::default_tol_circ, tol_bound);
    rep.lambda_source = lambda_source(file, opt, rep.lambda_source);
    add_bound(rec, rep);
    rec.set("lambda_convex", curve.is_lambda_convex(rep.lambda * (1.0 - cb::hypothesis_rel_tol)));
    rec.set("max_radius", curve.max_radius());
  }
  if (!rep.hypothesis_ok)
    rec.message = "hypothesis violated: the curve is not lambda-convex for lambda = " + fmt::format("{}", rep.lambda);
  else if (!rep.passed)
    rec.message = "length exceeds the bound";
  rec.status = rep.passed ? io::Status::pass : io::Status::fail;
}

void roll_body(io::ReportRecord& rec, const std::string& text, const Options& opt) {
  require_positive_lambda(opt);
  const io::CurveFile file = io::read_curve(text);
  const auto lambda = lambda_for(file, opt);
  cb::InclusionCheck chk;
  if (opt.mode == "curve-in-disk") {
    if (file.is_polyline()) {
      const auto& curve = file.polyline();
      chk = cb::curve_in_disk_check(curve, lambda.value_or(cb::min_specific_curvature(curve).lambda_hat));
    } else {
      const auto& curve = file.support();
      chk = cb::curve_in_disk_check(curve, lambda.value_or(1.0 / curve.max_radius()));
    }
  } else if (opt.mode == "disk-in-domain" || opt.mode == "klein") {
    if (!lambda) throw cb::error(cb::errc::invalid_input, "--mode " + opt.mode + " needs --lambda");
    const cb::PolyCurve curve =
        file.is_polyline() ? file.polyline() : cb::to_polyline(file.support(), opt.n.value_or(file.support().size()));
    chk = opt.mode == "klein" ? cb::klein_inclusion_check(curve, *lambda) : cb::disk_in_domain_check(curve, *lambda);
  } else {
    throw cb::error(cb::errc::invalid_input, "unknown --mode " + opt.mode);
  }
  rec.set("mode", opt.mode);
  rec.set("kind", std::string(file.is_polyline() ? "polyline" : "support"));
  rec.set("c", chk.c);
  rec.set("lambda", chk.lambda);
  rec.set("lambda_source", lambda_source(file, opt, "curve"));
  rec.set("radius", chk.radius);
  rec.set("hypothesis_ok", chk.hypothesis_ok);
  rec.set("hypothesis_value", chk.hypothesis_value);
  rec.set("anchors", static_cast<std::int64_t>(chk.anchors.size()));
  const auto* worst = chk.worst();
  rec.set("worst_anchor", static_cast<std::int64_t>(worst ? worst->anchor_index : 0));
  rec.set("max_violation", worst ? worst->max_violation : 0.0);
  rec.set("failing_anchors", static_cast<std::int64_t>(std::count_if(
                                 chk.anchors.begin(), chk.anchors.end(), [](const auto& a) { return !a.passed; })));
  rec.tol("inclusion_abs", chk.tolerance);
  rec.tol("hypothesis_rel", opt.mode == "disk-in-domain" ? cb::upper_hypothesis_rel_tol : cb::hypothesis_rel_tol);
  rec.message = chk.note;
  if (chk.hypothesis_ok && !chk.passed()) rec.message = "inclusion violated at anchor " + std::to_string(worst->anchor_index);
  rec.status = chk.passed() ? io::Status::pass : io::Status::fail;
}

constexpr double identity_tol = 1e-12;
constexpr double total_tol = 1e-9;

void cap_body(io::ReportRecord& rec, const std::string& text, const Options&) {
  const io::CapFile file = io::read_cap(text);
  const cb::ConvexCap cap(file.base, file.interior);
  const auto rep = cb::doubling_curvature(cap);
  const auto mono = cb::monotonicity_check(cap);
  double gap = 0.0;
  for (std::size_t i = 0; i < rep.tau_cap.size(); ++i) gap = std::max(gap, std::abs(rep.tau_cap[i] - rep.tau_plane[i]));
  const double total_error = std::abs(rep.total_curvature - 2.0 * cb::two_pi);
  rec.set("base_n", static_cast<std::int64_t>(cap.base_size()));
  rec.set("interior_n", static_cast<std::int64_t>(file.interior.size()));
  rec.set("hull_vertices", static_cast<std::int64_t>(cap.vertices().size()));
  rec.set("dropped", static_cast<std::int64_t>(cap.dropped().size()));
  rec.set("faces", static_cast<std::int64_t>(cap.faces().size()));
  rec.set("monotone", mono.holds);
  rec.set("worst_vertex", static_cast<std::int64_t>(mono.worst_vertex));
  rec.set("worst_margin", mono.worst_margin);
  rec.set("equality", gap <= identity_tol);
  rec.set("max_tau_gap", gap);
  rec.set("identity_error", rep.identity_error);
  rec.set("psi_dominates", rep.psi_dominates);
  rec.set("total_tau_plane", rep.total_tau_plane);
  rec.set("total_tau_cap", rep.total_tau_cap);
  rec.set("total_omega", rep.total_omega);
  rec.set("interior_defect", rep.interior_defect);
  rec.set("total_curvature", rep.total_curvature);
  rec.set("total_error", total_error);
  rec.set("lambda_hat_plane", rep.lambda_hat_plane);
  rec.set("lambda_hat_cap", rep.lambda_hat_cap);
  rec.set("tau_plane", rep.tau_plane);
  rec.set("tau_cap", rep.tau_cap);
  rec.set("omega", rep.omega);
  rec.tol("monotone_abs", 1e-10);
  rec.tol("identity_abs", identity_tol);
  rec.tol("total_abs", total_tol);
  const bool ok = mono.holds && rep.identity_error <= identity_tol && total_error <= total_tol;
  if (!mono.holds) rec.message = "tau_cap exceeds tau_plane at base vertex " + std::to_string(mono.worst_vertex);
  else if (!ok) rec.message = "curvature identity or total curvature out of tolerance";
  rec.status = ok ? io::Status::pass : io::Status::fail;
}

int emit_records(const std::vector<io::ReportRecord>& recs, const Options& opt) {
  std::string text;
  if (opt.format == "csv") text = io::write_csv(recs);
  else if (opt.format == "records") text = io::write_records(recs);
  else text = io::write_text(recs);
  if (opt.out.empty()) std::cout << text;
  else io::write_text(opt.out, text);
  int code = 0;
  for (const auto& r : recs) code = std::max(code, io::exit_code(r.status));
  for (const auto& r : recs)
    if (r.status == io::Status::invalid) std::cerr << "curvebound: " << r.input << ": " << r.message << "\n";
  return code;
}

void write_output(const Options& opt, const std::string& text) {
  if (opt.out.empty()) std::cout << text;
  else io::write_text(opt.out, text);
}

void cmd_map(const Options& opt) {
  const io::CurveFile in = io::read_curve(io::read_text(opt.inputs.front()));
  if (!in.is_polyline()) throw cb::error(cb::errc::domain, "maps act on polyline curves");
  const auto& curve = in.polyline();
  io::CurveFile out{0.0, curve, in.meta};
  if (opt.map == "klein") {
    out.curve = cb::klein_image(curve);
  } else if (opt.map == "gnomonic") {
    out.curve = cb::gnomonic_image(curve, curve.plane().origin());
  } else if (opt.map == "polar") {
    out.curve = cb::polar_dual(curve).to_curve(curve.plane());
  } else {
    throw cb::error(cb::errc::invalid_input, "unknown --map " + opt.map);
  }
  out.c = std::get<cb::PolyCurve>(out.curve).plane().curvature();
  out.meta.lambda.reset();
  out.meta.chain.push_back(opt.map);
  write_output(opt, io::write_curve(out));
}

void cmd_gen(const Options& opt) {
  cb::GenConfig cfg;
  if (opt.config) cfg = io::read_gen_config(io::read_text(*opt.config));
  if (opt.kind) cfg.kind = cb::gen_kind_from_string(*opt.kind);
  if (opt.seed) cfg.seed = *opt.seed;
  if (opt.c) cfg.c = *opt.c;
  if (opt.lambda) cfg.lambda = *opt.lambda;
  if (opt.n) cfg.size = *opt.n;
  if (opt.amplitude) cfg.amplitude = *opt.amplitude;
  cfg.validate();
  io::CurveMeta meta;
  meta.name = fmt::format("gen-{}-{}", cb::to_string(cfg.kind), cfg.seed);
  meta.seed = cfg.seed;
  meta.generator = cfg;
  if (cfg.kind == cb::GenKind::cap) {
    write_output(opt, io::write_cap(io::cap_file(cb::gen_cap(cfg), meta)));
    return;
  }
  meta.lambda = cfg.lambda;
  io::CurveFile file{cfg.c, cb::PolyCurve::euclidean(std::vector<cb::Vec2>{{0, 0}, {1, 0}, {0, 1}}), meta};
  if (cfg.kind == cb::GenKind::support) file.curve = cb::gen_support_curve(cfg);
  else file.curve = cb::gen_polyline(cfg).curve;
  write_output(opt, io::write_curve(file));
}

void cmd_plot(const Options& opt) {
  require_positive_lambda(opt);
  const std::string& path = opt.inputs.front();
  const std::string text = io::read_text(path);
  const std::string type = io::document_type(text);
  std::string svg;
  if (type == "cap") {
    const io::CapFile file = io::read_cap(text);
    svg = cb::svg::plot_cap(cb::ConvexCap(file.base, file.interior), file.meta.name.empty() ? path : file.meta.name);
  } else {
    const io::CurveFile file = io::read_curve(text);
    const std::string title = file.meta.name.empty() ? path : file.meta.name;
    const auto lambda = lambda_for(file, opt);
    svg = file.is_polyline() ? cb::svg::plot_curve(file.polyline(), lambda, title)
                             : cb::svg::plot_curve(file.support(), lambda, title);
  }
  write_output(opt, svg);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"curvebound: length bounds and rolling-disk checks for lambda-convex curves"};
  app.require_subcommand(1, 1);
  Options opt;

  auto inputs = [&](CLI::App* sub, bool many) {
    auto* o = sub->add_option("inputs", opt.inputs, many ? "input files" : "input file")->required()->check(CLI::ExistingFile);
    if (!many) o->expected(1);
  };
  auto report_flags = [&](CLI::App* sub) {
    sub->add_option("--format", opt.format, "report format")->check(CLI::IsMember({"text", "csv", "records"}));
    sub->add_option("--out", opt.out, "write the report to a file");
    sub->add_flag("--no-timing", opt.no_timing, "report wall_time = 0 for byte-stable output");
  };

  auto* check = app.add_subcommand("check", "length bound, lambda-convexity and equality");
  inputs(check, true);
  check->add_option("--lambda", opt.lambda, "curvature bound (default: meta.lambda, else lambda_hat or 1 / max R)");
  check->add_option("--tol", opt.tol, "relative tolerance of the length bound")->check(CLI::PositiveNumber);
  check->add_option("--tol-eq", opt.tol_eq, "relative slack accepted as equality")->check(CLI::PositiveNumber);
  report_flags(check);

  auto* roll = app.add_subcommand("roll", "rolling-disk inclusions");
  inputs(roll, true);
  roll->add_option("--lambda", opt.lambda, "curvature of the rolling circle");
  roll->add_option("--mode", opt.mode, "curve-in-disk, disk-in-domain or klein")
      ->check(CLI::IsMember({"curve-in-disk", "disk-in-domain", "klein"}));
  roll->add_option("--n", opt.n, "polyline samples when a support curve needs discretizing");
  report_flags(roll);

  auto* map = app.add_subcommand("map", "geodesic maps: klein (c < 0), gnomonic and polar (c > 0)");
  inputs(map, false);
  map->add_option("--map", opt.map, "map name")->required()->check(CLI::IsMember({"klein", "gnomonic", "polar"}));
  map->add_option("--out", opt.out, "output curve file (default stdout)");

  auto* cap = app.add_subcommand("cap", "convex cap doubling and swerve comparison");
  inputs(cap, true);
  report_flags(cap);

  auto* gen = app.add_subcommand("gen", "deterministic random instances");
  gen->add_option("--kind", opt.kind, "support, polyline or cap")->check(CLI::IsMember({"support", "polyline", "cap"}));
  gen->add_option("--config", opt.config, "config file with a generator section")->check(CLI::ExistingFile);
  gen->add_option("--seed", opt.seed, "random seed");
  gen->add_option("--c", opt.c, "plane curvature");
  gen->add_option("--lambda", opt.lambda, "curvature lower bound");
  gen->add_option("--n", opt.n, "grid size, polygon proposals, or base vertices");
  gen->add_option("--amplitude", opt.amplitude, "perturbation amplitude in [0, 1)");
  gen->add_option("--out", opt.out, "output file (default stdout)");

  auto* plot = app.add_subcommand("plot", "static SVG plot of a curve or cap file");
  inputs(plot, false);
  plot->add_option("--lambda", opt.lambda, "curvature of the plotted rolling disks");
  plot->add_option("--out", opt.out, "output SVG (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (check->parsed())
      return emit_records(run_batch(opt.inputs, [&](const std::string& p) {
        return guarded("check", p, opt, [&](auto& rec, const auto& text) { check_body(rec, text, opt); });
      }), opt);
    if (roll->parsed())
      return emit_records(run_batch(opt.inputs, [&](const std::string& p) {
        return guarded("roll", p, opt, [&](auto& rec, const auto& text) { roll_body(rec, text, opt); });
      }), opt);
    if (cap->parsed())
      return emit_records(run_batch(opt.inputs, [&](const std::string& p) {
        return guarded("cap", p, opt, [&](auto& rec, const auto& text) { cap_body(rec, text, opt); });
      }), opt);
    if (map->parsed()) cmd_map(opt);
    if (gen->parsed()) {
      if (!opt.kind && !opt.config) throw cb::error(cb::errc::invalid_input, "gen needs --kind or --config");
      cmd_gen(opt);
    }
    if (plot->parsed()) cmd_plot(opt);
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "curvebound: " << e.what() << "\n";
    return 2;
  }
}
