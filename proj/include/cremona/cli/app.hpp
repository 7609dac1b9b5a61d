#pragma once

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cremona/dynamics/csv.hpp"
#include "cremona/dynamics/orbit.hpp"
#include "cremona/equiperiodic/curve.hpp"
#include "cremona/equiperiodic/equiperiodic.hpp"
#include "cremona/model/builtins.hpp"
#include "cremona/model/invariants.hpp"
#include "cremona/periodicity/period.hpp"
#include "cremona/scheme/cremona_map.hpp"
#include "cremona/util/agm.hpp"

namespace cremona::cli {

using algebra::Rational;
using Json = nlohmann::ordered_json;

enum ExitCode : int { kOk = 0, kUsage = 2, kComputation = 3, kResource = 4 };

struct RunConfig {
  std::string command;
  std::string system;      // builtin name
  std::string model_file;  // exclusive with system
  std::vector<std::string> params;
  std::string x0;
  std::string out;
  std::string format;
  std::size_t threads = 1;
  std::string scheme = "polarized";

  // integrate
  std::string dt;
  std::optional<std::size_t> steps;
  std::string mode = "float";
  bool skip_on_pole = false;
  bool invariants = false;
  std::size_t bit_budget = 1'000'000;

  // find-steps, transition-table, verify-period
  std::string n;
  std::string range = "0,20";
  std::string eps = "1/10000";
  double tol = 1e-6;
  bool exact_check = false;
  std::size_t exact_degree_cap = 64;
  bool with_limit = false;
  std::string near;

  // equiperiodic
  bool degrees_only = false;
  bool reduced = false;
  std::string fix_dt;
  bool sample = false;
  std::string box = "-3,3,-3,3";
  std::size_t grid = 400;
  std::size_t term_budget = 2'000'000;
  std::size_t symbolic_limit = 7;
};

namespace detail {

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    auto p = s.find(sep, start);
    out.push_back(s.substr(start, p == std::string::npos ? std::string::npos : p - start));
    if (p == std::string::npos) break;
    start = p + 1;
  }
  return out;
}

/// Exact value of a rational "p/q" or a decimal "1.25e-3".
inline Rational parse_number(const std::string& text, const std::string& what) {
  if (text.find_first_of(".eE") == std::string::npos) return algebra::parse_rational(text);
  std::string s = text;
  std::string exp_part;
  if (auto e = s.find_first_of("eE"); e != std::string::npos) {
    exp_part = s.substr(e + 1);
    s = s.substr(0, e);
  }
  bool neg = false;
  if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
    neg = s[0] == '-';
    s.erase(0, 1);
  }
  std::string digits;
  long frac = 0;
  bool seen_point = false;
  for (char c : s) {
    if (c == '.' && !seen_point) {
      seen_point = true;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      digits += c;
      if (seen_point) ++frac;
    } else {
      throw UsageError("malformed number '" + text + "' for " + what);
    }
  }
  if (digits.empty()) throw UsageError("malformed number '" + text + "' for " + what);
  long exponent = 0;
  if (!exp_part.empty()) {
    try {
      std::size_t used = 0;
      exponent = std::stol(exp_part, &used);
      if (used != exp_part.size()) throw UsageError("");
    } catch (...) {
      throw UsageError("malformed number '" + text + "' for " + what);
    }
  }
  if (std::labs(exponent) > 4000) throw UsageError("exponent out of range in '" + text + "'");
  exponent -= frac;
  algebra::Integer num(digits, 10);
  algebra::Integer den(1);
  algebra::Integer ten(10);
  for (long i = 0; i < std::labs(exponent); ++i) (exponent > 0 ? num : den) *= ten;
  Rational r = algebra::make_rational(num, den);
  return neg ? Rational(-r) : r;
}

inline std::vector<Rational> parse_list(const std::string& text, const std::string& what, bool exact) {
  std::vector<Rational> out;
  for (const auto& part : split(text, ',')) {
    if (part.empty()) throw UsageError("empty entry in " + what + " '" + text + "'");
    out.push_back(exact ? algebra::parse_rational(part) : parse_number(part, what));
  }
  return out;
}

/// "5" or "a..b"
inline std::vector<std::size_t> parse_n(const std::string& text) {
  auto to_n = [&](const std::string& s) -> std::size_t {
    std::size_t used = 0;
    long v = -1;
    try {
      v = std::stol(s, &used);
    } catch (...) {
    }
    if (v < 1 || used != s.size()) throw UsageError("--n expects a positive integer or a range a..b, got '" + text + "'");
    return static_cast<std::size_t>(v);
  };
  auto dots = text.find("..");
  if (dots == std::string::npos) return {to_n(text)};
  const std::size_t a = to_n(text.substr(0, dots)), b = to_n(text.substr(dots + 2));
  if (b < a) throw UsageError("--n range " + text + " is empty");
  std::vector<std::size_t> ns;
  for (std::size_t k = a; k <= b; ++k) ns.push_back(k);
  return ns;
}

/// Three decimals, truncated toward zero.
inline std::string fixed3(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", std::trunc(v * 1000) / 1000);
  return buf;
}

inline Json rational_list(const std::vector<Rational>& v) {
  Json a = Json::array();
  for (const auto& r : v) a.push_back(algebra::to_string(r));
  return a;
}

}  // namespace detail

/// A configured system with its scheme; the map is built on first use.
struct Context {
  std::string label;
  model::ParamMap params;
  std::shared_ptr<const model::QuadSystem> system;
  std::shared_ptr<const scheme::PolarizedScheme> scheme;
  std::optional<scheme::CremonaMap> map_;

  const scheme::CremonaMap& map() {
    if (!map_) map_.emplace(scheme::build_map(*scheme));
    return *map_;
  }
};

inline Context load_context(const RunConfig& cfg, std::ostream& err) {
  Context ctx;
  if (cfg.system.empty() == cfg.model_file.empty()) throw UsageError("exactly one of --system or --model-file is required");
  for (const auto& kv : cfg.params) {
    auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) throw UsageError("--param expects name=value, got '" + kv + "'");
    ctx.params[kv.substr(0, eq)] = algebra::parse_rational(kv.substr(eq + 1));
  }
  if (!cfg.system.empty()) {
    ctx.label = cfg.system;
    ctx.system = std::make_shared<const model::QuadSystem>(model::builtin_system(cfg.system, ctx.params));
  } else {
    if (!ctx.params.empty()) throw UsageError("--param applies to builtin systems; edit the param lines of the model file");
    std::ifstream in(cfg.model_file);
    if (!in) throw UsageError("cannot read model file '" + cfg.model_file + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    ctx.label = cfg.model_file;
    ctx.system = std::make_shared<const model::QuadSystem>(model::parse_system(buf.str()));
  }
  ctx.scheme = std::make_shared<const scheme::PolarizedScheme>(ctx.system, scheme::parse_variant(cfg.scheme));
  for (const auto& w : ctx.scheme->warnings()) err << "warning: " << w.kind << ": " << w.message << '\n';
  return ctx;
}

inline void require_format(const RunConfig& cfg, std::initializer_list<const char*> allowed) {
  if (cfg.format.empty()) return;
  for (const char* a : allowed)
    if (cfg.format == a) return;
  std::string list;
  for (const char* a : allowed) list += (list.empty() ? "" : ", ") + std::string(a);
  throw UsageError(cfg.command + " does not support --format " + cfg.format + " (supported: " + list + ")");
}

inline std::vector<Rational> exact_x0(const RunConfig& cfg, const Context& ctx) {
  if (cfg.x0.empty()) throw UsageError(cfg.command + " requires --x0");
  auto x0 = detail::parse_list(cfg.x0, "--x0", true);
  if (x0.size() != ctx.system->dimension())
    throw UsageError("--x0 has " + std::to_string(x0.size()) + " entries but the system has dimension " +
                     std::to_string(ctx.system->dimension()));
  return x0;
}

inline periodicity::FindOptions find_options(const RunConfig& cfg) {
  periodicity::FindOptions opt;
  auto r = detail::parse_list(cfg.range, "--range", true);
  if (r.size() != 2) throw UsageError("--range expects lo,hi");
  opt.lo = r[0];
  opt.hi = r[1];
  if (opt.lo < 0 || opt.hi <= opt.lo) throw UsageError("--range must satisfy 0 <= lo < hi");
  opt.eps = algebra::parse_rational(cfg.eps);
  if (opt.eps <= 0) throw UsageError("--eps must be positive");
  if (!(cfg.tol > 0)) throw UsageError("--tol must be positive");
  opt.tol = cfg.tol;
  opt.exact_check = cfg.exact_check;
  opt.exact_degree_cap = cfg.exact_degree_cap;
  return opt;
}

// ---------------------------------------------------------------------------------------

inline int cmd_integrate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  require_format(cfg, {"csv"});
  if (cfg.mode != "float" && cfg.mode != "exact") throw UsageError("--mode must be float or exact");
  if (cfg.dt.empty()) throw UsageError("integrate requires --dt");
  if (!cfg.steps) throw UsageError("integrate requires --steps");
  if (cfg.skip_on_pole && cfg.mode == "exact") throw UsageError("--skip-on-pole applies to float mode only");
  Context ctx = load_context(cfg, err);
  if (cfg.x0.empty()) throw UsageError("integrate requires --x0");
  const bool exact = cfg.mode == "exact";
  auto x0 = detail::parse_list(cfg.x0, "--x0", false);
  if (x0.size() != ctx.system->dimension())
    throw UsageError("--x0 has " + std::to_string(x0.size()) + " entries but the system has dimension " +
                     std::to_string(ctx.system->dimension()));
  const Rational dt = detail::parse_number(cfg.dt, "--dt");
  dynamics::IntegrateOptions opt;
  opt.skip_on_pole = cfg.skip_on_pole;
  opt.bit_budget = cfg.bit_budget;
  if (cfg.invariants) opt.invariants = model::known_invariants(*ctx.system);

  auto report = [&](const auto& orbit) {
    dynamics::write_csv(out, orbit);
    for (const auto& e : orbit.events) err << "event: step " << e.step << ": " << e.kind << ": " << e.message << '\n';
    if (orbit.truncated) {
      err << "error: orbit truncated after " << orbit.size() - 1 << " of " << *cfg.steps << " steps\n";
      return int(kComputation);
    }
    return int(kOk);
  };
  if (exact) return report(dynamics::integrate_exact(*ctx.scheme, x0, dt, *cfg.steps, opt));
  std::vector<double> xf;
  for (const auto& v : x0) xf.push_back(v.get_d());
  return report(dynamics::integrate_float(*ctx.scheme, xf, dt.get_d(), *cfg.steps, opt));
}

inline Json root_json(const periodicity::PeriodRoot& r) {
  Json j;
  j["lo"] = algebra::to_string(r.interval.lo);
  j["hi"] = algebra::to_string(r.interval.hi);
  j["value"] = r.approx;
  j["minimal_period"] = r.minimal_period;
  j["verified"] = !r.spurious;
  j["residual"] = r.verification.residual;
  const auto& v = r.verification;
  j["exact_check"] = v.exact_ran ? (v.exact_ok ? "passed" : "failed") : (v.note.empty() ? "not run" : v.note);
  return j;
}

inline Json finding_json(const Context& ctx, const RunConfig& cfg, const std::vector<Rational>& x0,
                         const periodicity::PeriodFinding& f) {
  Json j;
  j["system"] = ctx.label;
  j["scheme"] = cfg.scheme;
  j["x0"] = detail::rational_list(x0);
  j["n"] = f.n;
  j["G"] = algebra::to_string(f.G);
  j["roots"] = Json::array();
  for (const auto& r : f.roots) j["roots"].push_back(root_json(r));
  j["rejected"] = Json::array();
  for (const auto& r : f.rejected) j["rejected"].push_back(root_json(r));
  j["range"] = detail::rational_list({f.lo, f.hi});
  j["eps"] = algebra::to_string(f.eps);
  return j;
}

inline int cmd_find_steps(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  require_format(cfg, {"json", "csv"});
  if (cfg.n.empty()) throw UsageError("find-steps requires --n");
  const auto ns = detail::parse_n(cfg.n);
  const auto opt = find_options(cfg);
  Context ctx = load_context(cfg, err);
  const auto x0 = exact_x0(cfg, ctx);
  const auto findings = periodicity::find_period_steps(ctx.map(), x0, ns, opt, cfg.threads);
  for (const auto& f : findings)
    for (const auto& r : f.rejected)
      err << "warning: n=" << f.n << ": root near " << detail::fixed3(r.approx)
          << " failed verification (residual " << dynamics::format_value(r.verification.residual) << ")\n";
  if (cfg.format == "csv") {
    out << "n,steps,minimal_periods\n";
    for (const auto& f : findings) {
      std::string steps, mins;
      for (const auto& r : f.roots) {
        steps += (steps.empty() ? "" : " ") + detail::fixed3(r.approx);
        mins += (mins.empty() ? "" : " ") + std::to_string(r.minimal_period);
      }
      out << f.n << ',' << steps << ',' << mins << '\n';
    }
    return kOk;
  }
  if (findings.size() == 1) {
    out << finding_json(ctx, cfg, x0, findings.front()).dump(2) << '\n';
  } else {
    Json all = Json::array();
    for (const auto& f : findings) all.push_back(finding_json(ctx, cfg, x0, f));
    out << all.dump(2) << '\n';
  }
  return kOk;
}

inline int cmd_transition_table(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  require_format(cfg, {"csv"});
  const auto ns = detail::parse_n(cfg.n.empty() ? "3..9" : cfg.n);
  const auto opt = find_options(cfg);
  Context ctx = load_context(cfg, err);
  std::optional<double> limit;
  if (cfg.with_limit) {
    if (cfg.system != "jacobi")
      throw UsageError("--with-limit needs the builtin jacobi system, whose limit is 4K(k)");
    limit = 4 * util::elliptic_k(ctx.params.count("k") ? ctx.params.at("k").get_d() : 0.2);
  }
  const auto x0 = exact_x0(cfg, ctx);
  out << "n,n_dt_min\n";
  for (const auto& row : periodicity::period_transition_table(ctx.map(), x0, ns, opt, cfg.threads))
    out << row.n << ',' << detail::fixed3(row.product) << '\n';
  if (limit) out << "inf," << detail::fixed3(*limit) << '\n';
  return kOk;
}

inline int cmd_verify_period(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  require_format(cfg, {"json"});
  if (cfg.n.empty()) throw UsageError("verify-period requires --n");
  const auto ns = detail::parse_n(cfg.n);
  if (ns.size() != 1) throw UsageError("verify-period takes a single --n");
  if (cfg.near.empty() == cfg.dt.empty()) throw UsageError("verify-period requires exactly one of --near or --dt");
  if (!(cfg.tol > 0)) throw UsageError("--tol must be positive");
  const std::size_t n = ns.front();
  Context ctx = load_context(cfg, err);
  const auto x0 = exact_x0(cfg, ctx);
  Json j;
  j["system"] = ctx.label;
  j["x0"] = detail::rational_list(x0);
  j["n"] = n;
  periodicity::VerifyReport rep;
  if (!cfg.dt.empty()) {
    const double dt = detail::parse_number(cfg.dt, "--dt").get_d();
    if (cfg.exact_check) err << "note: the exact check needs a certified root; use --near\n";
    rep = periodicity::verify_period(*ctx.scheme, x0, dt, n, cfg.tol);
  } else {
    const double near = detail::parse_number(cfg.near, "--near").get_d();
    auto opt = find_options(cfg);
    const auto stages = periodicity::iterate_symbolic_stages(ctx.map(), x0, n);
    const auto g = periodicity::period_polynomial(stages.back());
    std::optional<algebra::IsolatingInterval> best;
    double best_dist = 0.0, best_value = 0.0;
    if (!g.is_constant()) {
      for (const auto& iv : algebra::isolate_real_roots(g, 0, {opt.lo, opt.hi})) {
        const double v = algebra::refine_root_double(iv);
        if (!best || std::fabs(v - near) < best_dist) {
          best = iv;
          best_dist = std::fabs(v - near);
          best_value = v;
        }
      }
    }
    if (!best) throw ExceptionalLocusError("no period-" + std::to_string(n) + " step in the search range");
    j["G"] = algebra::to_string(g);
    rep = periodicity::verify_period(*ctx.scheme, x0, best_value, n, cfg.tol, &*best, &g, cfg.exact_check,
                                     cfg.exact_degree_cap);
    algebra::IsolatingInterval refined;
    algebra::refine_root(*best, opt.eps, &refined);
    j["lo"] = algebra::to_string(refined.lo);
    j["hi"] = algebra::to_string(refined.hi);
  }
  j["value"] = rep.value;
  j["residual"] = rep.residual;
  j["float_ok"] = rep.float_ok;
  j["exact_check"] = rep.exact_ran ? (rep.exact_ok ? "passed" : "failed") : (rep.note.empty() ? "not run" : rep.note);
  if (rep.exact_ran) j["factor"] = algebra::to_string(rep.factor);
  j["passed"] = rep.passed();
  out << j.dump(2) << '\n';
  return rep.passed() ? kOk : kComputation;
}

inline int cmd_equiperiodic(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (!cfg.x0.empty()) throw UsageError("equiperiodic works on the whole phase space and takes no --x0");
  if (cfg.n.empty()) throw UsageError("equiperiodic requires --n");
  const auto ns = detail::parse_n(cfg.n);
  std::optional<Rational> tau;
  if (!cfg.fix_dt.empty()) tau = algebra::parse_rational(cfg.fix_dt);
  equiperiodic::PlotBox box;
  if (cfg.sample) {
    require_format(cfg, {"csv"});
    if (!tau) throw UsageError("--sample needs --fix-dt");
    if (ns.size() != 1) throw UsageError("--sample takes a single --n");
    if (cfg.degrees_only) throw UsageError("--sample and --degrees-only are exclusive");
    auto b = detail::parse_list(cfg.box, "--box", false);
    if (b.size() != 4) throw UsageError("--box expects xlo,xhi,ylo,yhi");
    box = {b[0].get_d(), b[1].get_d(), b[2].get_d(), b[3].get_d()};
    if (!(box.x_lo < box.x_hi && box.y_lo < box.y_hi)) throw UsageError("--box is empty");
    if (cfg.grid < 1) throw UsageError("--grid must be positive");
  } else if (cfg.degrees_only) {
    require_format(cfg, {"csv"});
  } else {
    require_format(cfg, {"poly-text", "json"});
  }
  Context ctx = load_context(cfg, err);
  const auto& map = ctx.map();
  equiperiodic::IterateOptions opt;
  opt.term_budget = cfg.term_budget;

  if (cfg.degrees_only) {
    std::size_t top = 0;
    for (auto n : ns) top = std::max(top, n);
    std::vector<equiperiodic::DegreeRow> rows;
    if (tau) {
      opt.fixed_dt = tau;
      rows = equiperiodic::degree_table(map, ns, opt, cfg.reduced, cfg.threads);
    } else if (top > cfg.symbolic_limit) {
      err << "note: degrees for n up to " << top << " from the median over fixed probe steps";
      for (const auto& p : equiperiodic::default_probe_steps()) err << ' ' << algebra::to_string(p);
      err << '\n';
      rows = equiperiodic::probe_degree_table(map, ns, cfg.reduced, cfg.threads, cfg.term_budget);
    } else {
      rows = equiperiodic::degree_table(map, ns, opt, cfg.reduced, cfg.threads);
    }
    out << "n,degree" << (cfg.reduced ? ",reduced_degree" : "") << '\n';
    for (const auto& r : rows) {
      out << r.n << ',' << r.degree;
      if (cfg.reduced) out << ',' << *r.reduced_degree;
      out << '\n';
    }
    return kOk;
  }

  opt.fixed_dt = cfg.sample ? std::nullopt : tau;
  const auto sets = equiperiodic::equiperiodic_range(map, ns, opt, cfg.reduced, cfg.threads);

  if (cfg.sample) {
    const auto sample = equiperiodic::sample_curve(sets.front().F, *tau, box, cfg.grid, 1e-12, cfg.threads);
    if (sample.empty_curve) {
      err << sample.notice << '\n';
      return kComputation;
    }
    out << "x,y\n";
    for (const auto& p : sample.points)
      out << dynamics::format_value(p[0]) << ',' << dynamics::format_value(p[1]) << '\n';
    return kOk;
  }
  if (cfg.format == "json") {
    Json all = Json::array();
    for (const auto& e : sets) {
      Json j;
      j["n"] = e.n;
      j["F"] = algebra::to_string(e.F);
      j["state_degree"] = e.state_degree;
      j["dt_degree"] = e.dt_degree;
      if (e.fixed_dt) j["fixed_dt"] = algebra::to_string(*e.fixed_dt);
      if (e.reduced) {
        j["reduced"] = algebra::to_string(*e.reduced);
        j["reduced_state_degree"] = *e.reduced_state_degree;
      }
      all.push_back(std::move(j));
    }
    out << (sets.size() == 1 ? all.front() : all).dump(2) << '\n';
    return kOk;
  }
  for (const auto& e : sets) {
    out << "F" << e.n << " = " << algebra::to_string(e.F) << '\n';
    if (e.reduced) out << "F" << e.n << "_reduced = " << algebra::to_string(*e.reduced) << '\n';
  }
  return kOk;
}

inline int cmd_print_map(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  require_format(cfg, {"poly-text", "json"});
  Context ctx = load_context(cfg, err);
  const auto& map = ctx.map();
  if (cfg.format == "json") {
    Json j;
    j["system"] = ctx.label;
    j["scheme"] = cfg.scheme;
    j["components"] = Json::array();
    const auto& names = ctx.system->state_names();
    for (std::size_t i = 0; i < map.dimension(); ++i) {
      Json c;
      c["name"] = names[i] + "hat";
      c["numer"] = algebra::to_string(map.components()[i].numer());
      c["denom"] = algebra::to_string(map.components()[i].denom());
      j["components"].push_back(std::move(c));
    }
    out << j.dump(2) << '\n';
  } else {
    out << scheme::print_map(map);
  }
  return kOk;
}

// ---------------------------------------------------------------------------------------

inline int dispatch(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.command == "integrate") return cmd_integrate(cfg, out, err);
  if (cfg.command == "find-steps") return cmd_find_steps(cfg, out, err);
  if (cfg.command == "equiperiodic") return cmd_equiperiodic(cfg, out, err);
  if (cfg.command == "transition-table") return cmd_transition_table(cfg, out, err);
  if (cfg.command == "verify-period") return cmd_verify_period(cfg, out, err);
  if (cfg.command == "print-map") return cmd_print_map(cfg, out, err);
  throw UsageError("unknown command '" + cfg.command + "'");
}

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Birational integration, periodic steps and equiperiodic sets of quadratic ODE systems", "cremona"};
  app.require_subcommand(1);
  app.fallthrough();
  auto* sys = app.add_option("--system", cfg.system, "builtin system: riccati, wp or jacobi");
  auto* file = app.add_option("--model-file", cfg.model_file, "model file in the text format");
  sys->excludes(file);
  file->excludes(sys);
  app.add_option("--param", cfg.params, "builtin parameter name=p/q (repeatable)");
  app.add_option("--x0", cfg.x0, "initial state, comma separated");
  app.add_option("--out", cfg.out, "output file (default: standard output)");
  app.add_option("--format", cfg.format, "csv, json or poly-text")->check(CLI::IsMember({"csv", "json", "poly-text"}));
  app.add_option("--threads", cfg.threads, "worker threads, 0 for all cores");
  app.add_option("--scheme", cfg.scheme, "scheme variant")->check(CLI::IsMember({"polarized", "literal"}));

  auto* integrate = app.add_subcommand("integrate", "iterate the step map from x0");
  integrate->add_option("--dt", cfg.dt, "step size");
  integrate->add_option("--steps", cfg.steps, "number of steps");
  integrate->add_option("--mode", cfg.mode, "float or exact")->check(CLI::IsMember({"float", "exact"}));
  integrate->add_flag("--skip-on-pole", cfg.skip_on_pole, "perturb and continue at a pole");
  integrate->add_flag("--invariants", cfg.invariants, "append the known first integrals as columns");
  integrate->add_option("--bit-budget", cfg.bit_budget, "largest coordinate size in bits, exact mode");

  auto add_search = [&](CLI::App* c) {
    c->add_option("--n", cfg.n, "period, or a range a..b");
    c->add_option("--range", cfg.range, "step search interval lo,hi (lo exclusive)");
    c->add_option("--eps", cfg.eps, "root interval width");
    c->add_option("--tol", cfg.tol, "float closure tolerance");
    c->add_flag("--exact-check", cfg.exact_check, "also check closure in the exact quotient ring");
    c->add_option("--exact-degree-cap", cfg.exact_degree_cap, "largest modulus degree for the exact check");
  };
  auto* find = app.add_subcommand("find-steps", "certified steps with period n from x0");
  add_search(find);
  auto* transition = app.add_subcommand("transition-table", "n times the smallest period-n step, per n");
  add_search(transition);
  transition->add_flag("--with-limit", cfg.with_limit, "append the limit 4K(k) of the jacobi system");
  auto* verify = app.add_subcommand("verify-period", "check the orbit closure at one step");
  add_search(verify);
  verify->add_option("--near", cfg.near, "verify the certified root nearest this value");
  verify->add_option("--dt", cfg.dt, "verify this step (float closure only)");

  auto* equi = app.add_subcommand("equiperiodic", "the set of period-n initial states");
  equi->add_option("--n", cfg.n, "order, or a range a..b");
  equi->add_flag("--degrees-only", cfg.degrees_only, "CSV of state degrees");
  equi->add_flag("--reduced", cfg.reduced, "also divide out the sets of proper divisors");
  equi->add_option("--fix-dt", cfg.fix_dt, "substitute this step first");
  equi->add_flag("--sample", cfg.sample, "sample the curve at --fix-dt on a grid");
  equi->add_option("--box", cfg.box, "sampling box xlo,xhi,ylo,yhi");
  equi->add_option("--grid", cfg.grid, "grid cells per axis");
  equi->add_option("--term-budget", cfg.term_budget, "largest stage size in terms");
  equi->add_option("--symbolic-limit", cfg.symbolic_limit, "largest n for symbolic degrees before probing");

  app.add_subcommand("print-map", "the step map as rational functions of the state and dt");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e, out, err);
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  cfg.command = app.get_subcommands().front()->get_name();

  std::ostringstream buffer;
  int code = kOk;
  try {
    code = dispatch(cfg, buffer, err);
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const NameError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const DegreeError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const ResourceError& e) {
    err << "error: " << e.what() << '\n';
    return kResource;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kComputation;
  }
  if (cfg.out.empty()) {
    out << buffer.str();
  } else {
    std::ofstream f(cfg.out, std::ios::binary);
    if (!(f << buffer.str())) {
      err << "error: cannot write '" << cfg.out << "'\n";
      return kComputation;
    }
  }
  return code;
}

}  // namespace cremona::cli
