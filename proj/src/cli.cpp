// Copyright 2026 The qcps Authors
// SPDX-License-Identifier: Apache-2.0

#include "qcps/cli.hpp"

#include <fstream>
#include <iostream>
#include <memory>
#include <regex>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "qcps/bdlab.hpp"
#include "qcps/cfrac.hpp"
#include "qcps/rotation.hpp"
#include "qcps/scheme_io.hpp"

namespace qcps {

namespace {

using Json = nlohmann::ordered_json;

std::string fmt(double v) { return format_double(v); }
std::string fmt(const BigFloat& v) { return format_double(v.convert_to<double>()); }

Json number_json(const QuadNum& v) {
  Json j;
  j["exact"] = v.str();
  j["float"] = v.approx();
  return j;
}

// Plain decimals such as 0.5 or 1e5 are read exactly, next to the exactnum syntax.
QuadNum parse_amount(const std::string& text) {
  static const std::regex decimal(R"(([+-]?)(\d+)(?:\.(\d*))?(?:[eE]([+-]?\d{1,3}))?)");
  std::smatch m;
  if (!std::regex_match(text, m, decimal)) return QuadNum::parse(text);
  const std::string frac = m[3].str();
  BigInt num(m[2].str() + frac);
  int exp = (m[4].matched ? std::stoi(m[4].str()) : 0) - static_cast<int>(frac.size());
  BigInt ten_pow(1);
  for (int i = 0; i < std::abs(exp); ++i) ten_pow *= 10;
  Rational q = exp >= 0 ? Rational(num * ten_pow) : Rational(num, ten_pow);
  if (m[1].str() == "-") q = -q;
  return QuadNum(q);
}

std::vector<QuadNum> parse_amounts(const std::string& text) {
  std::vector<QuadNum> out;
  for (const auto& item : split_list(text, ',')) {
    if (!item.empty()) out.push_back(parse_amount(item));
  }
  return out;
}

Scheme scheme_of(const RunConfig& c) {
  if (!c.scheme_path.empty()) return load_scheme(c.scheme_path);
  if (c.preset == "fibonacci" || c.preset == "fibonacci_full") {
    return fibonacci_preset(FibonacciKind::full);
  }
  if (c.preset == "fibonacci_half") return fibonacci_preset(FibonacciKind::half);
  throw ParseError("unknown preset '" + c.preset + "'");
}

void check_common(const RunConfig& c) {
  if (c.precision < 53 || c.precision > 256) {
    throw DomainError("precision must lie in [53, 256] bits");
  }
  if (c.jobs < 1) throw DomainError("jobs must be >= 1");
}

// Writes to PREFIX + suffix when an output prefix is set, else to `fallback`.
class Sink {
 public:
  Sink(const RunConfig& c, const std::string& suffix, std::ostream& fallback) {
    if (c.out.empty()) {
      os_ = &fallback;
    } else {
      file_ = std::make_unique<std::ofstream>(c.out + suffix, std::ios::binary);
      if (!*file_) throw Error("cannot write '" + c.out + suffix + "'");
      os_ = file_.get();
    }
  }
  std::ostream& operator*() { return *os_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* os_ = nullptr;
};

Json hypotheses_json(const HypothesisReport& h) {
  return Json{{"status", h.status_name()}, {"reason", h.reason}};
}

Json gl_json(const PipelineReport& r) {
  Json j;
  j["expansion"] = r.cf.str();
  j["terms"] = r.gl.sums.size();
  Json head = Json::array();
  for (std::size_t i = 0; i < r.gl.sums.size() && i < 10; ++i) head.push_back(fmt(r.gl.sums[i]));
  j["partial_sums_head"] = head;
  if (!r.gl.sums.empty()) j["last_partial_sum"] = fmt(r.gl.sums.back());
  j["stabilized_at"] = r.gl.stabilized_at;
  j["converged"] = r.gl.converged;
  j["bounded_quotients"] = r.quotients.bounded;
  if (r.quotients.bounded) {
    j["quotient_bound"] = r.quotients.c.str();
    j["majorant"] = fmt(r.gl_majorant);
    j["majorant_shifted"] = fmt(r.gl_majorant_shifted);
  }
  return j;
}

Json pipeline_json(const PipelineReport& r) {
  Json j;
  j["scheme"] = Json::parse(scheme_to_json(r.scheme));
  j["weight"] = r.weight.describe();
  j["m"] = number_json(r.m);
  j["fitted_density"] = r.fitted_density;
  j["normalized"] = r.normalized;
  if (r.normal) {
    j["normalized_slope"] = number_json(r.normal->slope);
    j["reflected"] = r.normal->reflected;
    j["kappa_u"] = r.normal->kappa_u.str();
    j["kappa_x"] = r.normal->kappa_x.str();
  }
  j["alpha"] = number_json(r.alpha);
  j["admissibility"] = gl_json(r);
  Json brs;
  brs["split"] = r.brs.split;
  brs["note"] = r.brs.note;
  Json pieces = Json::array();
  for (const auto& p : r.brs.pieces) {
    pieces.push_back(Json{{"translate", {p.scheme.translate.x.str(), p.scheme.translate.y.str()}},
                          {"rescale", p.placement.rescale.str()},
                          {"start", {p.start.x.str(), p.start.y.str()}},
                          {"region", p.region.label},
                          {"hypotheses", hypotheses_json(p.hypotheses)}});
  }
  brs["pieces"] = pieces;
  j["brs"] = brs;
  if (r.dome) {
    j["dome_decomposition"] = Json{{"c1", r.dome->c1.str()},
                                   {"radius", r.dome->radius.str()},
                                   {"second_bound", fmt(r.dome->second_bound)},
                                   {"grid_max", fmt(r.dome->grid_max)},
                                   {"ok", r.dome->ok}};
  }
  if (r.kesten) j["kesten"] = r.kesten->describe();
  Json cps = Json::array();
  for (const auto& c : r.profile.checkpoints) {
    cps.push_back(Json{{"T", c.T.str()},
                       {"atoms", c.atoms},
                       {"max_abs_F", c.max_abs.approx()},
                       {"sup_minus_inf", c.range.approx()}});
  }
  j["checkpoints"] = cps;
  j["plateau"] = r.verdict.plateau;
  j["plateau_ratio"] = r.verdict.plateau_ratio;
  j["growth"] = r.verdict.growth;
  j["growth_amount"] = r.verdict.growth_amount;
  j["verdict"] = to_string(r.verdict.verdict);
  return j;
}

Region region_of(const std::string& spec, const QuadNum& alpha) {
  const auto colon = spec.find(':');
  const std::string head = spec.substr(0, colon);
  const std::string rest = colon == std::string::npos ? "" : spec.substr(colon + 1);
  const QuadNum one(1);
  const QuadNum zero(0);
  auto rect = [&](const QuadNum& w) {
    return polygon_region({Polygon{{{zero, zero}, {w, zero}, {w, one}, {zero, one}}}}, spec);
  };
  if (head == "square") return rect(one);
  if (head == "empty") return polygon_region({}, "empty");
  if (head == "hat") {
    const Interval unit{zero, one, Convention::closed};
    return region_from_weight(make_hat(unit, QuadNum::rational(1, 2), one), alpha);
  }
  if (head == "strip") return rect(QuadNum::parse(rest));
  if (head == "band") {
    const Interval w{zero, QuadNum::parse(rest), Convention::half_open_right};
    return region_from_weight(WeightFn::indicator(w), alpha);
  }
  if (head == "poly") {
    Polygon poly;
    for (const auto& pt : split_list(rest, ';')) {
      const auto xy = split_list(pt, ',');
      if (xy.size() != 2) throw ParseError("poly vertices are X,Y pairs separated by ';'");
      poly.v.push_back({QuadNum::parse(xy[0]), QuadNum::parse(xy[1])});
    }
    if (poly.v.size() < 3) throw ParseError("poly needs at least three vertices");
    return polygon_region({poly}, spec);
  }
  throw ParseError("unknown region '" + spec + "'");
}

Measure measure_of(const std::string& spec, const RunConfig& c, const QuadNum& T) {
  const auto colon = spec.find(':');
  const std::string head = spec.substr(0, colon);
  const std::string rest = colon == std::string::npos ? "" : spec.substr(colon + 1);
  if (head == "fibonacci" || head == "fibonacci_half") {
    const auto kind = head == "fibonacci" ? FibonacciKind::full : FibonacciKind::half;
    return from_comb(realize_comb(fibonacci_preset(kind), std::nullopt, T, c.jobs), head);
  }
  if (head == "scheme") {
    const Scheme s = scheme_of(c);
    std::optional<WeightFn> h;
    if (!c.weight.empty()) h = parse_weight(c.weight, s.window);
    return from_comb(realize_comb(s, h, T, c.jobs), "scheme");
  }
  if (head == "lattice") return periodic_comb(QuadNum::parse(rest), T, spec);
  if (head == "lebesgue") return lebesgue(QuadNum::parse(rest));
  throw ParseError("unknown measure '" + spec + "'");
}

}  // namespace

std::vector<std::string> split_list(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  return out;
}

int cmd_generate(const RunConfig& c, std::ostream& out) {
  check_common(c);
  const Scheme s = scheme_of(c);
  const QuadNum T = parse_amount(c.T);
  if (T.sign() < 0) throw DomainError("T must be >= 0");
  std::optional<WeightFn> h;
  if (!c.weight.empty()) h = parse_weight(c.weight, s.window);
  Sink sink(c, ".points.csv", out);
  auto& os = *sink;
  os << "direct,direct_float,internal,internal_float,mass,mass_float\n";
  for (const auto& p : enumerate_points(s, QuadNum(0), T, c.jobs)) {
    const QuadNum mass = h ? h->value(p.internal) : QuadNum(1);
    os << p.direct.str() << ',' << fmt(p.direct.to_double()) << ',' << p.internal.str() << ','
       << fmt(p.internal.to_double()) << ',' << mass.str() << ',' << fmt(mass.to_double()) << '\n';
  }
  return kExitOk;
}

int cmd_scan(const RunConfig& c, std::ostream& out) {
  check_common(c);
  const Scheme s = scheme_of(c);
  const WeightFn h = parse_weight(c.weight.empty() ? "indicator" : c.weight, s.window);
  PipelineOptions opt;
  opt.jobs = c.jobs;
  if (!c.checkpoints.empty()) opt.checkpoints = parse_amounts(c.checkpoints);
  else opt.checkpoints = {QuadNum(100), QuadNum(1000), QuadNum(10000), QuadNum(100000)};
  for (const auto& t : opt.checkpoints) {
    if (t.sign() <= 0) throw DomainError("checkpoints must be positive");
  }
  const PipelineReport r = main_theorem_pipeline(s, h, opt);
  if (!c.out.empty()) {
    std::ofstream trace(c.out + ".trace.csv", std::ios::binary);
    if (!trace) throw Error("cannot write '" + c.out + ".trace.csv'");
    trace << "t,F_before,F_after\n";
    // Re-derive the event positions from the same comb.
    QuadNum T = opt.checkpoints.front();
    for (const auto& t : opt.checkpoints) T = quick_less(T, t) ? t : T;
    const CombMeasure comb = realize_comb(s, h, T, c.jobs);
    for (std::size_t i = 0; i < comb.atoms.size(); ++i) {
      trace << fmt(comb.atoms[i].position.to_double()) << ','
            << fmt(r.profile.before[i].to_double()) << ',' << fmt(r.profile.after[i].to_double())
            << '\n';
    }
  }
  Sink sink(c, ".report.json", out);
  *sink << pipeline_json(r).dump(2) << '\n';
  return kExitOk;
}

int cmd_cfrac(const RunConfig& c, std::ostream& out) {
  check_common(c);
  if (c.number.empty()) throw ParseError("cfrac needs a number");
  const QuadNum x = QuadNum::parse(c.number);
  const CFExpansion cf = cf_expand(x);
  const GlSums gl = gl_condition(cf, c.terms);
  const auto conv = cf_convergents(cf, c.terms);
  Sink sink(c, ".cfrac.csv", out);
  auto& os = *sink;
  os << "# " << cf.str() << '\n';
  os << "l,a,p,q,S\n";
  for (std::size_t l = 0; l < gl.sums.size(); ++l) {
    os << l << ',' << cf.quotient(l).str() << ',' << conv[l].p.str() << ',' << conv[l].q.str()
       << ',' << fmt(gl.sums[l]) << '\n';
  }
  if (!c.out.empty()) out << cf.str() << '\n';
  return kExitOk;
}

int cmd_brs(const RunConfig& c, std::ostream& out) {
  check_common(c);
  const QuadNum alpha = QuadNum::parse(c.alpha);
  if (alpha.sign() <= 0 || alpha.is_rational()) throw DomainError("slope must be a positive irrational");
  const Region P = region_of(c.region, alpha);
  if (!P.inside_unit_square()) throw DomainError("region is not inside the unit square");
  const auto xy = split_list(c.start, ',');
  if (xy.size() != 2) throw ParseError("start point is X,Y");
  std::vector<BigFloat> cps;
  const std::string list = c.checkpoints.empty() ? "1e2,1e3,1e4" : c.checkpoints;
  for (const auto& t : parse_amounts(list)) {
    if (t.sign() <= 0) throw DomainError("checkpoints must be positive");
    cps.push_back(t.to_bigfloat());
  }
  const DiscrepancyTrace tr = delta_sup_scan(P, alpha.to_bigfloat(),
                                             QuadNum::parse(xy[0]).to_bigfloat(),
                                             QuadNum::parse(xy[1]).to_bigfloat(), cps);
  Sink sink(c, ".brs.csv", out);
  auto& os = *sink;
  os << "t,delta,running_sup,events_since_last\n";
  for (const auto& row : tr.rows) {
    os << fmt(row.t) << ',' << fmt(row.delta) << ',' << fmt(row.running_sup) << ','
       << row.events_since_last << '\n';
  }
  if (!tr.slopes_ok) throw ToleranceError("a scanned segment had a slope outside {-|P|, 1-|P|}");
  return kExitOk;
}

int cmd_compare(const RunConfig& c, std::ostream& out) {
  check_common(c);
  const QuadNum T = parse_amount(c.T);
  if (T.sign() <= 0) throw DomainError("T must be positive");
  if (c.mu.empty() || c.nu.empty()) throw ParseError("compare needs --mu and --nu");
  const Measure mu = measure_of(c.mu, c, T);
  const Measure nu = measure_of(c.nu, c, T);
  const CompareReport r = bd_compare(mu, nu, T, c.samples, c.seed);
  Json j;
  j["mu"] = c.mu;
  j["nu"] = c.nu;
  j["T"] = T.str();
  j["C_event"] = number_json(r.c_event);
  j["C_sampled"] = number_json(r.c_sampled);
  j["samples"] = r.samples;
  j["seed"] = c.seed;
  j["sampled_within_event"] = r.sampled_within_event;
  if (r.periodic_bound) {
    j["periodic_bound"] = number_json(*r.periodic_bound);
    j["periodic_bound_holds"] = r.periodic_bound_holds;
  }
  Sink sink(c, ".compare.json", out);
  *sink << j.dump(2) << '\n';
  return kExitOk;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"Weighted cut-and-project sets, bounded distance and bounded remainder sets"};
  app.require_subcommand(1);
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--scheme", c.scheme_path, "Scheme description (JSON)");
    sub->add_option("--preset", c.preset, "fibonacci | fibonacci_half");
    sub->add_option("--weight", c.weight, "indicator | hat[:PEAK:VALUE] | dome[:AMP] | pl:X=V,...");
    sub->add_option("--T", c.T, "Interval length");
    sub->add_option("--checkpoints", c.checkpoints, "Comma-separated checkpoint list");
    sub->add_option("--precision", c.precision, "Float precision in bits (53..256)");
    sub->add_option("--jobs", c.jobs, "Worker threads");
    sub->add_option("--seed", c.seed, "Seed for sampled intervals");
    sub->add_option("--out", c.out, "Output prefix");
  };
  auto* gen = app.add_subcommand("generate", "Points or atoms on [0, T] as CSV");
  add_common(gen);
  auto* scan = app.add_subcommand("scan", "Defect profile and verdict report");
  add_common(scan);
  auto* cfr = app.add_subcommand("cfrac", "Continued fraction and admissibility sums");
  add_common(cfr);
  cfr->add_option("number", c.number, "Quadratic irrational")->required();
  cfr->add_option("--terms", c.terms, "Number of partial sums");
  auto* brs = app.add_subcommand("brs", "Discrepancy trace of a region under the flow");
  add_common(brs);
  brs->add_option("--region", c.region, "square | empty | hat | strip:W | band:L | poly:X,Y;...");
  brs->add_option("--alpha", c.alpha, "Slope");
  brs->add_option("--start", c.start, "Start point X,Y");
  auto* cmp = app.add_subcommand("compare", "Bounded distance comparison of two measures");
  add_common(cmp);
  cmp->add_option("--mu", c.mu, "fibonacci | fibonacci_half | scheme | lattice:S | lebesgue:M");
  cmp->add_option("--nu", c.nu, "Same choices as --mu");
  cmp->add_option("--samples", c.samples, "Random intervals");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitParse;
  }
  try {
    if (gen->parsed()) return cmd_generate(c, out);
    if (scan->parsed()) return cmd_scan(c, out);
    if (cfr->parsed()) return cmd_cfrac(c, out);
    if (brs->parsed()) return cmd_brs(c, out);
    if (cmp->parsed()) return cmd_compare(c, out);
  } catch (const ParseError& e) {
    err << "parse error at byte " << e.offset() << ": " << e.what() << '\n';
    return kExitParse;
  } catch (const ToleranceError& e) {
    err << "tolerance failure: " << e.what() << '\n';
    return kExitTolerance;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitSemantic;
  }
  return kExitParse;
}

}  // namespace qcps
