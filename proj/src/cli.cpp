#include "obm/cli.hpp"

#include "obm/oracle.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

namespace obm::cli {

using io::Json;

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::Validation, what); }

const Json& need(const Scenario& s, const char* key) {
  if (!s.inputs.contains(key)) bad(s.command + " needs --" + key);
  return s.inputs.at(key);
}

template <class T>
T opt(const Scenario& s, const char* key, T fallback) {
  return s.inputs.contains(key) ? s.inputs.at(key).get<T>() : fallback;
}

ConvexBody body(const Scenario& s, const char* key) { return io::body_from_json(need(s, key)); }

Json support_summary(const ConvexBody& K) {
  const DirectionGrid grid = DirectionGrid::standard(K.dim());
  double lo = INFINITY, hi = 0;
  for (const auto& u : grid.directions()) {
    const double h = K.support(u);
    lo = std::min(lo, h);
    hi = std::max(hi, h);
  }
  Json j;
  j["volume"] = volume(K);
  j["h_min"] = lo;
  j["h_max"] = hi;
  Json axes = Json::array();
  for (int i = 0; i < K.dim(); ++i) axes.push_back(K.support(unit(K.dim(), i)));
  j["h_axes"] = axes;
  j["body"] = io::body_to_json(K);
  return j;
}

struct Output {
  std::string text;
  int code = Ok;
};

Output emit(const Scenario&, const Json& j) { return {j.dump(2) + "\n", Ok}; }

Output emit_report(const Scenario& s, const InequalityReport& r) {
  const int code = r.holds || r.conjecture ? Ok : InequalityViolation;
  if (s.format == "csv") return {io::reports_to_csv({r}), code};
  return {io::report_to_json(r).dump(2) + "\n", code};
}

Output cmd_add(const Scenario& s) {
  const std::string method = opt<std::string>(s, "method", s.inputs.contains("M") ? "m" : "orlicz");
  Json j;
  j["command"] = "add";
  j["method"] = method;
  std::vector<ConvexBody> bodies =
      s.inputs.contains("bodies") ? io::bodies_from_json(s.inputs.at("bodies")) : std::vector<ConvexBody>{};
  if (bodies.empty()) bodies = {body(s, "K"), body(s, "L")};
  ConvexBody out;
  if (method == "m") {
    std::optional<PhiM> phi;
    if (s.inputs.contains("phi")) phi = io::phi_m_from_json(s.inputs.at("phi"));
    const CoeffSet M = io::coeffs_from_arg(need(s, "M").get<std::string>(), phi ? &*phi : nullptr);
    j["M"] = M.name();
    out = m_sum(M, bodies);
  } else if (method == "orlicz") {
    OrliczSumSpec spec;
    spec.phi = io::phi_m_from_json(need(s, "phi"));
    out = orlicz_sum(spec, bodies);
  } else if (method == "compact") {
    OrliczSumSpec spec;
    spec.phi = io::phi_m_from_json(need(s, "phi"));
    out = orlicz_sum_compact(spec, bodies);
  } else if (method == "parametric") {
    if (bodies.size() != 2) bad("parametric addition takes two bodies");
    const ParametricResult R = orlicz_sum_parametric(extended_spec(io::phi_m_from_json(need(s, "phi"))), bodies[0], bodies[1]);
    j["square_case"] = R.square_case;
    out = R.hull;
  } else if (method == "wulff") {
    if (bodies.size() != 2) bad("wulff addition takes two bodies");
    out = wulff_sum(io::phi_from_json(need(s, "phi")), bodies[0], bodies[1], opt(s, "eps", 1.0));
  } else {
    bad("unknown add method '" + method + "'");
  }
  j.update(support_summary(out));
  return emit(s, j);
}

Output cmd_mvol(const Scenario& s) {
  const ConvexBody K = body(s, "K"), L = body(s, "L");
  const std::string formula = opt<std::string>(s, "formula", s.inputs.contains("phi") ? "vphi" : "v1");
  MixedVolumeResult R;
  if (formula == "v1") R = mixed_volume_v1(K, L);
  else if (formula == "vp") R = mixed_volume_vp(opt(s, "p", 1.0), K, L);
  else if (formula == "vphi") R = mixed_volume_vphi(io::phi_from_json(need(s, "phi")), K, L);
  else if (formula == "vphi_hat") R = mixed_volume_vphi_hat(io::phi_from_json(need(s, "phi")), K, L);
  else bad("unknown formula '" + formula + "'");
  Json j;
  j["command"] = "mvol";
  j["formula"] = R.formula;
  if (formula == "vp") j["p"] = R.p;
  j["value"] = R.value;
  j["volume_K"] = volume(K);
  j["atoms"] = R.atoms;
  j["grid"] = R.grid_count;
  return emit(s, j);
}

Output cmd_ineq(const Scenario& s) {
  const std::string name = need(s, "name").get<std::string>();
  InequalityReport r;
  if (name == "orlicz-bm") {
    r = validate_orlicz_bm(io::phi_m_from_json(need(s, "phi")), body(s, "K"), body(s, "L"));
  } else if (name == "orlicz-minkowski") {
    r = validate_orlicz_minkowski(io::phi_from_json(need(s, "phi")), body(s, "K"), body(s, "L"));
  } else if (name == "vphi-hat-minkowski") {
    r = validate_vphi_hat_minkowski(io::phi_from_json(need(s, "phi")), body(s, "K"), body(s, "L"));
  } else if (name == "log-inequality") {
    r = validate_log_inequality(body(s, "K"), body(s, "L"));
  } else if (name == "log-minkowski") {
    r = validate_log_minkowski(body(s, "K"), body(s, "L"));
  } else if (name == "bm-m-addition") {
    std::vector<ConvexBody> bodies =
        s.inputs.contains("bodies") ? io::bodies_from_json(s.inputs.at("bodies")) : std::vector<ConvexBody>{};
    if (bodies.empty()) bodies = {body(s, "K"), body(s, "L")};
    std::optional<PhiM> phi;
    if (s.inputs.contains("phi")) phi = io::phi_m_from_json(s.inputs.at("phi"));
    const CoeffSet M = io::coeffs_from_arg(opt<std::string>(s, "M", "name:singleton"), phi ? &*phi : nullptr);
    std::optional<std::vector<double>> coeffs;
    if (s.inputs.contains("coeffs")) coeffs = s.inputs.at("coeffs").get<std::vector<double>>();
    r = validate_bm_m_addition(M, bodies, coeffs);
  } else if (name == "bm-split") {
    r = validate_bm_split(body(s, "K"), body(s, "L"));
  } else {
    bad("unknown inequality '" + name + "'");
  }
  r.seed = s.seed;
  return emit_report(s, r);
}

Output cmd_split(const Scenario& s) {
  InequalityReport r = validate_bm_split(body(s, "K"), body(s, "L"));
  r.seed = s.seed;
  if (s.format == "csv") {
    std::vector<InequalityReport> rows = {r};
    for (const auto& p : r.parts) rows.push_back(p);
    return {io::reports_to_csv(rows), r.holds ? Ok : InequalityViolation};
  }
  return emit_report(s, r);
}

Output cmd_projbody(const Scenario& s) {
  const ConvexBody P = orlicz_projection_body(io::phi_from_json(need(s, "phi")), body(s, "K"), opt(s, "asym", false));
  Json j;
  j["command"] = "projbody";
  j.update(support_summary(P));
  return emit(s, j);
}

Output cmd_centroidbody(const Scenario& s) {
  const Quadrature q = Quadrature::parse(opt<std::string>(s, "quad", "cells:512"));
  const ConvexBody C = orlicz_centroid_body(io::phi_from_json(need(s, "phi")), body(s, "K"), q, opt(s, "asym", false));
  Json j;
  j["command"] = "centroidbody";
  j["quadrature"] = q.to_string();
  j.update(support_summary(C));
  return emit(s, j);
}

Output cmd_decompose(const Scenario& s) {
  ConvexBody K;
  if (s.inputs.contains("K")) K = body(s, "K");
  else K = j_polar(io::phi_m_from_json(need(s, "phi")));
  const DecompositionResult D = decompose_2d(K);
  Json j;
  j["command"] = "decompose";
  j["case"] = to_string(D.which);
  j["tau1"] = D.tau1;
  j["tau2"] = D.tau2;
  if (D.which == DecompositionResult::Case::Corner) j["corner"] = {D.a, D.b};
  j["identity_defect"] = D.identity_defect;
  Json samples = Json::array();
  const int n = opt(s, "samples", 11);
  for (int i = 0; i < n; ++i) {
    const double t = n == 1 ? 0 : static_cast<double>(i) / (n - 1);
    samples.push_back({{"t", t}, {"phi1", (*D.phi1)(t)}, {"phi2", (*D.phi2)(t)}, {"f", D.f(t)}});
  }
  j["samples"] = samples;
  return emit(s, j);
}

Output cmd_probe_naive(const Scenario& s) {
  const PhiFunction phi = io::phi_from_json(s.inputs.contains("phi") ? s.inputs.at("phi") : Json("exp"));
  const int pairs = opt(s, "pairs", 20000);
  std::vector<std::pair<ConvexBody, ConvexBody>> cases;
  if (s.inputs.contains("K")) cases.emplace_back(body(s, "K"), body(s, "L"));
  else cases = segment_suite(s.seed);
  Json j;
  j["command"] = "probe-naive";
  j["phi"] = phi.name();
  NaiveProbeResult worst;
  int violations = 0;
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const NaiveProbeResult R = naive_sum_probe(phi, cases[i].first, cases[i].second, pairs, s.seed + i);
    if (!R.is_support_function) ++violations;
    if (i == 0 || R.defect > worst.defect) worst = R;
  }
  j["cases"] = cases.size();
  j["violations"] = violations;
  j["is_support_function"] = violations == 0;
  j["worst_defect"] = worst.defect;
  if (worst.x.size() > 0) {
    j["x"] = {worst.x[0], worst.x[1]};
    j["y"] = {worst.y[0], worst.y[1]};
  }
  return emit(s, j);
}

Output cmd_probe_assoc(const Scenario& s) {
  const PhiM phi = io::phi_m_from_json(s.inputs.contains("phi") ? s.inputs.at("phi") : Json("exp"));
  std::vector<ConvexBody> bodies;
  if (s.inputs.contains("bodies")) bodies = io::bodies_from_json(s.inputs.at("bodies"));
  else
    for (int i = 0; i < 3; ++i)
      bodies.push_back(random_polytope(Seed(s.seed).child("probe-assoc").child(static_cast<std::uint64_t>(i)), 2, 6,
                                       BodyFamily::OriginInterior));
  const DirectionGrid grid = DirectionGrid::circle(opt(s, "directions", 360));
  const AlgebraProbeResult A = associativity_probe(phi, bodies, grid);
  const AlgebraProbeResult C = commutativity_probe(phi, bodies, grid);
  Json j;
  j["command"] = "probe-assoc";
  j["phi"] = phi.name();
  j["associativity_defect"] = A.defect;
  j["commutativity_defect"] = C.defect;
  j["associative"] = A.defect <= 1e-9;
  return emit(s, j);
}

Output cmd_suite(const Scenario& s) {
  SuiteOptions o;
  o.seed = s.seed;
  o.cases = opt(s, "cases", 500);
  o.dilatate_cases = opt(s, "dilatate", 0);
  if (s.inputs.contains("validators")) o.validators = s.inputs.at("validators").get<std::vector<std::string>>();
  const SuiteResult R = run_suite(o);
  const int code = R.all_hold ? Ok : InequalityViolation;
  if (s.format == "csv") {
    std::vector<InequalityReport> rows;
    for (const auto& r : R.rows) rows.push_back(r.report);
    return {io::reports_to_csv(rows), code};
  }
  return {io::suite_to_json(R).dump(2) + "\n", code};
}

Output cmd_hab(const Scenario& s) {
  const double a = opt(s, "a", 2.0);
  Json j;
  j["command"] = "hab";
  if (opt(s, "scan", false)) {
    const HabScan S = scan_hab(a, opt(s, "b_max", 128.0));
    j["a"] = a;
    Json rows = Json::array();
    for (std::size_t i = 0; i < S.b.size(); ++i) rows.push_back({{"b", S.b[i]}, {"H", S.h[i]}});
    j["scan"] = rows;
    if (S.b_star) j["b_star"] = *S.b_star;
    else j["b_star"] = nullptr;
    return emit(s, j);
  }
  const HabResult H = compare_vphi_vs_hat(a, opt(s, "b", 1.0));
  j["a"] = H.a;
  j["b"] = H.b;
  j["H"] = H.h_closed;
  j["H_geometric"] = H.h_geometric;
  j["sign"] = H.h_closed > 0 ? "positive" : H.h_closed < 0 ? "negative" : "zero";
  j["lambda1"] = H.lambda1;
  j["vphi_ratio"] = H.vphi_ratio;
  j["sign_consistent"] = H.sign_consistent;
  return emit(s, j);
}

Output dispatch(const Scenario& s) {
  if (s.command == "add") return cmd_add(s);
  if (s.command == "mvol") return cmd_mvol(s);
  if (s.command == "ineq") return cmd_ineq(s);
  if (s.command == "split") return cmd_split(s);
  if (s.command == "projbody") return cmd_projbody(s);
  if (s.command == "centroidbody") return cmd_centroidbody(s);
  if (s.command == "decompose") return cmd_decompose(s);
  if (s.command == "probe-naive") return cmd_probe_naive(s);
  if (s.command == "probe-assoc") return cmd_probe_assoc(s);
  if (s.command == "suite") return cmd_suite(s);
  if (s.command == "hab") return cmd_hab(s);
  bad("unknown command '" + s.command + "'");
}

void error_json(std::ostream& err, const std::string& kind, const std::string& msg, int code) {
  Json j;
  j["error"] = kind;
  j["message"] = msg;
  j["exit_code"] = code;
  err << j.dump() << "\n";
}

}  // namespace

const std::vector<std::string>& commands() {
  static const std::vector<std::string> c = {"add",       "mvol",        "ineq",        "projbody", "centroidbody", "decompose",
                                             "probe-naive", "probe-assoc", "split", "suite",    "hab"};
  return c;
}

Json scenario_to_json(const Scenario& s) {
  Json j;
  j["command"] = s.command;
  j["inputs"] = s.inputs;
  j["grid"] = s.grid;
  j["seed"] = s.seed;
  j["out"] = s.out;
  j["format"] = s.format;
  return j;
}

Scenario scenario_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("command")) bad("scenario needs a command");
  Scenario s;
  try {
    s.command = j.at("command").get<std::string>();
    if (j.contains("inputs")) s.inputs = j.at("inputs");
    if (!s.inputs.is_object()) bad("scenario inputs must be an object");
    s.grid = j.value("grid", 0);
    s.seed = j.value("seed", std::uint64_t{42});
    s.out = j.value("out", std::string());
    s.format = j.value("format", std::string("json"));
  } catch (const Json::exception& e) {
    bad(std::string("malformed scenario: ") + e.what());
  }
  const auto& c = commands();
  if (std::find(c.begin(), c.end(), s.command) == c.end()) bad("unknown command '" + s.command + "'");
  if (s.format != "json" && s.format != "csv") bad("format must be csv or json");
  if (s.grid != 0 && s.grid < 8) bad("grid must be at least 8");
  return s;
}

int run(const Scenario& s, std::ostream& out, std::ostream& err) {
  try {
    if (s.grid > 0) mutable_settings().grid2d = s.grid;
    const Output o = dispatch(s);
    if (s.out.empty()) {
      out << o.text;
    } else {
      std::ofstream f(s.out, std::ios::binary);
      if (!f) bad("cannot write " + s.out);
      f << o.text;
    }
    return o.code;
  } catch (const Error& e) {
    const int code = e.code() == ErrorCode::SolverFailure ? SolverFailureExit : ValidationFailure;
    error_json(err, to_string(e.code()), e.message(), code);
    return code;
  } catch (const std::exception& e) {
    error_json(err, "Internal", e.what(), ValidationFailure);
    return ValidationFailure;
  }
}

int main(int argc, char** argv) {
  CLI::App app{"obm: Orlicz addition of convex bodies"};
  app.require_subcommand(1);

  struct Flags {
    std::string phi, K, L, bodies, M, name, method, formula, quad, validators, save, coeffs;
    std::string out, format;
    int grid = 0, pairs = 20000, cases = 500, dilatate = 0, samples = 11, directions = 360;
    std::uint64_t seed = 42;
    double a = 2, b = 1, p = 1, eps = 1, b_max = 128;
    bool asym = false, scan = false;
  } f;

  std::map<std::string, CLI::App*> subs;
  std::map<std::string, std::vector<std::pair<std::string, CLI::Option*>>> opts;
  auto add = [&](CLI::App* sub, const std::string& cmd, const std::string& key, CLI::Option* o) {
    opts[cmd].emplace_back(key, o);
    (void)sub;
  };
  for (const auto& cmd : commands()) {
    CLI::App* sub = app.add_subcommand(cmd);
    subs[cmd] = sub;
    add(sub, cmd, "phi", sub->add_option("--phi", f.phi, "phi descriptor: file, inline JSON or shorthand"));
    add(sub, cmd, "K", sub->add_option("--K", f.K, "body descriptor"));
    add(sub, cmd, "L", sub->add_option("--L", f.L, "body descriptor"));
    add(sub, cmd, "bodies", sub->add_option("--bodies", f.bodies, "array of body descriptors"));
    add(sub, cmd, "M", sub->add_option("--M", f.M, "coefficient set: file or name:lp,p=2"));
    sub->add_option("--grid", f.grid, "planar direction count");
    sub->add_option("--seed", f.seed, "root seed");
    sub->add_option("--out,--report", f.out, "output path (default stdout)");
    sub->add_option("--format", f.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--save-scenario", f.save, "write the parsed scenario as JSON and run it");
  }
  add(subs["ineq"], "ineq", "name", subs["ineq"]->add_option("--name", f.name, "inequality")->required());
  add(subs["ineq"], "ineq", "coeffs", subs["ineq"]->add_option("--coeffs", f.coeffs, "comma separated (a_1, ..., a_m)"));
  add(subs["add"], "add", "method",
      subs["add"]->add_option("--method", f.method)->check(CLI::IsMember({"orlicz", "compact", "m", "parametric", "wulff"})));
  add(subs["add"], "add", "eps", subs["add"]->add_option("--eps", f.eps, "wulff weight on L"));
  add(subs["mvol"], "mvol", "formula",
      subs["mvol"]->add_option("--formula", f.formula)->check(CLI::IsMember({"v1", "vp", "vphi", "vphi_hat"})));
  add(subs["mvol"], "mvol", "p", subs["mvol"]->add_option("--p", f.p));
  add(subs["centroidbody"], "centroidbody", "quad", subs["centroidbody"]->add_option("--quad", f.quad, "cells:N or mc:N,seed"));
  for (const char* c : {"centroidbody", "projbody"})
    add(subs[c], c, "asym", subs[c]->add_flag("--asym", f.asym, "asymmetric variant"));
  add(subs["decompose"], "decompose", "samples", subs["decompose"]->add_option("--samples", f.samples));
  add(subs["probe-naive"], "probe-naive", "pairs", subs["probe-naive"]->add_option("--pairs", f.pairs));
  add(subs["probe-assoc"], "probe-assoc", "directions", subs["probe-assoc"]->add_option("--directions", f.directions));
  add(subs["suite"], "suite", "cases", subs["suite"]->add_option("--cases", f.cases));
  add(subs["suite"], "suite", "dilatate", subs["suite"]->add_option("--dilatate", f.dilatate, "constructed dilatate cases"));
  add(subs["suite"], "suite", "validators", subs["suite"]->add_option("--validators", f.validators, "comma separated"));
  add(subs["hab"], "hab", "a", subs["hab"]->add_option("--a", f.a));
  add(subs["hab"], "hab", "b", subs["hab"]->add_option("--b", f.b));
  add(subs["hab"], "hab", "scan", subs["hab"]->add_flag("--scan", f.scan, "scan b on 2^{k/8}"));
  add(subs["hab"], "hab", "b_max", subs["hab"]->add_option("--b-max", f.b_max));

  std::string scenario_path;
  CLI::App* run_sub = app.add_subcommand("run", "run a saved scenario");
  run_sub->add_option("scenario", scenario_path)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    error_json(std::cerr, "Usage", e.what(), ValidationFailure);
    return ValidationFailure;
  }

  Scenario s;
  try {
    if (run_sub->parsed()) {
      s = scenario_from_json(io::load_json_arg(scenario_path));
    } else {
      for (const auto& cmd : commands()) {
        if (!subs[cmd]->parsed()) continue;
        s.command = cmd;
        for (const auto& [key, o] : opts[cmd]) {
          if (o->count() == 0) continue;
          Json v;
          if (key == "phi" || key == "K" || key == "L" || key == "bodies") v = io::load_json_arg(o->as<std::string>());
          else if (key == "M") v = f.M;
          else if (key == "validators") {
            v = Json::array();
            std::stringstream ss(f.validators);
            std::string item;
            while (std::getline(ss, item, ',')) v.push_back(item);
          } else if (key == "coeffs") {
            // "0.6,0.8" or a JSON array
            std::string text = f.coeffs;
            if (!text.empty() && text.front() == '[') text = text.substr(1, text.size() - (text.back() == ']' ? 2 : 1));
            v = Json::array();
            std::stringstream ss(text);
            std::string item;
            while (std::getline(ss, item, ',')) {
              char* end = nullptr;
              const double x = std::strtod(item.c_str(), &end);
              if (end == item.c_str() || *end != '\0') bad("bad --coeffs entry '" + item + "'");
              v.push_back(x);
            }
          } else if (key == "asym" || key == "scan") v = true;
          else if (key == "name" || key == "method" || key == "formula" || key == "quad") v = o->as<std::string>();
          else if (key == "pairs" || key == "cases" || key == "dilatate" || key == "samples" || key == "directions")
            v = o->as<int>();
          else v = o->as<double>();
          s.inputs[key] = v;
        }
      }
      s.grid = f.grid;
      s.seed = f.seed;
      s.out = f.out;
      // Infer the format from the output extension when not given.
      if (!f.format.empty()) s.format = f.format;
      else if (s.out.size() > 4 && s.out.compare(s.out.size() - 4, 4, ".csv") == 0) s.format = "csv";
      s = scenario_from_json(scenario_to_json(s));
    }
    if (!f.save.empty()) {
      std::ofstream out(f.save, std::ios::binary);
      if (!out) bad("cannot write " + f.save);
      out << scenario_to_json(s).dump(2) << "\n";
    }
  } catch (const Error& e) {
    error_json(std::cerr, to_string(e.code()), e.message(), ValidationFailure);
    return ValidationFailure;
  } catch (const std::exception& e) {
    error_json(std::cerr, "Usage", e.what(), ValidationFailure);
    return ValidationFailure;
  }
  return run(s, std::cout, std::cerr);
}

}  // namespace obm::cli
