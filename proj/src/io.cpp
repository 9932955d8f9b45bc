#include "obm/io.hpp"

#include "obm/oracle.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace obm::io {

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::Validation, what); }

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

double to_num(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || *end != '\0') bad("not a number: '" + s + "'");
  return v;
}

std::vector<double> nums(const std::string& s) {
  std::vector<double> v;
  for (const auto& t : split(s, ',')) v.push_back(to_num(t));
  return v;
}

Vec vec_from(const Json& j) {
  if (!j.is_array() || j.size() < 2 || j.size() > 3) bad("expected a point with 2 or 3 coordinates");
  Vec v(static_cast<int>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<int>(i)] = j[i].get<double>();
  return v;
}

Json vec_to(const Vec& v) {
  Json a = Json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

template <class T>
T field(const Json& j, const char* key) {
  if (!j.contains(key)) bad(std::string("missing field '") + key + "'");
  return j.at(key).get<T>();
}

template <class T>
T field_or(const Json& j, const char* key, T fallback) {
  return j.contains(key) ? j.at(key).get<T>() : fallback;
}

ConvexBody body_from_string(const std::string& s) {
  const auto colon = s.find(':');
  const std::string head = s.substr(0, colon);
  const std::string tail = colon == std::string::npos ? "" : s.substr(colon + 1);
  const std::vector<double> v = tail.empty() ? std::vector<double>{} : nums(tail);
  auto arg = [&](std::size_t i, double fallback) { return i < v.size() ? v[i] : fallback; };
  if (head == "ball" || head == "disk") return ConvexBody::ball(2, arg(0, 1));
  if (head == "ball3") return ConvexBody::ball(3, arg(0, 1));
  if (head == "rect") return ConvexBody::rectangle(arg(0, 1), arg(1, 1));
  if (head == "square") return ConvexBody::rectangle(2 * arg(0, 1), 2 * arg(0, 1));
  if (head == "segment" && v.size() == 4) return ConvexBody::segment(vec2(v[0], v[1]), vec2(v[2], v[3]));
  if (head == "origin") return ConvexBody::origin(2);
  bad("unknown body shorthand '" + s + "'");
}

}  // namespace

Json load_json_arg(const std::string& arg) {
  const auto first = arg.find_first_not_of(" \t\n");
  try {
    if (first != std::string::npos && (arg[first] == '{' || arg[first] == '[')) return Json::parse(arg);
    std::ifstream in(arg);
    if (!in) {
      // Bare shorthand such as "ball:3" or "power:2".
      if (arg.find('/') == std::string::npos && arg.find(".json") == std::string::npos) return Json(arg);
      bad("cannot open " + arg);
    }
    return Json::parse(in);
  } catch (const Json::exception& e) {
    bad(std::string("malformed JSON in ") + arg + ": " + e.what());
  }
}

ConvexBody body_from_json(const Json& j) {
  try {
    if (j.is_string()) return body_from_string(j.get<std::string>());
    const std::string type = field<std::string>(j, "type");
    if (type == "ball") return ConvexBody::ball(field_or(j, "dim", 2), field_or(j, "radius", 1.0));
    if (type == "rectangle")
      return ConvexBody::rectangle(field<double>(j, "a"), field<double>(j, "b"), field_or(j, "centered", true));
    if (type == "square") {
      const double s = field_or(j, "half", 1.0);
      return ConvexBody::rectangle(2 * s, 2 * s);
    }
    if (type == "origin") return ConvexBody::origin(field_or(j, "dim", 2));
    if (type == "segment") return ConvexBody::segment(vec_from(j.at("a")), vec_from(j.at("b")));
    if (type == "vpolytope" || type == "polytope") {
      std::vector<Vec> pts;
      for (const auto& p : field<Json>(j, "vertices")) pts.push_back(vec_from(p));
      if (pts.empty()) bad("polytope without vertices");
      return ConvexBody::from_vertices(static_cast<int>(pts[0].size()), pts);
    }
    if (type == "hpolytope") {
      std::vector<Vec> normals;
      std::vector<double> offsets;
      for (const auto& h : field<Json>(j, "halfspaces")) {
        normals.push_back(vec_from(h.at("normal")));
        offsets.push_back(h.at("offset").get<double>());
      }
      if (normals.empty()) bad("hpolytope without halfspaces");
      return ConvexBody::from_halfspaces(static_cast<int>(normals[0].size()), normals, offsets);
    }
    if (type == "halfspaces") {
      std::vector<Vec> normals;
      for (const auto& p : field<Json>(j, "normals")) normals.push_back(vec_from(p));
      const auto offsets = field<std::vector<double>>(j, "offsets");
      if (normals.empty() || normals.size() != offsets.size()) bad("halfspaces need matching normals and offsets");
      return ConvexBody::from_halfspaces(static_cast<int>(normals[0].size()), normals, offsets);
    }
    if (type == "random") {
      const auto family = body_family_from_string(field_or<std::string>(j, "family", "K_oo"));
      return random_polytope(field_or<std::uint64_t>(j, "seed", 1), field_or(j, "dim", 2), field_or(j, "k", 8), family);
    }
    if (type == "unconditional") return random_unconditional_polygon(Seed(field_or<std::uint64_t>(j, "seed", 1)));
    if (type == "dilate") return dilate(body_from_json(field<Json>(j, "body")), field<double>(j, "factor"));
    bad("unknown body type '" + type + "'");
  } catch (const Json::exception& e) {
    bad(std::string("bad body descriptor: ") + e.what());
  }
}

std::vector<ConvexBody> bodies_from_json(const Json& j) {
  const Json& arr = j.is_object() && j.contains("bodies") ? j.at("bodies") : j;
  std::vector<ConvexBody> out;
  if (arr.is_array()) {
    for (const auto& b : arr) out.push_back(body_from_json(b));
  } else {
    out.push_back(body_from_json(arr));
  }
  return out;
}

Json body_to_json(const ConvexBody& K) {
  const Polytope& P = K.is_polytope() ? K.polytope() : K.shape();
  Json j;
  j["type"] = "vpolytope";
  j["exact"] = K.is_polytope();
  Json vs = Json::array();
  for (const auto& v : P.vertices) vs.push_back(vec_to(v));
  j["vertices"] = vs;
  return j;
}

PhiFunction phi_from_json(const Json& j) {
  try {
    std::string fam;
    std::vector<double> v;
    if (j.is_string()) {
      const std::string s = j.get<std::string>();
      const auto colon = s.find(':');
      fam = s.substr(0, colon);
      if (colon != std::string::npos) v = nums(s.substr(colon + 1));
    } else {
      fam = field<std::string>(j, "family");
    }
    auto num = [&](const char* key, std::size_t i, double fallback) {
      if (j.is_object() && j.contains(key)) return j.at(key).get<double>();
      return i < v.size() ? v[i] : fallback;
    };
    if (fam == "power") return make_power(num("p", 0, 1));
    if (fam == "exp" || fam == "exp-normalized") return make_exp_normalized();
    if (fam == "neglog") return make_neglog();
    if (fam == "maxlinear") return make_maxlinear(num("tau", 0, 0));
    if (fam == "steep-exp") return make_steep_exp();
    if (fam == "weighted-power" || fam == "power-mix") {
      if (!j.is_object()) bad("weighted-power needs an object with weights and powers");
      return make_power_mix(field<std::vector<double>>(j, "weights"), field<std::vector<double>>(j, "powers"));
    }
    if (fam == "piecewise") {
      if (!j.is_object()) bad("piecewise needs an object with knots");
      return make_piecewise(field<std::vector<std::array<double, 2>>>(j, "knots"));
    }
    bad("unknown phi family '" + fam + "'");
  } catch (const Json::exception& e) {
    bad(std::string("bad phi descriptor: ") + e.what());
  }
}

Json phi_to_json(const PhiFunction& phi) {
  const auto& P = phi.parts();
  Json j;
  switch (phi.family()) {
    case PhiFamily::Power:
      j["family"] = "power";
      j["p"] = P.params.at(0);
      break;
    case PhiFamily::WeightedPower: {
      j["family"] = "weighted-power";
      std::vector<double> w, p;
      for (std::size_t i = 0; i + 1 < P.params.size(); i += 2) w.push_back(P.params[i]), p.push_back(P.params[i + 1]);
      j["weights"] = w;
      j["powers"] = p;
      break;
    }
    case PhiFamily::ExpNormalized: j["family"] = "exp-normalized"; break;
    case PhiFamily::NegLog: j["family"] = "neglog"; break;
    case PhiFamily::MaxLinear:
      j["family"] = "maxlinear";
      j["tau"] = P.params.at(0);
      break;
    case PhiFamily::PiecewiseLinear: {
      j["family"] = "piecewise";
      Json k = Json::array();
      for (const auto& kn : P.knots) k.push_back({kn[0], kn[1]});
      j["knots"] = k;
      break;
    }
    case PhiFamily::Custom:
      if (phi.name() == "steep-exp") {
        j["family"] = "steep-exp";
        break;
      }
      throw Error(ErrorCode::InvalidParameter, "custom phi '" + phi.name() + "' has no serial form");
  }
  return j;
}

PhiM phi_m_from_json(const Json& j) {
  try {
    if (j.is_string()) {
      const std::string s = j.get<std::string>();
      if (s == "max") return PhiM::max(2);
      if (s.rfind("power-sum:", 0) == 0 || s.rfind("lp:", 0) == 0) return PhiM::power_sum(to_num(s.substr(s.find(':') + 1)));
      const PhiFunction f = phi_from_json(j);
      return PhiM::sum({f, f});
    }
    const std::string kind = j.contains("kind") ? field<std::string>(j, "kind") : field<std::string>(j, "family");
    auto terms = [&] {
      std::vector<PhiFunction> t;
      for (const auto& e : field<Json>(j, "terms")) t.push_back(phi_from_json(e));
      return t;
    };
    if (kind == "sum") {
      if (j.contains("weights")) return PhiM::weighted_sum(terms(), field<std::vector<double>>(j, "weights"));
      return PhiM::sum(terms());
    }
    if (kind == "weighted-sum") return PhiM::weighted_sum(terms(), field<std::vector<double>>(j, "weights"));
    if (kind == "max") return PhiM::max(field_or(j, "arity", 2));
    if (kind == "power-sum") return PhiM::power_sum(field<double>(j, "p"), field_or(j, "arity", 2));
    if (kind == "gauge") return gauge_phi_from_body(body_from_json(field<Json>(j, "body")));
    // A univariate descriptor: the sum of two copies.
    const PhiFunction f = phi_from_json(j);
    return PhiM::sum({f, f});
  } catch (const Json::exception& e) {
    bad(std::string("bad phi descriptor: ") + e.what());
  }
}

Json phi_m_to_json(const PhiM& phi) {
  Json j;
  switch (phi.kind()) {
    case PhiM::Kind::Sum:
    case PhiM::Kind::WeightedSum: {
      j["family"] = "sum";
      Json t = Json::array();
      for (const auto& f : phi.terms()) t.push_back(phi_to_json(f));
      j["terms"] = t;
      if (phi.kind() == PhiM::Kind::WeightedSum) j["weights"] = phi.weights();
      break;
    }
    case PhiM::Kind::Max:
      j["family"] = "max";
      j["arity"] = phi.arity();
      break;
    case PhiM::Kind::HomogeneousGauge:
      j["family"] = "gauge";
      j["body"] = body_to_json(phi.gauge_body());
      break;
    case PhiM::Kind::Custom: throw Error(ErrorCode::InvalidParameter, "custom phi has no serial form");
  }
  return j;
}

CoeffSet coeffs_from_arg(const std::string& arg, const PhiM* phi) {
  if (arg.rfind("name:", 0) == 0) {
    const std::vector<std::string> parts = split(arg.substr(5), ',');
    const std::string name = parts.empty() ? "" : parts[0];
    if (name == "singleton") return CoeffSet::singleton();
    if (name == "segment") return CoeffSet::segment();
    if (name == "jpolar") {
      if (!phi) bad("name:jpolar needs --phi");
      return CoeffSet::j_polar_positive(*phi);
    }
    if (name == "lp") {
      double p = 1;
      for (std::size_t i = 1; i < parts.size(); ++i) {
        if (parts[i].rfind("p=", 0) == 0) p = to_num(parts[i].substr(2));
        else bad("unknown M option '" + parts[i] + "'");
      }
      if (!(p >= 1)) bad("lp coefficient set needs p >= 1");
      // The sum with support ||(h_K, h_L)||_p comes from the dual arc.
      const double q = p == 1 ? std::numeric_limits<double>::infinity() : p / (p - 1);
      return CoeffSet::lp_arc(q);
    }
    bad("unknown coefficient set '" + arg + "'");
  }
  const Json j = load_json_arg(arg);
  if (!j.is_object() || !j.contains("points")) bad("coefficient file needs a points array");
  std::vector<std::vector<double>> pts;
  for (const auto& p : j.at("points")) pts.push_back(p.get<std::vector<double>>());
  if (pts.empty()) bad("empty coefficient set");
  return CoeffSet::points(static_cast<int>(pts[0].size()), pts);
}

std::string equality_label(const InequalityReport& r) {
  if (!r.near_equality) return "none";
  if (r.equality.dilatate) return "dilatate";
  if (r.equality.homothetic) return "homothetic";
  return "unclassified";
}

Json report_to_json(const InequalityReport& r) {
  Json j;
  j["name"] = r.name;
  j["lhs"] = r.lhs;
  j["rhs"] = r.rhs;
  j["slack"] = r.slack;
  j["scale"] = r.scale;
  j["holds"] = r.holds;
  j["equality_case"] = equality_label(r);
  if (r.equality.checked) {
    j["equality"] = {{"dilatate", r.equality.dilatate},
                     {"homothetic", r.equality.homothetic},
                     {"ratio", r.equality.ratio},
                     {"defect", r.equality.defect}};
  }
  if (r.conjecture) j["conjecture"] = true;
  j["strict_expected"] = r.strict_expected;
  j["grid"] = r.grid;
  j["seed"] = r.seed;
  if (!r.note.empty()) j["note"] = r.note;
  if (!r.parts.empty()) {
    Json parts = Json::array();
    for (const auto& p : r.parts) parts.push_back(report_to_json(p));
    j["parts"] = parts;
  }
  return j;
}

std::string reports_to_csv(const std::vector<InequalityReport>& rows) {
  std::string out = "name,lhs,rhs,slack,holds,equality_case,grid,seed\n";
  for (const auto& r : rows) {
    out += r.name + "," + format_double(r.lhs) + "," + format_double(r.rhs) + "," + format_double(r.slack) + "," +
           (r.holds ? "true" : "false") + "," + equality_label(r) + "," + std::to_string(r.grid) + "," +
           std::to_string(r.seed) + "\n";
  }
  return out;
}

Json suite_to_json(const SuiteResult& s) {
  Json j;
  j["all_hold"] = s.all_hold;
  Json sum = Json::array();
  for (const auto& x : s.summary) {
    sum.push_back({{"validator", x.validator},
                   {"cases", x.cases},
                   {"failures", x.failures},
                   {"dilatate", x.dilatate},
                   {"dilatate_detected", x.dilatate_detected},
                   {"strict_cases", x.strict_cases},
                   {"strict_ok", x.strict_ok},
                   {"worst_relative_slack", x.worst_slack}});
  }
  j["summary"] = sum;
  Json rows = Json::array();
  for (const auto& r : s.rows) {
    Json row = report_to_json(r.report);
    row["validator"] = r.validator;
    row["kind"] = r.kind;
    row["index"] = r.index;
    rows.push_back(row);
  }
  j["rows"] = rows;
  return j;
}

}  // namespace obm::io
