#pragma once

#include "obm/functionals.hpp"
#include "obm/inequalities.hpp"

#include <json.hpp>

namespace obm::io {

using Json = nlohmann::ordered_json;

// A file path, or inline JSON when the text starts with '{' or '['.
Json load_json_arg(const std::string& arg);

// Bodies: {"type": "vpolytope", "vertices": [...]}, {"type": "hpolytope", "halfspaces": [{"normal", "offset"}]},
// {"type": "ball"|"rectangle"|"square"|"segment"|"origin"|"random"|"unconditional"|"dilate", ...}
// or shorthand strings "ball:3", "ball3:1", "rect:2,1", "square:1", "segment:x1,y1,x2,y2".
ConvexBody body_from_json(const Json& j);
// A single body, an array, or {"bodies": [...]}.
std::vector<ConvexBody> bodies_from_json(const Json& j);
// Vertices of the polytope (outer polygon on the standard grid for oracles).
Json body_to_json(const ConvexBody& K);

// {"family": "power", "p": 2} or shorthand "power:2", "exp", "neglog", "maxlinear:0.3",
// "steep-exp"; piecewise needs {"family": "piecewise", "knots": [[t, y], ...]}.
PhiFunction phi_from_json(const Json& j);
Json phi_to_json(const PhiFunction& phi);
// {"family": "sum", "terms": [...], "weights": [...]} (weights optional), "max", "power-sum"
// (p, arity), "gauge" (body); shorthand "max", "lp:2". A univariate phi means the sum of
// two copies.
PhiM phi_m_from_json(const Json& j);
Json phi_m_to_json(const PhiM& phi);

// "name:lp,p=2", "name:singleton", "name:segment", "name:jpolar" (needs phi), or a
// JSON file / inline {"points": [[a1, a2], ...]}.
CoeffSet coeffs_from_arg(const std::string& arg, const PhiM* phi = nullptr);

Json report_to_json(const InequalityReport& r);
// none, dilatate, homothetic, or unclassified (near equality without a witness).
std::string equality_label(const InequalityReport& r);
// name,lhs,rhs,slack,holds,equality_case,grid,seed
std::string reports_to_csv(const std::vector<InequalityReport>& rows);
Json suite_to_json(const SuiteResult& s);

}  // namespace obm::io
