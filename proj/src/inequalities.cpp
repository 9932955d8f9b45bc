#include "obm/inequalities.hpp"

#include "obm/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace obm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

DiscreteSurfaceMeasure measure_of(const ConvexBody& K, const ConvexBody& L) {
  if (K.is_polytope()) return surface_area_measure(K);
  return surface_area_measure(K, shared_grid(K, L));
}

void require_origin_interior(const ConvexBody& K) {
  if (!origin_interior(K)) throw Error(ErrorCode::OriginNotInterior, "K must contain o in its interior");
}

void check_domain(const PhiFunction& phi, const DiscreteSurfaceMeasure& S, const ConvexBody& L) {
  if (!std::isfinite(phi.domain())) return;
  for (std::size_t i = 0; i < S.normals.size(); ++i)
    if (!(L.support(S.normals[i]) < phi.domain() * S.support[i]))
      throw Error(ErrorCode::DomainViolation, "h_L / h_K leaves the domain of phi");
}

double body_volume(const ConvexBody& K) { return volume(K); }

void equality_scan(InequalityReport& r, const ConvexBody& K, const ConvexBody& L, bool homothety_too = false) {
  const double thr = settings().tol.equality;
  r.near_equality = std::fabs(r.slack) < thr * std::max(r.scale, 1e-300) || (r.scale == 0 && r.slack == 0);
  if (!r.near_equality) return;
  r.equality.checked = true;
  const DilatateResult d = is_dilatate_pair(K, L, 1e-6);
  r.equality.dilatate = d.yes;
  r.equality.ratio = d.ratio;
  r.equality.defect = d.defect;
  if (homothety_too) r.equality.homothetic = homothety(K, L, 1e-6).yes;
}

}  // namespace

// ---------------------------------------------------------------------------
// Mixed volumes

MixedVolumeResult mixed_volume_v1(const ConvexBody& K, const ConvexBody& L) {
  const DiscreteSurfaceMeasure S = measure_of(K, L);
  std::vector<double> t(S.normals.size());
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = L.support(S.normals[i]) * S.weights[i];
  MixedVolumeResult R;
  R.value = pairwise_sum(t) / S.dim;
  R.formula = "V1";
  R.atoms = t.size();
  R.grid_count = S.grid_count;
  return R;
}

MixedVolumeResult mixed_volume_vp(double p, const ConvexBody& K, const ConvexBody& L) {
  MixedVolumeResult R = mixed_volume_vphi(make_power(p), K, L);
  R.formula = "Vp";
  R.p = p;
  return R;
}

MixedVolumeResult mixed_volume_vphi(const PhiFunction& phi, const ConvexBody& K, const ConvexBody& L) {
  require_origin_interior(K);
  const DiscreteSurfaceMeasure S = measure_of(K, L);
  check_domain(phi, S, L);
  std::vector<double> t(S.normals.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double hk = S.support[i], hl = std::max(L.support(S.normals[i]), 0.0);
    t[i] = phi(hl / hk) * hk * S.weights[i];
  }
  MixedVolumeResult R;
  R.value = pairwise_sum(t) / S.dim;
  R.formula = "Vphi";
  R.atoms = t.size();
  R.grid_count = S.grid_count;
  return R;
}

MixedVolumeResult mixed_volume_vphi_hat(const PhiFunction& phi, const ConvexBody& K, const ConvexBody& L) {
  require_origin_interior(K);
  const DiscreteSurfaceMeasure S = measure_of(K, L);
  const ConeMeasure C = cone_measure(S);
  std::vector<double> r(C.normals.size()), t(r.size());
  double mx = 0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    r[i] = std::max(L.support(C.normals[i]), 0.0) / C.support[i];
    if (C.weights[i] > 0) mx = std::max(mx, r[i]);
  }
  MixedVolumeResult R;
  R.formula = "Vphi_hat";
  R.atoms = r.size();
  R.grid_count = S.grid_count;
  if (!(mx > 0)) return R;
  R.value = least_lambda(
      [&](double lam) {
        for (std::size_t i = 0; i < r.size(); ++i) t[i] = C.weights[i] > 0 ? C.weights[i] * phi(r[i] / lam) : 0.0;
        return pairwise_sum(t);
      },
      mx);
  return R;
}

// ---------------------------------------------------------------------------
// First variation

FirstVariationResult first_variation(const PhiFunction& phi1, const PhiFunction& phi2, const ConvexBody& K,
                                     const ConvexBody& L, std::vector<double> eps) {
  require_origin_interior(K);
  if (eps.empty()) throw Error(ErrorCode::InvalidParameter, "empty eps schedule");
  const DirectionGrid grid = shared_grid(K, L);
  const int n = K.dim();
  const double v0 = volume(K, grid);
  FirstVariationResult R;
  R.eps = eps;
  R.grid = grid.size();
  for (double e : eps) {
    const ConvexBody Ke = orlicz_linear_combination(phi1, phi2, K, L, 1.0, e);
    R.quotient.push_back((volume(Ke, grid) - v0) / e);
  }
  // Richardson for a schedule with constant ratio r: each pass removes one power of eps.
  std::vector<double> level = R.quotient;
  for (std::size_t pass = 1; level.size() > 1; ++pass) {
    const double r = eps[0] / eps[1];
    const double f = std::pow(r, static_cast<double>(pass));
    std::vector<double> next;
    for (std::size_t i = 0; i + 1 < level.size(); ++i) next.push_back((f * level[i + 1] - level[i]) / (f - 1));
    level = std::move(next);
  }
  R.richardson = level[0];
  R.estimate = left_derivative_at_1(phi1) / n * R.richardson;
  R.target = mixed_volume_vphi(phi2, K, L).value;
  R.rel_dev = std::fabs(R.estimate - R.target) / std::max(std::fabs(R.target), 1e-300);
  return R;
}

std::vector<double> epsilon_convergence(const PhiFunction& phi1, const PhiFunction& phi2, const ConvexBody& K,
                                        const ConvexBody& L, int k_lo, int k_hi) {
  const DirectionGrid grid = shared_grid(K, L);
  std::vector<double> out;
  for (int k = k_lo; k <= k_hi; ++k) {
    const ConvexBody Ke = orlicz_linear_combination(phi1, phi2, K, L, 1.0, std::pow(10.0, -k));
    double worst = 0;
    for (const auto& u : grid.directions()) worst = std::max(worst, std::fabs(Ke.support(u) - K.support(u)));
    out.push_back(worst);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Validators

InequalityReport make_report(const std::string& name, double lhs, double rhs, double tol) {
  InequalityReport r;
  r.name = name;
  r.lhs = lhs;
  r.rhs = rhs;
  r.slack = lhs - rhs;
  r.scale = std::max(std::fabs(lhs), std::fabs(rhs));
  if (tol <= 0) tol = settings().tol.validate;
  r.holds = r.slack >= -tol * r.scale;
  r.grid = DirectionGrid::standard(2).size();
  return r;
}

InequalityReport validate_orlicz_bm(const PhiM& phi, const ConvexBody& K, const ConvexBody& L) {
  if (phi.arity() != 2) throw Error(ErrorCode::InvalidParameter, "phi must have arity 2");
  const double vk = body_volume(K), vl = body_volume(L);
  if (!(vk > 0 && vl > 0)) throw Error(ErrorCode::ZeroVolume, "Orlicz Brunn-Minkowski needs V(K) V(L) > 0");
  OrliczSumSpec spec;
  spec.phi = phi;
  const ConvexBody S = orlicz_sum_compact(spec, std::vector<ConvexBody>{K, L});
  const int n = K.dim();
  const double vs = body_volume(S);
  const double x[2] = {std::pow(vk / vs, 1.0 / n), std::pow(vl / vs, 1.0 / n)};
  InequalityReport r = make_report("orlicz-bm", 1.0, phi.eval(x));
  r.grid = shared_grid(K, L).size();
  r.strict_expected = phi.strictly_convex();
  r.note = phi.name();
  const double roots[2] = {std::pow(vk, 1.0 / n), std::pow(vl, 1.0 / n)};
  r.parts.push_back(make_report("orlicz-bm-gauge", std::pow(vs, 1.0 / n), orlicz_value(phi, roots)));
  r.holds = r.holds && r.parts[0].holds;
  equality_scan(r, K, L);
  return r;
}

InequalityReport validate_orlicz_minkowski(const PhiFunction& phi, const ConvexBody& K, const ConvexBody& L) {
  const double vk = body_volume(K), vl = body_volume(L);
  const double lhs = mixed_volume_vphi(phi, K, L).value;
  InequalityReport r = make_report("orlicz-minkowski", lhs, vk * phi(std::pow(vl / vk, 1.0 / K.dim())));
  r.grid = K.is_polytope() ? 0 : shared_grid(K, L).size();
  r.strict_expected = phi.strictly_convex();
  r.note = phi.name();
  equality_scan(r, K, L);
  return r;
}

InequalityReport validate_vphi_hat_minkowski(const PhiFunction& phi, const ConvexBody& K, const ConvexBody& L) {
  const double vk = body_volume(K), vl = body_volume(L);
  const double lhs = mixed_volume_vphi_hat(phi, K, L).value;
  InequalityReport r = make_report("vphi-hat-minkowski", lhs, std::pow(vl / vk, 1.0 / K.dim()));
  r.grid = K.is_polytope() ? 0 : shared_grid(K, L).size();
  r.strict_expected = phi.strictly_convex();
  r.note = phi.name();
  equality_scan(r, K, L);
  return r;
}

InequalityReport validate_log_inequality(const ConvexBody& K, const ConvexBody& L) {
  require_origin_interior(K);
  const DiscreteSurfaceMeasure S = measure_of(K, L);
  const ConeMeasure C = cone_measure(S);
  double worst = 0;
  for (std::size_t i = 0; i < C.normals.size(); ++i)
    worst = std::max(worst, L.support(C.normals[i]) / C.support[i]);
  const DirectionGrid grid = shared_grid(K, L);
  for (const auto& u : grid.directions()) worst = std::max(worst, L.support(u) / K.support(u));
  if (!(worst < 1 - 1e-9)) throw Error(ErrorCode::ContainmentViolation, "L must lie in the interior of K");
  const int n = K.dim();
  const double vk = body_volume(K), vl = body_volume(L);
  const double rk = std::pow(vk, 1.0 / n), rl = std::pow(vl, 1.0 / n);
  std::vector<double> t(C.normals.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double hk = C.support[i], hl = std::max(L.support(C.normals[i]), 0.0);
    t[i] = C.weights[i] > 0 ? C.weights[i] * std::log1p(-hl / hk) : 0.0;
  }
  InequalityReport r = make_report("log-inequality", std::log1p(-rl / rk), pairwise_sum(t));
  r.grid = S.grid_count;
  r.strict_expected = true;
  r.note = "neglog";
  if (vl == 0) {
    r.near_equality = true;
    r.equality.checked = true;
    r.equality.dilatate = true;  // L = {o}
    return r;
  }
  equality_scan(r, K, L);
  return r;
}

InequalityReport validate_log_minkowski(const ConvexBody& K, const ConvexBody& L) {
  if (!is_o_symmetric(K, 1e-9) || !is_o_symmetric(L, 1e-9))
    throw Error(ErrorCode::SymmetryViolation, "log-Minkowski needs o-symmetric bodies");
  require_origin_interior(K);
  require_origin_interior(L);
  const DiscreteSurfaceMeasure S = measure_of(K, L);
  const ConeMeasure C = cone_measure(S);
  const int n = K.dim();
  std::vector<double> t(C.normals.size()), lin(C.normals.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double q = L.support(C.normals[i]) / C.support[i];
    t[i] = C.weights[i] > 0 ? C.weights[i] * std::log(q) : 0.0;
    lin[i] = C.weights[i] * q;
  }
  const double lhs = pairwise_sum(t);
  InequalityReport r = make_report("log-minkowski", lhs, std::log(body_volume(L) / body_volume(K)) / n);
  r.grid = S.grid_count;
  r.conjecture = n != 2;
  r.strict_expected = true;
  if (r.conjecture) r.note = "CONJECTURE: probe only for n = 3";
  // Jensen: the mean of h_L/h_K dominates the exponential of the mean log.
  r.parts.push_back(make_report("log-minkowski-jensen", pairwise_sum(lin), std::exp(lhs)));
  equality_scan(r, K, L);
  return r;
}

InequalityReport validate_bm_m_addition(const CoeffSet& M, const std::vector<ConvexBody>& bodies,
                                        const std::optional<std::vector<double>>& coeffs) {
  const ConvexBody S = m_sum(M, bodies);
  const int n = bodies[0].dim();
  std::vector<double> v;
  for (const auto& B : bodies) v.push_back(std::pow(body_volume(B), 1.0 / n));
  const double lhs = std::pow(body_volume(S), 1.0 / n);
  InequalityReport r = make_report("bm-m-addition", lhs, M.support(v));
  r.grid = shared_grid(bodies).size();
  r.note = M.name();
  r.strict_expected = M.kind() == CoeffSet::Kind::Singleton ||
                      (M.kind() == CoeffSet::Kind::LpArc && M.q() > 1 && std::isfinite(M.q()));
  if (coeffs) {
    if (coeffs->size() != bodies.size()) throw Error(ErrorCode::InvalidParameter, "coefficient count mismatch");
    double s = 0;
    for (std::size_t j = 0; j < v.size(); ++j) s += std::fabs((*coeffs)[j]) * v[j];
    r.parts.push_back(make_report("bm-m-addition-coefficients", lhs, s));
    r.holds = r.holds && r.parts.back().holds;
  }
  if (bodies.size() == 2) equality_scan(r, bodies[0], bodies[1], true);
  return r;
}

InequalityReport validate_bm_split(const ConvexBody& K, const ConvexBody& L, double tol) {
  if (K.dim() != 2 || L.dim() != 2) throw Error(ErrorCode::InvalidParameter, "the split is checked in the plane");
  if (!is_o_symmetric(K, 1e-9) || !is_o_symmetric(L, 1e-9))
    throw Error(ErrorCode::SymmetryViolation, "the split needs o-symmetric bodies");
  require_origin_interior(K);
  const int n = 2;
  const ConvexBody S = minkowski_sum(K, L);
  const DiscreteSurfaceMeasure SM = measure_of(S, S);
  const ConeMeasure C = cone_measure(SM);
  const double vs = body_volume(S), vk = body_volume(K), vl = body_volume(L);
  const double A = std::log1p(-std::pow(vl / vs, 1.0 / n));
  std::vector<double> t(C.normals.size());
  for (std::size_t i = 0; i < t.size(); ++i)
    t[i] = C.weights[i] > 0 ? C.weights[i] * std::log(K.support(C.normals[i]) / C.support[i]) : 0.0;
  const double B = pairwise_sum(t);
  const double Cv = std::log(vk / vs) / n;
  InequalityReport r =
      make_report("bm-split", std::pow(vs, 1.0 / n), std::pow(vk, 1.0 / n) + std::pow(vl, 1.0 / n), tol);
  r.parts.push_back(make_report("split-upper", A, B, tol));
  r.parts.push_back(make_report("split-lower", B, Cv, tol));
  r.parts.push_back(make_report("split-implied", A, Cv, tol));
  r.grid = SM.grid_count;
  for (const auto& p : r.parts) r.holds = r.holds && p.holds;
  equality_scan(r, K, L, true);
  return r;
}

// ---------------------------------------------------------------------------
// The rectangle/disk comparison

double hab_closed_form(double a, double b) {
  const double t0 = std::log(0.5 * (std::exp(2 / a) + std::exp(2 / b)));
  return std::exp(2 / (a * t0)) + std::exp(2 / (b * t0)) - 2 * std::exp(1.0);
}

HabResult compare_vphi_vs_hat(double a, double b) {
  if (!(a > 0 && b > 0)) throw Error(ErrorCode::InvalidParameter, "rectangle sides must be positive");
  const PhiFunction phi = make_exp_normalized();
  const ConvexBody K = ConvexBody::rectangle(a, b);
  const ConvexBody L = ConvexBody::ball(2, 1.0);
  HabResult R;
  R.a = a;
  R.b = b;
  R.h_closed = hab_closed_form(a, b);
  R.vphi_ratio = mixed_volume_vphi(phi, K, L).value / volume(K);
  R.lambda1 = mixed_volume_vphi_hat(phi, K, L).value;
  // H = 2(e - 1)(Psi(t0) - 1) with Psi the cone-measure integral and t0 = phi^-1(V_phi / V).
  const double t0 = restricted_inverse(phi, R.vphi_ratio);
  const ConeMeasure C = cone_measure(K);
  double psi = 0;
  for (std::size_t i = 0; i < C.normals.size(); ++i)
    psi += C.weights[i] * phi(L.support(C.normals[i]) / (t0 * C.support[i]));
  R.h_geometric = 2 * std::expm1(1.0) * (psi - 1);
  R.sign_consistent = (R.h_closed >= 0) == (phi(R.lambda1) >= R.vphi_ratio) || std::fabs(R.h_closed) < 1e-12;
  return R;
}

HabScan scan_hab(double a, double b_max) {
  HabScan S;
  for (int k = 0;; ++k) {
    const double b = std::pow(2.0, k / 8.0);
    if (b > b_max * (1 + 1e-12)) break;
    S.b.push_back(b);
    S.h.push_back(hab_closed_form(a, b));
  }
  for (std::size_t i = S.b.size(); i-- > 0;) {
    if (!(S.h[i] > 0)) break;
    S.b_star = S.b[i];
  }
  return S;
}

// ---------------------------------------------------------------------------
// Randomized suite

std::vector<std::string> suite_validators() {
  return {"orlicz-bm", "orlicz-minkowski", "vphi-hat-minkowski", "log-inequality", "bm-m-addition", "log-minkowski"};
}

namespace {

PhiFunction suite_phi(const Seed& s, bool strict) {
  static const PhiKind strict_kinds[] = {PhiKind::Power, PhiKind::PowerMix, PhiKind::Exp};
  static const PhiKind loose_kinds[] = {PhiKind::MaxLinear, PhiKind::Piecewise, PhiKind::SteepExp};
  Rng rng{s.child("kind")};
  const PhiKind k = strict ? strict_kinds[rng.index(3)] : loose_kinds[rng.index(3)];
  PhiFunction f = random_phi(s, k);
  if (strict && k == PhiKind::Power && f.parts().params[0] < 1.05) f = make_power(1.5);
  return f;
}

InequalityReport suite_case(const std::string& v, const Seed& s, bool dilatate) {
  Rng rng{s.child("params")};
  const bool strict = dilatate || rng.index(4) != 3;
  const double c = dilatate ? rng.uniform(0.3, 3.0) : 1.0;
  auto poly = [&](const char* label, BodyFamily f) { return random_polytope(s.child(label), 2, 5 + rng.index(6), f); };
  if (v == "orlicz-bm") {
    const ConvexBody K = poly("K", BodyFamily::OriginInterior);
    const ConvexBody L = dilatate ? dilate(K, c) : poly("L", BodyFamily::OriginInterior);
    const PhiFunction f = suite_phi(s.child("phi"), strict);
    return validate_orlicz_bm(PhiM::sum({f, f}), K, L);
  }
  if (v == "orlicz-minkowski" || v == "vphi-hat-minkowski") {
    const ConvexBody K = poly("K", BodyFamily::OriginInterior);
    const ConvexBody L = dilatate ? dilate(K, c) : poly("L", BodyFamily::ContainsOrigin);
    const PhiFunction f = suite_phi(s.child("phi"), strict);
    return v == "orlicz-minkowski" ? validate_orlicz_minkowski(f, K, L) : validate_vphi_hat_minkowski(f, K, L);
  }
  if (v == "log-inequality") {
    const ConvexBody K = poly("K", BodyFamily::OriginInterior);
    if (dilatate) return validate_log_inequality(K, dilate(K, rng.uniform(0.1, 0.9)));
    const ConvexBody L0 = poly("L", BodyFamily::ContainsOrigin);
    double worst = 0;
    const DirectionGrid grid = shared_grid(K, L0);
    for (const auto& u : grid.directions()) worst = std::max(worst, L0.support(u) / K.support(u));
    return validate_log_inequality(K, dilate(L0, rng.uniform(0.2, 0.8) / worst));
  }
  if (v == "bm-m-addition") {
    const ConvexBody K = poly("K", BodyFamily::OriginInterior);
    const ConvexBody L = dilatate ? dilate(K, c) : poly("L", BodyFamily::OriginInterior);
    const int which = dilatate ? rng.index(2) : rng.index(4);
    CoeffSet M = which == 0   ? CoeffSet::lp_arc(2)
                 : which == 1 ? CoeffSet::singleton()
                 : which == 2 ? CoeffSet::lp_arc(rng.uniform(1.2, 4.0))
                              : CoeffSet::segment();
    return validate_bm_m_addition(M, {K, L});
  }
  if (v == "log-minkowski") {
    const ConvexBody K = poly("K", BodyFamily::Symmetric);
    const ConvexBody L = dilatate ? dilate(K, c) : poly("L", BodyFamily::Symmetric);
    InequalityReport r = validate_log_minkowski(K, L);
    // Parallelograms with parallel sides are equality cases too.
    r.strict_expected = K.polytope().vertices.size() > 4 || L.polytope().vertices.size() > 4;
    return r;
  }
  throw Error(ErrorCode::InvalidParameter, "unknown validator " + v);
}

}  // namespace

SuiteResult run_suite(const SuiteOptions& opts) {
  std::vector<std::string> names = opts.validators.empty() ? suite_validators() : opts.validators;
  for (const auto& v : names) {
    const auto all = suite_validators();
    if (std::find(all.begin(), all.end(), v) == all.end())
      throw Error(ErrorCode::InvalidParameter, "unknown validator " + v);
  }
  SuiteResult R;
  const Seed root(opts.seed);
  for (const auto& v : names) {
    const int total = opts.cases + opts.dilatate_cases;
    std::vector<SuiteRow> rows(total);
    parallel_for(total, [&](std::size_t i) {
      const bool dil = static_cast<int>(i) >= opts.cases;
      const int idx = dil ? static_cast<int>(i) - opts.cases : static_cast<int>(i);
      const Seed s = root.child(v).child(dil ? "dilatate" : "random").child(static_cast<std::uint64_t>(idx));
      rows[i].validator = v;
      rows[i].kind = dil ? "dilatate" : "random";
      rows[i].index = idx;
      rows[i].report = suite_case(v, s, dil);
      rows[i].report.seed = s.value();
    });
    SuiteSummary sum;
    sum.validator = v;
    sum.worst_slack = kInf;
    for (const auto& row : rows) {
      const auto& r = row.report;
      if (row.kind == "random") {
        ++sum.cases;
        if (!r.holds && !r.conjecture) ++sum.failures;
        sum.worst_slack = std::min(sum.worst_slack, r.scale > 0 ? r.slack / r.scale : r.slack);
        if (r.strict_expected) {
          ++sum.strict_cases;
          if (r.slack > 1e-4 * r.scale) ++sum.strict_ok;
        }
      } else {
        ++sum.dilatate;
        if (r.near_equality && r.equality.dilatate) ++sum.dilatate_detected;
        if (!r.holds) ++sum.failures;
      }
    }
    if (sum.failures > 0) R.all_hold = false;
    R.summary.push_back(sum);
    for (auto& row : rows) R.rows.push_back(std::move(row));
  }
  return R;
}

}  // namespace obm
