#include "obm/phi.hpp"

#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace obm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double numeric_tau(const std::function<double(double)>& f, double domain) {
  // Largest t with f(t) = 0; f is convex, nonnegative and f(0) = 0.
  double hi = std::min(1.0, domain * 0.5);
  int guard = 0;
  while (!(f(hi) > 0) && guard++ < 60) hi = std::min(hi * 2, std::isfinite(domain) ? 0.5 * (hi + domain) : hi * 2);
  if (!(f(hi) > 0)) return hi;
  double lo = 0;
  for (int it = 0; it < 200 && hi - lo > 1e-16 * std::max(hi, 1.0); ++it) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) > 0 ? hi : lo) = mid;
  }
  return lo;
}

}  // namespace

const char* to_string(PhiFamily f) {
  switch (f) {
    case PhiFamily::Power: return "power";
    case PhiFamily::WeightedPower: return "weighted-power";
    case PhiFamily::ExpNormalized: return "exp-normalized";
    case PhiFamily::NegLog: return "neglog";
    case PhiFamily::MaxLinear: return "maxlinear";
    case PhiFamily::PiecewiseLinear: return "piecewise";
    case PhiFamily::Custom: return "custom";
  }
  return "custom";
}

PhiFunction::PhiFunction() : PhiFunction(make_power(1.0)) {}

PhiFunction::PhiFunction(Parts parts) {
  if (!parts.eval) throw Error(ErrorCode::InvalidParameter, "phi needs an evaluator");
  if (!(parts.domain > 0)) throw Error(ErrorCode::InvalidParameter, "phi domain bound must be positive");
  auto p = std::make_shared<Parts>(std::move(parts));
  tau_ = p->tau ? *p->tau : numeric_tau(p->eval, p->domain);
  p_ = std::move(p);
}

double PhiFunction::operator()(double t) const {
  if (std::isnan(t)) return t;
  if (t <= 0) return 0.0;
  if (t >= p_->domain) return kInf;
  return p_->eval(t);
}

double PhiFunction::log_eval(double t) const {
  if (t <= 0) return -kInf;
  if (t >= p_->domain) return kInf;
  if (p_->log_eval) return p_->log_eval(t);
  return std::log(p_->eval(t));
}

PhiFunction make_power(double p) {
  if (!(p >= 1) || !std::isfinite(p)) throw Error(ErrorCode::InvalidParameter, "power phi needs p >= 1");
  PhiFunction::Parts s;
  s.family = PhiFamily::Power;
  char buf[64];
  std::snprintf(buf, sizeof buf, "power(%g)", p);
  s.name = buf;
  s.params = {p};
  if (p == 1) {
    s.eval = [](double t) { return t; };
    s.inverse = [](double y) { return y; };
  } else if (p == 2) {
    s.eval = [](double t) { return t * t; };
    s.inverse = [](double y) { return std::sqrt(y); };
  } else {
    s.eval = [p](double t) { return std::pow(t, p); };
    s.inverse = [p](double y) { return std::pow(y, 1.0 / p); };
  }
  s.tau = 0.0;
  s.dl1 = p;
  s.right_derivative = [p](double t) { return p == 1 ? 1.0 : p * std::pow(t, p - 1); };
  s.log_eval = [p](double t) { return p * std::log(t); };
  s.strictly_convex = p > 1;
  return PhiFunction(std::move(s));
}

PhiFunction make_power_mix(const std::vector<double>& w, const std::vector<double>& pw) {
  if (w.empty() || w.size() != pw.size()) throw Error(ErrorCode::InvalidParameter, "power mix needs matching weights and powers");
  double total = 0, dl1 = 0;
  bool strict = false;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!(w[i] > 0) || !(pw[i] >= 1)) throw Error(ErrorCode::InvalidParameter, "power mix needs w > 0 and p >= 1");
    total += w[i];
    dl1 += w[i] * pw[i];
    strict = strict || pw[i] > 1;
  }
  if (std::fabs(total - 1) > 1e-14) throw Error(ErrorCode::NotNormalized, "power mix weights must sum to 1");
  PhiFunction::Parts s;
  s.family = PhiFamily::WeightedPower;
  s.name = "weighted-power";
  for (std::size_t i = 0; i < w.size(); ++i) s.params.push_back(w[i]), s.params.push_back(pw[i]);
  s.eval = [w, pw](double t) {
    double v = 0;
    for (std::size_t i = 0; i < w.size(); ++i) v += w[i] * std::pow(t, pw[i]);
    return v;
  };
  s.log_eval = [w, pw](double t) {
    const double lt = std::log(t);
    double m = -kInf;
    for (std::size_t i = 0; i < w.size(); ++i) m = std::max(m, std::log(w[i]) + pw[i] * lt);
    double acc = 0;
    for (std::size_t i = 0; i < w.size(); ++i) acc += std::exp(std::log(w[i]) + pw[i] * lt - m);
    return m + std::log(acc);
  };
  s.right_derivative = [w, pw](double t) {
    double v = 0;
    for (std::size_t i = 0; i < w.size(); ++i) v += w[i] * pw[i] * std::pow(t, pw[i] - 1);
    return v;
  };
  s.tau = 0.0;
  s.dl1 = dl1;
  s.strictly_convex = strict;
  return PhiFunction(std::move(s));
}

PhiFunction make_exp_normalized() {
  PhiFunction::Parts s;
  s.family = PhiFamily::ExpNormalized;
  s.name = "exp-normalized";
  const double d = std::expm1(1.0);
  s.eval = [d](double t) { return std::expm1(t) / d; };
  s.inverse = [d](double y) { return std::log1p(y * d); };
  s.log_eval = [d](double t) { return (t > 700 ? t : std::log(std::expm1(t))) - std::log(d); };
  s.right_derivative = [d](double t) { return std::exp(t) / d; };
  s.tau = 0.0;
  s.dl1 = std::exp(1.0) / d;
  s.strictly_convex = true;
  return PhiFunction(std::move(s));
}

PhiFunction make_neglog() {
  PhiFunction::Parts s;
  s.family = PhiFamily::NegLog;
  s.name = "neglog";
  s.domain = 1.0;
  s.eval = [](double t) { return -std::log1p(-t); };
  s.inverse = [](double y) { return -std::expm1(-y); };
  s.right_derivative = [](double t) { return 1.0 / (1.0 - t); };
  s.tau = 0.0;
  s.dl1 = kInf;
  s.strictly_convex = true;
  s.normalized = false;
  return PhiFunction(std::move(s));
}

PhiFunction make_maxlinear(double tau) {
  if (!(tau >= 0 && tau < 1)) throw Error(ErrorCode::InvalidParameter, "maxlinear needs tau in [0, 1)");
  PhiFunction::Parts s;
  s.family = PhiFamily::MaxLinear;
  char buf[64];
  std::snprintf(buf, sizeof buf, "maxlinear(%g)", tau);
  s.name = buf;
  s.params = {tau};
  const double c = 1.0 - tau;
  s.eval = [tau, c](double t) { return t > tau ? (t - tau) / c : 0.0; };
  s.inverse = [tau, c](double y) { return tau + y * c; };
  s.right_derivative = [tau, c](double t) { return t >= tau ? 1.0 / c : 0.0; };
  s.tau = tau;
  s.dl1 = 1.0 / c;
  return PhiFunction(std::move(s));
}

PhiFunction make_piecewise(std::vector<std::array<double, 2>> knots) {
  std::sort(knots.begin(), knots.end(), [](const auto& a, const auto& b) { return a[0] < b[0]; });
  if (knots.size() < 2 || knots[0][0] != 0 || knots[0][1] != 0)
    throw Error(ErrorCode::InvalidParameter, "piecewise phi needs knots starting at (0, 0)");
  std::vector<double> slope;
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    const double dt = knots[i + 1][0] - knots[i][0];
    if (!(dt > 0)) throw Error(ErrorCode::InvalidParameter, "piecewise knots must have distinct t");
    slope.push_back((knots[i + 1][1] - knots[i][1]) / dt);
    if (slope.back() < 0) throw Error(ErrorCode::InvalidParameter, "piecewise phi must be nondecreasing");
    if (i > 0 && slope[i] < slope[i - 1] - 1e-14) throw Error(ErrorCode::InvalidParameter, "piecewise phi must be convex");
  }
  if (!(slope.back() > 0)) throw Error(ErrorCode::InvalidParameter, "piecewise phi must increase eventually");
  auto eval = [knots, slope](double t) {
    auto it = std::upper_bound(knots.begin(), knots.end(), t, [](double v, const auto& k) { return v < k[0]; });
    std::size_t i = static_cast<std::size_t>(it - knots.begin());
    i = i == 0 ? 0 : std::min(i - 1, slope.size() - 1);
    return knots[i][1] + slope[i] * (t - knots[i][0]);
  };
  if (std::fabs(eval(1.0) - 1.0) > 1e-14) throw Error(ErrorCode::NotNormalized, "piecewise phi must satisfy phi(1) = 1");
  PhiFunction::Parts s;
  s.family = PhiFamily::PiecewiseLinear;
  s.name = "piecewise";
  s.knots = knots;
  s.eval = eval;
  double tau = 0;
  for (std::size_t i = 0; i < slope.size() && slope[i] == 0; ++i) tau = knots[i + 1][0];
  s.tau = tau;
  s.inverse = [knots, slope, tau](double y) {
    if (y <= 0) return tau;
    for (std::size_t i = 0; i < slope.size(); ++i) {
      const bool last = i + 1 == slope.size();
      if (slope[i] > 0 && (last || y <= knots[i + 1][1])) return knots[i][0] + (y - knots[i][1]) / slope[i];
    }
    return knots.back()[0];
  };
  s.right_derivative = [knots, slope](double t) {
    for (std::size_t i = slope.size(); i-- > 0;)
      if (t >= knots[i][0]) return slope[i];
    return slope[0];
  };
  // Left derivative at 1: slope of the segment ending at or containing 1.
  double dl1 = slope[0];
  for (std::size_t i = 0; i < slope.size(); ++i)
    if (knots[i][0] < 1.0) dl1 = slope[i];
  s.dl1 = dl1;
  return PhiFunction(std::move(s));
}

PhiFunction make_steep_exp() {
  PhiFunction::Parts s;
  s.family = PhiFamily::Custom;
  s.name = "steep-exp";
  s.eval = [](double t) { return t <= 1 ? std::exp(4.0 * (1.0 - 1.0 / (t * t))) : 8.0 * t - 7.0; };
  s.log_eval = [](double t) { return t <= 1 ? 4.0 * (1.0 - 1.0 / (t * t)) : std::log(8.0 * t - 7.0); };
  s.right_derivative = [](double t) {
    return t < 1 ? std::exp(4.0 * (1.0 - 1.0 / (t * t))) * 8.0 / (t * t * t) : 8.0;
  };
  s.tau = 0.0;
  s.dl1 = 8.0;
  return PhiFunction(std::move(s));
}

PhiFunction make_custom(std::function<double(double)> f, std::string name, bool strictly_convex) {
  PhiFunction::Parts s;
  s.family = PhiFamily::Custom;
  s.name = std::move(name);
  s.eval = std::move(f);
  s.strictly_convex = strictly_convex;
  const double v1 = s.eval(1.0);
  s.normalized = std::fabs(v1 - 1.0) <= 1e-14;
  return PhiFunction(std::move(s));
}

double restricted_inverse(const PhiFunction& phi, double y) {
  if (std::isnan(y) || y < 0) throw Error(ErrorCode::OutOfRange, "restricted inverse needs y >= 0");
  if (y == 0) return phi.tau();
  if (std::isinf(y)) return phi.domain();
  if (phi.parts().inverse) return phi.parts().inverse(y);
  double lo = phi.tau();
  double hi = std::max(1.0, lo);
  const double a = phi.domain();
  if (std::isfinite(a)) {
    hi = a;
  } else {
    int guard = 0;
    while (phi(hi) < y) {
      lo = hi;
      hi *= 2;
      if (++guard > 1100) throw Error(ErrorCode::OutOfRange, "y exceeds the range of phi");
    }
  }
  for (int it = 0; it < 400; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (phi(mid) < y ? lo : hi) = mid;
  }
  if (std::isfinite(a) && hi >= a && !(phi(lo) >= y * (1 - 1e-12))) throw Error(ErrorCode::OutOfRange, "y exceeds the range of phi");
  return hi;
}

double left_derivative_at_1(const PhiFunction& phi) {
  if (phi.parts().dl1) return *phi.parts().dl1;
  // Difference quotients of a convex function are monotone in h; one Richardson
  // step removes the linear term.
  auto D = [&](double h) { return (phi(1.0) - phi(1.0 - h)) / h; };
  double prev = kInf, est = D(std::ldexp(1.0, -10));
  for (int k = 10; k <= 26; ++k) {
    const double h = std::ldexp(1.0, -k);
    est = 2 * D(h / 2) - D(h);
    if (std::fabs(est - prev) <= 1e-10 * std::fabs(est)) break;
    prev = est;
  }
  return est;
}

double right_derivative(const PhiFunction& phi, double t) {
  if (phi.parts().right_derivative) return phi.parts().right_derivative(t);
  auto D = [&](double h) { return (phi(t + h) - phi(t)) / h; };
  const double s = std::max(1.0, std::fabs(t));
  double prev = kInf, est = D(s * std::ldexp(1.0, -10));
  for (int k = 10; k <= 26; ++k) {
    const double h = s * std::ldexp(1.0, -k);
    est = 2 * D(h / 2) - D(h);
    if (std::fabs(est - prev) <= 1e-10 * std::fabs(est)) break;
    prev = est;
  }
  return est;
}

PhiCheck check_phi(const PhiFunction& phi, std::uint64_t seed) {
  PhiCheck c;
  auto fail = [&](const std::string& m) {
    c.ok = false;
    c.message = m;
    return c;
  };
  if (std::fabs(phi(0.0)) > 1e-14) return fail("phi(0) != 0");
  if (phi.normalized() && std::fabs(phi(1.0) - 1.0) > 1e-14) return fail("phi(1) != 1");
  const double top = std::isfinite(phi.domain()) ? phi.domain() * (1 - 1e-9) : 4.0;
  Rng rng{Seed(seed).child("check_phi")};
  for (int i = 0; i < 500; ++i) {
    double s[3] = {rng.uniform(0, top), rng.uniform(0, top), rng.uniform(0, top)};
    std::sort(s, s + 3);
    if (!(s[0] < s[1] && s[1] < s[2])) continue;
    const double bound = ((s[2] - s[1]) * phi(s[0]) + (s[1] - s[0]) * phi(s[2])) / (s[2] - s[0]);
    if (phi(s[1]) > bound + 1e-12 * std::max(1.0, std::fabs(bound))) return fail("convexity violated");
    if (phi(s[0]) > phi(s[1]) + 1e-14) return fail("not monotone");
  }
  if (std::fabs(phi(phi.tau())) > 1e-10) return fail("tau inconsistent");
  return c;
}

// ---------------------------------------------------------------------------
// PhiM

PhiM PhiM::sum(std::vector<PhiFunction> terms) {
  if (terms.empty()) throw Error(ErrorCode::InvalidParameter, "sum needs at least one term");
  for (const auto& t : terms)
    if (!t.normalized()) throw Error(ErrorCode::NotNormalized, "sum terms must satisfy phi(1) = 1");
  PhiM m;
  m.kind_ = Kind::Sum;
  m.arity_ = static_cast<int>(terms.size());
  m.name_ = "sum";
  m.terms_ = std::move(terms);
  m.weights_.assign(m.arity_, 1.0);
  return m;
}

PhiM PhiM::weighted_sum(std::vector<PhiFunction> terms, std::vector<double> weights) {
  if (terms.empty() || terms.size() != weights.size())
    throw Error(ErrorCode::InvalidParameter, "weighted sum needs matching terms and weights");
  double total = 0;
  for (double w : weights) {
    if (!(w >= 0) || !std::isfinite(w)) throw Error(ErrorCode::InvalidParameter, "weights must be >= 0");
    total += w;
  }
  if (!(total > 0)) throw Error(ErrorCode::InvalidParameter, "weights must not all vanish");
  PhiM m;
  m.kind_ = Kind::WeightedSum;
  m.arity_ = static_cast<int>(terms.size());
  m.name_ = "weighted-sum";
  m.terms_ = std::move(terms);
  m.weights_ = std::move(weights);
  return m;
}

PhiM PhiM::max(int arity) {
  if (arity < 1) throw Error(ErrorCode::InvalidParameter, "arity must be >= 1");
  PhiM m;
  m.kind_ = Kind::Max;
  m.arity_ = arity;
  m.name_ = "max";
  return m;
}

PhiM PhiM::homogeneous_gauge(const ConvexBody& K) {
  PhiM m;
  m.kind_ = Kind::HomogeneousGauge;
  m.arity_ = K.dim();
  m.name_ = "gauge";
  m.body_ = K;
  return m;
}

PhiM PhiM::custom(int arity, std::function<double(const double*)> f, std::string name) {
  if (arity < 1) throw Error(ErrorCode::InvalidParameter, "arity must be >= 1");
  PhiM m;
  m.kind_ = Kind::Custom;
  m.arity_ = arity;
  m.custom_ = std::move(f);
  m.name_ = std::move(name);
  return m;
}

PhiM PhiM::power_sum(double p, int arity) {
  return sum(std::vector<PhiFunction>(static_cast<std::size_t>(arity), make_power(p)));
}

double PhiM::eval(const double* x) const {
  switch (kind_) {
    case Kind::Sum: {
      double v = 0;
      for (int j = 0; j < arity_; ++j) v += terms_[j](x[j]);
      return v;
    }
    case Kind::WeightedSum: {
      double v = 0;
      for (int j = 0; j < arity_; ++j)
        if (weights_[j] != 0) v += weights_[j] * terms_[j](x[j]);
      return v;
    }
    case Kind::Max: {
      double v = 0;
      for (int j = 0; j < arity_; ++j) v = std::max(v, x[j]);
      return v;
    }
    case Kind::HomogeneousGauge: {
      Vec y(arity_);
      for (int j = 0; j < arity_; ++j) y[j] = x[j];
      return gauge(body_, y);
    }
    case Kind::Custom: return custom_(x);
  }
  return kInf;
}

bool PhiM::strictly_convex() const {
  if (kind_ != Kind::Sum && kind_ != Kind::WeightedSum) return false;
  for (std::size_t j = 0; j < terms_.size(); ++j)
    if (weights_[j] > 0 && !terms_[j].strictly_convex()) return false;
  return true;
}

double least_lambda(const std::function<double(double)>& g, double start, const Tolerances& tol) {
  auto ok = [&](double lam) {
    const double v = g(lam);
    return std::isfinite(v) && v <= 1.0;
  };
  if (!(start > 0) || !std::isfinite(start)) start = 1.0;
  double lo, hi;
  if (ok(start)) {
    hi = start;
    lo = 0.5 * start;
    int guard = 0;
    while (ok(lo)) {
      hi = lo;
      lo *= 0.5;
      if (++guard > 2100 || lo == 0) return 0.0;
    }
  } else {
    lo = start;
    hi = 2 * start;
    int guard = 0;
    while (!ok(hi)) {
      lo = hi;
      hi *= 2;
      if (++guard > tol.solver_max_iter || !std::isfinite(hi)) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "no upper bracket after %d doublings (lambda = %g)", guard, lo);
        throw Error(ErrorCode::SolverFailure, buf);
      }
    }
  }
  for (int it = 0; it < tol.solver_max_iter; ++it) {
    if (hi - lo <= tol.solver_rel * hi) return hi;
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) return hi;
    (ok(mid) ? hi : lo) = mid;
  }
  char buf[160];
  std::snprintf(buf, sizeof buf, "bisection did not converge: bracket [%.17g, %.17g]", lo, hi);
  throw Error(ErrorCode::SolverFailure, buf);
}

double least_lambda(const std::function<double(double)>& g, double start) {
  return least_lambda(g, start, settings().tol);
}

double orlicz_value(const PhiM& phi, const double* h) {
  const int m = phi.arity();
  double mx = 0;
  int positive = 0, last = -1;
  for (int j = 0; j < m; ++j) {
    if (h[j] > 0) ++positive, last = j;
    mx = std::max(mx, h[j]);
  }
  if (positive == 0) return 0.0;
  if (positive == 1 && phi.unweighted_sum()) return h[last];
  double buf[8];
  std::vector<double> big;
  double* y = buf;
  if (m > 8) {
    big.resize(m);
    y = big.data();
  }
  return least_lambda(
      [&](double lam) {
        for (int j = 0; j < m; ++j) y[j] = h[j] > 0 ? h[j] / lam : 0.0;
        return phi.eval(y);
      },
      mx);
}

// ---------------------------------------------------------------------------
// J_phi

namespace {

// Largest r with phi(r u) <= 1 along the ray at angle theta in [0, pi/2].
double ray_radius(const PhiM& phi, double c, double s) {
  auto F = [&](double r) {
    const double x[2] = {r * c, r * s};
    return phi.eval(x) - 1.0;
  };
  double lo = 1.0 / (c + s), hi = 1.0 / std::max(c, s);
  double flo = F(lo), fhi = F(hi);
  if (fhi <= 0) return hi;
  if (flo > 0) {
    // Only possible through roundoff when J touches the cross-polytope.
    return lo;
  }
  if (flo == 0) {
    // Flat piece: find the far end of the zero set by predicate bisection.
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      (F(mid) <= 0 ? lo : hi) = mid;
    }
    return lo;
  }
  if (std::isfinite(fhi)) {
    boost::uintmax_t iters = 200;
    auto r = boost::math::tools::toms748_solve(F, lo, hi, flo, fhi, boost::math::tools::eps_tolerance<double>(52), iters);
    // Polish to the largest r with F(r) <= 0 inside the final bracket.
    double a = r.first, b = r.second;
    if (F(b) <= 0) return b;
    for (int it = 0; it < 80; ++it) {
      const double mid = 0.5 * (a + b);
      if (mid <= a || mid >= b) break;
      (F(mid) <= 0 ? a : b) = mid;
    }
    return a;
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (F(mid) <= 0 ? lo : hi) = mid;
  }
  return lo;
}

}  // namespace

namespace {

// Douglas-Peucker with an explicit stack: every dropped point stays within tol of
// the kept chain. Rounding in the tracer leaves runs of nearly collinear points
// whose tiny edges have meaningless normals.
std::vector<P2> simplify_chain(const std::vector<P2>& c, double tol) {
  if (c.size() < 3) return c;
  std::vector<char> keep(c.size(), 0);
  keep[0] = 1;
  keep[c.size() - 1] = 1;
  std::vector<std::pair<std::size_t, std::size_t>> todo = {{0, c.size() - 1}};
  while (!todo.empty()) {
    const auto [a, b] = todo.back();
    todo.pop_back();
    if (b <= a + 1) continue;
    const P2 d = c[b] - c[a];
    const double len = d.norm();
    double worst = -1;
    std::size_t at = a;
    for (std::size_t i = a + 1; i < b; ++i) {
      const P2 e = c[i] - c[a];
      const double dist = len > 0 ? std::fabs(d.x() * e.y() - d.y() * e.x()) / len : e.norm();
      if (dist > worst) {
        worst = dist;
        at = i;
      }
    }
    if (worst > tol) {
      keep[at] = 1;
      todo.push_back({a, at});
      todo.push_back({at, b});
    }
  }
  std::vector<P2> out;
  for (std::size_t i = 0; i < c.size(); ++i)
    if (keep[i]) out.push_back(c[i]);
  return out;
}

}  // namespace

JBody j_body(const PhiM& phi) {
  if (phi.arity() != 2) throw Error(ErrorCode::InvalidParameter, "J_phi is implemented for arity 2");
  const double e1[2] = {1, 0}, e2[2] = {0, 1};
  if (std::fabs(phi.eval(e1) - 1) > 1e-12 || std::fabs(phi.eval(e2) - 1) > 1e-12)
    throw Error(ErrorCode::NotNormalized, "J_phi needs phi(e_j) = 1");
  const int N = settings().jphi_samples;
  const double target = settings().jphi_sagitta;
  struct Pt {
    double th;
    P2 p;
  };
  auto at = [&](double th) {
    if (th <= 0) return Pt{0, P2(1, 0)};
    if (th >= M_PI / 2) return Pt{M_PI / 2, P2(0, 1)};
    const double c = std::cos(th), s = std::sin(th);
    const double r = ray_radius(phi, c, s);
    return Pt{th, P2(r * c, r * s)};
  };
  std::vector<Pt> base(N + 1);
  parallel_for(N + 1, [&](std::size_t k) { base[k] = at(M_PI / 2 * static_cast<double>(k) / N); });
  base[0] = Pt{0, P2(1, 0)};
  base[N] = Pt{M_PI / 2, P2(0, 1)};
  // Adaptive refinement until the midpoint sagitta is below target.
  std::vector<std::vector<Pt>> pieces(N);
  parallel_for(N, [&](std::size_t k) {
    std::vector<Pt> out;
    struct Job {
      Pt a, b;
      int depth;
    };
    std::vector<Job> stack = {{base[k], base[k + 1], 0}};
    while (!stack.empty()) {
      Job j = stack.back();
      stack.pop_back();
      const Pt m = at(0.5 * (j.a.th + j.b.th));
      const P2 d = j.b.p - j.a.p;
      const double len = d.norm();
      const double sag = len > 0 ? std::fabs(d.x() * (m.p.y() - j.a.p.y()) - d.y() * (m.p.x() - j.a.p.x())) / len : 0.0;
      if (sag > target && j.depth < 40) {
        stack.push_back({m, j.b, j.depth + 1});
        stack.push_back({j.a, m, j.depth + 1});
      } else {
        out.push_back(j.a);
        if (sag > 1e-15) out.push_back(m);
      }
    }
    pieces[k] = std::move(out);
  });
  std::vector<P2> q1;
  for (const auto& piece : pieces)
    for (const auto& p : piece) q1.push_back(p.p);
  q1.push_back(P2(0, 1));
  q1 = simplify_chain(q1, 1e-14);
  std::vector<P2> all;
  all.reserve(4 * q1.size());
  for (const auto& p : q1) {
    all.push_back(p);
    all.emplace_back(-p.x(), p.y());
    all.emplace_back(-p.x(), -p.y());
    all.emplace_back(p.x(), -p.y());
  }
  auto hull = convex_hull_2d(std::move(all));
  JBody J;
  J.body = ConvexBody::from_polytope(polygon_from_ordered(hull));
  J.source = phi;
  J.traced_points = q1.size();
  return J;
}

ConvexBody j_polar(const JBody& J) { return polar(J.body); }

ConvexBody j_polar(const PhiM& phi) { return j_polar(j_body(phi)); }

PhiM gauge_phi_from_body(const ConvexBody& K) {
  for (int j = 0; j < K.dim(); ++j) {
    const double g = gauge(K, unit(K.dim(), j));
    if (std::fabs(g - 1) > 1e-10) throw Error(ErrorCode::BoundaryNormalization, "e_j must lie on the boundary");
  }
  return PhiM::homogeneous_gauge(K);
}

// ---------------------------------------------------------------------------
// Planar decomposition

const char* to_string(DecompositionResult::Case c) {
  switch (c) {
    case DecompositionResult::Case::MaxCase: return "max-case";
    case DecompositionResult::Case::RightSlope: return "right-slope";
    case DecompositionResult::Case::LeftSlope: return "left-slope";
    case DecompositionResult::Case::Corner: return "corner";
  }
  return "?";
}

namespace {

// Boundary profile of K in [0,1]^2: f(t) = max{y : (t, y) in K}.
struct Profile {
  std::function<double(double)> f, finv;
  double tau1 = 0, tau2 = 0;
  double slope_right_tau1 = 0;  // 0 means horizontal, -inf never happens here
  double slope_left_1 = 0;      // -inf when vertical
  bool polygonal = false;
  std::function<double()> corner;  // support point in direction (1, 1), x coordinate
};

Profile polygon_profile(const Polytope& P) {
  const double eps = 1e-12;
  std::vector<P2> chain = {P2(0, 1)};
  double top_at_1 = 0;
  std::vector<P2> inner;
  for (const auto& v : P.vertices) {
    if (v[0] >= 1 - eps) top_at_1 = std::max(top_at_1, v[1]);
    else if (v[0] > eps && v[1] > eps) inner.emplace_back(v[0], v[1]);
  }
  std::sort(inner.begin(), inner.end(), [](const P2& a, const P2& b) { return a.x() < b.x(); });
  for (const auto& p : inner) chain.push_back(p);
  chain.emplace_back(1.0, top_at_1);
  auto pts = std::make_shared<const std::vector<P2>>(std::move(chain));
  Profile pr;
  pr.polygonal = true;
  pr.f = [pts](double t) {
    const auto& c = *pts;
    if (t <= 0) return c.front().y();
    if (t >= 1) return c.back().y();
    auto it = std::upper_bound(c.begin(), c.end(), t, [](double v, const P2& p) { return v < p.x(); });
    const std::size_t i = std::max<std::size_t>(1, it - c.begin());
    const P2& a = c[i - 1];
    const P2& b = c[std::min(i, c.size() - 1)];
    if (b.x() <= a.x()) return a.y();
    return a.y() + (b.y() - a.y()) * (t - a.x()) / (b.x() - a.x());
  };
  std::size_t k1 = 0;
  for (std::size_t i = 0; i < pts->size(); ++i)
    if ((*pts)[i].y() >= 1 - eps) k1 = i;
  pr.tau1 = (*pts)[k1].x();
  pr.tau2 = pts->back().y();
  if (k1 + 1 < pts->size()) {
    const P2 d = (*pts)[k1 + 1] - (*pts)[k1];
    pr.slope_right_tau1 = d.y() / d.x();
  }
  {
    const auto& c = *pts;
    const P2 d = c.back() - c[c.size() - 2];
    pr.slope_left_1 = d.x() > 0 ? d.y() / d.x() : -kInf;
  }
  const double tau2 = pr.tau2;
  pr.finv = [pts, tau2, k1](double s) {
    const auto& c = *pts;
    if (s <= tau2) return 1.0;
    if (s >= 1) return c[k1].x();
    // Strictly decreasing part: c[k1] .. c.back().
    std::size_t lo = k1, hi = c.size() - 1;
    while (hi - lo > 1) {
      const std::size_t mid = (lo + hi) / 2;
      (c[mid].y() >= s ? lo : hi) = mid;
    }
    const P2& a = c[lo];
    const P2& b = c[hi];
    if (a.y() <= b.y()) return a.x();
    return a.x() + (b.x() - a.x()) * (a.y() - s) / (a.y() - b.y());
  };
  return pr;
}

double membership_max(const ConvexBody& K, bool vertical, double fixed) {
  // max of the free coordinate in [0, 1] with the point in K.
  auto inside = [&](double v) { return K.contains(vertical ? vec2(fixed, v) : vec2(v, fixed), 0.0); };
  if (inside(1.0)) return 1.0;
  double lo = 0, hi = 1;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (inside(mid) ? lo : hi) = mid;
  }
  return lo;
}

// Classifies a one-sided secant slope: 0, finite, or infinite.
double classify_slope(const std::function<double(double)>& secant) {
  const double s7 = secant(1e-7), s5 = secant(1e-5);
  if (std::fabs(s7) < 1e-9 || std::fabs(s7) <= 0.5 * std::fabs(s5)) return 0.0;
  if (std::fabs(s7) > 2 * std::fabs(s5)) return s7 > 0 ? kInf : -kInf;
  return s7;
}

Profile oracle_profile(const ConvexBody& K) {
  Profile pr;
  pr.f = [K](double t) { return membership_max(K, true, std::clamp(t, 0.0, 1.0)); };
  pr.finv = [K](double s) { return membership_max(K, false, std::clamp(s, 0.0, 1.0)); };
  pr.tau1 = pr.finv(1.0);
  pr.tau2 = pr.f(1.0);
  const auto f = pr.f;
  const double t1 = pr.tau1, t2 = pr.tau2;
  pr.slope_right_tau1 = classify_slope([&](double h) { return (f(t1 + h) - f(t1)) / h; });
  pr.slope_left_1 = classify_slope([&](double h) { return (t2 - f(1 - h)) / h; });
  return pr;
}

double golden_max(const std::function<double(double)>& g, double a, double b) {
  const double r = (std::sqrt(5.0) - 1) / 2;
  double x1 = b - r * (b - a), x2 = a + r * (b - a);
  double g1 = g(x1), g2 = g(x2);
  for (int it = 0; it < 200 && b - a > 1e-15; ++it) {
    if (g1 < g2) {
      a = x1;
      x1 = x2;
      g1 = g2;
      x2 = a + r * (b - a);
      g2 = g(x2);
    } else {
      b = x2;
      x2 = x1;
      g2 = g1;
      x1 = b - r * (b - a);
      g1 = g(x1);
    }
  }
  return 0.5 * (a + b);
}

PhiFunction custom_decomposed(const std::string& name, std::function<double(double)> eval,
                              std::function<double(double)> inverse, double tau, double dl1) {
  PhiFunction::Parts s;
  s.family = PhiFamily::Custom;
  s.name = name;
  s.eval = std::move(eval);
  s.inverse = std::move(inverse);
  s.tau = tau;
  s.dl1 = dl1;
  return PhiFunction(std::move(s));
}

}  // namespace

DecompositionResult decompose_2d(const ConvexBody& K) {
  if (K.dim() != 2) throw Error(ErrorCode::InvalidParameter, "decomposition is planar");
  {
    const DirectionGrid g = DirectionGrid::circle(256);
    double scale = 0, worst = 0;
    for (const auto& u : g.directions()) {
      const double a = K.support(u);
      const double b = K.support(vec2(-u[0], u[1]));
      const double c = K.support(vec2(u[0], -u[1]));
      scale = std::max(scale, std::fabs(a));
      worst = std::max({worst, std::fabs(a - b), std::fabs(a - c)});
    }
    if (worst > 1e-9 * std::max(scale, 1e-300)) throw Error(ErrorCode::NotUnconditional, "body is not 1-unconditional");
  }
  for (int j = 0; j < 2; ++j)
    if (std::fabs(gauge(K, unit(2, j)) - 1) > 1e-10)
      throw Error(ErrorCode::BoundaryNormalization, "e_1 and e_2 must lie on the boundary");

  const Profile pr = K.is_polytope() ? polygon_profile(K.polytope()) : oracle_profile(K);
  DecompositionResult R;
  R.tau1 = pr.tau1;
  R.tau2 = pr.tau2;
  R.f = pr.f;
  if (pr.tau1 >= 1 - 1e-12) {
    R.which = DecompositionResult::Case::MaxCase;
    return R;
  }
  const auto f = pr.f, finv = pr.finv;
  const double t1 = pr.tau1, t2 = pr.tau2;
  if (pr.slope_right_tau1 < 0) {
    R.which = DecompositionResult::Case::RightSlope;
    const double c = 1 - t1;
    const double s2 = -1.0 / (pr.slope_right_tau1 * c);
    R.phi1 = make_maxlinear(t1);
    R.phi2 = custom_decomposed(
        "decomposed-2", [finv, c, s2](double s) { return s <= 1 ? (1 - finv(s)) / c : s2 * (s - 1) + 1; },
        [f, c, s2](double y) { return y <= 1 ? f(1 - y * c) : 1 + (y - 1) / s2; }, t2, s2);
  } else if (std::isfinite(pr.slope_left_1)) {
    R.which = DecompositionResult::Case::LeftSlope;
    const double c = 1 - t2;
    const double s1 = -pr.slope_left_1 / c;
    R.phi1 = custom_decomposed(
        "decomposed-1", [f, c, s1](double s) { return s <= 1 ? (1 - f(s)) / c : s1 * (s - 1) + 1; },
        [finv, c, s1](double y) { return y <= 1 ? finv(1 - y * c) : 1 + (y - 1) / s1; }, t1, s1);
    R.phi2 = make_maxlinear(t2);
  } else {
    R.which = DecompositionResult::Case::Corner;
    const double a = golden_max([&](double t) { return t + f(t); }, t1, 1.0);
    const double b = f(a);
    const double c = 2 - a - b;
    R.a = a;
    R.b = b;
    R.phi1 = custom_decomposed(
        "decomposed-1", [f, a, b, c](double s) { return s <= a ? (1 - f(s)) / c : (s + 1 - a - b) / c; },
        [finv, a, b, c](double y) { return y <= (1 - b) / c ? finv(1 - c * y) : c * y - 1 + a + b; }, t1, 1 / c);
    R.phi2 = custom_decomposed(
        "decomposed-2", [finv, a, b, c](double s) { return s <= b ? (1 - finv(s)) / c : (s + 1 - a - b) / c; },
        [f, a, b, c](double y) { return y <= (1 - a) / c ? f(1 - c * y) : c * y - 1 + a + b; }, t2, 1 / c);
  }
  double worst = 0;
  for (int i = 0; i <= 200; ++i) {
    const double x = i / 200.0;
    worst = std::max(worst, std::fabs((*R.phi1)(x) + (*R.phi2)(f(x)) - 1));
  }
  R.identity_defect = worst;
  if (!(worst <= 1e-8)) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "boundary identity defect %.3g exceeds 1e-8", worst);
    throw Error(ErrorCode::Validation, buf);
  }
  return R;
}

LimitResult f_phi_limit(const PhiFunction& phi, double t, int k_lo, int k_hi) {
  LimitResult R;
  if (t == 0) {
    R.status = LimitResult::Status::Value;
    R.value = 0;
    return R;
  }
  for (int k = k_lo; k <= k_hi; ++k) {
    const double eps = std::pow(10.0, -k);
    double r;
    if (phi.has_log_eval()) {
      const double a = phi.log_eval(eps * t), b = phi.log_eval(eps);
      r = std::exp(a - b);
    } else {
      r = phi(eps * t) / phi(eps);
    }
    R.sequence.push_back(r);
  }
  const auto& s = R.sequence;
  const std::size_t n = s.size();
  if (n >= 2) {
    const double x = s[n - 1], y = s[n - 2];
    if (x == 0 && y == 0) {
      R.status = LimitResult::Status::Value;
      R.value = 0;
      return R;
    }
    if (std::isfinite(x) && std::isfinite(y) && std::fabs(x - y) < 1e-6 * std::fabs(x)) {
      R.status = LimitResult::Status::Value;
      R.value = x;
      return R;
    }
  }
  bool monotone = true;
  for (std::size_t i = 1; i < n; ++i)
    if (!(s[i] >= s[i - 1])) monotone = false;
  if (monotone && n > 0 && s.back() > 1e8) R.status = LimitResult::Status::Divergent;
  return R;
}

}  // namespace obm
