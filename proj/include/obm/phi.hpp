#pragma once

#include "obm/bodies.hpp"

#include <functional>
#include <optional>
#include <string>

namespace obm {

enum class PhiFamily { Power, WeightedPower, ExpNormalized, NegLog, MaxLinear, PiecewiseLinear, Custom };

const char* to_string(PhiFamily f);

class PhiFunction {
 public:
  struct Parts {
    PhiFamily family = PhiFamily::Custom;
    std::string name = "custom";
    std::function<double(double)> eval;     // on [0, domain); callers clamp
    double domain = std::numeric_limits<double>::infinity();
    std::optional<double> tau;              // computed numerically if absent
    std::optional<double> dl1;              // left derivative at 1
    std::function<double(double)> inverse;  // inverse of the restriction to [tau, domain)
    std::function<double(double)> right_derivative;
    std::function<double(double)> log_eval;  // log phi, for ratios that underflow
    bool strictly_convex = false;
    bool normalized = true;                  // phi(1) = 1
    std::vector<double> params;              // family parameters, for serialization
    std::vector<std::array<double, 2>> knots;
  };

  PhiFunction();  // identity t
  explicit PhiFunction(Parts parts);

  // +inf at or beyond the domain bound; 0 for t <= 0.
  double operator()(double t) const;
  double domain() const { return p_->domain; }
  double tau() const { return tau_; }
  PhiFamily family() const { return p_->family; }
  const std::string& name() const { return p_->name; }
  bool strictly_convex() const { return p_->strictly_convex; }
  bool normalized() const { return p_->normalized; }
  bool has_log_eval() const { return static_cast<bool>(p_->log_eval); }
  double log_eval(double t) const;
  const Parts& parts() const { return *p_; }

 private:
  std::shared_ptr<const Parts> p_;
  double tau_ = 0;
};

PhiFunction make_power(double p);
// sum_i w_i t^{p_i} with w_i > 0, sum w_i = 1, p_i >= 1.
PhiFunction make_power_mix(const std::vector<double>& weights, const std::vector<double>& powers);
PhiFunction make_exp_normalized();  // (e^t - 1)/(e - 1)
PhiFunction make_neglog();          // -log(1 - t) on [0, 1)
PhiFunction make_maxlinear(double tau);  // max{t - tau, 0}/(1 - tau)
// Linear interpolation through (t, y) knots starting at (0, 0); last slope continues.
PhiFunction make_piecewise(std::vector<std::array<double, 2>> knots);
// 0 at 0, exp(4(1 - t^-2)) on (0, 1], 8t - 7 beyond.
PhiFunction make_steep_exp();
PhiFunction make_custom(std::function<double(double)> f, std::string name = "custom", bool strictly_convex = false);

double restricted_inverse(const PhiFunction& phi, double y);
double left_derivative_at_1(const PhiFunction& phi);
double right_derivative(const PhiFunction& phi, double t);

// Checks phi(0) = 0, phi(1) = 1, convexity and monotonicity on seeded samples.
struct PhiCheck {
  bool ok = true;
  std::string message;
};
PhiCheck check_phi(const PhiFunction& phi, std::uint64_t seed = 1);

class PhiM {
 public:
  enum class Kind { Sum, WeightedSum, Max, HomogeneousGauge, Custom };

  static PhiM sum(std::vector<PhiFunction> terms);
  static PhiM weighted_sum(std::vector<PhiFunction> terms, std::vector<double> weights);
  static PhiM max(int arity);
  static PhiM homogeneous_gauge(const ConvexBody& K);
  static PhiM custom(int arity, std::function<double(const double*)> f, std::string name = "custom");
  static PhiM power_sum(double p, int arity = 2);

  int arity() const { return arity_; }
  Kind kind() const { return kind_; }
  double eval(const double* x) const;
  double operator()(const std::vector<double>& x) const { return eval(x.data()); }
  const std::vector<PhiFunction>& terms() const { return terms_; }
  const std::vector<double>& weights() const { return weights_; }
  const ConvexBody& gauge_body() const { return body_; }
  bool unweighted_sum() const { return kind_ == Kind::Sum; }
  bool normalized() const { return kind_ != Kind::WeightedSum; }
  bool strictly_convex() const;
  const std::string& name() const { return name_; }

 private:
  Kind kind_ = Kind::Sum;
  int arity_ = 2;
  std::vector<PhiFunction> terms_;
  std::vector<double> weights_;
  ConvexBody body_;
  std::function<double(const double*)> custom_;
  std::string name_;
};

// Least lambda > 0 with g(lambda) <= 1 for nonincreasing g; +inf and NaN count
// as "> 1". `start` seeds the bracket search.
double least_lambda(const std::function<double(double)>& g, double start, const Tolerances& tol);
double least_lambda(const std::function<double(double)>& g, double start);

// Support-style Orlicz value: least lambda with phi(h / lambda) <= 1.
double orlicz_value(const PhiM& phi, const double* h);

// J_phi for arity 2 as a polygon (positive-quadrant boundary traced, reflected).
struct JBody {
  ConvexBody body;
  PhiM source;
  std::size_t traced_points = 0;
};
JBody j_body(const PhiM& phi);
ConvexBody j_polar(const PhiM& phi);
ConvexBody j_polar(const JBody& J);

PhiM gauge_phi_from_body(const ConvexBody& K);

struct DecompositionResult {
  enum class Case { MaxCase, RightSlope, LeftSlope, Corner };
  Case which = Case::MaxCase;
  std::optional<PhiFunction> phi1, phi2;
  double tau1 = 0, tau2 = 0;
  double a = 0, b = 0;  // corner point, Corner case only
  std::function<double(double)> f;  // boundary profile on [0, 1]
  double identity_defect = 0;       // max |phi1(x) + phi2(f(x)) - 1| on samples
};
const char* to_string(DecompositionResult::Case c);

DecompositionResult decompose_2d(const ConvexBody& K);

struct LimitResult {
  enum class Status { Value, Divergent, Undetermined };
  Status status = Status::Undetermined;
  double value = 0;
  std::vector<double> sequence;
};
// f_phi(t) = lim phi(eps t)/phi(eps) over eps = 10^-k for k in [k_lo, k_hi].
LimitResult f_phi_limit(const PhiFunction& phi, double t, int k_lo = 2, int k_hi = 12);

}  // namespace obm
