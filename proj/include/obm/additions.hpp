#pragma once

#include "obm/phi.hpp"

#include <optional>

namespace obm {

using PointCloud = std::vector<Vec>;

// Coefficient set M in R^m for M-addition.
class CoeffSet {
 public:
  enum class Kind { Points, LpArc, Segment, Singleton, JPolarPositive };

  // conv of the given points (the V-polytope form).
  static CoeffSet points(int m, std::vector<std::vector<double>> pts);
  // {a >= 0 : ||a||_q = 1}; its support on the positive orthant is ||w||_p, 1/p + 1/q = 1.
  static CoeffSet lp_arc(double q, int m = 2);
  static CoeffSet segment();    // [e1, e2]
  static CoeffSet singleton();  // {(1, 1)}
  // J_phi polar intersected with the positive quadrant (arity 2).
  static CoeffSet j_polar_positive(const ConvexBody& j_polar);
  static CoeffSet j_polar_positive(const PhiM& phi);

  Kind kind() const { return kind_; }
  int arity() const { return m_; }
  double support(const double* w) const;
  double support(const std::vector<double>& w) const { return support(w.data()); }
  bool nonnegative() const;
  // Closed under coordinate sign changes.
  bool unconditional() const;
  // Points of M dense enough for brute-force sums; extreme points where known.
  std::vector<std::vector<double>> samples(int count) const;
  const std::string& name() const { return name_; }
  double q() const { return q_; }
  const std::vector<std::vector<double>>& vertices() const { return pts_; }
  const ConvexBody& jpolar() const { return body_; }

 private:
  Kind kind_ = Kind::Singleton;
  int m_ = 2;
  double q_ = 2;
  std::vector<std::vector<double>> pts_;
  ConvexBody body_;
  std::string name_;
};

struct MSumOptions {
  bool fallback_bruteforce = false;  // on RegimeViolation, warn and sample instead
  int fallback_samples = 10000;
  std::uint64_t seed = 1;
};

ConvexBody m_sum(const CoeffSet& M, const std::vector<ConvexBody>& bodies, const MSumOptions& opts = {});
// Raw points sum_j a_j x_j over sampled a in M and x_j in each cloud.
PointCloud m_sum_point_cloud(const CoeffSet& M, const std::vector<PointCloud>& sets, int samples, std::uint64_t seed);
// Hull of m_sum_point_cloud; bodies contribute their extreme points.
ConvexBody m_sum_bruteforce(const CoeffSet& M, const std::vector<ConvexBody>& bodies, int samples, std::uint64_t seed);

struct OrliczSumSpec {
  PhiM phi;
  std::optional<std::vector<double>> coefficients;  // alpha_j for linear combinations
  double rel_tol = settings().tol.solver_rel;  // 1e-12 unless OBM_TOL says otherwise
  int max_iter = settings().tol.solver_max_iter;
};

ConvexBody orlicz_sum(const OrliczSumSpec& spec, const std::vector<ConvexBody>& bodies);
ConvexBody orlicz_sum(const PhiM& phi, const ConvexBody& K, const ConvexBody& L);
// alpha phi1(h_K / lambda) + beta phi2(h_L / lambda) = 1.
ConvexBody orlicz_linear_combination(const PhiFunction& phi1, const PhiFunction& phi2, const ConvexBody& K,
                                     const ConvexBody& L, double alpha, double beta);
// +_phi(conv{K_1, o}, ..., conv{K_m, o}).
ConvexBody orlicz_sum_compact(const OrliczSumSpec& spec, const std::vector<ConvexBody>& sets);
ConvexBody orlicz_sum_compact(const OrliczSumSpec& spec, const std::vector<PointCloud>& sets);

struct ExtendedSumSpec {
  PhiFunction psi1, psi2;
  int t_grid = 513;
  int boundary = 256;
  bool square = false;  // J_phi polar is the square: plain Minkowski addition
};
// psi1, psi2 from decompose_2d(J_phi polar).
ExtendedSumSpec extended_spec(const PhiM& phi);

struct ParametricResult {
  PointCloud points;  // not convex in general
  ConvexBody hull;
  bool square_case = false;
  int t_grid = 0;
  int boundary = 0;
};
// {psi1^-1(1 - t) x + psi2^-1(t) y}. Throws SquareCase unless route_square.
ParametricResult orlicz_sum_parametric(const ExtendedSumSpec& ext, const PointCloud& K, const PointCloud& L,
                                       bool route_square = true);
ParametricResult orlicz_sum_parametric(const ExtendedSumSpec& ext, const ConvexBody& K, const ConvexBody& L,
                                       bool route_square = true);

// H-polytope {x : x.u <= phi^-1(phi(h_K(u)) + eps phi(h_L(u)))} over the grid.
ConvexBody wulff_sum(const PhiFunction& phi, const ConvexBody& K, const ConvexBody& L, double eps);
ConvexBody wulff_sum(const PhiFunction& phi, const ConvexBody& K, const ConvexBody& L, double eps,
                     const DirectionGrid& grid);

struct NaiveProbeResult {
  bool is_support_function = true;
  Vec x, y;
  double defect = 0;  // worst H(x + y) - H(x) - H(y)
  int pairs = 0;
};
// H(x) = |x| phi^-1(phi(h_K(u)) + phi(h_L(u))), u = x/|x|, tested for subadditivity.
NaiveProbeResult naive_sum_probe(const PhiFunction& phi, const ConvexBody& K, const ConvexBody& L, int pairs = 20000,
                                 std::uint64_t seed = 1);

struct AlgebraProbeResult {
  double defect = 0;  // worst relative support discrepancy
  Vec direction;
  std::size_t i = 0, j = 0, k = 0;  // indices of the worst tuple
};
// |h_{(K+L)+M} - h_{K+(L+M)}| over triples of `bodies` on the grid.
AlgebraProbeResult associativity_probe(const PhiM& phi, const std::vector<ConvexBody>& bodies, const DirectionGrid& grid);
// |h_{K+L} - h_{L+K}| over pairs.
AlgebraProbeResult commutativity_probe(const PhiM& phi, const std::vector<ConvexBody>& bodies, const DirectionGrid& grid);

}  // namespace obm
