#pragma once

#include "obm/additions.hpp"

#include <optional>

namespace obm {

struct MixedVolumeResult {
  double value = 0;
  std::string formula;  // V1, Vp, Vphi, Vphi_hat
  double p = 0;         // Vp only
  std::size_t atoms = 0;
  std::size_t grid_count = 0;  // 0 when K is an exact polytope
};

// (1/n) sum h_L(u_i) s_i over the surface atoms of K.
MixedVolumeResult mixed_volume_v1(const ConvexBody& K, const ConvexBody& L);
// (1/n) sum h_L^p h_K^{1-p} s_i.
MixedVolumeResult mixed_volume_vp(double p, const ConvexBody& K, const ConvexBody& L);
// (1/n) sum phi(h_L/h_K) h_K s_i.
MixedVolumeResult mixed_volume_vphi(const PhiFunction& phi, const ConvexBody& K, const ConvexBody& L);
// inf{lambda : sum phi(h_L/(lambda h_K)) cone_i <= 1}.
MixedVolumeResult mixed_volume_vphi_hat(const PhiFunction& phi, const ConvexBody& K, const ConvexBody& L);

struct FirstVariationResult {
  std::vector<double> eps;
  std::vector<double> quotient;  // (V(K +_eps L) - V(K)) / eps
  double richardson = 0;
  double estimate = 0;  // (phi1)'_l(1)/n times the extrapolated quotient
  double target = 0;    // V_phi2(K, L)
  double rel_dev = 0;
  std::size_t grid = 0;
};
// K +_eps L solves phi1(h_K/lambda) + eps phi2(h_L/lambda) = 1.
FirstVariationResult first_variation(const PhiFunction& phi1, const PhiFunction& phi2, const ConvexBody& K,
                                     const ConvexBody& L, std::vector<double> eps = {1e-2, 1e-3, 1e-4});
// sup over the grid of |h_{K +_eps L} - h_K| for eps = 10^-k, k = k_lo..k_hi.
std::vector<double> epsilon_convergence(const PhiFunction& phi1, const PhiFunction& phi2, const ConvexBody& K,
                                        const ConvexBody& L, int k_lo = 2, int k_hi = 6);

struct EqualityCase {
  bool checked = false;
  bool dilatate = false;
  bool homothetic = false;
  double ratio = 0;
  double defect = 0;
};

struct InequalityReport {
  std::string name;
  double lhs = 0, rhs = 0, slack = 0, scale = 0;
  bool holds = true;
  bool near_equality = false;
  EqualityCase equality;
  bool conjecture = false;  // reported, never asserted
  bool strict_expected = false;  // equality only for dilatates (strictly convex phi)
  std::size_t grid = 0;
  std::uint64_t seed = 0;
  std::string note;
  std::vector<InequalityReport> parts;
};

// Fills slack, scale and holds; tol is relative to max(|lhs|, |rhs|).
InequalityReport make_report(const std::string& name, double lhs, double rhs, double tol = 0);

InequalityReport validate_orlicz_bm(const PhiM& phi, const ConvexBody& K, const ConvexBody& L);
InequalityReport validate_orlicz_minkowski(const PhiFunction& phi, const ConvexBody& K, const ConvexBody& L);
InequalityReport validate_vphi_hat_minkowski(const PhiFunction& phi, const ConvexBody& K, const ConvexBody& L);
InequalityReport validate_log_inequality(const ConvexBody& K, const ConvexBody& L);
InequalityReport validate_log_minkowski(const ConvexBody& K, const ConvexBody& L);
InequalityReport validate_bm_m_addition(const CoeffSet& M, const std::vector<ConvexBody>& bodies,
                                        const std::optional<std::vector<double>>& coeffs = std::nullopt);
// Chain A >= B >= C and the Brunn-Minkowski inequality it implies.
InequalityReport validate_bm_split(const ConvexBody& K, const ConvexBody& L, double tol = 1e-8);

struct HabResult {
  double a = 0, b = 0;
  double h_closed = 0;
  double h_geometric = 0;
  double lambda1 = 0;      // V_phi hat of (rectangle, disk)
  double vphi_ratio = 0;   // V_phi / V
  bool sign_consistent = true;  // H >= 0 iff phi(lambda1) >= V_phi / V
};
// phi(t) = (e^t - 1)/(e - 1), K the centered a x b rectangle, L the unit disk.
HabResult compare_vphi_vs_hat(double a, double b);
double hab_closed_form(double a, double b);

struct HabScan {
  std::vector<double> b;
  std::vector<double> h;
  std::optional<double> b_star;  // least grid b with H(a, b') > 0 for all grid b' >= b
};
// b on 2^{k/8} from 1 up to b_max.
HabScan scan_hab(double a = 2, double b_max = 128);

struct SuiteOptions {
  std::uint64_t seed = 42;
  int cases = 500;
  int dilatate_cases = 50;
  std::vector<std::string> validators;  // empty: all
};

struct SuiteRow {
  std::string validator;
  std::string kind;  // random, dilatate
  int index = 0;
  InequalityReport report;
};

struct SuiteSummary {
  std::string validator;
  int cases = 0, failures = 0;
  int dilatate = 0, dilatate_detected = 0;
  int strict_cases = 0, strict_ok = 0;  // random strictly convex cases with slack > 1e-4 scale
  double worst_slack = 0;               // min slack / scale over random cases
};

struct SuiteResult {
  std::vector<SuiteRow> rows;
  std::vector<SuiteSummary> summary;
  bool all_hold = true;
};

std::vector<std::string> suite_validators();
SuiteResult run_suite(const SuiteOptions& opts);

}  // namespace obm
