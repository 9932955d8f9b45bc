#pragma once

#include "obm/phi.hpp"

namespace obm {

struct LuxemburgBody {
  PhiM phi;
  DiscreteBodyMeasure mu;
  ConvexBody body;
};

// h(x) = inf{lambda > 0 : sum_i w_i phi(h_{K_i1}(x)/lambda, ..., h_{K_im}(x)/lambda) <= 1}.
LuxemburgBody luxemburg_body(const PhiM& phi, const DiscreteBodyMeasure& mu);

// Atoms: segments [-v/h_K(v), v/h_K(v)] (or [o, v/h_K(v)] when asymmetric) per
// facet normal v, weighted by the normalized cone measure.
DiscreteBodyMeasure projection_measure(const ConvexBody& K, bool asymmetric = false);
ConvexBody orlicz_projection_body(const PhiFunction& phi, const ConvexBody& K, bool asymmetric = false);

struct Quadrature {
  enum class Kind { Cells, MonteCarlo };
  Kind kind = Kind::Cells;
  int n = 512;             // cells per axis, or sample count
  std::uint64_t seed = 1;  // Monte Carlo only
  // "cells:512" or "mc:1000000,7".
  static Quadrature parse(const std::string& text);
  std::string to_string() const;
};

// Weighted points (x_c, w_c) with sum w_c = 1 representing normalized Lebesgue measure on K.
struct BodyQuadrature {
  std::vector<Vec> points;
  std::vector<double> weights;
  double volume = 0;
};
BodyQuadrature body_quadrature(const ConvexBody& K, const Quadrature& q);

// h(u) = inf{lambda : (1/V(K)) int_K phi(|u.x|/lambda) dx <= 1}; max{u.x, 0} when asymmetric.
ConvexBody orlicz_centroid_body(const PhiFunction& phi, const ConvexBody& K, const Quadrature& q = {},
                                bool asymmetric = false);

struct IdentityDefect {
  double defect = 0;  // sup |h_{A C} - h_{C_{A mu}}| / max h
  Vec direction;
};
// A(C_{phi, mu}) against C_{phi, A mu} on the standard grid.
IdentityDefect linear_image_identity_check(const PhiM& phi, const DiscreteBodyMeasure& mu, const Mat& A);
IdentityDefect linear_image_identity_check(const PhiM& phi, const DiscreteBodyMeasure& mu, const Mat& A,
                                           const DirectionGrid& grid);

}  // namespace obm
