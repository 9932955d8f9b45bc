#pragma once

#include "obm/phi.hpp"

#include <utility>

namespace obm {

struct McVolume {
  double estimate = 0;
  double stderr_ = 0;
};
// Hit-count volume over the support bounding box.
McVolume mc_volume(const ConvexBody& K, long samples, std::uint64_t seed);

enum class BodyFamily { General, ContainsOrigin, OriginInterior, Symmetric };
const char* to_string(BodyFamily f);
BodyFamily body_family_from_string(const std::string& s);

// Hull of k random points. ContainsOrigin puts o at a vertex; OriginInterior
// centers the vertex mean at o and requires a support margin; Symmetric uses +-p.
ConvexBody random_polytope(const Seed& seed, int n, int k, BodyFamily family);
ConvexBody random_polytope(std::uint64_t seed, int n, int k, BodyFamily family);

// 1-unconditional polygon with e1, e2 on the boundary.
ConvexBody random_unconditional_polygon(const Seed& seed, int k = 6);

// (1/V) int_disk |u.x| dx for the unit disk, by 1-D quadrature.
double disk_centroid_integral(const Vec& u);

// V_phi(K, B^2)/V(K) for a centered a x b rectangle: mean of phi(2/a), phi(2/b).
double rectangle_disk_vphi_ratio(const PhiFunction& phi, double a, double b);

// Closed-form L_p support (h_K^p + h_L^p)^{1/p}; p = inf gives max.
double lp_support(double hk, double hl, double p);

enum class PhiKind { Power, PowerMix, Exp, MaxLinear, Piecewise, SteepExp };
PhiFunction random_phi(const Seed& seed, PhiKind kind);
// Cycles through every family: sums of random univariate phi, max, and gauges.
PhiM random_phi_m(const Seed& seed, int index);

// Near-parallel segment pairs of unequal length, through o or starting at o.
std::vector<std::pair<ConvexBody, ConvexBody>> segment_suite(std::uint64_t seed, int count = 24);

}  // namespace obm
