#include "obm/oracle.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>

namespace obm {

McVolume mc_volume(const ConvexBody& K, long samples, std::uint64_t seed) {
  const int n = K.dim();
  Vec lo(n), hi(n);
  for (int i = 0; i < n; ++i) {
    hi[i] = K.support(unit(n, i));
    lo[i] = -K.support(-unit(n, i));
  }
  double box = 1;
  for (int i = 0; i < n; ++i) box *= hi[i] - lo[i];
  Rng rng{Seed(seed).child("mc_volume")};
  long hits = 0;
  Vec x(n);
  for (long s = 0; s < samples; ++s) {
    for (int i = 0; i < n; ++i) x[i] = rng.uniform(lo[i], hi[i]);
    if (K.contains(x, 0.0)) ++hits;
  }
  const double p = static_cast<double>(hits) / static_cast<double>(samples);
  return {box * p, box * std::sqrt(p * (1 - p) / static_cast<double>(samples))};
}

const char* to_string(BodyFamily f) {
  switch (f) {
    case BodyFamily::General: return "K";
    case BodyFamily::ContainsOrigin: return "K_o";
    case BodyFamily::OriginInterior: return "K_oo";
    case BodyFamily::Symmetric: return "K_s";
  }
  return "K";
}

BodyFamily body_family_from_string(const std::string& s) {
  if (s == "K") return BodyFamily::General;
  if (s == "K_o") return BodyFamily::ContainsOrigin;
  if (s == "K_oo") return BodyFamily::OriginInterior;
  if (s == "K_s") return BodyFamily::Symmetric;
  throw Error(ErrorCode::InvalidParameter, "unknown body family " + s);
}

ConvexBody random_polytope(const Seed& seed, int n, int k, BodyFamily family) {
  if (n != 2 && n != 3) throw Error(ErrorCode::InvalidParameter, "dimension must be 2 or 3");
  if (k < n + 1) throw Error(ErrorCode::InvalidParameter, "need at least n + 1 points");
  for (int attempt = 0; attempt < 10; ++attempt) {
    Rng rng{seed.child("random_polytope").child(static_cast<std::uint64_t>(attempt))};
    std::vector<Vec> pts;
    Vec w(n);
    for (int i = 0; i < n; ++i) w[i] = rng.normal();
    w.normalize();
    Vec shift(n);
    for (int i = 0; i < n; ++i) shift[i] = rng.uniform(-1, 1);
    for (int j = 0; j < k; ++j) {
      Vec p(n);
      for (int i = 0; i < n; ++i) p[i] = rng.uniform(-1, 1);
      switch (family) {
        case BodyFamily::General: p += shift; break;
        case BodyFamily::ContainsOrigin:
          // Strictly on one side of a hyperplane through o, so o is a vertex.
          if (p.dot(w) < 0) p -= 2 * p.dot(w) * w;
          p += (0.05 + 0.2 * rng.uniform()) * w;
          break;
        default: break;
      }
      pts.push_back(p);
      if (family == BodyFamily::Symmetric) pts.push_back(-p);
    }
    if (family == BodyFamily::ContainsOrigin) pts.push_back(Vec::Zero(n));
    if (family == BodyFamily::OriginInterior) {
      Vec c = Vec::Zero(n);
      for (const auto& p : pts) c += p;
      c /= static_cast<double>(pts.size());
      for (auto& p : pts) p -= c;
    }
    const Polytope P = polytope_from_points(n, pts);
    if (!P.full_dimensional() || P.volume < 1e-3) continue;
    if (family == BodyFamily::OriginInterior) {
      double lo = 1e300;
      for (const auto& f : P.facets) lo = std::min(lo, f.offset);
      if (lo < 0.05 * P.scale()) continue;
    }
    return ConvexBody::from_polytope(P);
  }
  throw Error(ErrorCode::DegenerateSample, "random polytope degenerate after 10 attempts");
}

ConvexBody random_polytope(std::uint64_t seed, int n, int k, BodyFamily family) {
  return random_polytope(Seed(seed), n, k, family);
}

ConvexBody random_unconditional_polygon(const Seed& seed, int k) {
  Rng rng{seed.child("unconditional")};
  std::vector<Vec> pts = {vec2(1, 0), vec2(0, 1)};
  for (int j = 0; j < k; ++j) pts.push_back(vec2(rng.uniform(0.2, 1.0), rng.uniform(0.2, 1.0)));
  std::vector<Vec> all;
  for (const auto& p : pts)
    for (int sx : {-1, 1})
      for (int sy : {-1, 1}) all.push_back(vec2(sx * p[0], sy * p[1]));
  return ConvexBody::from_vertices(2, all);
}

double disk_centroid_integral(const Vec& u) {
  (void)u;  // rotation invariant
  // int_disk |x_1| dx = int_{-1}^{1} |t| 2 sqrt(1 - t^2) dt; integrate one half and double.
  const double half = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      [](double t) { return 2 * t * std::sqrt(std::max(0.0, 1 - t * t)); }, 0.0, 1.0, 15, 1e-14);
  return 2 * half / M_PI;
}

double rectangle_disk_vphi_ratio(const PhiFunction& phi, double a, double b) {
  return 0.5 * (phi(2 / a) + phi(2 / b));
}

double lp_support(double hk, double hl, double p) {
  if (std::isinf(p)) return std::max(hk, hl);
  if (p == 1) return hk + hl;
  const double m = std::max(hk, hl);
  if (m <= 0) return 0;
  return m * std::pow(std::pow(hk / m, p) + std::pow(hl / m, p), 1 / p);
}

PhiFunction random_phi(const Seed& seed, PhiKind kind) {
  Rng rng{seed.child("random_phi")};
  switch (kind) {
    case PhiKind::Power: return make_power(1 + 3 * rng.uniform());
    case PhiKind::PowerMix: {
      const double w = rng.uniform(0.1, 0.9);
      return make_power_mix({w, 1 - w}, {1 + rng.uniform(), 2 + 2 * rng.uniform()});
    }
    case PhiKind::Exp: return make_exp_normalized();
    case PhiKind::MaxLinear: return make_maxlinear(0.6 * rng.uniform());
    case PhiKind::Piecewise: {
      // Convex knots through (1, 1): increasing slopes, rescaled at the end.
      const double t1 = rng.uniform(0.1, 0.4), t2 = rng.uniform(0.5, 0.9);
      const double s0 = rng.uniform(0, 0.5), s1 = s0 + rng.uniform(0.2, 1), s2 = s1 + rng.uniform(0.2, 2);
      const double y1 = s0 * t1, y2 = y1 + s1 * (t2 - t1), y3 = y2 + s2 * (1 - t2);
      return make_piecewise({{0, 0}, {t1, y1 / y3}, {t2, y2 / y3}, {1, 1}, {2, 1 + 1.5 * s2 / y3}});
    }
    case PhiKind::SteepExp: return make_steep_exp();
  }
  return make_power(1);
}

PhiM random_phi_m(const Seed& seed, int index) {
  const Seed s = seed.child(static_cast<std::uint64_t>(index));
  static const PhiKind kinds[] = {PhiKind::Power, PhiKind::PowerMix, PhiKind::Exp,
                                  PhiKind::MaxLinear, PhiKind::Piecewise, PhiKind::SteepExp};
  switch (index % 9) {
    case 6: return PhiM::max(2);
    case 7: return gauge_phi_from_body(random_unconditional_polygon(s));
    case 8: return PhiM::sum({random_phi(s.child("a"), PhiKind::Power), random_phi(s.child("b"), PhiKind::Exp)});
    default: {
      const PhiKind k = kinds[index % 9];
      return PhiM::sum({random_phi(s.child("a"), k), random_phi(s.child("b"), k)});
    }
  }
}

std::vector<std::pair<ConvexBody, ConvexBody>> segment_suite(std::uint64_t seed, int count) {
  Rng rng{Seed(seed).child("segment_suite")};
  std::vector<std::pair<ConvexBody, ConvexBody>> out;
  for (int i = 0; i < count; ++i) {
    const double th = rng.uniform(0, M_PI), dth = rng.uniform(0.05, 0.6);
    const double la = rng.uniform(1, 3), lb = la * rng.uniform(1.2, 2.5);
    const Vec a = la * vec2(std::cos(th), std::sin(th));
    const Vec b = lb * vec2(std::cos(th + dth), std::sin(th + dth));
    if (i % 2 == 0) out.emplace_back(ConvexBody::segment(-a, a), ConvexBody::segment(-b, b));
    else out.emplace_back(ConvexBody::segment(Vec::Zero(2), a), ConvexBody::segment(Vec::Zero(2), b));
  }
  return out;
}

}  // namespace obm
