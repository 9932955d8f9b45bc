#include "obm/additions.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace obm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

OracleOptions merged_options(const std::vector<ConvexBody>& bodies, const std::string& label) {
  OracleOptions o;
  o.label = label;
  for (const auto& B : bodies)
    for (const auto& nrm : B.hint_normals()) o.hint_normals.push_back(nrm);
  return o;
}

void check_same_dim(const std::vector<ConvexBody>& bodies) {
  if (bodies.empty()) throw Error(ErrorCode::InvalidParameter, "no bodies");
  for (const auto& B : bodies)
    if (B.dim() != bodies[0].dim()) throw Error(ErrorCode::InvalidParameter, "bodies differ in dimension");
}

std::string direction_text(const Vec& x) {
  std::string s = "(";
  for (int i = 0; i < x.size(); ++i) s += (i ? ", " : "") + format_double(x[i]);
  return s + ")";
}

}  // namespace

// ---------------------------------------------------------------------------
// CoeffSet

CoeffSet CoeffSet::points(int m, std::vector<std::vector<double>> pts) {
  if (m < 1 || pts.empty()) throw Error(ErrorCode::InvalidParameter, "coefficient set needs points");
  for (const auto& p : pts) {
    if (static_cast<int>(p.size()) != m) throw Error(ErrorCode::InvalidParameter, "coefficient point has wrong arity");
    for (double v : p)
      if (!std::isfinite(v)) throw Error(ErrorCode::InvalidParameter, "coefficient point is not finite");
  }
  CoeffSet M;
  M.kind_ = Kind::Points;
  M.m_ = m;
  M.pts_ = std::move(pts);
  M.name_ = "points";
  return M;
}

CoeffSet CoeffSet::lp_arc(double q, int m) {
  if (!(q >= 1) || m < 1) throw Error(ErrorCode::InvalidParameter, "lp arc needs q >= 1");
  CoeffSet M;
  M.kind_ = Kind::LpArc;
  M.m_ = m;
  M.q_ = q;
  char buf[64];
  std::snprintf(buf, sizeof buf, "lp-arc(%g)", q);
  M.name_ = buf;
  return M;
}

CoeffSet CoeffSet::segment() {
  CoeffSet M;
  M.kind_ = Kind::Segment;
  M.pts_ = {{1, 0}, {0, 1}};
  M.name_ = "segment";
  return M;
}

CoeffSet CoeffSet::singleton() {
  CoeffSet M;
  M.kind_ = Kind::Singleton;
  M.pts_ = {{1, 1}};
  M.name_ = "singleton";
  return M;
}

CoeffSet CoeffSet::j_polar_positive(const ConvexBody& jp) {
  if (jp.dim() != 2) throw Error(ErrorCode::InvalidParameter, "J polar coefficient set is planar");
  CoeffSet M;
  M.kind_ = Kind::JPolarPositive;
  M.body_ = jp;
  M.name_ = "j-polar-positive";
  return M;
}

CoeffSet CoeffSet::j_polar_positive(const PhiM& phi) { return j_polar_positive(j_polar(phi)); }

double CoeffSet::support(const double* w) const {
  switch (kind_) {
    case Kind::Points:
    case Kind::Segment:
    case Kind::Singleton: {
      double best = -kInf;
      for (const auto& p : pts_) {
        double d = 0;
        for (int j = 0; j < m_; ++j) d += p[j] * w[j];
        best = std::max(best, d);
      }
      return best;
    }
    case Kind::LpArc: {
      double mx = -kInf;
      bool pos = false;
      for (int j = 0; j < m_; ++j) {
        mx = std::max(mx, w[j]);
        pos = pos || w[j] > 0;
      }
      if (!pos) return mx;
      if (q_ == 1) return mx;
      if (std::isinf(q_)) {
        double s = 0;
        for (int j = 0; j < m_; ++j) s += std::max(w[j], 0.0);
        return s;
      }
      const double p = q_ / (q_ - 1);
      if (p == 2) {
        double s = 0;
        for (int j = 0; j < m_; ++j) s += w[j] > 0 ? w[j] * w[j] : 0.0;
        return std::sqrt(s);
      }
      // Scale by the max entry so the power sum cannot overflow.
      double s = 0;
      for (int j = 0; j < m_; ++j) s += w[j] > 0 ? std::pow(w[j] / mx, p) : 0.0;
      return mx * std::pow(s, 1.0 / p);
    }
    case Kind::JPolarPositive: return body_.support(vec2(std::max(w[0], 0.0), std::max(w[1], 0.0)));
  }
  return 0.0;
}

bool CoeffSet::nonnegative() const {
  if (kind_ != Kind::Points) return true;
  for (const auto& p : pts_)
    for (double v : p)
      if (v < 0) return false;
  return true;
}

bool CoeffSet::unconditional() const {
  if (kind_ != Kind::Points) return false;
  for (const auto& p : pts_) {
    for (int mask = 1; mask < (1 << m_); ++mask) {
      std::vector<double> r = p;
      for (int j = 0; j < m_; ++j)
        if (mask & (1 << j)) r[j] = -r[j];
      bool found = false;
      for (const auto& q : pts_) {
        double d = 0;
        for (int j = 0; j < m_; ++j) d = std::max(d, std::fabs(q[j] - r[j]));
        if (d <= 1e-12) {
          found = true;
          break;
        }
      }
      if (!found) return false;
    }
  }
  return true;
}

std::vector<std::vector<double>> CoeffSet::samples(int count) const {
  count = std::max(count, 2);
  switch (kind_) {
    case Kind::Points:
    case Kind::Segment:
    case Kind::Singleton: return pts_;
    case Kind::LpArc: {
      std::vector<std::vector<double>> out;
      auto normalize = [&](std::vector<double> a) {
        double n;
        if (std::isinf(q_)) {
          n = *std::max_element(a.begin(), a.end());
        } else {
          n = 0;
          for (double v : a) n += std::pow(v, q_);
          n = std::pow(n, 1.0 / q_);
        }
        for (double& v : a) v /= n;
        return a;
      };
      if (m_ == 2) {
        for (int k = 0; k < count; ++k) {
          const double th = M_PI / 2 * k / (count - 1);
          out.push_back(normalize({std::cos(th), std::sin(th)}));
        }
        out.front() = {1, 0};
        out.back() = {0, 1};
      } else {
        Rng rng{Seed(7).child("arc")};
        for (int j = 0; j < m_; ++j) {
          std::vector<double> e(m_, 0.0);
          e[j] = 1;
          out.push_back(e);
        }
        while (static_cast<int>(out.size()) < count) {
          std::vector<double> a(m_);
          for (double& v : a) v = std::fabs(rng.normal()) + 1e-300;
          out.push_back(normalize(a));
        }
      }
      return out;
    }
    case Kind::JPolarPositive: {
      std::vector<std::vector<double>> out;
      const auto& V = body_.shape().vertices;
      for (const auto& v : V)
        if (v[0] >= -1e-12 && v[1] >= -1e-12) out.push_back({std::max(v[0], 0.0), std::max(v[1], 0.0)});
      out.push_back({0, 0});
      if (static_cast<int>(out.size()) > count) {
        std::vector<std::vector<double>> thin;
        for (int k = 0; k < count; ++k) thin.push_back(out[static_cast<std::size_t>(k) * (out.size() - 1) / (count - 1)]);
        out = std::move(thin);
      }
      return out;
    }
  }
  return {};
}

// ---------------------------------------------------------------------------
// M-addition

ConvexBody m_sum(const CoeffSet& M, const std::vector<ConvexBody>& bodies, const MSumOptions& opts) {
  check_same_dim(bodies);
  if (static_cast<int>(bodies.size()) != M.arity()) throw Error(ErrorCode::InvalidParameter, "arity mismatch");
  bool all_sym = true;
  for (const auto& B : bodies) all_sym = all_sym && is_o_symmetric(B);
  if (!M.nonnegative() && !(M.unconditional() && all_sym)) {
    if (!opts.fallback_bruteforce)
      throw Error(ErrorCode::RegimeViolation, "M has negative coordinates and the bodies are not all o-symmetric");
    std::fprintf(stderr, "warning: support rule not guaranteed, using sampled M-sum\n");
    return m_sum_bruteforce(M, bodies, opts.fallback_samples, opts.seed);
  }
  OracleOptions o = merged_options(bodies, "m-sum");
  o.o_symmetric = all_sym;
  const int m = M.arity();
  return ConvexBody::oracle(
      bodies[0].dim(),
      [M, bodies, m](const Vec& x) {
        double w[8];
        std::vector<double> big;
        double* p = w;
        if (m > 8) {
          big.resize(m);
          p = big.data();
        }
        for (int j = 0; j < m; ++j) p[j] = bodies[j].support(x);
        return M.support(p);
      },
      std::move(o));
}

PointCloud m_sum_point_cloud(const CoeffSet& M, const std::vector<PointCloud>& sets, int samples, std::uint64_t seed) {
  if (static_cast<int>(sets.size()) != M.arity()) throw Error(ErrorCode::InvalidParameter, "arity mismatch");
  for (const auto& s : sets)
    if (s.empty()) throw Error(ErrorCode::InvalidParameter, "empty point set");
  const int n = static_cast<int>(sets[0][0].size());
  const auto A = M.samples(samples);
  Rng rng{Seed(seed).child("m_sum_point_cloud")};
  PointCloud out;
  out.reserve(samples);
  for (int i = 0; i < samples; ++i) {
    const auto& a = A[rng.index(static_cast<int>(A.size()))];
    Vec p = Vec::Zero(n);
    for (std::size_t j = 0; j < sets.size(); ++j) p += a[j] * sets[j][rng.index(static_cast<int>(sets[j].size()))];
    out.push_back(p);
  }
  return out;
}

ConvexBody m_sum_bruteforce(const CoeffSet& M, const std::vector<ConvexBody>& bodies, int samples, std::uint64_t seed) {
  check_same_dim(bodies);
  std::vector<PointCloud> sets;
  for (const auto& B : bodies) sets.push_back(extreme_points(B, 256));
  return ConvexBody::from_vertices(bodies[0].dim(), m_sum_point_cloud(M, sets, samples, seed));
}

// ---------------------------------------------------------------------------
// Orlicz addition

ConvexBody orlicz_sum(const OrliczSumSpec& spec, const std::vector<ConvexBody>& bodies) {
  check_same_dim(bodies);
  if (static_cast<int>(bodies.size()) != spec.phi.arity()) throw Error(ErrorCode::InvalidParameter, "arity mismatch");
  for (const auto& B : bodies)
    if (!contains_origin(B)) throw Error(ErrorCode::OriginNotInterior, "Orlicz addition needs bodies containing o");
  PhiM phi = spec.phi;
  if (spec.coefficients) {
    if (spec.phi.kind() != PhiM::Kind::Sum && spec.phi.kind() != PhiM::Kind::WeightedSum)
      throw Error(ErrorCode::InvalidParameter, "coefficients need a sum-structured phi");
    phi = PhiM::weighted_sum(spec.phi.terms(), *spec.coefficients);
  }
  Tolerances tol = settings().tol;
  tol.solver_rel = spec.rel_tol;
  tol.solver_max_iter = spec.max_iter;
  OracleOptions o = merged_options(bodies, "orlicz-sum");
  bool all_sym = true;
  for (const auto& B : bodies) all_sym = all_sym && B.declared_o_symmetric();
  o.o_symmetric = all_sym;
  const int m = phi.arity();
  return ConvexBody::oracle(
      bodies[0].dim(),
      [phi, bodies, tol, m](const Vec& x) {
        std::vector<double> h(m), y(m);
        double mx = 0;
        int positive = 0, last = 0;
        for (int j = 0; j < m; ++j) {
          h[j] = std::max(bodies[j].support(x), 0.0);
          if (h[j] > 0) ++positive, last = j;
          mx = std::max(mx, h[j]);
        }
        if (positive == 0) return 0.0;
        if (positive == 1 && phi.unweighted_sum()) return h[last];
        try {
          return least_lambda(
              [&](double lam) {
                for (int j = 0; j < m; ++j) y[j] = h[j] / lam;
                return phi.eval(y.data());
              },
              mx, tol);
        } catch (const Error& e) {
          throw Error(e.code(), e.message() + " in direction " + direction_text(x));
        }
      },
      std::move(o));
}

ConvexBody orlicz_sum(const PhiM& phi, const ConvexBody& K, const ConvexBody& L) {
  OrliczSumSpec spec;
  spec.phi = phi;
  return orlicz_sum(spec, {K, L});
}

ConvexBody orlicz_linear_combination(const PhiFunction& phi1, const PhiFunction& phi2, const ConvexBody& K,
                                     const ConvexBody& L, double alpha, double beta) {
  if (!(alpha >= 0 && beta >= 0)) throw Error(ErrorCode::InvalidParameter, "alpha, beta must be >= 0");
  if (alpha + beta == 0) {
    if (volume(K) == 0 && volume(L) == 0 && K.support(unit(K.dim(), 0)) == 0) return ConvexBody::origin(K.dim());
    throw Error(ErrorCode::InvalidParameter, "alpha + beta must be positive");
  }
  OrliczSumSpec spec;
  spec.phi = PhiM::sum({phi1, phi2});
  spec.coefficients = std::vector<double>{alpha, beta};
  return orlicz_sum(spec, {K, L});
}

ConvexBody orlicz_sum_compact(const OrliczSumSpec& spec, const std::vector<ConvexBody>& sets) {
  std::vector<ConvexBody> hulls;
  for (const auto& S : sets) hulls.push_back(conv_with_origin(S));
  return orlicz_sum(spec, hulls);
}

ConvexBody orlicz_sum_compact(const OrliczSumSpec& spec, const std::vector<PointCloud>& sets) {
  std::vector<ConvexBody> hulls;
  for (auto S : sets) {
    if (S.empty()) throw Error(ErrorCode::InvalidParameter, "empty point set");
    S.push_back(Vec::Zero(S[0].size()));
    hulls.push_back(ConvexBody::from_vertices(static_cast<int>(S[0].size()), S));
  }
  return orlicz_sum(spec, hulls);
}

ExtendedSumSpec extended_spec(const PhiM& phi) {
  ExtendedSumSpec ext;
  ext.t_grid = settings().param_t_grid;
  ext.boundary = settings().param_boundary;
  const DecompositionResult D = decompose_2d(j_polar(phi));
  if (D.which == DecompositionResult::Case::MaxCase) {
    ext.square = true;
    return ext;
  }
  ext.psi1 = *D.phi1;
  ext.psi2 = *D.phi2;
  for (const PhiFunction* p : {&ext.psi1, &ext.psi2}) {
    if (std::fabs((*p)(p->tau())) > 1e-12 || std::fabs((*p)(1.0) - 1) > 1e-9)
      throw Error(ErrorCode::Validation, "decomposed psi does not map [tau, 1] onto [0, 1]");
  }
  return ext;
}

ParametricResult orlicz_sum_parametric(const ExtendedSumSpec& ext, const PointCloud& K, const PointCloud& L,
                                       bool route_square) {
  if (K.empty() || L.empty()) throw Error(ErrorCode::InvalidParameter, "empty point set");
  const int n = static_cast<int>(K[0].size());
  ParametricResult R;
  R.t_grid = ext.t_grid;
  R.boundary = ext.boundary;
  if (ext.square) {
    if (!route_square) throw Error(ErrorCode::SquareCase, "J_phi polar is the square; use Minkowski addition");
    R.square_case = true;
    for (const auto& x : K)
      for (const auto& y : L) R.points.push_back(x + y);
    R.hull = ConvexBody::from_vertices(n, R.points);
    return R;
  }
  const int T = std::max(ext.t_grid, 2);
  const bool products = K.size() * L.size() <= 4096 || n != 2;
  std::vector<P2> hk, hl;
  if (!products) {
    std::vector<P2> a, b;
    for (const auto& x : K) a.emplace_back(x[0], x[1]);
    for (const auto& y : L) b.emplace_back(y[0], y[1]);
    hk = convex_hull_2d(a);
    hl = convex_hull_2d(b);
  }
  for (int k = 0; k < T; ++k) {
    const double t = static_cast<double>(k) / (T - 1);
    const double a = restricted_inverse(ext.psi1, 1 - t);
    const double b = restricted_inverse(ext.psi2, t);
    if (products) {
      for (const auto& x : K)
        for (const auto& y : L) R.points.push_back(a * x + b * y);
    } else {
      std::vector<P2> sa, sb;
      for (const auto& p : hk) sa.push_back(a * p);
      for (const auto& p : hl) sb.push_back(b * p);
      for (const auto& p : minkowski_sum_polygons(sa, sb)) R.points.push_back(vec2(p.x(), p.y()));
    }
  }
  R.hull = ConvexBody::from_vertices(n, R.points);
  return R;
}

ParametricResult orlicz_sum_parametric(const ExtendedSumSpec& ext, const ConvexBody& K, const ConvexBody& L,
                                       bool route_square) {
  return orlicz_sum_parametric(ext, extreme_points(K, ext.boundary), extreme_points(L, ext.boundary), route_square);
}

// ---------------------------------------------------------------------------
// Wulff shape

ConvexBody wulff_sum(const PhiFunction& phi, const ConvexBody& K, const ConvexBody& L, double eps,
                     const DirectionGrid& grid) {
  if (!(eps >= 0)) throw Error(ErrorCode::InvalidParameter, "eps must be >= 0");
  if (phi.tau() > 0) throw Error(ErrorCode::InvalidParameter, "Wulff sum needs phi > 0 on (0, inf)");
  if (!origin_interior(K)) throw Error(ErrorCode::OriginNotInterior, "Wulff sum needs o in the interior of K");
  std::vector<Vec> normals;
  std::vector<double> offsets;
  for (const auto& u : grid.directions()) {
    const double hk = K.support(u), hl = std::max(L.support(u), 0.0);
    normals.push_back(u);
    offsets.push_back(eps == 0 ? hk : restricted_inverse(phi, phi(hk) + eps * phi(hl)));
  }
  return ConvexBody::from_halfspaces(K.dim(), normals, offsets);
}

ConvexBody wulff_sum(const PhiFunction& phi, const ConvexBody& K, const ConvexBody& L, double eps) {
  return wulff_sum(phi, K, L, eps, shared_grid(K, L));
}

// ---------------------------------------------------------------------------
// Probes

NaiveProbeResult naive_sum_probe(const PhiFunction& phi, const ConvexBody& K, const ConvexBody& L, int pairs,
                                 std::uint64_t seed) {
  if (K.dim() != L.dim()) throw Error(ErrorCode::InvalidParameter, "dimension mismatch");
  const int n = K.dim();
  auto H = [&](const Vec& x) {
    const double r = x.norm();
    if (r == 0) return 0.0;
    const Vec u = x / r;
    const double hk = std::max(K.support(u), 0.0), hl = std::max(L.support(u), 0.0);
    return r * restricted_inverse(phi, phi(hk) + phi(hl));
  };
  Rng rng{Seed(seed).child("naive_sum_probe")};
  NaiveProbeResult R;
  R.defect = -kInf;
  R.x = Vec::Zero(n);
  R.y = Vec::Zero(n);
  for (int i = 0; i < pairs; ++i) {
    Vec x(n), y(n);
    for (int k = 0; k < n; ++k) x[k] = rng.normal(), y[k] = rng.normal();
    const double d = H(x + y) - H(x) - H(y);
    if (d > R.defect) R.defect = d, R.x = x, R.y = y;
  }
  R.pairs = pairs;
  R.is_support_function = R.defect <= 1e-9;
  return R;
}

namespace {

double pair_value(const PhiM& phi, double a, double b) {
  const double h[2] = {a, b};
  return orlicz_value(phi, h);
}

double rel_gap(double a, double b) { return std::fabs(a - b) / std::max({std::fabs(a), std::fabs(b), 1e-300}); }

}  // namespace

AlgebraProbeResult associativity_probe(const PhiM& phi, const std::vector<ConvexBody>& bodies, const DirectionGrid& grid) {
  if (phi.arity() != 2) throw Error(ErrorCode::InvalidParameter, "probe needs arity 2");
  const std::size_t B = bodies.size(), N = grid.size();
  std::vector<std::vector<double>> h(B, std::vector<double>(N));
  for (std::size_t b = 0; b < B; ++b)
    for (std::size_t d = 0; d < N; ++d) h[b][d] = std::max(bodies[b].support(grid[d]), 0.0);
  AlgebraProbeResult R;
  for (std::size_t i = 0; i < B; ++i)
    for (std::size_t j = 0; j < B; ++j)
      for (std::size_t k = 0; k < B; ++k)
        for (std::size_t d = 0; d < N; ++d) {
          const double left = pair_value(phi, pair_value(phi, h[i][d], h[j][d]), h[k][d]);
          const double right = pair_value(phi, h[i][d], pair_value(phi, h[j][d], h[k][d]));
          const double g = rel_gap(left, right);
          if (g > R.defect) R.defect = g, R.direction = grid[d], R.i = i, R.j = j, R.k = k;
        }
  return R;
}

AlgebraProbeResult commutativity_probe(const PhiM& phi, const std::vector<ConvexBody>& bodies, const DirectionGrid& grid) {
  if (phi.arity() != 2) throw Error(ErrorCode::InvalidParameter, "probe needs arity 2");
  AlgebraProbeResult R;
  for (std::size_t i = 0; i < bodies.size(); ++i)
    for (std::size_t j = i + 1; j < bodies.size(); ++j)
      for (std::size_t d = 0; d < grid.size(); ++d) {
        const double a = std::max(bodies[i].support(grid[d]), 0.0), b = std::max(bodies[j].support(grid[d]), 0.0);
        const double g = rel_gap(pair_value(phi, a, b), pair_value(phi, b, a));
        if (g > R.defect) R.defect = g, R.direction = grid[d], R.i = i, R.j = j;
      }
  return R;
}

}  // namespace obm
