#include "obm/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>

namespace obm {

namespace {

// Least lambda with sum_i w_i phi(s_i / lambda) <= 1 for a univariate phi.
double luxemburg_1d(const PhiFunction& phi, const std::vector<double>& s, const std::vector<double>& w) {
  double mx = 0;
  for (double v : s) mx = std::max(mx, v);
  if (!(mx > 0)) return 0.0;
  if (phi.family() == PhiFamily::Power) {
    const double p = phi.parts().params[0];
    std::vector<double> terms(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) terms[i] = s[i] > 0 ? w[i] * std::pow(s[i] / mx, p) : 0.0;
    return mx * std::pow(pairwise_sum(terms), 1.0 / p);
  }
  std::vector<double> terms(s.size());
  return least_lambda(
      [&](double lam) {
        for (std::size_t i = 0; i < s.size(); ++i) terms[i] = w[i] > 0 && s[i] > 0 ? w[i] * phi(s[i] / lam) : 0.0;
        return pairwise_sum(terms);
      },
      mx);
}

}  // namespace

LuxemburgBody luxemburg_body(const PhiM& phi, const DiscreteBodyMeasure& mu) {
  mu.validate();
  if (mu.arity != phi.arity()) throw Error(ErrorCode::InvalidParameter, "phi arity differs from the measure arity");
  LuxemburgBody C;
  C.phi = phi;
  C.mu = mu;
  OracleOptions o;
  o.label = "luxemburg";
  bool sym = true;
  for (const auto& t : mu.tuples)
    for (const auto& B : t) sym = sym && B.declared_o_symmetric();
  o.o_symmetric = sym;
  C.body = ConvexBody::oracle(mu.dim(), [phi, mu](const Vec& x) {
    const std::size_t A = mu.tuples.size();
    const int m = mu.arity;
    std::vector<double> h(A * m);
    double mx = 0;
    for (std::size_t i = 0; i < A; ++i)
      for (int j = 0; j < m; ++j) {
        h[i * m + j] = std::max(mu.tuples[i][j].support(x), 0.0);
        if (mu.weights[i] > 0) mx = std::max(mx, h[i * m + j]);
      }
    if (!(mx > 0)) return 0.0;
    if (m == 1 && phi.kind() == PhiM::Kind::Sum) return luxemburg_1d(phi.terms()[0], h, mu.weights);
    std::vector<double> y(m), terms(A);
    return least_lambda(
        [&](double lam) {
          for (std::size_t i = 0; i < A; ++i) {
            if (mu.weights[i] == 0) {
              terms[i] = 0;
              continue;
            }
            for (int j = 0; j < m; ++j) y[j] = h[i * m + j] / lam;
            terms[i] = mu.weights[i] * phi.eval(y.data());
          }
          return pairwise_sum(terms);
        },
        mx);
  }, std::move(o));
  return C;
}

DiscreteBodyMeasure projection_measure(const ConvexBody& K, bool asymmetric) {
  if (!origin_interior(K)) throw Error(ErrorCode::OriginNotInterior, "projection body needs o in the interior");
  const ConeMeasure C = cone_measure(K);
  DiscreteBodyMeasure mu;
  for (std::size_t i = 0; i < C.normals.size(); ++i) {
    if (!(C.weights[i] > 0)) continue;
    const Vec v = C.normals[i] / C.support[i];
    mu.add({asymmetric ? ConvexBody::segment(Vec::Zero(K.dim()), v) : ConvexBody::segment(-v, v)}, C.weights[i]);
  }
  return mu;
}

ConvexBody orlicz_projection_body(const PhiFunction& phi, const ConvexBody& K, bool asymmetric) {
  if (!origin_interior(K)) throw Error(ErrorCode::OriginNotInterior, "projection body needs o in the interior");
  const ConeMeasure C = cone_measure(K);
  // Segment atoms have support |x.v|/h_K(v); evaluate that directly.
  std::vector<Vec> v;
  std::vector<double> w;
  for (std::size_t i = 0; i < C.normals.size(); ++i) {
    if (!(C.weights[i] > 0)) continue;
    v.push_back(C.normals[i] / C.support[i]);
    w.push_back(C.weights[i]);
  }
  OracleOptions o;
  o.label = asymmetric ? "orlicz-projection-body+" : "orlicz-projection-body";
  o.o_symmetric = !asymmetric;
  return ConvexBody::oracle(K.dim(), [phi, v, w, asymmetric](const Vec& x) {
    std::vector<double> s(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
      const double d = x.dot(v[i]);
      s[i] = asymmetric ? std::max(d, 0.0) : std::fabs(d);
    }
    return luxemburg_1d(phi, s, w);
  }, std::move(o));
}

// ---------------------------------------------------------------------------
// Centroid bodies

Quadrature Quadrature::parse(const std::string& text) {
  Quadrature q;
  auto bad = [&] { return Error(ErrorCode::InvalidParameter, "quadrature must be cells:N or mc:N[,seed], got " + text); };
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw bad();
  const std::string kind = text.substr(0, colon), rest = text.substr(colon + 1);
  char* end = nullptr;
  const long n = std::strtol(rest.c_str(), &end, 10);
  if (end == rest.c_str() || n < 1) throw bad();
  q.n = static_cast<int>(n);
  if (kind == "cells") {
    q.kind = Kind::Cells;
    if (*end != '\0') throw bad();
  } else if (kind == "mc") {
    q.kind = Kind::MonteCarlo;
    if (*end == ',') {
      const char* s = end + 1;
      q.seed = std::strtoull(s, &end, 10);
      if (end == s) throw bad();
    }
    if (*end != '\0') throw bad();
  } else {
    throw bad();
  }
  return q;
}

std::string Quadrature::to_string() const {
  char buf[64];
  if (kind == Kind::Cells) std::snprintf(buf, sizeof buf, "cells:%d", n);
  else std::snprintf(buf, sizeof buf, "mc:%d,%llu", n, static_cast<unsigned long long>(seed));
  return buf;
}

namespace {

std::vector<P2> clip_halfplane(const std::vector<P2>& poly, const P2& n, double b) {
  // Keeps n.x <= b.
  std::vector<P2> out;
  const std::size_t m = poly.size();
  for (std::size_t i = 0; i < m; ++i) {
    const P2& a = poly[i];
    const P2& c = poly[(i + 1) % m];
    const double da = n.dot(a) - b, dc = n.dot(c) - b;
    if (da <= 0) out.push_back(a);
    if ((da < 0 && dc > 0) || (da > 0 && dc < 0)) out.push_back(a + (c - a) * (da / (da - dc)));
  }
  return out;
}

void area_centroid(const std::vector<P2>& p, double& area, P2& c) {
  area = 0;
  c = P2::Zero();
  const std::size_t m = p.size();
  if (m < 3) return;
  for (std::size_t i = 0; i < m; ++i) {
    const P2& a = p[i];
    const P2& b = p[(i + 1) % m];
    const double cr = a.x() * b.y() - a.y() * b.x();
    area += cr;
    c += (a + b) * cr;
  }
  area *= 0.5;
  if (area != 0) c /= 6 * area;
}

BodyQuadrature cells_2d(const ConvexBody& K, int N) {
  const Polytope& P = K.shape();
  std::vector<P2> poly;
  for (const auto& v : P.vertices) poly.emplace_back(v[0], v[1]);
  double x0 = poly[0].x(), x1 = x0, y0 = poly[0].y(), y1 = y0;
  for (const auto& p : poly) {
    x0 = std::min(x0, p.x()), x1 = std::max(x1, p.x());
    y0 = std::min(y0, p.y()), y1 = std::max(y1, p.y());
  }
  const double dx = (x1 - x0) / N, dy = (y1 - y0) / N;
  std::vector<BodyQuadrature> rows(N);
  parallel_for(N, [&](std::size_t r) {
    const double ya = y0 + dy * r, yb = r + 1 == static_cast<std::size_t>(N) ? y1 : y0 + dy * (r + 1);
    std::vector<P2> strip = clip_halfplane(clip_halfplane(poly, P2(0, -1), -ya), P2(0, 1), yb);
    if (strip.size() < 3) return;
    double sx0 = strip[0].x(), sx1 = sx0;
    for (const auto& p : strip) sx0 = std::min(sx0, p.x()), sx1 = std::max(sx1, p.x());
    // Full-height x range: the left boundary is convex in y, the right concave.
    auto chord = [&](double y, double& l, double& rr) {
      l = std::numeric_limits<double>::infinity(), rr = -l;
      for (const auto& p : strip)
        if (std::fabs(p.y() - y) <= 1e-14 * (std::fabs(y) + dy)) l = std::min(l, p.x()), rr = std::max(rr, p.x());
    };
    double la, ra, lb, rb;
    chord(ya, la, ra);
    chord(yb, lb, rb);
    const double inner_l = std::max(la, lb), inner_r = std::min(ra, rb);
    auto& out = rows[r];
    const int c0 = std::max(0, static_cast<int>(std::floor((sx0 - x0) / dx)));
    const int c1 = std::min(N - 1, static_cast<int>(std::floor((sx1 - x0) / dx)));
    for (int c = c0; c <= c1; ++c) {
      const double xa = x0 + dx * c, xb = c + 1 == N ? x1 : x0 + dx * (c + 1);
      if (xa >= inner_l && xb <= inner_r) {
        out.points.push_back(vec2(0.5 * (xa + xb), 0.5 * (ya + yb)));
        out.weights.push_back((xb - xa) * (yb - ya));
        continue;
      }
      const auto cell = clip_halfplane(clip_halfplane(strip, P2(-1, 0), -xa), P2(1, 0), xb);
      double a;
      P2 cc;
      area_centroid(cell, a, cc);
      if (a > 0) {
        out.points.push_back(vec2(cc.x(), cc.y()));
        out.weights.push_back(a);
      }
    }
  });
  BodyQuadrature Q;
  for (auto& r : rows) {
    Q.points.insert(Q.points.end(), r.points.begin(), r.points.end());
    Q.weights.insert(Q.weights.end(), r.weights.begin(), r.weights.end());
  }
  Q.volume = pairwise_sum(Q.weights);
  for (double& w : Q.weights) w /= Q.volume;
  return Q;
}

BodyQuadrature monte_carlo(const ConvexBody& K, int N, std::uint64_t seed) {
  const int n = K.dim();
  Vec lo(n), hi(n);
  for (int i = 0; i < n; ++i) {
    hi[i] = K.support(unit(n, i));
    lo[i] = -K.support(-unit(n, i));
  }
  double box = 1;
  for (int i = 0; i < n; ++i) box *= hi[i] - lo[i];
  Rng rng{Seed(seed).child("centroid_mc")};
  BodyQuadrature Q;
  long tries = 0;
  while (static_cast<int>(Q.points.size()) < N) {
    Vec x(n);
    for (int i = 0; i < n; ++i) x[i] = rng.uniform(lo[i], hi[i]);
    ++tries;
    if (K.contains(x, 0.0)) Q.points.push_back(x);
    if (tries > 1000L * N) throw Error(ErrorCode::DegenerateBody, "Monte Carlo sampling found no interior points");
  }
  Q.weights.assign(Q.points.size(), 1.0 / static_cast<double>(Q.points.size()));
  Q.volume = box * static_cast<double>(Q.points.size()) / static_cast<double>(tries);
  return Q;
}

}  // namespace

BodyQuadrature body_quadrature(const ConvexBody& K, const Quadrature& q) {
  if (q.kind == Quadrature::Kind::Cells) {
    if (K.dim() != 2) throw Error(ErrorCode::InvalidParameter, "cell quadrature is planar; use mc:N for 3D");
    return cells_2d(K, q.n);
  }
  return monte_carlo(K, q.n, q.seed);
}

ConvexBody orlicz_centroid_body(const PhiFunction& phi, const ConvexBody& K, const Quadrature& q, bool asymmetric) {
  if (!origin_interior(K)) throw Error(ErrorCode::OriginNotInterior, "centroid body needs o in the interior");
  auto Q = std::make_shared<const BodyQuadrature>(body_quadrature(K, q));
  OracleOptions o;
  o.label = asymmetric ? "orlicz-centroid-body+" : "orlicz-centroid-body";
  o.o_symmetric = !asymmetric && K.declared_o_symmetric();
  return ConvexBody::oracle(K.dim(), [phi, Q, asymmetric](const Vec& u) {
    const std::size_t M = Q->points.size();
    std::vector<double> s(M);
    double mx = 0;
    for (std::size_t i = 0; i < M; ++i) {
      const double d = u.dot(Q->points[i]);
      s[i] = asymmetric ? std::max(d, 0.0) : std::fabs(d);
      mx = std::max(mx, s[i]);
    }
    if (!(mx > 0)) return 0.0;
    if (phi.family() == PhiFamily::Power || M <= 8192) return luxemburg_1d(phi, s, Q->weights);
    // Bin the projections; within a bin only the weighted mean enters.
    constexpr int B = 4096;
    std::vector<double> w(B, 0.0), ws(B, 0.0);
    for (std::size_t i = 0; i < M; ++i) {
      const int b = std::min(B - 1, static_cast<int>(s[i] / mx * B));
      w[b] += Q->weights[i];
      ws[b] += Q->weights[i] * s[i];
    }
    std::vector<double> bs, bw;
    for (int b = 0; b < B; ++b)
      if (w[b] > 0) bs.push_back(ws[b] / w[b]), bw.push_back(w[b]);
    return luxemburg_1d(phi, bs, bw);
  }, std::move(o));
}

IdentityDefect linear_image_identity_check(const PhiM& phi, const DiscreteBodyMeasure& mu, const Mat& A,
                                           const DirectionGrid& grid) {
  const ConvexBody left = linear_image(luxemburg_body(phi, mu).body, A);
  DiscreteBodyMeasure Amu;
  for (std::size_t i = 0; i < mu.tuples.size(); ++i) {
    std::vector<ConvexBody> t;
    for (const auto& B : mu.tuples[i]) t.push_back(linear_image(B, A));
    Amu.add(std::move(t), mu.weights[i]);
  }
  const ConvexBody right = luxemburg_body(phi, Amu).body;
  IdentityDefect R;
  R.direction = grid[0];
  double scale = 0, worst = 0;
  for (const auto& u : grid.directions()) {
    const double a = left.support(u), b = right.support(u);
    scale = std::max({scale, std::fabs(a), std::fabs(b)});
    if (std::fabs(a - b) > worst) worst = std::fabs(a - b), R.direction = u;
  }
  R.defect = scale > 0 ? worst / scale : worst;
  return R;
}

IdentityDefect linear_image_identity_check(const PhiM& phi, const DiscreteBodyMeasure& mu, const Mat& A) {
  return linear_image_identity_check(phi, mu, A, DirectionGrid::standard(mu.dim()));
}

}  // namespace obm
