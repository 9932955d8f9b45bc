#include "obm/bodies.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>

namespace obm {

struct ConvexBody::Impl {
  int dim = 2;
  Backend backend = Backend::VPolytope;
  Polytope poly;
  SupportFn h;
  OracleOptions opts;
  mutable std::mutex mu;
  mutable std::map<std::string, std::shared_ptr<const Polytope>> cache;
};

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<P2> to_p2(const std::vector<Vec>& v) {
  std::vector<P2> out;
  out.reserve(v.size());
  for (const auto& x : v) out.emplace_back(x[0], x[1]);
  return out;
}

Vec steiner_estimate(const DirectionGrid& grid, const std::vector<double>& h) {
  const int n = grid.dim();
  Vec c = Vec::Zero(n);
  for (std::size_t i = 0; i < grid.size(); ++i) c += h[i] * grid[i];
  return c * (static_cast<double>(n) / grid.size());
}

}  // namespace

ConvexBody::ConvexBody() {
  auto impl = std::make_shared<Impl>();
  impl->poly.vertices.push_back(Vec::Zero(2));
  impl_ = std::move(impl);
}

ConvexBody ConvexBody::from_polytope(Polytope p, Backend tag) {
  auto impl = std::make_shared<Impl>();
  impl->dim = p.dim;
  impl->backend = tag;
  impl->poly = std::move(p);
  impl->opts.label = tag == Backend::HPolytope ? "hpolytope" : "vpolytope";
  return ConvexBody(std::shared_ptr<const Impl>(std::move(impl)));
}

ConvexBody ConvexBody::from_vertices(int dim, const std::vector<Vec>& vertices) {
  if (dim != 2 && dim != 3) throw Error(ErrorCode::InvalidParameter, "dimension must be 2 or 3");
  if (vertices.empty()) throw Error(ErrorCode::InvalidParameter, "empty vertex list");
  for (const auto& v : vertices)
    if (v.size() != dim || !v.allFinite()) throw Error(ErrorCode::InvalidParameter, "bad vertex");
  return from_polytope(polytope_from_points(dim, vertices));
}

ConvexBody ConvexBody::from_halfspaces(int dim, const std::vector<Vec>& normals, const std::vector<double>& offsets) {
  if (dim != 2 && dim != 3) throw Error(ErrorCode::InvalidParameter, "dimension must be 2 or 3");
  return from_polytope(polytope_from_halfspaces(dim, normals, offsets), Backend::HPolytope);
}

ConvexBody ConvexBody::oracle(int dim, SupportFn h, OracleOptions opts) {
  if (dim != 2 && dim != 3) throw Error(ErrorCode::InvalidParameter, "dimension must be 2 or 3");
  auto impl = std::make_shared<Impl>();
  impl->dim = dim;
  impl->backend = Backend::Oracle;
  impl->h = std::move(h);
  impl->opts = std::move(opts);
  return ConvexBody(std::shared_ptr<const Impl>(std::move(impl)));
}

ConvexBody ConvexBody::ball(int dim, double r) {
  if (!(r >= 0)) throw Error(ErrorCode::InvalidParameter, "ball radius must be >= 0");
  if (r == 0) return origin(dim);
  OracleOptions o;
  o.contains = [r](const Vec& x) { return x.norm() <= r * (1 + 1e-15); };
  o.radial = [r](const Vec& x) { return r / x.norm(); };
  o.label = "ball";
  o.o_symmetric = true;
  return oracle(dim, [r](const Vec& x) { return r * x.norm(); }, std::move(o));
}

ConvexBody ConvexBody::rectangle(double a, double b, bool centered) {
  if (!(a > 0 && b > 0)) throw Error(ErrorCode::InvalidParameter, "rectangle sides must be positive");
  const double x0 = centered ? -a / 2 : 0, y0 = centered ? -b / 2 : 0;
  return from_vertices(2, {vec2(x0, y0), vec2(x0 + a, y0), vec2(x0 + a, y0 + b), vec2(x0, y0 + b)});
}

ConvexBody ConvexBody::origin(int dim) { return from_vertices(dim, {Vec::Zero(dim)}); }

ConvexBody ConvexBody::segment(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) throw Error(ErrorCode::InvalidParameter, "segment endpoints differ in dimension");
  return from_vertices(static_cast<int>(a.size()), {a, b});
}

int ConvexBody::dim() const { return impl_->dim; }
ConvexBody::Backend ConvexBody::backend() const { return impl_->backend; }
const std::string& ConvexBody::label() const { return impl_->opts.label; }
bool ConvexBody::declared_o_symmetric() const { return impl_->opts.o_symmetric; }

double ConvexBody::support(const Vec& x) const {
  if (impl_->backend != Backend::Oracle) return impl_->poly.support(x);
  if (x.squaredNorm() == 0) return 0.0;
  return impl_->h(x);
}

bool ConvexBody::contains(const Vec& x, double tol) const {
  if (impl_->backend != Backend::Oracle) {
    const Polytope& P = impl_->poly;
    if (P.full_dimensional()) return P.contains(x, tol);
    // Lower dimensional: x must be a convex combination; test via supports.
    const int n = dim();
    const double s = tol * P.scale();
    for (int i = 0; i < n; ++i) {
      Vec e = unit(n, i);
      if (x[i] > P.support(e) + s || -x[i] > P.support(-e) + s) return false;
    }
    const DirectionGrid grid = DirectionGrid::standard(n);
    for (const auto& u : grid.directions())
      if (u.dot(x) > P.support(u) + s) return false;
    return true;
  }
  if (impl_->opts.contains) return impl_->opts.contains(x);
  return shape().contains(x, tol);
}

double ConvexBody::radial_hint(const Vec& x, bool& known) const {
  known = static_cast<bool>(impl_->opts.radial);
  return known ? impl_->opts.radial(x) : 0.0;
}

const Polytope& ConvexBody::polytope() const {
  if (impl_->backend == Backend::Oracle) throw Error(ErrorCode::InvalidParameter, "body has no exact polytope backend");
  return impl_->poly;
}

std::vector<Vec> ConvexBody::hint_normals() const {
  if (impl_->backend == Backend::Oracle) return impl_->opts.hint_normals;
  std::vector<Vec> out;
  for (const auto& f : impl_->poly.facets) out.push_back(f.normal);
  return out;
}

const Polytope& ConvexBody::outer(const DirectionGrid& grid_in) const {
  if (impl_->backend != Backend::Oracle) return impl_->poly;
  if (grid_in.dim() != dim()) throw Error(ErrorCode::InvalidParameter, "grid dimension mismatch");
  const DirectionGrid grid = grid_in.merged(impl_->opts.hint_normals);
  std::lock_guard<std::mutex> lock(impl_->mu);
  auto it = impl_->cache.find(grid.key());
  if (it != impl_->cache.end()) return *it->second;

  const std::size_t N = grid.size();
  std::vector<double> h(N);
  parallel_for(N, [&](std::size_t i) { h[i] = impl_->h(grid[i]); });
  for (double v : h)
    if (!std::isfinite(v)) throw Error(ErrorCode::SolverFailure, "non-finite support value on grid");
  double scale = 0, hmin = kInf;
  for (double v : h) scale = std::max(scale, std::fabs(v)), hmin = std::min(hmin, v);

  std::shared_ptr<const Polytope> result;
  if (dim() == 2) {
    std::vector<P2> dirs;
    dirs.reserve(N);
    for (const auto& u : grid.directions()) dirs.emplace_back(u[0], u[1]);
    if (auto P = outer_polygon_from_supports(dirs, h)) result = std::make_shared<const Polytope>(std::move(*P));
  }
  if (!result) {
    // Not a supporting configuration (Wulff data) or 3D: intersect halfspaces.
    Vec c = Vec::Zero(dim());
    const Vec* interior = nullptr;
    if (!(hmin > 1e-12 * scale)) {
      c = steiner_estimate(grid, h);
      interior = &c;
    }
    result = std::make_shared<const Polytope>(polytope_from_halfspaces(dim(), grid.directions(), h, interior));
  }
  impl_->cache.emplace(grid.key(), result);
  return *result;
}

ConvexBody linear_image(const ConvexBody& K, const Mat& A) {
  const int n = K.dim();
  if (A.rows() != n || A.cols() != n) throw Error(ErrorCode::InvalidParameter, "matrix shape mismatch");
  if (K.is_polytope()) {
    std::vector<Vec> v;
    for (const auto& x : K.polytope().vertices) v.push_back(A * x);
    return ConvexBody::from_vertices(n, v);
  }
  OracleOptions o;
  o.label = "linear_image(" + K.label() + ")";
  o.o_symmetric = K.declared_o_symmetric();
  const Mat At = A.transpose();
  Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
  if (lu.isInvertible()) {
    const Mat Ainv = lu.inverse();
    o.contains = [K, Ainv](const Vec& y) { return K.contains(Ainv * y); };
    const Mat Ainvt = Ainv.transpose();
    for (const auto& nrm : K.hint_normals()) o.hint_normals.push_back((Ainvt * nrm).normalized());
  }
  return ConvexBody::oracle(n, [K, At](const Vec& x) { return K.support(At * x); }, std::move(o));
}

ConvexBody project(const ConvexBody& K, const Mat& S) {
  const Mat P = S * S.transpose();
  return linear_image(K, P);
}

ConvexBody polar(const ConvexBody& K) {
  const double tol = settings().tol.polar;
  if (!origin_interior(K, tol)) throw Error(ErrorCode::OriginNotInterior, "polar needs o in the interior");
  if (K.is_polytope()) {
    const Polytope& P = K.polytope();
    if (K.dim() == 2) {
      // Dual vertex of edge (a, b) solves p.a = p.b = 1; with e = b - a exact this is
      // perp(e) / cross(a, e), stable for the tiny edges traced boundaries produce.
      const auto& w = P.vertices;
      std::vector<P2> v;
      v.reserve(w.size());
      for (std::size_t i = 0; i < w.size(); ++i) {
        const P2 a(w[i][0], w[i][1]);
        const P2 e = P2(w[(i + 1) % w.size()][0], w[(i + 1) % w.size()][1]) - a;
        const double c = a.x() * e.y() - a.y() * e.x();
        v.emplace_back(e.y() / c, -e.x() / c);
      }
      return ConvexBody::from_polytope(polygon_from_ordered(convex_hull_2d(std::move(v))),
                                       ConvexBody::Backend::HPolytope);
    }
    std::vector<double> ones(P.vertices.size(), 1.0);
    Vec o = Vec::Zero(3);
    return ConvexBody::from_polytope(polytope_from_halfspaces(3, P.vertices, ones, &o),
                                     ConvexBody::Backend::HPolytope);
  }
  OracleOptions o;
  o.label = "polar(" + K.label() + ")";
  o.o_symmetric = K.declared_o_symmetric();
  o.contains = [K](const Vec& y) { return K.support(y) <= 1.0 + 1e-15; };
  o.radial = [K](const Vec& x) { return 1.0 / K.support(x); };
  return ConvexBody::oracle(K.dim(), [K](const Vec& x) { return gauge(K, x); }, std::move(o));
}

ConvexBody minkowski_sum(const ConvexBody& K, const ConvexBody& L) {
  if (K.dim() != L.dim()) throw Error(ErrorCode::InvalidParameter, "dimension mismatch");
  if (K.is_polytope() && L.is_polytope()) {
    const auto& a = K.polytope().vertices;
    const auto& b = L.polytope().vertices;
    if (K.dim() == 2) {
      auto s = minkowski_sum_polygons(convex_hull_2d(to_p2(a)), convex_hull_2d(to_p2(b)));
      std::vector<Vec> v;
      for (const auto& p : s) v.push_back(vec2(p.x(), p.y()));
      return ConvexBody::from_vertices(2, v);
    }
    std::vector<Vec> v;
    v.reserve(a.size() * b.size());
    for (const auto& x : a)
      for (const auto& y : b) v.push_back(x + y);
    return ConvexBody::from_vertices(3, v);
  }
  OracleOptions o;
  o.label = "minkowski_sum";
  o.o_symmetric = is_o_symmetric(K) && is_o_symmetric(L);
  o.hint_normals = K.hint_normals();
  for (const auto& nrm : L.hint_normals()) o.hint_normals.push_back(nrm);
  return ConvexBody::oracle(K.dim(), [K, L](const Vec& x) { return K.support(x) + L.support(x); }, std::move(o));
}

ConvexBody dilate(const ConvexBody& K, double t) {
  if (!(t >= 0)) throw Error(ErrorCode::InvalidParameter, "dilation factor must be >= 0");
  if (K.is_polytope()) {
    std::vector<Vec> v;
    for (const auto& x : K.polytope().vertices) v.push_back(t * x);
    return ConvexBody::from_vertices(K.dim(), v);
  }
  if (t == 0) return ConvexBody::origin(K.dim());
  OracleOptions o;
  o.label = "dilate(" + K.label() + ")";
  o.o_symmetric = K.declared_o_symmetric();
  o.hint_normals = K.hint_normals();
  o.contains = [K, t](const Vec& y) { return K.contains(y / t); };
  bool known = false;
  K.radial_hint(Vec::Ones(K.dim()), known);
  if (known) o.radial = [K, t](const Vec& x) { return radial(K, x) * t; };
  return ConvexBody::oracle(K.dim(), [K, t](const Vec& x) { return t * K.support(x); }, std::move(o));
}

ConvexBody conv_with_origin(const ConvexBody& K) {
  if (K.is_polytope()) {
    auto v = K.polytope().vertices;
    v.push_back(Vec::Zero(K.dim()));
    return ConvexBody::from_vertices(K.dim(), v);
  }
  if (contains_origin(K)) return K;
  OracleOptions o;
  o.label = "conv(" + K.label() + ",o)";
  o.hint_normals = K.hint_normals();
  return ConvexBody::oracle(K.dim(), [K](const Vec& x) { return std::max(K.support(x), 0.0); }, std::move(o));
}

double radial(const ConvexBody& K, const Vec& x) {
  if (x.squaredNorm() == 0) throw Error(ErrorCode::ZeroVector, "radial function at the zero vector");
  if (K.is_polytope() && K.polytope().full_dimensional()) {
    double best = kInf;
    for (const auto& f : K.polytope().facets) {
      const double d = f.normal.dot(x);
      if (d > 0) best = std::min(best, std::max(f.offset, 0.0) / d);
    }
    return best;
  }
  bool known = false;
  const double r = K.radial_hint(x, known);
  if (known) return r;
  if (!K.contains(Vec::Zero(K.dim()), 0.0)) return 0.0;
  // Membership bisection; the support bounds the search from above.
  const double hx = K.support(x);
  const double n2 = x.squaredNorm();
  double lo = 0, hi = hx > 0 ? hx / n2 * (1 + 1e-12) + 1e-300 : 0;
  if (hi == 0) return 0.0;
  if (K.contains(hi * x, 0.0)) return hi;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (K.contains(mid * x, 0.0) ? lo : hi) = mid;
  }
  return lo;
}

double gauge(const ConvexBody& K, const Vec& x) {
  if (x.squaredNorm() == 0) return 0.0;
  if (K.is_polytope() && K.polytope().full_dimensional()) {
    double best = 0;
    for (const auto& f : K.polytope().facets) {
      if (!(f.offset > 0)) throw Error(ErrorCode::OriginNotInterior, "gauge needs o in the interior");
      best = std::max(best, f.normal.dot(x) / f.offset);
    }
    return best;
  }
  const double r = radial(K, x);
  if (!(r > 0)) throw Error(ErrorCode::OriginNotInterior, "gauge needs o in the interior");
  return 1.0 / r;
}

double volume(const ConvexBody& K) { return K.shape().volume; }

double volume(const ConvexBody& K, const DirectionGrid& grid) { return K.outer(grid).volume; }

double DiscreteSurfaceMeasure::total() const { return pairwise_sum(weights); }

DiscreteSurfaceMeasure surface_area_measure(const ConvexBody& K, const DirectionGrid& grid) {
  const Polytope& P = K.outer(grid);
  if (!P.full_dimensional()) throw Error(ErrorCode::DegenerateBody, "surface area measure needs interior");
  DiscreteSurfaceMeasure S;
  S.dim = K.dim();
  S.volume = P.volume;
  S.grid_count = K.is_polytope() ? 0 : grid.size();
  for (const auto& f : P.facets) {
    S.normals.push_back(f.normal);
    S.weights.push_back(f.area);
    S.support.push_back(f.offset);
  }
  return S;
}

DiscreteSurfaceMeasure surface_area_measure(const ConvexBody& K) {
  return surface_area_measure(K, DirectionGrid::standard(K.dim()));
}

ConeMeasure cone_measure(const DiscreteSurfaceMeasure& S) {
  if (!(S.volume > 0)) throw Error(ErrorCode::DegenerateBody, "cone measure needs positive volume");
  ConeMeasure C;
  double scale = 0;
  for (double h : S.support) scale = std::max(scale, std::fabs(h));
  for (std::size_t i = 0; i < S.normals.size(); ++i) {
    if (S.support[i] < -1e-12 * scale) throw Error(ErrorCode::OriginNotInterior, "cone measure needs o in the body");
    C.normals.push_back(S.normals[i]);
    C.support.push_back(S.support[i]);
    C.weights.push_back(std::max(S.support[i], 0.0) * S.weights[i] / (S.dim * S.volume));
  }
  return C;
}

ConeMeasure cone_measure(const ConvexBody& K) { return cone_measure(surface_area_measure(K)); }

DirectionGrid shared_grid(const std::vector<ConvexBody>& bodies) {
  if (bodies.empty()) throw Error(ErrorCode::InvalidParameter, "no bodies");
  std::vector<Vec> hints;
  for (const auto& B : bodies)
    for (auto& h : B.hint_normals()) hints.push_back(h);
  return DirectionGrid::standard(bodies[0].dim()).merged(hints);
}

DirectionGrid shared_grid(const ConvexBody& K, const ConvexBody& L) { return shared_grid({K, L}); }

DilatateResult is_dilatate_pair(const ConvexBody& K, const ConvexBody& L, double tol, const DirectionGrid& grid) {
  const std::size_t N = grid.size();
  std::vector<double> hk(N), hl(N);
  parallel_for(N, [&](std::size_t i) {
    hk[i] = K.support(grid[i]);
    hl[i] = L.support(grid[i]);
  });
  double mk = 0, ml = 0;
  for (std::size_t i = 0; i < N; ++i) mk = std::max(mk, std::fabs(hk[i])), ml = std::max(ml, std::fabs(hl[i]));
  DilatateResult r;
  if (ml <= tol * std::max(mk, 1e-300)) {
    r.yes = true;
    r.ratio = 0;
    r.defect = ml / std::max(mk, 1e-300);
    return r;
  }
  std::vector<double> ratios;
  for (std::size_t i = 0; i < N; ++i)
    if (hk[i] > tol * mk) ratios.push_back(hl[i] / hk[i]);
  if (ratios.empty()) {
    r.defect = kInf;
    return r;
  }
  auto mid = ratios.begin() + ratios.size() / 2;
  std::nth_element(ratios.begin(), mid, ratios.end());
  r.ratio = *mid;
  double worst = 0;
  for (std::size_t i = 0; i < N; ++i) worst = std::max(worst, std::fabs(hl[i] - r.ratio * hk[i]));
  r.defect = worst / std::max(mk, 1e-300);
  r.yes = r.defect <= tol;
  return r;
}

DilatateResult is_dilatate_pair(const ConvexBody& K, const ConvexBody& L, double tol) {
  return is_dilatate_pair(K, L, tol, shared_grid(K, L));
}

DilatateResult homothety(const ConvexBody& K, const ConvexBody& L, double tol) {
  const DirectionGrid grid = shared_grid(K, L);
  const std::size_t N = grid.size();
  const int n = K.dim();
  Eigen::MatrixXd A(N, n + 1);
  Eigen::VectorXd b(N);
  double mk = 0, ml = 0;
  for (std::size_t i = 0; i < N; ++i) {
    const double hk = K.support(grid[i]);
    A(i, 0) = hk;
    for (int j = 0; j < n; ++j) A(i, j + 1) = grid[i][j];
    b[i] = L.support(grid[i]);
    mk = std::max(mk, std::fabs(hk));
    ml = std::max(ml, std::fabs(b[i]));
  }
  Eigen::VectorXd sol = A.colPivHouseholderQr().solve(b);
  DilatateResult r;
  r.ratio = sol[0];
  r.translation = sol.tail(n);
  r.defect = (A * sol - b).cwiseAbs().maxCoeff() / std::max({mk, ml, 1e-300});
  r.yes = r.defect <= tol && r.ratio >= -tol;
  return r;
}

double hausdorff_distance(const ConvexBody& K, const ConvexBody& L, const DirectionGrid& grid) {
  std::vector<double> d(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) { d[i] = std::fabs(K.support(grid[i]) - L.support(grid[i])); });
  return d.empty() ? 0.0 : *std::max_element(d.begin(), d.end());
}

double hausdorff_distance(const ConvexBody& K, const ConvexBody& L) {
  return hausdorff_distance(K, L, shared_grid(K, L));
}

namespace {

std::pair<double, double> grid_extremes(const ConvexBody& K) {
  const DirectionGrid grid = DirectionGrid::standard(K.dim()).merged(K.hint_normals());
  double lo = kInf, hi = 0;
  for (const auto& u : grid.directions()) {
    const double h = K.support(u);
    lo = std::min(lo, h);
    hi = std::max(hi, std::fabs(h));
  }
  return {lo, hi};
}

}  // namespace

bool contains_origin(const ConvexBody& K, double tol) {
  if (K.is_polytope() && K.polytope().full_dimensional()) {
    const Polytope& P = K.polytope();
    const double s = tol * P.scale();
    for (const auto& f : P.facets)
      if (f.offset < -s) return false;
    return true;
  }
  auto [lo, hi] = grid_extremes(K);
  return lo >= -tol * std::max(hi, 1e-300);
}

bool origin_interior(const ConvexBody& K, double tol) {
  if (K.is_polytope()) {
    const Polytope& P = K.polytope();
    if (!P.full_dimensional()) return false;
    const double s = tol * P.scale();
    for (const auto& f : P.facets)
      if (!(f.offset > s)) return false;
    return true;
  }
  auto [lo, hi] = grid_extremes(K);
  return lo > tol * std::max(hi, 1e-300);
}

bool is_o_symmetric(const ConvexBody& K, double tol) {
  if (K.declared_o_symmetric()) return true;
  const DirectionGrid grid = DirectionGrid::standard(K.dim()).merged(K.hint_normals());
  double hi = 0, worst = 0;
  for (const auto& u : grid.directions()) {
    const double a = K.support(u), b = K.support(-u);
    hi = std::max({hi, std::fabs(a), std::fabs(b)});
    worst = std::max(worst, std::fabs(a - b));
  }
  return worst <= tol * std::max(hi, 1e-300);
}

std::vector<Vec> extreme_points(const ConvexBody& K, int count) {
  if (K.is_polytope()) return K.polytope().vertices;
  const DirectionGrid g = K.dim() == 2 ? DirectionGrid::circle(count) : DirectionGrid::icosphere(count > 700 ? 4 : 3);
  return K.outer(g).vertices;
}

void DiscreteBodyMeasure::add(std::vector<ConvexBody> tuple, double weight) {
  if (tuples.empty()) arity = static_cast<int>(tuple.size());
  tuples.push_back(std::move(tuple));
  weights.push_back(weight);
}

int DiscreteBodyMeasure::dim() const {
  if (tuples.empty() || tuples[0].empty()) throw Error(ErrorCode::EmptyMeasure, "measure has no atoms");
  return tuples[0][0].dim();
}

void DiscreteBodyMeasure::validate() const {
  if (tuples.empty()) throw Error(ErrorCode::EmptyMeasure, "measure has no atoms");
  if (weights.size() != tuples.size()) throw Error(ErrorCode::InvalidParameter, "weight count mismatch");
  const int n = dim();
  double total = 0;
  for (std::size_t i = 0; i < tuples.size(); ++i) {
    if (static_cast<int>(tuples[i].size()) != arity || arity < 1)
      throw Error(ErrorCode::InvalidParameter, "atoms must share the same arity");
    for (const auto& B : tuples[i])
      if (B.dim() != n) throw Error(ErrorCode::InvalidParameter, "atoms must share the ambient dimension");
    if (!(weights[i] >= 0) || !std::isfinite(weights[i])) throw Error(ErrorCode::InvalidParameter, "bad atom weight");
    total += weights[i];
  }
  if (!(total > 0)) throw Error(ErrorCode::EmptyMeasure, "measure has zero total mass");
}

}  // namespace obm
