#include "obm/geometry.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <cstring>
#include <functional>
#include <numeric>
#include <unordered_map>

namespace obm {

using boost::multiprecision::cpp_rational;

int orient2d(const P2& a, const P2& b, const P2& c) {
  const double l = (a.x() - c.x()) * (b.y() - c.y());
  const double r = (a.y() - c.y()) * (b.x() - c.x());
  const double det = l - r;
  const double bound = 3.3306690738754716e-16 * (std::fabs(l) + std::fabs(r));
  if (det > bound) return 1;
  if (-det > bound) return -1;
  const cpp_rational ax(a.x()), ay(a.y()), bx(b.x()), by(b.y()), cx(c.x()), cy(c.y());
  const cpp_rational d = (ax - cx) * (by - cy) - (ay - cy) * (bx - cx);
  return d.sign();
}

int orient3d(const P3& a, const P3& b, const P3& c, const P3& d) {
  const P3 ba = b - a, ca = c - a, da = d - a;
  const double m1 = ca.y() * da.z() - ca.z() * da.y();
  const double m2 = ca.z() * da.x() - ca.x() * da.z();
  const double m3 = ca.x() * da.y() - ca.y() * da.x();
  const double det = ba.x() * m1 + ba.y() * m2 + ba.z() * m3;
  const double perm = std::fabs(ba.x()) * (std::fabs(ca.y() * da.z()) + std::fabs(ca.z() * da.y())) +
                      std::fabs(ba.y()) * (std::fabs(ca.z() * da.x()) + std::fabs(ca.x() * da.z())) +
                      std::fabs(ba.z()) * (std::fabs(ca.x() * da.y()) + std::fabs(ca.y() * da.x()));
  const double bound = 1e-15 * perm;
  if (det > bound) return 1;
  if (-det > bound) return -1;
  auto r = [](double x) { return cpp_rational(x); };
  const cpp_rational bax = r(b.x()) - r(a.x()), bay = r(b.y()) - r(a.y()), baz = r(b.z()) - r(a.z());
  const cpp_rational cax = r(c.x()) - r(a.x()), cay = r(c.y()) - r(a.y()), caz = r(c.z()) - r(a.z());
  const cpp_rational dax = r(d.x()) - r(a.x()), day = r(d.y()) - r(a.y()), daz = r(d.z()) - r(a.z());
  const cpp_rational e = bax * (cay * daz - caz * day) + bay * (caz * dax - cax * daz) + baz * (cax * day - cay * dax);
  return e.sign();
}

std::vector<P2> convex_hull_2d(std::vector<P2> pts) {
  std::sort(pts.begin(), pts.end(), [](const P2& p, const P2& q) {
    return p.x() < q.x() || (p.x() == q.x() && p.y() < q.y());
  });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  const std::size_t n = pts.size();
  if (n <= 2) return pts;
  std::vector<P2> h(2 * n);
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) {
    while (k >= 2 && orient2d(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
    h[k++] = pts[i];
  }
  for (std::size_t i = n - 1, t = k + 1; i-- > 0;) {
    while (k >= t && orient2d(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
    h[k++] = pts[i];
  }
  h.resize(k - 1);
  return h;
}

namespace {

struct QFace {
  int v[3];
  int nb[3];
  bool alive = true;
  std::vector<int> outside;
};

bool visible(const std::vector<P3>& p, const QFace& f, int q) {
  return orient3d(p[f.v[0]], p[f.v[1]], p[f.v[2]], p[q]) > 0;
}

}  // namespace

Hull3 convex_hull_3d(const std::vector<P3>& pts) {
  const int n = static_cast<int>(pts.size());
  if (n < 4) throw Error(ErrorCode::DegenerateBody, "3D hull needs at least 4 points");
  int i0 = 0;
  for (int i = 1; i < n; ++i)
    if (pts[i].x() < pts[i0].x()) i0 = i;
  int i1 = -1;
  double best = 0;
  for (int i = 0; i < n; ++i) {
    double d = (pts[i] - pts[i0]).squaredNorm();
    if (d > best) best = d, i1 = i;
  }
  if (i1 < 0) throw Error(ErrorCode::DegenerateBody, "all points coincide");
  int i2 = -1;
  best = 0;
  for (int i = 0; i < n; ++i) {
    double d = (pts[i1] - pts[i0]).cross(pts[i] - pts[i0]).squaredNorm();
    if (d > best) best = d, i2 = i;
  }
  if (i2 < 0) throw Error(ErrorCode::DegenerateBody, "points are collinear");
  int i3 = -1;
  best = 0;
  const P3 nrm = (pts[i1] - pts[i0]).cross(pts[i2] - pts[i0]);
  for (int i = 0; i < n; ++i) {
    double d = std::fabs(nrm.dot(pts[i] - pts[i0]));
    if (d > best) best = d, i3 = i;
  }
  if (i3 < 0 || orient3d(pts[i0], pts[i1], pts[i2], pts[i3]) == 0) {
    i3 = -1;
    for (int i = 0; i < n && i3 < 0; ++i)
      if (orient3d(pts[i0], pts[i1], pts[i2], pts[i]) != 0) i3 = i;
  }
  if (i3 < 0) throw Error(ErrorCode::DegenerateBody, "points are coplanar");

  std::vector<QFace> faces;
  faces.reserve(8 * n);
  const int tet[4] = {i0, i1, i2, i3};
  const int combos[4][4] = {{0, 1, 2, 3}, {0, 3, 1, 2}, {1, 3, 2, 0}, {0, 2, 3, 1}};
  for (auto& c : combos) {
    QFace f;
    f.v[0] = tet[c[0]];
    f.v[1] = tet[c[1]];
    f.v[2] = tet[c[2]];
    if (orient3d(pts[f.v[0]], pts[f.v[1]], pts[f.v[2]], pts[tet[c[3]]]) > 0) std::swap(f.v[1], f.v[2]);
    faces.push_back(f);
  }
  // Adjacency of the initial tetrahedron.
  for (int a = 0; a < 4; ++a)
    for (int k = 0; k < 3; ++k) {
      int u = faces[a].v[k], w = faces[a].v[(k + 1) % 3];
      for (int b = 0; b < 4; ++b) {
        if (b == a) continue;
        for (int j = 0; j < 3; ++j)
          if (faces[b].v[j] == w && faces[b].v[(j + 1) % 3] == u) faces[a].nb[k] = b;
      }
    }
  for (int i = 0; i < n; ++i) {
    if (i == i0 || i == i1 || i == i2 || i == i3) continue;
    for (int f = 0; f < 4; ++f)
      if (visible(pts, faces[f], i)) {
        faces[f].outside.push_back(i);
        break;
      }
  }
  std::vector<int> stack = {0, 1, 2, 3};
  std::vector<int> mark;  // 0 unknown, 1 visible, 2 not visible; reset per step
  std::vector<int> touched;
  std::unordered_map<int, int> start_of, end_of;
  while (!stack.empty()) {
    int fi = stack.back();
    stack.pop_back();
    if (!faces[fi].alive || faces[fi].outside.empty()) continue;
    const QFace& f0 = faces[fi];
    const P3 a = pts[f0.v[0]];
    const P3 fn = (pts[f0.v[1]] - a).cross(pts[f0.v[2]] - a);
    int p = f0.outside[0];
    double far = -1;
    for (int q : f0.outside) {
      double d = fn.dot(pts[q] - a);
      if (d > far) far = d, p = q;
    }
    mark.resize(faces.size(), 0);
    touched.clear();
    std::vector<int> vis = {fi};
    mark[fi] = 1;
    touched.push_back(fi);
    struct HEdge { int u, w, outer; };
    std::vector<HEdge> horizon;
    for (std::size_t s = 0; s < vis.size(); ++s) {
      const int g = vis[s];
      for (int k = 0; k < 3; ++k) {
        const int h = faces[g].nb[k];
        if (mark[h] == 0) {
          mark[h] = visible(pts, faces[h], p) ? 1 : 2;
          touched.push_back(h);
          if (mark[h] == 1) vis.push_back(h);
        }
        if (mark[h] == 2) horizon.push_back({faces[g].v[k], faces[g].v[(k + 1) % 3], h});
      }
    }
    std::vector<int> orphans;
    for (int g : vis) {
      faces[g].alive = false;
      for (int q : faces[g].outside)
        if (q != p) orphans.push_back(q);
      faces[g].outside.clear();
      faces[g].outside.shrink_to_fit();
    }
    start_of.clear();
    end_of.clear();
    std::vector<int> fresh;
    for (const auto& e : horizon) {
      QFace nf;
      nf.v[0] = e.u;
      nf.v[1] = e.w;
      nf.v[2] = p;
      nf.nb[0] = e.outer;
      const int id = static_cast<int>(faces.size());
      QFace& outer = faces[e.outer];
      for (int j = 0; j < 3; ++j)
        if (outer.v[j] == e.w && outer.v[(j + 1) % 3] == e.u) outer.nb[j] = id;
      faces.push_back(nf);
      start_of[e.u] = id;
      end_of[e.w] = id;
      fresh.push_back(id);
    }
    for (int id : fresh) {
      faces[id].nb[1] = start_of.at(faces[id].v[1]);
      faces[id].nb[2] = end_of.at(faces[id].v[0]);
    }
    for (int q : orphans)
      for (int id : fresh)
        if (visible(pts, faces[id], q)) {
          faces[id].outside.push_back(q);
          break;
        }
    for (int h : touched) mark[h] = 0;
    for (int id : fresh)
      if (!faces[id].outside.empty()) stack.push_back(id);
  }
  Hull3 out;
  out.points = pts;
  std::vector<int> remap(faces.size(), -1);
  for (std::size_t i = 0; i < faces.size(); ++i)
    if (faces[i].alive) {
      remap[i] = static_cast<int>(out.tris.size());
      out.tris.push_back({faces[i].v[0], faces[i].v[1], faces[i].v[2]});
    }
  out.nbrs.resize(out.tris.size());
  for (std::size_t i = 0; i < faces.size(); ++i)
    if (faces[i].alive)
      for (int k = 0; k < 3; ++k) out.nbrs[remap[i]][k] = remap[faces[i].nb[k]];
  return out;
}

namespace {

P2 to2(const Vec& v) { return P2(v[0], v[1]); }
P3 to3(const Vec& v) { return P3(v[0], v[1], v[2]); }
Vec from2(const P2& p) { return vec2(p.x(), p.y()); }
Vec from3(const P3& p) { return vec3(p.x(), p.y(), p.z()); }

void build_angle_table(Polytope& P) {
  const std::size_t n = P.facets.size();
  if (P.dim != 2 || n < 32 || n != P.vertices.size()) return;
  std::vector<double> ang(n);
  for (std::size_t k = 0; k < n; ++k) ang[k] = angle_of(P.facets[k].normal);
  std::size_t k0 = std::min_element(ang.begin(), ang.end()) - ang.begin();
  std::vector<double> table(n);
  std::vector<int> start(n);
  for (std::size_t j = 0; j < n; ++j) {
    table[j] = ang[(k0 + j) % n];
    start[j] = static_cast<int>((k0 + j) % n);
    if (j > 0 && table[j] < table[j - 1]) return;  // not monotone: keep linear scan
  }
  P.edge_angle = std::move(table);
  P.edge_start = std::move(start);
}

// Removes consecutive near-duplicates from a closed counter-clockwise chain.
std::vector<P2> clean_chain(const std::vector<P2>& in) {
  double scale = 0;
  for (const auto& p : in) scale = std::max(scale, p.norm());
  const double eps = 1e-13 * std::max(scale, 1e-300);
  std::vector<P2> out;
  out.reserve(in.size());
  for (const auto& p : in)
    if (out.empty() || (p - out.back()).norm() > eps) out.push_back(p);
  while (out.size() > 1 && (out.front() - out.back()).norm() <= eps) out.pop_back();
  return out;
}

std::vector<P3> dedupe3(const std::vector<P3>& pts, double eps) {
  std::map<std::array<long long, 3>, int> seen;
  std::vector<P3> out;
  for (const auto& p : pts) {
    std::array<long long, 3> key = {std::llround(p.x() / eps), std::llround(p.y() / eps), std::llround(p.z() / eps)};
    if (seen.emplace(key, 1).second) out.push_back(p);
  }
  return out;
}

Polytope polytope_from_points_3d(const std::vector<Vec>& pts) {
  Polytope P;
  P.dim = 3;
  std::vector<P3> q;
  q.reserve(pts.size());
  for (const auto& v : pts) q.push_back(to3(v));
  Hull3 H;
  try {
    H = convex_hull_3d(q);
  } catch (const Error&) {
    // Lower dimensional: keep the points; support stays exact, volume is zero.
    double scale = 0;
    for (const auto& p : q) scale = std::max(scale, p.norm());
    for (const auto& p : dedupe3(q, 1e-14 * std::max(scale, 1e-300))) P.vertices.push_back(from3(p));
    return P;
  }
  std::vector<int> used(q.size(), 0);
  for (const auto& t : H.tris)
    for (int k = 0; k < 3; ++k) used[t[k]] = 1;
  P3 c = P3::Zero();
  int cnt = 0;
  double scale = 0;
  for (std::size_t i = 0; i < q.size(); ++i)
    if (used[i]) {
      c += q[i];
      ++cnt;
      scale = std::max(scale, q[i].norm());
      P.vertices.push_back(from3(q[i]));
    }
  c /= cnt;
  // Union coplanar neighbouring triangles into facets.
  const std::size_t T = H.tris.size();
  std::vector<P3> avec(T), un(T);
  std::vector<double> off(T);
  for (std::size_t t = 0; t < T; ++t) {
    const auto& tr = H.tris[t];
    avec[t] = 0.5 * (q[tr[1]] - q[tr[0]]).cross(q[tr[2]] - q[tr[0]]);
    double len = avec[t].norm();
    un[t] = len > 0 ? P3(avec[t] / len) : P3::Zero();
    off[t] = un[t].dot(q[tr[0]]);
  }
  std::vector<int> parent(T);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
  for (std::size_t t = 0; t < T; ++t)
    for (int k = 0; k < 3; ++k) {
      int s = H.nbrs[t][k];
      if (un[t].dot(un[s]) > 1 - 1e-12 && std::fabs(off[t] - off[s]) <= 1e-10 * scale) parent[find(t)] = find(s);
    }
  std::map<int, P3> area_sum;
  std::map<int, P3> centroid_sum;
  for (std::size_t t = 0; t < T; ++t) {
    area_sum.emplace(find(t), P3::Zero());
    centroid_sum.emplace(find(t), P3::Zero());
  }
  for (std::size_t t = 0; t < T; ++t) {
    const auto& tr = H.tris[t];
    area_sum[find(t)] += avec[t];
    centroid_sum[find(t)] += avec[t].norm() * (q[tr[0]] + q[tr[1]] + q[tr[2]]) / 3.0;
    P.volume += (q[tr[0]] - c).dot((q[tr[1]] - c).cross(q[tr[2]] - c)) / 6.0;
  }
  for (auto& [root, a] : area_sum) {
    double area = a.norm();
    if (area <= 0) continue;
    P3 nrm = a / area;
    P3 cen = centroid_sum[root] / area;
    P.facets.push_back({from3(nrm), nrm.dot(cen), area});
  }
  return P;
}

}  // namespace

double angle_of(const Vec& u) {
  double a = std::atan2(u[1], u[0]);
  if (a < 0) a += 2 * M_PI;
  if (a >= 2 * M_PI) a -= 2 * M_PI;
  return a;
}

double Polytope::scale() const {
  double s = 0;
  for (const auto& v : vertices) s = std::max(s, v.norm());
  return std::max(s, 1e-300);
}

double Polytope::support(const Vec& x) const {
  if (vertices.empty()) return 0.0;
  if (!edge_angle.empty() && x.size() == 2 && (x[0] != 0 || x[1] != 0)) {
    const double th = angle_of(x);
    const std::size_t n = edge_angle.size();
    std::size_t j = std::lower_bound(edge_angle.begin(), edge_angle.end(), th) - edge_angle.begin();
    const int k = edge_start[j % n];
    const std::size_t m = vertices.size();
    double best = -std::numeric_limits<double>::infinity();
    for (int d = -2; d <= 2; ++d) best = std::max(best, vertices[(k + d + 2 * m) % m].dot(x));
    return best;
  }
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& v : vertices) best = std::max(best, v.dot(x));
  return best;
}

Vec Polytope::support_point(const Vec& x) const {
  std::size_t arg = 0;
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    double d = vertices[i].dot(x);
    if (d > best) best = d, arg = i;
  }
  return vertices[arg];
}

bool Polytope::contains(const Vec& x, double tol) const {
  if (facets.empty()) return false;
  const double s = tol * scale();
  for (const auto& f : facets)
    if (f.normal.dot(x) > f.offset + s) return false;
  return true;
}

Polytope polygon_from_ordered(const std::vector<P2>& ccw_in) {
  Polytope P;
  P.dim = 2;
  const std::vector<P2> ccw = clean_chain(ccw_in);
  for (const auto& p : ccw) P.vertices.push_back(from2(p));
  const std::size_t n = ccw.size();
  if (n < 3) return P;
  double twice = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const P2& a = ccw[i];
    const P2& b = ccw[(i + 1) % n];
    twice += a.x() * b.y() - a.y() * b.x();
  }
  if (!(twice > 0)) return P;
  P.volume = 0.5 * twice;
  for (std::size_t i = 0; i < n; ++i) {
    const P2 e = ccw[(i + 1) % n] - ccw[i];
    const double len = e.norm();
    const P2 nrm(e.y() / len, -e.x() / len);
    P.facets.push_back({from2(nrm), nrm.dot(ccw[i]), len});
  }
  build_angle_table(P);
  return P;
}

Polytope polytope_from_points(int dim, const std::vector<Vec>& pts) {
  if (dim == 3) return polytope_from_points_3d(pts);
  std::vector<P2> q;
  q.reserve(pts.size());
  for (const auto& v : pts) q.push_back(to2(v));
  auto hull = convex_hull_2d(std::move(q));
  Polytope P = polygon_from_ordered(hull);
  if (P.vertices.size() < 3) {
    P.vertices.clear();
    for (const auto& p : hull) P.vertices.push_back(from2(p));
  }
  return P;
}

namespace {

// Brute-force vertex enumeration, used only to find an interior point.
std::optional<Vec> interior_by_enumeration(int dim, const std::vector<Vec>& nrm, const std::vector<double>& off) {
  const std::size_t m = nrm.size();
  double scale = 0;
  for (double b : off) scale = std::max(scale, std::fabs(b));
  scale = std::max(scale, 1.0);
  auto feasible = [&](const Vec& x) {
    for (std::size_t i = 0; i < m; ++i)
      if (nrm[i].dot(x) > off[i] + 1e-9 * scale) return false;
    return true;
  };
  std::vector<Vec> found;
  if (dim == 2) {
    if (m > 600) throw Error(ErrorCode::DegenerateBody, "H-polygon without interior origin is too large to enumerate");
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = i + 1; j < m; ++j) {
        Eigen::Matrix2d A;
        A << nrm[i][0], nrm[i][1], nrm[j][0], nrm[j][1];
        if (std::fabs(A.determinant()) < 1e-12) continue;
        Eigen::Vector2d x = A.partialPivLu().solve(Eigen::Vector2d(off[i], off[j]));
        Vec v = vec2(x.x(), x.y());
        if (feasible(v)) found.push_back(v);
      }
  } else {
    if (m > 90) throw Error(ErrorCode::DegenerateBody, "H-polytope without interior origin is too large to enumerate");
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = i + 1; j < m; ++j)
        for (std::size_t k = j + 1; k < m; ++k) {
          Eigen::Matrix3d A;
          A.row(0) = to3(nrm[i]).transpose();
          A.row(1) = to3(nrm[j]).transpose();
          A.row(2) = to3(nrm[k]).transpose();
          if (std::fabs(A.determinant()) < 1e-12) continue;
          Eigen::Vector3d x = A.partialPivLu().solve(Eigen::Vector3d(off[i], off[j], off[k]));
          Vec v = vec3(x.x(), x.y(), x.z());
          if (feasible(v)) found.push_back(v);
        }
  }
  if (found.size() < static_cast<std::size_t>(dim + 1)) return std::nullopt;
  Vec c = Vec::Zero(dim);
  for (const auto& v : found) c += v;
  c /= static_cast<double>(found.size());
  return c;
}

}  // namespace

Polytope polytope_from_halfspaces(int dim, const std::vector<Vec>& normals_in, const std::vector<double>& offsets_in,
                                  const Vec* interior) {
  const std::size_t m = normals_in.size();
  if (m != offsets_in.size() || m < static_cast<std::size_t>(dim + 1))
    throw Error(ErrorCode::DegenerateBody, "need at least n+1 halfspaces");
  std::vector<Vec> nrm(m);
  std::vector<double> off(m);
  for (std::size_t i = 0; i < m; ++i) {
    double len = normals_in[i].norm();
    if (!(len > 0)) throw Error(ErrorCode::InvalidParameter, "zero halfspace normal");
    nrm[i] = normals_in[i] / len;
    off[i] = offsets_in[i] / len;
  }
  double scale = 0;
  for (double b : off) scale = std::max(scale, std::fabs(b));
  scale = std::max(scale, 1e-300);
  Vec c = Vec::Zero(dim);
  if (interior) {
    c = *interior;
  } else if (*std::min_element(off.begin(), off.end()) <= 1e-12 * scale) {
    auto guess = interior_by_enumeration(dim, nrm, off);
    if (!guess) throw Error(ErrorCode::DegenerateBody, "halfspace intersection is empty or flat");
    c = *guess;
  }
  std::vector<double> slack(m);
  double min_slack = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < m; ++i) {
    slack[i] = off[i] - nrm[i].dot(c);
    min_slack = std::min(min_slack, slack[i]);
  }
  if (!(min_slack > 1e-13 * scale)) throw Error(ErrorCode::DegenerateBody, "interior point is not strictly interior");

  if (dim == 2) {
    std::vector<P2> dual(m);
    for (std::size_t i = 0; i < m; ++i) dual[i] = to2(nrm[i]) / slack[i];
    auto hull = convex_hull_2d(dual);
    const std::size_t k = hull.size();
    if (k < 3) throw Error(ErrorCode::DegenerateBody, "unbounded halfspace intersection");
    std::vector<P2> prim;
    prim.reserve(k);
    for (std::size_t i = 0; i < k; ++i) {
      const P2& a = hull[i];
      const P2& b = hull[(i + 1) % k];
      // Edge line through a, b in the dual: x.a = 1 and x.b = 1.
      if (orient2d(a, b, P2(0, 0)) <= 0) throw Error(ErrorCode::DegenerateBody, "unbounded halfspace intersection");
      Eigen::Matrix2d A;
      A << a.x(), a.y(), b.x(), b.y();
      Eigen::Vector2d x = A.partialPivLu().solve(Eigen::Vector2d(1, 1));
      prim.push_back(x + to2(c));
    }
    return polygon_from_ordered(prim);
  }

  std::vector<P3> dual(m);
  for (std::size_t i = 0; i < m; ++i) dual[i] = to3(nrm[i]) / slack[i];
  Hull3 H = convex_hull_3d(dual);
  const std::size_t T = H.tris.size();
  std::vector<P3> xt(T);
  const P3 c3 = to3(c);
  for (std::size_t t = 0; t < T; ++t) {
    const auto& tr = H.tris[t];
    const P3 a = dual[tr[0]], b = dual[tr[1]], d = dual[tr[2]];
    const P3 nn = (b - a).cross(d - a);
    const double beta = nn.dot(a);
    if (!(beta > 0)) throw Error(ErrorCode::DegenerateBody, "unbounded halfspace intersection");
    xt[t] = nn / beta + c3;
  }
  Polytope P;
  P.dim = 3;
  std::vector<std::vector<std::pair<int, int>>> inc(m);
  for (std::size_t t = 0; t < T; ++t)
    for (int k = 0; k < 3; ++k) inc[H.tris[t][k]].push_back({static_cast<int>(t), k});
  for (std::size_t i = 0; i < m; ++i) {
    if (inc[i].empty()) continue;
    // Walk the triangles around dual vertex i.
    std::vector<P3> poly;
    int t = inc[i][0].first, k = inc[i][0].second;
    const int t0 = t;
    for (std::size_t guard = 0; guard <= inc[i].size() + 1; ++guard) {
      poly.push_back(xt[t]);
      int nt = H.nbrs[t][(k + 2) % 3];
      int nk = -1;
      for (int j = 0; j < 3; ++j)
        if (H.tris[nt][j] == static_cast<int>(i)) nk = j;
      t = nt;
      k = nk;
      if (t == t0) break;
    }
    const P3 u = to3(nrm[i]);
    double area = 0;
    for (std::size_t j = 1; j + 1 < poly.size(); ++j) area += u.dot((poly[j] - poly[0]).cross(poly[j + 1] - poly[0]));
    area = 0.5 * std::fabs(area);
    if (area <= 0) continue;
    P.facets.push_back({nrm[i], off[i], area});
    P.volume += area * slack[i] / 3.0;
  }
  double vscale = 0;
  for (const auto& x : xt) vscale = std::max(vscale, x.norm());
  for (const auto& x : dedupe3(xt, 1e-12 * std::max(vscale, 1e-300))) P.vertices.push_back(from3(x));
  return P;
}

std::optional<Polytope> outer_polygon_from_supports(const std::vector<P2>& dirs, const std::vector<double>& h) {
  const std::size_t n = dirs.size();
  if (n < 3) return std::nullopt;
  std::vector<P2> pts(n);
  double scale = 0;
  for (double v : h) scale = std::max(scale, std::fabs(v));
  scale = std::max(scale, 1e-300);
  for (std::size_t i = 0; i < n; ++i) {
    const P2& u = dirs[i];
    const P2& w = dirs[(i + 1) % n];
    const double det = u.x() * w.y() - u.y() * w.x();
    if (!(det > 0)) return std::nullopt;
    pts[i] = P2((h[i] * w.y() - h[(i + 1) % n] * u.y()) / det, (u.x() * h[(i + 1) % n] - w.x() * h[i]) / det);
  }
  Polytope P;
  P.dim = 2;
  double twice = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const P2& a = pts[i];
    const P2& b = pts[(i + 1) % n];
    twice += a.x() * b.y() - a.y() * b.x();
  }
  for (std::size_t i = 0; i < n; ++i) {
    const P2& u = dirs[i];
    const P2 t(-u.y(), u.x());
    double len = t.dot(pts[i] - pts[(i + n - 1) % n]);
    if (len < -1e-9 * scale) return std::nullopt;
    if (len > 0) P.facets.push_back({from2(u), h[i], len});
  }
  P.volume = 0.5 * twice;
  if (!(P.volume > 0)) P.facets.clear();
  for (const auto& p : clean_chain(pts)) P.vertices.push_back(from2(p));
  return P;
}

std::vector<P2> minkowski_sum_polygons(const std::vector<P2>& a, const std::vector<P2>& b) {
  if (a.empty()) return b;
  if (b.empty()) return a;
  auto lowest = [](const std::vector<P2>& p) {
    std::size_t k = 0;
    for (std::size_t i = 1; i < p.size(); ++i)
      if (p[i].y() < p[k].y() || (p[i].y() == p[k].y() && p[i].x() < p[k].x())) k = i;
    return k;
  };
  const std::size_t n = a.size(), m = b.size();
  const std::size_t ia = lowest(a), ib = lowest(b);
  std::vector<P2> out;
  out.reserve(n + m);
  std::size_t i = 0, j = 0;
  while (i < n || j < m) {
    out.push_back(a[(ia + i) % n] + b[(ib + j) % m]);
    const P2 ea = a[(ia + i + 1) % n] - a[(ia + i) % n];
    const P2 eb = b[(ib + j + 1) % m] - b[(ib + j) % m];
    if (i >= n) {
      ++j;
    } else if (j >= m) {
      ++i;
    } else {
      const double cr = ea.x() * eb.y() - ea.y() * eb.x();
      if (cr > 0) ++i;
      else if (cr < 0) ++j;
      else ++i, ++j;
    }
  }
  return convex_hull_2d(out);
}

namespace {

std::vector<Vec> build_icosphere(int level) {
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<P3> V = {{-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0}, {0, -1, t}, {0, 1, t},
                       {0, -1, -t}, {0, 1, -t}, {t, 0, -1}, {t, 0, 1}, {-t, 0, -1}, {-t, 0, 1}};
  for (auto& v : V) v.normalize();
  std::vector<std::array<int, 3>> F = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
                                       {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
                                       {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
                                       {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
  for (int l = 0; l < level; ++l) {
    std::map<std::pair<int, int>, int> mid;
    auto midpoint = [&](int a, int b) {
      auto key = std::minmax(a, b);
      auto it = mid.find(key);
      if (it != mid.end()) return it->second;
      V.push_back((V[a] + V[b]).normalized());
      int id = static_cast<int>(V.size()) - 1;
      mid.emplace(key, id);
      return id;
    };
    std::vector<std::array<int, 3>> G;
    G.reserve(F.size() * 4);
    for (const auto& f : F) {
      int ab = midpoint(f[0], f[1]), bc = midpoint(f[1], f[2]), ca = midpoint(f[2], f[0]);
      G.push_back({f[0], ab, ca});
      G.push_back({f[1], bc, ab});
      G.push_back({f[2], ca, bc});
      G.push_back({ab, bc, ca});
    }
    F = std::move(G);
  }
  std::vector<Vec> out;
  out.reserve(V.size());
  for (const auto& v : V) out.push_back(from3(v));
  return out;
}

}  // namespace

DirectionGrid DirectionGrid::circle(int count) {
  if (count < 3) throw Error(ErrorCode::InvalidParameter, "circle grid needs at least 3 directions");
  DirectionGrid g;
  g.dim_ = 2;
  g.scheme_ = Scheme::UniformAngle;
  g.count_ = count;
  g.key_ = "c" + std::to_string(count);
  auto dirs = std::make_shared<std::vector<Vec>>();
  dirs->reserve(count);
  for (int k = 0; k < count; ++k) {
    const double a = 2.0 * M_PI * k / count;
    // Exact axis directions keep symmetric inputs exactly symmetric.
    if (4 * k % count == 0) {
      const int q = 4 * k / count;
      const double xs[4] = {1, 0, -1, 0}, ys[4] = {0, 1, 0, -1};
      dirs->push_back(vec2(xs[q], ys[q]));
    } else {
      dirs->push_back(vec2(std::cos(a), std::sin(a)));
    }
  }
  g.dirs_ = std::move(dirs);
  return g;
}

DirectionGrid DirectionGrid::icosphere(int level) {
  if (level < 0 || level > 7) throw Error(ErrorCode::InvalidParameter, "icosphere level must be in [0, 7]");
  static std::mutex mu;
  static std::map<int, std::shared_ptr<const std::vector<Vec>>> cache;
  DirectionGrid g;
  g.dim_ = 3;
  g.scheme_ = Scheme::Icosphere;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[level];
    if (!slot) slot = std::make_shared<const std::vector<Vec>>(build_icosphere(level));
    g.dirs_ = slot;
  }
  g.count_ = static_cast<int>(g.dirs_->size());
  g.key_ = "i" + std::to_string(level);
  return g;
}

DirectionGrid DirectionGrid::custom(int dim, std::vector<Vec> dirs) {
  DirectionGrid g;
  g.dim_ = dim;
  g.scheme_ = Scheme::Custom;
  for (auto& d : dirs) d.normalize();
  if (dim == 2)
    std::sort(dirs.begin(), dirs.end(), [](const Vec& a, const Vec& b) { return angle_of(a) < angle_of(b); });
  g.count_ = static_cast<int>(dirs.size());
  std::uint64_t h = 1469598103934665603ULL;
  for (const auto& d : dirs)
    for (int i = 0; i < dim; ++i) {
      std::uint64_t bits;
      double x = d[i];
      std::memcpy(&bits, &x, sizeof bits);
      h = (h ^ bits) * 1099511628211ULL;
    }
  g.key_ = "x" + std::to_string(h);
  g.dirs_ = std::make_shared<const std::vector<Vec>>(std::move(dirs));
  return g;
}

DirectionGrid DirectionGrid::standard(int dim) {
  if (dim == 3) return icosphere(settings().icosphere_level);
  static std::mutex mu;
  static std::optional<DirectionGrid> g2;
  std::lock_guard<std::mutex> lock(mu);
  if (!g2 || g2->count() != settings().grid2d) g2 = circle(settings().grid2d);
  return *g2;
}

DirectionGrid DirectionGrid::merged(const std::vector<Vec>& extra) const {
  if (extra.empty()) return *this;
  std::vector<Vec> all = *dirs_;
  for (const auto& e : extra) {
    const double len = e.norm();
    if (len > 0) all.push_back(e / len);
  }
  if (dim_ == 2) {
    std::vector<std::pair<double, Vec>> keyed;
    keyed.reserve(all.size());
    for (auto& d : all) keyed.emplace_back(angle_of(d), d);
    std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<Vec> out;
    out.reserve(keyed.size());
    double last = -1;
    for (auto& [a, d] : keyed) {
      if (!out.empty() && a - last < 1e-12) continue;
      out.push_back(d);
      last = a;
    }
    if (out.size() > 1 && angle_of(out.front()) + 2 * M_PI - last < 1e-12) out.pop_back();
    all = std::move(out);
  } else {
    std::vector<Vec> out;
    for (auto& d : all) {
      bool dup = false;
      for (std::size_t i = dirs_->size(); i < out.size() && !dup; ++i) dup = (out[i] - d).norm() < 1e-12;
      if (!dup && out.size() >= dirs_->size()) {
        for (std::size_t i = 0; i < dirs_->size() && !dup; ++i) dup = ((*dirs_)[i] - d).norm() < 1e-12;
      }
      if (!dup) out.push_back(d);
    }
    all = std::move(out);
  }
  DirectionGrid g = *this;
  g.dirs_ = std::make_shared<const std::vector<Vec>>(std::move(all));
  std::uint64_t h = 1469598103934665603ULL;
  for (const auto& d : extra)
    for (int i = 0; i < dim_; ++i) {
      std::uint64_t bits;
      double x = d[i];
      std::memcpy(&bits, &x, sizeof bits);
      h = (h ^ bits) * 1099511628211ULL;
    }
  g.key_ = key_ + "+" + std::to_string(h);
  return g;
}

}  // namespace obm
