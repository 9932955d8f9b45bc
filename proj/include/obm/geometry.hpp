#pragma once

#include "obm/core.hpp"

#include <array>
#include <memory>
#include <optional>

namespace obm {

using P2 = Eigen::Vector2d;
using P3 = Eigen::Vector3d;

// Sign of the orientation determinant; exact (rational fallback when the
// floating-point filter cannot decide).
int orient2d(const P2& a, const P2& b, const P2& c);  // > 0: counter-clockwise
int orient3d(const P3& a, const P3& b, const P3& c, const P3& d);  // > 0: d on the (b-a)x(c-a) side

// Counter-clockwise hull without collinear points.
std::vector<P2> convex_hull_2d(std::vector<P2> pts);

struct Hull3 {
  std::vector<P3> points;                 // input points, indices refer here
  std::vector<std::array<int, 3>> tris;   // outward, counter-clockwise seen from outside
  std::vector<std::array<int, 3>> nbrs;   // nbrs[t][k]: triangle across edge (v[k], v[k+1])
};

// Throws Error(DegenerateBody) when the points are coplanar.
Hull3 convex_hull_3d(const std::vector<P3>& pts);

struct Facet {
  Vec normal;  // outer unit normal
  double offset = 0;
  double area = 0;  // (n-1)-volume
};

struct Polytope {
  int dim = 2;
  std::vector<Vec> vertices;  // 2D: counter-clockwise
  std::vector<Facet> facets;  // empty when not full dimensional
  double volume = 0;

  bool full_dimensional() const { return !facets.empty() && volume > 0; }
  double support(const Vec& x) const;
  Vec support_point(const Vec& x) const;
  bool contains(const Vec& x, double tol) const;
  double scale() const;  // max |vertex|, at least tiny

  // Angle table for logarithmic support queries on large 2D polygons.
  std::vector<double> edge_angle;
  std::vector<int> edge_start;
};

Polytope polytope_from_points(int dim, const std::vector<Vec>& pts);
Polytope polygon_from_ordered(const std::vector<P2>& ccw);
Polytope polytope_from_halfspaces(int dim, const std::vector<Vec>& normals, const std::vector<double>& offsets,
                                  const Vec* interior = nullptr);

// Outer polygon {x : u_i . x <= h_i} when h is a genuine support function and the
// u_i are unit vectors sorted by angle with gaps below pi; facets keep the exact
// u_i. Returns nullopt if the data is not supporting (negative edge lengths).
std::optional<Polytope> outer_polygon_from_supports(const std::vector<P2>& dirs, const std::vector<double>& h);

// Minkowski sum of convex polygons given counter-clockwise (any vertex count >= 1).
std::vector<P2> minkowski_sum_polygons(const std::vector<P2>& a, const std::vector<P2>& b);

class DirectionGrid {
 public:
  enum class Scheme { UniformAngle, Icosphere, Custom };

  static DirectionGrid circle(int count);
  static DirectionGrid icosphere(int level);
  static DirectionGrid custom(int dim, std::vector<Vec> dirs);
  static DirectionGrid standard(int dim);

  // Adds extra unit directions (deduplicated; 2D stays sorted by angle).
  DirectionGrid merged(const std::vector<Vec>& extra) const;

  int dim() const { return dim_; }
  std::size_t size() const { return dirs_->size(); }
  const Vec& operator[](std::size_t i) const { return (*dirs_)[i]; }
  const std::vector<Vec>& directions() const& { return *dirs_; }
  // Copy for temporaries, so range-for over a temporary grid stays valid.
  std::vector<Vec> directions() && { return *dirs_; }
  Scheme scheme() const { return scheme_; }
  int count() const { return count_; }  // nominal count before merging
  const std::string& key() const { return key_; }

 private:
  int dim_ = 2;
  Scheme scheme_ = Scheme::UniformAngle;
  int count_ = 0;
  std::string key_;
  std::shared_ptr<const std::vector<Vec>> dirs_;
};

double angle_of(const Vec& u);  // in [0, 2pi)

}  // namespace obm
