#pragma once

#include "obm/geometry.hpp"

#include <functional>
#include <memory>
#include <string>

namespace obm {

using SupportFn = std::function<double(const Vec&)>;

struct OracleOptions {
  std::function<bool(const Vec&)> contains;  // exact membership, if known
  std::function<double(const Vec&)> radial;  // exact radial function, if known
  std::vector<Vec> hint_normals;             // directions added to every outer grid
  std::string label = "oracle";
  bool o_symmetric = false;
};

class ConvexBody {
 public:
  enum class Backend { VPolytope, HPolytope, Oracle };

  ConvexBody();  // {o} in the plane

  static ConvexBody from_vertices(int dim, const std::vector<Vec>& vertices);
  static ConvexBody from_polytope(Polytope p, Backend tag = Backend::VPolytope);
  static ConvexBody from_halfspaces(int dim, const std::vector<Vec>& normals, const std::vector<double>& offsets);
  static ConvexBody oracle(int dim, SupportFn h, OracleOptions opts = {});
  static ConvexBody ball(int dim, double radius);
  static ConvexBody rectangle(double a, double b, bool centered = true);
  static ConvexBody origin(int dim);
  static ConvexBody segment(const Vec& a, const Vec& b);

  int dim() const;
  Backend backend() const;
  bool is_polytope() const { return backend() != Backend::Oracle; }
  const std::string& label() const;

  double support(const Vec& x) const;
  bool contains(const Vec& x, double tol = 1e-12) const;
  double radial_hint(const Vec& x, bool& known) const;

  // Exact polytope; throws Error(InvalidParameter) for oracle bodies.
  const Polytope& polytope() const;
  // Outer polytope {x.u <= h(u)} on grid + hint normals; the polytope itself for
  // polytopal bodies. Cached per grid key.
  const Polytope& outer(const DirectionGrid& grid) const;
  const Polytope& shape() const { return outer(DirectionGrid::standard(dim())); }

  std::vector<Vec> hint_normals() const;
  bool declared_o_symmetric() const;

 private:
  struct Impl;
  explicit ConvexBody(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

ConvexBody linear_image(const ConvexBody& K, const Mat& A);
// Orthogonal projection onto span of the orthonormal columns of S (kept in R^n).
ConvexBody project(const ConvexBody& K, const Mat& S);
ConvexBody polar(const ConvexBody& K);
ConvexBody minkowski_sum(const ConvexBody& K, const ConvexBody& L);
ConvexBody dilate(const ConvexBody& K, double t);
ConvexBody conv_with_origin(const ConvexBody& K);

double radial(const ConvexBody& K, const Vec& x);
double gauge(const ConvexBody& K, const Vec& x);
double volume(const ConvexBody& K);
double volume(const ConvexBody& K, const DirectionGrid& grid);

struct DiscreteSurfaceMeasure {
  int dim = 2;
  std::vector<Vec> normals;
  std::vector<double> weights;   // facet (n-1)-volumes
  std::vector<double> support;   // h_K at each normal
  double volume = 0;             // V(K) of the source
  std::size_t grid_count = 0;    // 0 for exact polytopes
  double total() const;
};

struct ConeMeasure {
  std::vector<Vec> normals;
  std::vector<double> weights;  // probability weights
  std::vector<double> support;
};

DiscreteSurfaceMeasure surface_area_measure(const ConvexBody& K);
DiscreteSurfaceMeasure surface_area_measure(const ConvexBody& K, const DirectionGrid& grid);
ConeMeasure cone_measure(const DiscreteSurfaceMeasure& S);
ConeMeasure cone_measure(const ConvexBody& K);

// Grid shared by two bodies: the standard grid plus the hint normals of both.
DirectionGrid shared_grid(const ConvexBody& K, const ConvexBody& L);
DirectionGrid shared_grid(const std::vector<ConvexBody>& bodies);

struct DilatateResult {
  bool yes = false;
  double ratio = 0;
  double defect = 0;  // relative sup defect
  Vec translation;    // only set by homothety()
};

DilatateResult is_dilatate_pair(const ConvexBody& K, const ConvexBody& L, double tol);
DilatateResult is_dilatate_pair(const ConvexBody& K, const ConvexBody& L, double tol, const DirectionGrid& grid);
// L = r K + t for some r >= 0 and translation t (least squares on the grid).
DilatateResult homothety(const ConvexBody& K, const ConvexBody& L, double tol);

double hausdorff_distance(const ConvexBody& K, const ConvexBody& L);
double hausdorff_distance(const ConvexBody& K, const ConvexBody& L, const DirectionGrid& grid);

bool contains_origin(const ConvexBody& K, double tol = 1e-12);
bool origin_interior(const ConvexBody& K, double tol = 1e-12);
bool is_o_symmetric(const ConvexBody& K, double tol = 1e-12);

// Extreme points: vertices for polytopes, outer-polygon vertices on a circle of
// `count` directions for oracles.
std::vector<Vec> extreme_points(const ConvexBody& K, int count = 256);

struct DiscreteBodyMeasure {
  int arity = 1;
  std::vector<std::vector<ConvexBody>> tuples;
  std::vector<double> weights;

  void add(std::vector<ConvexBody> tuple, double weight);
  int dim() const;
  void validate() const;  // throws Error(EmptyMeasure / InvalidParameter)
};

}  // namespace obm
