#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace obm {

// Vectors live in R^2 or R^3; the max-size template keeps them on the stack.
using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, 3, 1>;
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, 3, 3>;

Vec vec2(double x, double y);
Vec vec3(double x, double y, double z);
Vec unit(int dim, int axis);

enum class ErrorCode {
  InvalidParameter,
  OriginNotInterior,
  DegenerateBody,
  ZeroVector,
  NotNormalized,
  BoundaryNormalization,
  NotUnconditional,
  OutOfRange,
  RegimeViolation,
  SolverFailure,
  DomainViolation,
  ContainmentViolation,
  SymmetryViolation,
  ZeroVolume,
  EmptyMeasure,
  SquareCase,
  DegenerateSample,
  Validation,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);
  ErrorCode code() const { return code_; }
  const std::string& message() const { return message_; }  // what() without the code prefix

 private:
  ErrorCode code_;
  std::string message_;
};

struct Tolerances {
  double support = 1e-12;
  double polar = 1e-10;
  double volume = 1e-10;
  double centroid = 1e-10;
  double equality = 1e-6;   // near-equality threshold, relative to scale
  double validate = 1e-10;  // holds <=> slack >= -validate * scale
  double solver_rel = 1e-12;
  int solver_max_iter = 200;
};

struct Settings {
  Tolerances tol;
  int grid2d = 2880;
  int icosphere_level = 5;
  int jphi_samples = 4096;       // initial uniform samples per quadrant
  double jphi_sagitta = 1e-10;   // adaptive refinement target, relative
  int param_t_grid = 513;
  int param_boundary = 256;
  unsigned threads = 1;
};

// Process-wide settings, read once from OBM_THREADS / OBM_TOL.
const Settings& settings();
// For front ends only; adjust before any computation starts.
Settings& mutable_settings();

// Parses "key=value,key=value" into tol; throws Error(Validation) on bad input.
void apply_tolerance_overrides(Tolerances& tol, std::string_view spec);

// Runs fn(i) for i in [0, n); output ordering is the caller's (index-addressed).
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

// Reproducible random streams derived from (root, path).
class Seed {
 public:
  explicit Seed(std::uint64_t root = 0) : root_(root) {}
  Seed child(std::string_view label) const;
  Seed child(std::uint64_t index) const;
  std::uint64_t value() const;
  std::uint64_t root() const { return root_; }
  const std::vector<std::string>& path() const { return path_; }

 private:
  std::uint64_t root_;
  std::vector<std::string> path_;
};

class Rng {
 public:
  explicit Rng(const Seed& seed);
  explicit Rng(std::uint64_t state);
  std::uint64_t next();
  double uniform();                      // [0, 1)
  double uniform(double lo, double hi);  // [lo, hi)
  double normal();
  int index(int n);                      // [0, n)

 private:
  std::uint64_t s_[4];
};

// Deterministic pairwise summation.
double pairwise_sum(const double* x, std::size_t n);
inline double pairwise_sum(const std::vector<double>& x) { return pairwise_sum(x.data(), x.size()); }

std::string format_double(double x);

}  // namespace obm
