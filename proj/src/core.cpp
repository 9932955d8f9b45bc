#include "obm/core.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <mutex>
#include <thread>

namespace obm {

Vec vec2(double x, double y) {
  Vec v(2);
  v << x, y;
  return v;
}

Vec vec3(double x, double y, double z) {
  Vec v(3);
  v << x, y, z;
  return v;
}

Vec unit(int dim, int axis) {
  Vec v = Vec::Zero(dim);
  v[axis] = 1.0;
  return v;
}

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidParameter: return "InvalidParameter";
    case ErrorCode::OriginNotInterior: return "OriginNotInterior";
    case ErrorCode::DegenerateBody: return "DegenerateBody";
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::NotNormalized: return "NotNormalized";
    case ErrorCode::BoundaryNormalization: return "BoundaryNormalization";
    case ErrorCode::NotUnconditional: return "NotUnconditional";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::RegimeViolation: return "RegimeViolation";
    case ErrorCode::SolverFailure: return "SolverFailure";
    case ErrorCode::DomainViolation: return "DomainViolation";
    case ErrorCode::ContainmentViolation: return "ContainmentViolation";
    case ErrorCode::SymmetryViolation: return "SymmetryViolation";
    case ErrorCode::ZeroVolume: return "ZeroVolume";
    case ErrorCode::EmptyMeasure: return "EmptyMeasure";
    case ErrorCode::SquareCase: return "SquareCase";
    case ErrorCode::DegenerateSample: return "DegenerateSample";
    case ErrorCode::Validation: return "Validation";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code), message_(what) {}

void apply_tolerance_overrides(Tolerances& tol, std::string_view spec) {
  std::size_t pos = 0;
  while (pos < spec.size()) {
    std::size_t end = spec.find(',', pos);
    if (end == std::string_view::npos) end = spec.size();
    std::string item(spec.substr(pos, end - pos));
    pos = end + 1;
    if (item.empty()) continue;
    auto eq = item.find('=');
    if (eq == std::string::npos) throw Error(ErrorCode::Validation, "OBM_TOL entry without '=': " + item);
    std::string key = item.substr(0, eq);
    char* tail = nullptr;
    double value = std::strtod(item.c_str() + eq + 1, &tail);
    if (tail == item.c_str() + eq + 1 || *tail != '\0' || !(value > 0))
      throw Error(ErrorCode::Validation, "OBM_TOL bad value: " + item);
    if (key == "support") tol.support = value;
    else if (key == "polar") tol.polar = value;
    else if (key == "volume") tol.volume = value;
    else if (key == "centroid") tol.centroid = value;
    else if (key == "equality") tol.equality = value;
    else if (key == "validate") tol.validate = value;
    else if (key == "solver") tol.solver_rel = value;
    else if (key == "max_iter") tol.solver_max_iter = static_cast<int>(value);
    else throw Error(ErrorCode::Validation, "OBM_TOL unknown key: " + key);
  }
}

Settings& mutable_settings() {
  static Settings s = [] {
    Settings out;
    unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    out.threads = hw;
    if (const char* t = std::getenv("OBM_THREADS")) {
      long v = std::strtol(t, nullptr, 10);
      if (v >= 1) out.threads = static_cast<unsigned>(std::min<long>(v, hw * 4L));
    }
    if (const char* t = std::getenv("OBM_TOL")) apply_tolerance_overrides(out.tol, t);
    return out;
  }();
  return s;
}

const Settings& settings() { return mutable_settings(); }

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
  unsigned threads = std::min<std::size_t>(settings().threads, n);
  if (threads <= 1 || n < 64) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::size_t chunk = (n + threads - 1) / threads;
  for (unsigned t = 0; t < threads; ++t) {
    std::size_t lo = t * chunk, hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&, lo, hi] {
      try {
        for (std::size_t i = lo; i < hi; ++i) fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

namespace {

std::uint64_t splitmix(std::uint64_t& x) {
  std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

Seed Seed::child(std::string_view label) const {
  Seed s = *this;
  s.path_.emplace_back(label);
  return s;
}

Seed Seed::child(std::uint64_t index) const { return child(std::to_string(index)); }

std::uint64_t Seed::value() const {
  std::uint64_t state = root_;
  std::uint64_t h = splitmix(state);
  for (const auto& label : path_) {
    state ^= fnv1a(label) + 0x632be59bd9b4e019ULL;
    h ^= splitmix(state);
  }
  return h;
}

Rng::Rng(const Seed& seed) : Rng(seed.value()) {}

Rng::Rng(std::uint64_t state) {
  for (auto& s : s_) s = splitmix(state);
}

std::uint64_t Rng::next() {
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double Rng::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double Rng::normal() {
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

int Rng::index(int n) { return static_cast<int>(uniform() * n) % n; }

double pairwise_sum(const double* x, std::size_t n) {
  if (n <= 16) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i];
    return s;
  }
  std::size_t half = n / 2;
  return pairwise_sum(x, half) + pairwise_sum(x + half, n - half);
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace obm
