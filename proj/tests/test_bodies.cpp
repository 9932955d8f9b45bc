#include "obm/bodies.hpp"
#include "obm/oracle.hpp"

#include <doctest.h>

#include <cmath>

using namespace obm;

namespace {

ConvexBody square1() { return ConvexBody::rectangle(2, 2); }  // [-1,1]^2

Mat diag2(double a, double b) {
  Mat A(2, 2);
  A << a, 0, 0, b;
  return A;
}

std::vector<ConvexBody> sample_bodies() {
  std::vector<ConvexBody> out = {square1(), ConvexBody::ball(2, 1.5), ConvexBody::segment(vec2(-1, 0), vec2(2, 1)),
                                 ConvexBody::from_vertices(2, {vec2(0, 0), vec2(1, 0), vec2(0, 1)})};
  for (int i = 0; i < 4; ++i) out.push_back(random_polytope(Seed(5).child(static_cast<std::uint64_t>(i)), 2, 8, BodyFamily::General));
  out.push_back(random_polytope(Seed(6), 3, 12, BodyFamily::OriginInterior));
  return out;
}

}  // namespace

TEST_CASE("support examples") {
  CHECK(square1().support(vec2(1, 0)) == doctest::Approx(1.0));
  CHECK(ConvexBody::segment(vec2(-1, 0), vec2(1, 0)).support(vec2(0, 1)) == doctest::Approx(0.0));
  const ConvexBody T = ConvexBody::from_vertices(2, {vec2(0, 0), vec2(1, 0), vec2(0, 1)});
  CHECK(T.support(vec2(1, 1)) == doctest::Approx(1.0));
}

TEST_CASE("support is homogeneous and subadditive") {
  Rng rng(Seed(77));
  for (const ConvexBody& K : sample_bodies()) {
    const int n = K.dim();
    for (int i = 0; i < 200; ++i) {
      Vec x(n), y(n);
      for (int k = 0; k < n; ++k) {
        x[k] = rng.normal();
        y[k] = rng.normal();
      }
      CHECK(K.support(x + y) <= K.support(x) + K.support(y) + 1e-10);
      const double r = rng.uniform(0.1, 5);
      CHECK(std::fabs(K.support(r * x) - r * K.support(x)) <= 1e-12 * (1 + std::fabs(r * K.support(x))));
    }
  }
}

TEST_CASE("origin and symmetry tests agree with grid supports") {
  for (const ConvexBody& K : sample_bodies()) {
    const DirectionGrid g = DirectionGrid::standard(K.dim());
    bool nonneg = true, sym = true;
    for (const auto& u : g.directions()) {
      nonneg = nonneg && K.support(u) >= -1e-12;
      sym = sym && std::fabs(K.support(u) - K.support(-u)) <= 1e-12;
    }
    CHECK(contains_origin(K) == nonneg);
    if (is_o_symmetric(K)) CHECK(sym);
  }
  CHECK(is_o_symmetric(square1()));
  CHECK_FALSE(is_o_symmetric(ConvexBody::rectangle(1, 1, false)));
}

TEST_CASE("linear image") {
  const ConvexBody K = random_polytope(Seed(3), 2, 7, BodyFamily::General);
  const ConvexBody I = linear_image(K, Mat::Identity(2, 2));
  const ConvexBody S = linear_image(square1(), -Mat::Identity(2, 2));
  const ConvexBody E = linear_image(ConvexBody::ball(2, 1), diag2(2, 1));
  for (const auto& u : DirectionGrid::circle(360).directions()) {
    CHECK(std::fabs(I.support(u) - K.support(u)) < 1e-12);
    CHECK(std::fabs(S.support(u) - square1().support(u)) < 1e-12);
  }
  CHECK(E.support(vec2(1, 0)) == doctest::Approx(2.0));
  CHECK(E.support(vec2(0, 1)) == doctest::Approx(1.0));
}

TEST_CASE("projection") {
  Mat e1(2, 1);
  e1 << 1, 0;
  const ConvexBody P = project(square1(), e1);
  CHECK(P.support(vec2(1, 0)) == doctest::Approx(1.0));
  CHECK(P.support(vec2(-1, 0)) == doctest::Approx(1.0));
  CHECK(P.support(vec2(0, 1)) == doctest::Approx(0.0));
  const ConvexBody Q = project(ConvexBody::segment(vec2(0, 0), vec2(1, 1)), e1);
  CHECK(Q.support(vec2(1, 0)) == doctest::Approx(1.0));
  CHECK(Q.support(vec2(-1, 0)) == doctest::Approx(0.0));
  const ConvexBody K = random_polytope(Seed(8), 2, 9, BodyFamily::General);
  const ConvexBody F = project(K, Mat::Identity(2, 2));
  CHECK(hausdorff_distance(K, F) < 1e-12);

  // h_{K|S}(x) = h_K(x|S)
  Rng rng(Seed(9));
  for (int t = 0; t < 10; ++t) {
    const double a = rng.uniform(0, M_PI);
    Mat s(2, 1);
    s << std::cos(a), std::sin(a);
    const ConvexBody KS = project(K, s);
    for (const auto& x : DirectionGrid::circle(360).directions()) {
      const Vec xs = s * (s.transpose() * x);
      CHECK(std::fabs(KS.support(x) - K.support(xs)) < 1e-12);
    }
  }
}

TEST_CASE("polar") {
  const ConvexBody B = polar(ConvexBody::ball(2, 1));
  for (const auto& u : DirectionGrid::circle(64).directions()) CHECK(B.support(u) == doctest::Approx(1.0).epsilon(1e-9));
  const ConvexBody C = polar(square1());
  const ConvexBody cross = ConvexBody::from_vertices(2, {vec2(1, 0), vec2(0, 1), vec2(-1, 0), vec2(0, -1)});
  CHECK(hausdorff_distance(C, cross) < 1e-12);
  for (int i = 0; i < 10; ++i) {
    const ConvexBody K = random_polytope(Seed(10).child(static_cast<std::uint64_t>(i)), 2, 8, BodyFamily::OriginInterior);
    CHECK(hausdorff_distance(polar(polar(K)), K) <= 1e-9);
  }
  CHECK_THROWS_AS(polar(ConvexBody::rectangle(1, 1, false)), Error);
}

TEST_CASE("radial and gauge") {
  CHECK(radial(ConvexBody::ball(2, 1), vec2(1, 0)) == doctest::Approx(1.0));
  const Vec u = vec2(0.6, 0.8);
  CHECK(radial(ConvexBody::ball(2, 2), u) == doctest::Approx(2.0));
  CHECK(radial(square1(), vec2(1, 1).normalized()) == doctest::Approx(std::sqrt(2.0)));
  CHECK(gauge(ConvexBody::ball(2, 1), vec2(3, 4)) == doctest::Approx(5.0));
  CHECK(gauge(square1(), vec2(3, 1)) == doctest::Approx(3.0));
  const ConvexBody K = random_polytope(Seed(12), 2, 8, BodyFamily::OriginInterior);
  for (const auto& x : DirectionGrid::circle(50).directions()) CHECK(gauge(K, 2.5 * x) * radial(K, 2.5 * x) == doctest::Approx(1.0));
}

TEST_CASE("volume") {
  CHECK(volume(ConvexBody::rectangle(1, 1)) == doctest::Approx(1.0));
  const double d = volume(ConvexBody::ball(2, 1), DirectionGrid::circle(720));
  CHECK(d >= M_PI);
  CHECK((d - M_PI) / M_PI < 1e-4);
  const double b3 = volume(ConvexBody::ball(3, 1));
  CHECK(b3 >= 4 * M_PI / 3);
  CHECK((b3 - 4 * M_PI / 3) / (4 * M_PI / 3) < 1e-3);
  // nested grids: the finer outer polygon is smaller
  double prev = 1e9;
  for (int N : {90, 180, 360, 720}) {
    const double v = volume(ConvexBody::ball(2, 1), DirectionGrid::circle(N));
    CHECK(v <= prev);
    prev = v;
  }
}

TEST_CASE("surface area and cone measures") {
  const DiscreteSurfaceMeasure S = surface_area_measure(square1());
  REQUIRE(S.normals.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) CHECK(S.weights[i] == doctest::Approx(2.0));
  const DiscreteSurfaceMeasure R = surface_area_measure(ConvexBody::rectangle(3, 0.5));
  for (std::size_t i = 0; i < R.normals.size(); ++i) {
    const double expect = std::fabs(R.normals[i][0]) > 0.5 ? 0.5 : 3.0;
    CHECK(R.weights[i] == doctest::Approx(expect));
  }
  const ConeMeasure C = cone_measure(square1());
  for (double w : C.weights) CHECK(w == doctest::Approx(0.25));
  const ConeMeasure CR = cone_measure(ConvexBody::rectangle(3, 0.5));
  for (double w : CR.weights) CHECK(w == doctest::Approx(0.25));

  for (const ConvexBody& K : sample_bodies()) {
    if (volume(K) <= 0) continue;
    const DiscreteSurfaceMeasure M = surface_area_measure(K);
    Vec c = Vec::Zero(K.dim());
    double mass = 0, v = 0;
    for (std::size_t i = 0; i < M.normals.size(); ++i) {
      c += M.weights[i] * M.normals[i];
      mass += M.weights[i];
      v += M.support[i] * M.weights[i];
    }
    CHECK(c.norm() <= 1e-10 * mass);
    CHECK(v / K.dim() == doctest::Approx(volume(K)).epsilon(1e-10));
    if (origin_interior(K)) {
      const ConeMeasure cm = cone_measure(K);
      double tot = 0;
      for (std::size_t i = 0; i < cm.weights.size(); ++i) {
        tot += cm.weights[i];
        CHECK(cm.weights[i] == doctest::Approx(M.support[i] * M.weights[i] / (K.dim() * volume(K))));
      }
      CHECK(std::fabs(tot - 1) < 1e-12);
    }
  }
}

TEST_CASE("simplex surface measure is balanced") {
  const ConvexBody T = ConvexBody::from_vertices(
      3, {vec3(1, 1, 1), vec3(1, -1, -1), vec3(-1, 1, -1), vec3(-1, -1, 1)});
  const DiscreteSurfaceMeasure S = surface_area_measure(T);
  Vec c = Vec::Zero(3);
  for (std::size_t i = 0; i < S.normals.size(); ++i) c += S.weights[i] * S.normals[i];
  CHECK(c.norm() < 1e-10);
}

TEST_CASE("dilatate detection") {
  const ConvexBody K = random_polytope(Seed(14), 2, 8, BodyFamily::OriginInterior);
  const DilatateResult r = is_dilatate_pair(K, dilate(K, 3), 1e-6);
  CHECK(r.yes);
  CHECK(r.ratio == doctest::Approx(3.0));
  const DilatateResult s = is_dilatate_pair(square1(), ConvexBody::ball(2, 1), 1e-6);
  CHECK_FALSE(s.yes);
  CHECK(s.defect > 0.1);
  const DilatateResult o = is_dilatate_pair(K, ConvexBody::origin(2), 1e-6);
  CHECK(o.yes);
  CHECK(o.ratio == 0.0);
  const DilatateResult h = homothety(K, minkowski_sum(dilate(K, 2), ConvexBody::from_vertices(2, {vec2(0.3, -0.2)})), 1e-6);
  CHECK(h.yes);
  CHECK(h.ratio == doctest::Approx(2.0));
}

TEST_CASE("body measure validation") {
  DiscreteBodyMeasure mu;
  CHECK_THROWS_AS(mu.validate(), Error);
  mu.arity = 2;
  mu.add({square1(), ConvexBody::ball(2, 1)}, 0.5);
  CHECK_NOTHROW(mu.validate());
  mu.add({square1()}, 1.0);
  CHECK_THROWS_AS(mu.validate(), Error);
  DiscreteBodyMeasure mixed;
  mixed.add({square1()}, 1.0);
  mixed.add({ConvexBody::ball(3, 1)}, 1.0);
  CHECK_THROWS_AS(mixed.validate(), Error);
}
