#include "obm/oracle.hpp"
#include "obm/phi.hpp"

#include <doctest.h>

#include <cmath>

using namespace obm;

namespace {

std::vector<PhiFunction> zoo() {
  return {make_power(1),
          make_power(2),
          make_power(3.5),
          make_power_mix({0.3, 0.7}, {1, 4}),
          make_exp_normalized(),
          make_neglog(),
          make_maxlinear(0.5),
          make_piecewise({{{0.0, 0.0}, {0.2, 0.0}, {0.6, 0.3}, {1.0, 1.0}}}),
          make_steep_exp()};
}

double sup_domain(const PhiFunction& phi) { return std::isfinite(phi.domain()) ? phi.domain() * 0.999 : 4.0; }

}  // namespace

TEST_CASE("power") {
  CHECK(make_power(1)(0.37) == doctest::Approx(0.37));
  CHECK(make_power(2)(3) == doctest::Approx(9.0));
  CHECK(make_power(2).tau() == 0.0);
  CHECK(make_power(3).tau() == 0.0);
  CHECK_THROWS_AS(make_power(0.5), Error);
}

TEST_CASE("normalization, convexity, monotonicity, tau") {
  for (const PhiFunction& phi : zoo()) {
    INFO(phi.name());
    CHECK(std::fabs(phi(0)) <= 1e-14);
    if (phi.normalized()) {
      CHECK(std::fabs(phi(1) - 1) <= 1e-14);
      CHECK(check_phi(phi, 3).ok);
    }
    Rng rng(Seed(21).child(phi.name()));
    const double a = sup_domain(phi);
    for (int i = 0; i < 500; ++i) {
      double v[3] = {rng.uniform(0, a), rng.uniform(0, a), rng.uniform(0, a)};
      std::sort(v, v + 3);
      const double s = v[0], t = v[1], u = v[2];
      if (u - s < 1e-9) continue;
      CHECK(phi(t) <= ((u - t) * phi(s) + (t - s) * phi(u)) / (u - s) + 1e-12 * (1 + phi(u)));
      CHECK(phi(s) <= phi(t) + 1e-15);
    }
    const double tau = phi.tau();
    if (tau > 0) CHECK(phi(tau * (1 - 1e-9)) == 0.0);
    CHECK(phi(tau + 0.1) > 0);  // steep-exp underflows just above 0
  }
  CHECK(make_maxlinear(0.5).tau() == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(make_piecewise({{{0.0, 0.0}, {0.2, 0.0}, {1.0, 1.0}}}).tau() == doctest::Approx(0.2).epsilon(1e-10));
}

TEST_CASE("domain bound reports infinity") {
  const PhiFunction nl = make_neglog();
  CHECK(std::isinf(nl(1.0)));
  CHECK(std::isinf(nl(2.0)));
  CHECK(nl(0.5) == doctest::Approx(std::log(2.0)));
}

TEST_CASE("restricted inverse") {
  CHECK(restricted_inverse(make_power(2), 4) == doctest::Approx(2.0));
  CHECK(restricted_inverse(make_maxlinear(0.5), 0) == doctest::Approx(0.5));
  CHECK(restricted_inverse(make_neglog(), std::log(4.0)) == doctest::Approx(0.75));
  for (const PhiFunction& phi : zoo()) {
    INFO(phi.name());
    for (double y : {0.01, 0.3, 1.0, 2.5, 7.0}) {
      const double t = restricted_inverse(phi, y);
      CHECK(std::fabs(phi(t) - y) <= 1e-12 * std::max(1.0, y));
    }
  }
}

TEST_CASE("left derivative at 1") {
  for (double p : {1.0, 1.5, 2.0, 4.0}) CHECK(left_derivative_at_1(make_power(p)) == doctest::Approx(p).epsilon(1e-8));
  CHECK(left_derivative_at_1(make_exp_normalized()) == doctest::Approx(std::exp(1.0) / (std::exp(1.0) - 1)).epsilon(1e-8));
  CHECK(left_derivative_at_1(make_maxlinear(0.5)) == doctest::Approx(2.0).epsilon(1e-10));
  for (const PhiFunction& phi : zoo()) {
    const double d = left_derivative_at_1(phi);
    for (int k = 0; k < 100; ++k) {
      const double t = k / 100.0;
      CHECK(d >= (phi(1) - phi(t)) / (1 - t) - 1e-9);
    }
  }
}

TEST_CASE("multivariate phi") {
  std::vector<PhiM> all = {PhiM::sum({make_power(2), make_exp_normalized()}), PhiM::max(2), PhiM::power_sum(3),
                           PhiM::homogeneous_gauge(ConvexBody::ball(2, 1)),
                           PhiM::sum({make_power(1.5), make_power(2), make_maxlinear(0.2)})};
  for (int i = 0; i < 10; ++i) all.push_back(random_phi_m(Seed(4), i));
  for (const PhiM& phi : all) {
    INFO(phi.name());
    const int m = phi.arity();
    std::vector<double> o(m, 0.0);
    CHECK(phi(o) == 0.0);
    for (int j = 0; j < m; ++j) {
      std::vector<double> e(m, 0.0);
      e[j] = 1;
      CHECK(std::fabs(phi(e) - 1) <= 1e-14);
    }
    Rng rng(Seed(31).child(phi.name()));
    for (int k = 0; k < 500; ++k) {
      std::vector<double> x(m), y(m), mid(m);
      for (int j = 0; j < m; ++j) {
        x[j] = rng.uniform(0, 2);
        y[j] = rng.uniform(0, 2);
        mid[j] = (x[j] + y[j]) / 2;
      }
      CHECK(phi(mid) <= (phi(x) + phi(y)) / 2 + 1e-12 * (1 + phi(x) + phi(y)));
      std::vector<double> z = x;
      const int j = rng.index(m);
      z[j] += rng.uniform(0, 1);
      CHECK(phi(x) <= phi(z) + 1e-14);
    }
  }
  const PhiM w = PhiM::weighted_sum({make_power(2), make_power(2)}, {2, 3});
  CHECK_FALSE(w.normalized());
  const double x[2] = {1, 1};
  CHECK(w.eval(x) == doctest::Approx(5.0));
}

TEST_CASE("J body examples") {
  const ConvexBody cross = ConvexBody::from_vertices(2, {vec2(1, 0), vec2(0, 1), vec2(-1, 0), vec2(0, -1)});
  const ConvexBody sq = ConvexBody::rectangle(2, 2);
  const ConvexBody disk = ConvexBody::ball(2, 1);
  CHECK(hausdorff_distance(j_body(PhiM::sum({make_power(1), make_power(1)})).body, cross) < 1e-12);
  CHECK(hausdorff_distance(j_body(PhiM::max(2)).body, sq) < 1e-12);
  CHECK(hausdorff_distance(j_body(PhiM::power_sum(2)).body, disk) < 1e-8);
  CHECK(hausdorff_distance(j_polar(PhiM::sum({make_power(1), make_power(1)})), sq) < 1e-12);
  CHECK(hausdorff_distance(j_polar(PhiM::max(2)), cross) < 1e-12);
  CHECK(hausdorff_distance(j_polar(PhiM::power_sum(2)), disk) < 1e-8);
}

TEST_CASE("J body invariants") {
  const ConvexBody cross = ConvexBody::from_vertices(2, {vec2(1, 0), vec2(0, 1), vec2(-1, 0), vec2(0, -1)});
  const ConvexBody sq = ConvexBody::rectangle(2, 2);
  for (int i = 0; i < 10; ++i) {
    const PhiM phi = random_phi_m(Seed(41), i);
    if (phi.arity() != 2) continue;
    INFO(phi.name());
    const JBody J = j_body(phi);
    for (const auto& u : DirectionGrid::circle(360).directions()) {
      const double h = J.body.support(u);
      CHECK(std::fabs(h - J.body.support(vec2(-u[0], u[1]))) < 1e-12);
      CHECK(std::fabs(h - J.body.support(vec2(u[0], -u[1]))) < 1e-12);
      CHECK(h >= cross.support(u) - 1e-12);
      CHECK(h <= sq.support(u) + 1e-12);
    }
    for (const auto& v : J.body.polytope().vertices)
      if (v[0] >= 0 && v[1] >= 0) {
        const double x[2] = {v[0], v[1]};
        CHECK(std::fabs(phi.eval(x) - 1) <= 1e-8);
      }
    CHECK(hausdorff_distance(polar(polar(J.body)), J.body) <= 1e-8);
  }
}

TEST_CASE("gauge phi from body") {
  const PhiM g1 = gauge_phi_from_body(ConvexBody::rectangle(2, 2));
  const PhiM g2 = gauge_phi_from_body(ConvexBody::ball(2, 1));
  const PhiM g3 = gauge_phi_from_body(ConvexBody::from_vertices(2, {vec2(1, 0), vec2(0, 1), vec2(-1, 0), vec2(0, -1)}));
  Rng rng(Seed(51));
  for (int k = 0; k < 100; ++k) {
    const double x[2] = {rng.uniform(0, 3), rng.uniform(0, 3)};
    CHECK(g1.eval(x) == doctest::Approx(std::max(x[0], x[1])));
    CHECK(g2.eval(x) == doctest::Approx(std::hypot(x[0], x[1])));
    CHECK(g3.eval(x) == doctest::Approx(x[0] + x[1]));
  }
  CHECK_THROWS_AS(gauge_phi_from_body(ConvexBody::rectangle(2, 1)), Error);
}

TEST_CASE("decomposition examples") {
  const DecompositionResult D = decompose_2d(ConvexBody::ball(2, 1));
  REQUIRE(D.phi1.has_value());
  for (int i = 0; i <= 100; ++i) {
    const double s = i / 100.0;
    const double ref = s <= 1 / std::sqrt(2.0) ? (1 - std::sqrt(1 - s * s)) / (2 - std::sqrt(2.0))
                                               : (s + 1 - std::sqrt(2.0)) / (2 - std::sqrt(2.0));
    CHECK(std::fabs((*D.phi1)(s) - ref) < 1e-8);
  }
  const DecompositionResult C =
      decompose_2d(ConvexBody::from_vertices(2, {vec2(1, 0), vec2(0, 1), vec2(-1, 0), vec2(0, -1)}));
  CHECK(C.which == DecompositionResult::Case::RightSlope);
  CHECK(C.tau1 == doctest::Approx(0.0));
  for (int i = 0; i <= 20; ++i) {
    const double s = i / 20.0;
    CHECK((*C.phi1)(s) == doctest::Approx(s));
    CHECK((*C.phi2)(s) == doctest::Approx(s));
  }
  CHECK(decompose_2d(ConvexBody::rectangle(2, 2)).which == DecompositionResult::Case::MaxCase);
}

TEST_CASE("decomposition identity round trip") {
  for (double p : {1.5, 2.0, 3.0}) {
    const JBody J = j_body(PhiM::power_sum(p));
    const DecompositionResult D = decompose_2d(J.body);
    REQUIRE(D.phi1.has_value());
    for (int k = 0; k < 200; ++k) {
      const double x = (k + 0.5) / 200;
      CHECK(std::fabs((*D.phi1)(x) + (*D.phi2)(D.f(x)) - 1) <= 1e-8);
    }
  }
}

TEST_CASE("f_phi limit") {
  const LimitResult a = f_phi_limit(make_power(2), 3);
  CHECK(a.status == LimitResult::Status::Value);
  CHECK(a.value == doctest::Approx(9.0));
  CHECK(f_phi_limit(make_steep_exp(), 2).status == LimitResult::Status::Divergent);
  const LimitResult h = f_phi_limit(make_steep_exp(), 0.5);
  CHECK(h.status == LimitResult::Status::Value);
  CHECK(h.value == 0.0);
}

TEST_CASE("least lambda returns the infimum on a plateau") {
  // g is 2 on (0, 1), 1 on [1, 3], 0.5 beyond: the least lambda with g <= 1 is 1
  const auto g = [](double l) { return l < 1 ? 2.0 : (l <= 3 ? 1.0 : 0.5); };
  CHECK(least_lambda(g, 0.1) == doctest::Approx(1.0).epsilon(1e-11));
  const double h[2] = {0.4, 0.0};
  CHECK(orlicz_value(PhiM::sum({make_maxlinear(0.5), make_maxlinear(0.5)}), h) == doctest::Approx(0.4));
}
