#include "obm/additions.hpp"
#include "obm/oracle.hpp"

#include <doctest.h>

#include <cmath>

using namespace obm;

namespace {

ConvexBody poly(std::uint64_t s, BodyFamily f = BodyFamily::ContainsOrigin, int k = 7) {
  return random_polytope(Seed(300).child(s), 2, k, f);
}

double sup_diff(const ConvexBody& A, const ConvexBody& B, int count = 720) {
  double d = 0;
  for (const auto& u : DirectionGrid::circle(count).directions()) d = std::max(d, std::fabs(A.support(u) - B.support(u)));
  return d;
}

}  // namespace

TEST_CASE("M-sum examples") {
  const ConvexBody K = poly(1), L = poly(2);
  CHECK(sup_diff(m_sum(CoeffSet::singleton(), {K, L}), minkowski_sum(K, L)) < 1e-12);
  const ConvexBody hull = ConvexBody::from_vertices(2, [&] {
    auto v = K.polytope().vertices;
    for (const auto& w : L.polytope().vertices) v.push_back(w);
    return v;
  }());
  CHECK(sup_diff(m_sum(CoeffSet::segment(), {K, L}), hull) < 1e-12);
  const ConvexBody D = m_sum(CoeffSet::lp_arc(2), {ConvexBody::ball(2, 3), ConvexBody::ball(2, 4)});
  for (const auto& u : DirectionGrid::circle(720).directions()) CHECK(std::fabs(D.support(u) - 5) < 1e-9);
}

TEST_CASE("M-sum regime") {
  const CoeffSet M = CoeffSet::points(2, {{-1, 1}, {1, 1}, {1, -1}, {-1, -1}});
  CHECK(M.unconditional());
  CHECK_FALSE(M.nonnegative());
  CHECK_THROWS_AS(m_sum(M, {poly(3), poly(4)}), Error);
  // symmetric bodies with an unconditional M use the support rule
  const ConvexBody S = ConvexBody::rectangle(2, 1), T = ConvexBody::ball(2, 1);
  const ConvexBody R = m_sum(M, {S, T});
  for (const auto& u : DirectionGrid::circle(90).directions())
    CHECK(R.support(u) == doctest::Approx(S.support(u) + T.support(u)));
  MSumOptions o;
  o.fallback_bruteforce = true;
  o.fallback_samples = 2000;
  CHECK_NOTHROW(m_sum(M, {poly(3), poly(4)}, o));
}

TEST_CASE("brute-force M-sum converges to the support rule") {
  const CoeffSet M = CoeffSet::lp_arc(2);
  for (std::uint64_t i = 0; i < 3; ++i) {
    const ConvexBody K = poly(10 + i), L = poly(20 + i);
    const ConvexBody exact = m_sum(M, {K, L});
    const double d3 = hausdorff_distance(m_sum_bruteforce(M, {K, L}, 1000, 5), exact);
    const double d4 = hausdorff_distance(m_sum_bruteforce(M, {K, L}, 10000, 5), exact);
    CHECK(d4 < 2e-2);
    CHECK(d4 <= d3);
  }
  // two segments with M = {(1, 1)}: a parallelogram of area |cross|
  const ConvexBody a = ConvexBody::segment(vec2(0, 0), vec2(2, 0)), b = ConvexBody::segment(vec2(0, 0), vec2(1, 1));
  const ConvexBody P = m_sum_bruteforce(CoeffSet::singleton(), {a, b}, 100, 1);
  CHECK(volume(P) == doctest::Approx(2.0));
  CHECK(P.polytope().vertices.size() == 4);
}

TEST_CASE("M-sum of points along the L2 arc is a curve") {
  const Vec x = vec2(1, 0), y = vec2(0.2, 1);
  const PointCloud c = m_sum_point_cloud(CoeffSet::lp_arc(2), {{x}, {y}}, 400, 3);
  double off = 0;
  const Vec n = vec2(-(y - x)[1], (y - x)[0]).normalized();
  for (const auto& p : c) off = std::max(off, std::fabs((p - x).dot(n)));
  CHECK(off > 0.1);
  for (const auto& p : c) {
    // p = a x + b y with a^2 + b^2 = 1
    Eigen::Matrix2d B;
    B << x[0], y[0], x[1], y[1];
    const Eigen::Vector2d ab = B.inverse() * Eigen::Vector2d(p[0], p[1]);
    CHECK(ab.norm() == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("Orlicz sum examples") {
  const ConvexBody K = poly(30), L = poly(31);
  const ConvexBody lin = orlicz_sum(PhiM::sum({make_power(1), make_power(1)}), K, L);
  for (const auto& u : DirectionGrid::circle(720).directions())
    CHECK(std::fabs(lin.support(u) - K.support(u) - L.support(u)) <= 1e-12 * (1 + K.support(u) + L.support(u)));

  // sum with tau(phi2) > 0 and h_L <= tau h_K: the sum is K
  const double tau = 0.4;
  const ConvexBody Ko = poly(32, BodyFamily::OriginInterior);
  const ConvexBody Ls = dilate(Ko, 0.3);
  const ConvexBody S = orlicz_sum(PhiM::sum({make_power(2), make_maxlinear(tau)}), Ko, Ls);
  CHECK(sup_diff(S, Ko) < 1e-12);
}

TEST_CASE("L_p consistency") {
  for (double p : {1.0, 1.5, 2.0, 3.0}) {
    const PhiM phi = PhiM::power_sum(p);
    for (std::uint64_t i = 0; i < 5; ++i) {
      const ConvexBody K = poly(40 + i), L = poly(50 + i);
      const ConvexBody S = orlicz_sum(phi, K, L);
      for (const auto& u : DirectionGrid::circle(720).directions()) {
        const double ref = lp_support(K.support(u), L.support(u), p);
        CHECK(std::fabs(S.support(u) - ref) <= 1e-9 * std::max(ref, 1e-300));
      }
    }
  }
  const ConvexBody K = poly(60), L = poly(61);
  const ConvexBody M = orlicz_sum(PhiM::max(2), K, L);
  for (const auto& u : DirectionGrid::circle(720).directions())
    CHECK(std::fabs(M.support(u) - lp_support(K.support(u), L.support(u), INFINITY)) <= 1e-12);
}

TEST_CASE("identity, monotonicity and symmetry") {
  const ConvexBody o = ConvexBody::origin(2);
  for (int i = 0; i < 9; ++i) {
    const PhiM phi = random_phi_m(Seed(70), i);
    if (phi.arity() != 2) continue;
    INFO(phi.name());
    const ConvexBody K = poly(70 + static_cast<std::uint64_t>(i));
    CHECK(sup_diff(orlicz_sum(phi, K, o), K) <= 1e-12);

    const ConvexBody L = poly(80 + static_cast<std::uint64_t>(i));
    const ConvexBody K2 = minkowski_sum(K, ConvexBody::rectangle(0.5, 0.2, false));
    const ConvexBody L2 = conv_with_origin(dilate(L, 1.3));
    const ConvexBody A = orlicz_sum(phi, K, L), B = orlicz_sum(phi, K2, L2);
    for (const auto& u : DirectionGrid::circle(720).directions()) CHECK(A.support(u) <= B.support(u) + 1e-12);

    const ConvexBody Ks = poly(90 + static_cast<std::uint64_t>(i), BodyFamily::Symmetric);
    const ConvexBody Ls = ConvexBody::rectangle(1, 2);
    const ConvexBody C = orlicz_sum(phi, Ks, Ls);
    for (const auto& u : DirectionGrid::circle(720).directions()) CHECK(std::fabs(C.support(u) - C.support(-u)) <= 1e-12);
  }
}

TEST_CASE("GL(n) and projection covariance") {
  const PhiM phi = PhiM::sum({make_exp_normalized(), make_power(1.7)});
  const ConvexBody K = poly(100), L = poly(101);
  const ConvexBody S = orlicz_sum(phi, K, L);
  Rng rng(Seed(102));
  for (int t = 0; t < 20; ++t) {
    Mat A(2, 2);
    do {
      A << rng.normal(), rng.normal(), rng.normal(), rng.normal();
    } while (std::fabs(A.determinant()) < 0.1);
    const ConvexBody lhs = linear_image(S, A);
    const ConvexBody rhs = orlicz_sum(phi, linear_image(K, A), linear_image(L, A));
    for (const auto& u : DirectionGrid::circle(360).directions()) {
      const double ref = lhs.support(u);
      CHECK(std::fabs(ref - rhs.support(u)) <= 1e-9 * std::max(1.0, ref));
    }
  }
  for (int t = 0; t < 10; ++t) {
    const double a = rng.uniform(0, M_PI);
    Mat s(2, 1);
    s << std::cos(a), std::sin(a);
    const Vec u = s.col(0);
    const ConvexBody lhs = project(S, s);
    const ConvexBody rhs = orlicz_sum(phi, project(K, s), project(L, s));
    CHECK(std::fabs(lhs.support(u) - rhs.support(u)) <= 1e-10);
    CHECK(std::fabs(lhs.support(-u) - rhs.support(-u)) <= 1e-10);
  }
}

TEST_CASE("Orlicz sums are M-sums over the positive part of the J polar") {
  for (int i = 0; i < 9; ++i) {
    const PhiM phi = random_phi_m(Seed(110), i);
    if (phi.arity() != 2) continue;
    INFO(phi.name());
    const ConvexBody K = poly(110 + static_cast<std::uint64_t>(i)), L = poly(120 + static_cast<std::uint64_t>(i));
    const ConvexBody A = orlicz_sum(phi, K, L);
    const ConvexBody B = m_sum(CoeffSet::j_polar_positive(phi), {K, L});
    for (const auto& u : DirectionGrid::circle(720).directions()) {
      const double ref = A.support(u);
      CHECK(std::fabs(ref - B.support(u)) <= 1e-9 * std::max(1.0, ref));
    }
  }
}

TEST_CASE("linear combinations") {
  const ConvexBody K = poly(130, BodyFamily::OriginInterior), L = poly(131);
  const PhiFunction p2 = make_power(2);
  const double t = 0.3;
  const ConvexBody C = orlicz_linear_combination(p2, p2, K, L, 1 - t, t);
  for (const auto& u : DirectionGrid::circle(720).directions()) {
    const double ref = std::sqrt((1 - t) * std::pow(K.support(u), 2) + t * std::pow(L.support(u), 2));
    CHECK(std::fabs(C.support(u) - ref) <= 1e-9 * std::max(1.0, ref));
  }
  CHECK(sup_diff(orlicz_linear_combination(make_exp_normalized(), p2, K, L, 1, 0), K) <= 1e-12);
  const ConvexBody D = orlicz_linear_combination(p2, p2, ConvexBody::ball(2, 2), ConvexBody::ball(2, 1), 1, 1);
  for (const auto& u : DirectionGrid::circle(90).directions()) CHECK(D.support(u) == doctest::Approx(std::sqrt(5.0)));
  // L = {o}: (phi1^-1(1/alpha))^-1 K
  const PhiFunction e = make_exp_normalized();
  const ConvexBody E = orlicz_linear_combination(e, p2, K, ConvexBody::origin(2), 2.5, 1);
  const double c = 1 / restricted_inverse(e, 1 / 2.5);
  for (const auto& u : DirectionGrid::circle(90).directions()) CHECK(E.support(u) == doctest::Approx(c * K.support(u)));
}

TEST_CASE("epsilon convergence of linear combinations") {
  const ConvexBody K = poly(140, BodyFamily::OriginInterior), L = poly(141);
  const PhiFunction e = make_exp_normalized(), q = make_power(1.5);
  double prev = INFINITY;
  for (int k = 1; k <= 6; ++k) {
    const ConvexBody S = orlicz_linear_combination(e, q, K, L, 1, std::pow(10.0, -k));
    const double d = sup_diff(S, K);
    CHECK(d < prev);
    prev = d;
  }
  CHECK(prev < 1e-3);
}

TEST_CASE("compact-set extension") {
  const PhiM phi = PhiM::sum({make_power(2), make_exp_normalized()});
  OrliczSumSpec spec;
  spec.phi = phi;
  const ConvexBody K = poly(150), L = poly(151);
  CHECK(sup_diff(orlicz_sum_compact(spec, {K, L}), orlicz_sum(phi, K, L)) <= 1e-12);
  // L_inf: conv{K u L u o}
  OrliczSumSpec mx;
  mx.phi = PhiM::max(2);
  const ConvexBody A = poly(152, BodyFamily::General), B = poly(153, BodyFamily::General);
  auto v = A.polytope().vertices;
  for (const auto& w : B.polytope().vertices) v.push_back(w);
  v.push_back(Vec::Zero(2));
  CHECK(sup_diff(orlicz_sum_compact(mx, {A, B}), ConvexBody::from_vertices(2, v)) <= 1e-12);
  // points {x}, {y}
  const ConvexBody X = orlicz_sum_compact(spec, std::vector<PointCloud>{{vec2(1, 2)}, {vec2(-1, 0.5)}});
  const ConvexBody Y = orlicz_sum(phi, ConvexBody::segment(Vec::Zero(2), vec2(1, 2)),
                                  ConvexBody::segment(Vec::Zero(2), vec2(-1, 0.5)));
  CHECK(sup_diff(X, Y) <= 1e-12);
}

TEST_CASE("parametric extension") {
  for (const PhiM& phi : {PhiM::power_sum(2), PhiM::sum({make_exp_normalized(), make_power(3)})}) {
    const ExtendedSumSpec ext = extended_spec(phi);
    const ConvexBody K = poly(160), L = poly(161);
    const ParametricResult r = orlicz_sum_parametric(ext, K, L);
    CHECK(r.t_grid == 513);
    CHECK(r.boundary == 256);
    CHECK(hausdorff_distance(r.hull, orlicz_sum(phi, K, L)) < 5e-3);
    // L = {o} gives back K
    const ParametricResult z = orlicz_sum_parametric(ext, K, ConvexBody::origin(2));
    CHECK(hausdorff_distance(z.hull, K) < 1e-9);
  }
  // two points: p-arc between x and y, strictly on the origin side of the chord [x + y]
  const ExtendedSumSpec e2 = extended_spec(PhiM::power_sum(2));
  const Vec x = vec2(1, 0), y = vec2(0.3, 1);
  const ParametricResult r = orlicz_sum_parametric(e2, PointCloud{x}, PointCloud{y});
  int inside = 0;
  for (const auto& p : r.points) {
    Eigen::Matrix2d B;
    B << x[0], y[0], x[1], y[1];
    const Eigen::Vector2d ab = B.inverse() * Eigen::Vector2d(p[0], p[1]);
    CHECK(std::hypot(ab[0], ab[1]) == doctest::Approx(1.0).epsilon(1e-9));
    if (ab[0] > 1e-3 && ab[1] > 1e-3 && ab[0] + ab[1] > 1 + 1e-3) ++inside;
  }
  CHECK(inside > 0);
  // the square: Minkowski addition, or an error when not routed
  const ExtendedSumSpec sq = extended_spec(PhiM::sum({make_power(1), make_power(1)}));
  CHECK(sq.square);
  CHECK_THROWS_AS(orlicz_sum_parametric(sq, poly(162), poly(163), false), Error);
  const ParametricResult m = orlicz_sum_parametric(sq, poly(162), poly(163));
  CHECK(m.square_case);
  CHECK(sup_diff(m.hull, minkowski_sum(poly(162), poly(163))) < 1e-9);
}

TEST_CASE("Wulff shapes") {
  const ConvexBody K = poly(170, BodyFamily::OriginInterior), L = poly(171);
  const DirectionGrid g = DirectionGrid::circle(720).merged(K.hint_normals());
  CHECK(sup_diff(wulff_sum(make_exp_normalized(), K, L, 0, g), K) <= 1e-12);
  const double eps = 0.3;
  const ConvexBody W = wulff_sum(make_power(2), K, L, eps, g);
  const ConvexBody ref = orlicz_sum(PhiM::power_sum(2), K, dilate(L, std::sqrt(eps)));
  for (const auto& u : g.directions()) CHECK(std::fabs(W.support(u) - ref.support(u)) <= 1e-9);
  CHECK_THROWS_AS(wulff_sum(make_power(2), L, K, 0.1), Error);

  // finite-difference volume derivative against sum phi(h_L)/phi'(h_K) over the facets of K
  const PhiFunction e = make_exp_normalized();
  const DiscreteSurfaceMeasure S = surface_area_measure(K);
  double target = 0;
  for (std::size_t i = 0; i < S.normals.size(); ++i)
    target += e(L.support(S.normals[i])) / right_derivative(e, S.support[i]) * S.weights[i];
  const double h = 1e-6;
  const double fd = (volume(wulff_sum(e, K, L, h, g)) - volume(K)) / h;
  CHECK(fd == doctest::Approx(target).epsilon(1e-4));
}

TEST_CASE("naive operation probe") {
  for (const auto& [K, L] : segment_suite(7, 6)) {
    const NaiveProbeResult q = naive_sum_probe(make_power(2), K, L, 5000, 1);
    CHECK(q.is_support_function);
    CHECK(q.defect <= 1e-9);
  }
  double worst = 0;
  for (const auto& [K, L] : segment_suite(99)) worst = std::max(worst, naive_sum_probe(make_exp_normalized(), K, L).defect);
  CHECK(worst > 1e-6);
}

TEST_CASE("associativity and commutativity probes") {
  std::vector<ConvexBody> bodies = {poly(180), poly(181), poly(182)};
  const DirectionGrid g = DirectionGrid::circle(360);
  const PhiFunction e = make_exp_normalized();
  CHECK(associativity_probe(PhiM::sum({e, e}), bodies, g).defect > 1e-6);
  CHECK(associativity_probe(PhiM::power_sum(3), bodies, g).defect < 1e-10);
  CHECK(commutativity_probe(PhiM::sum({e, e}), bodies, g).defect < 1e-10);
  CHECK(commutativity_probe(PhiM::sum({e, make_power(2)}), bodies, g).defect > 1e-6);
}
