#include <doctest.h>

#include <cmath>
#include <random>

#include "qdecay/curvature.hpp"
#include "qdecay/gallery.hpp"
#include "qdecay/log_quantity.hpp"
#include "qdecay/metric.hpp"
#include "qdecay/random.hpp"

using namespace qdecay;

namespace {

Point pt(std::initializer_list<double> xs) {
  Point p(static_cast<int>(xs.size()));
  int i = 0;
  for (double x : xs) p[i++] = x;
  return p;
}

ChartedMetric diag_1_4() {
  return ChartedMetric::from_expression("diag(1,4)", Box::cube(2, -10, 10), pt({0, 0}),
                                        [](const auto& x) {
                                          using S = std::decay_t<decltype(x[0])>;
                                          return std::vector<S>{S(1.0), S(0.0), S(0.0), S(4.0)};
                                        });
}

}  // namespace

TEST_CASE("eval_metric examples") {
  CHECK((eval_metric(flat_metric(2), pt({3.0, -1.5})) - Matrix::Identity(2, 2)).norm() == 0.0);

  const Matrix g = eval_metric(flat_polar_metric(), pt({2.0, 0.3}));
  CHECK(g(0, 0) == doctest::Approx(1.0));
  CHECK(g(1, 1) == doctest::Approx(4.0));
  CHECK(g(0, 1) == 0.0);

  const ScalarField one = ScalarField::from_expression([](const auto&) { return 1.0; });
  const ChartedMetric conf = conformal_metric(flat_metric(2), one, "e^2 flat");
  const Matrix gc = eval_metric(conf, pt({0.4, 0.9}));
  CHECK(gc(0, 0) == doctest::Approx(std::exp(2.0)));
  CHECK(gc(1, 1) == doctest::Approx(std::exp(2.0)));
  CHECK(gc(0, 1) == doctest::Approx(0.0));
}

TEST_CASE("volume_density examples") {
  CHECK(volume_density(flat_metric(3), pt({1, 2, 3})) == doctest::Approx(1.0));
  CHECK(volume_density(flat_polar_metric(), pt({3.0, 1.0})) == doctest::Approx(3.0));
  const ScalarField half = ScalarField::from_expression([](const auto&) { return 0.5; });
  CHECK(volume_density(conformal_metric(flat_metric(2), half, "g"), pt({0, 0})) ==
        doctest::Approx(std::exp(1.0)));
}

TEST_CASE("eval_metric errors") {
  CHECK_THROWS_AS(eval_metric(flat_metric(2, 10.0), pt({11.0, 0.0})), DomainError);

  const ChartedMetric bad = ChartedMetric::from_expression(
      "indefinite", Box::cube(2, -1, 1), pt({0, 0}), [](const auto& x) {
        using S = std::decay_t<decltype(x[0])>;
        return std::vector<S>{S(1.0), S(0.0), S(0.0), S(-1.0)};
      });
  CHECK_THROWS_AS(eval_metric(bad, pt({0.5, 0.5})), MetricValidityError);
  CHECK_THROWS_AS(volume_density(bad, pt({0.5, 0.5})), MetricValidityError);

  const ChartedMetric asym("asym", Box::cube(2, -1, 1), pt({0, 0}), [](const Point&) {
    Matrix g(2, 2);
    g << 1.0, 0.1, 0.0, 1.0;
    return g;
  });
  CHECK_THROWS_AS(eval_metric(asym, pt({0, 0})), MetricValidityError);

  try {
    eval_metric(bad, pt({0.25, -0.5}));
    FAIL("expected a metric-validity error");
  } catch (const MetricValidityError& e) {
    CHECK(std::string(e.what()).find("0.25") != std::string::npos);
  }
}

TEST_CASE("basepoint outside the chart is rejected") {
  CHECK_THROWS_AS(ChartedMetric("m", Box::cube(2, 0, 1), pt({2, 0}),
                                [](const Point&) { return Matrix::Identity(2, 2); }),
                  DomainError);
}

TEST_CASE("orthonormal_plane examples") {
  const ChartedMetric flat = flat_metric(2);
  TwoPlane p = orthonormal_plane(flat, pt({0, 0}), pt({1, 0}), pt({0, 2}));
  CHECK((p.v - pt({1, 0})).norm() < 1e-14);
  CHECK((p.w - pt({0, 1})).norm() < 1e-14);

  p = orthonormal_plane(flat, pt({0, 0}), pt({1, 0}), pt({1, 1}));
  CHECK((p.v - pt({1, 0})).norm() < 1e-14);
  CHECK((p.w - pt({0, 1})).norm() < 1e-14);

  p = orthonormal_plane(diag_1_4(), pt({0, 0}), pt({1, 0}), pt({0, 1}));
  CHECK((p.v - pt({1, 0})).norm() < 1e-14);
  CHECK((p.w - pt({0, 0.5})).norm() < 1e-14);
}

TEST_CASE("orthonormal_plane errors") {
  CHECK_THROWS_AS(orthonormal_plane(flat_metric(2), pt({0, 0}), pt({1, 1}), pt({2, 2})),
                  DegeneracyError);
  CHECK_THROWS_AS(orthonormal_plane(flat_metric(2), pt({0, 0}), pt({0, 0}), pt({1, 0})),
                  DegeneracyError);
  CHECK_THROWS_AS(orthonormal_plane(flat_metric(2), pt({0, 0}), pt({1, 0, 0}), pt({0, 1})),
                  ShapeError);
}

TEST_CASE("property: orthonormal_plane is orthonormal and idempotent") {
  std::mt19937_64 rng = make_stream(7, 0);
  std::normal_distribution<double> normal;
  const ChartedMetric m = example2_plane(2.0);
  for (int k = 0; k < 200; ++k) {
    const Point x = pt({std::uniform_real_distribution<double>(0.5, 50.0)(rng),
                        std::uniform_real_distribution<double>(0.0, 6.0)(rng)});
    const Vector v = pt({normal(rng), normal(rng)}), w = pt({normal(rng), normal(rng)});
    const TwoPlane p = orthonormal_plane(m, x, v, w);
    const Matrix g = eval_metric(m, x);
    CHECK(std::abs(inner(g, p.v, p.v) - 1.0) < 1e-10);
    CHECK(std::abs(inner(g, p.w, p.w) - 1.0) < 1e-10);
    CHECK(std::abs(inner(g, p.v, p.w)) < 1e-10);
    const TwoPlane q = orthonormal_plane(m, x, p.v, p.w);
    CHECK((q.v - p.v).norm() < 1e-12 * std::max(1.0, p.v.norm()));
    CHECK((q.w - p.w).norm() < 1e-12 * std::max(1.0, p.w.norm()));
  }
}

TEST_CASE("property: gallery metrics are symmetric positive definite at random points") {
  std::mt19937_64 rng = make_stream(11, 0);
  auto u = [&](double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); };
  const std::vector<ChartedMetric> metrics{
      flat_metric(3), flat_polar_metric(), round_sphere_metric(), hyperbolic_metric(),
      hyperbolic_horocyclic_metric(), cone_metric(0.3), example2_plane(-2.0),
      example1_end(2.0, BaseSpace::round_sphere(2)), collapse_family(0.7).metric};
  for (const ChartedMetric& m : metrics) {
    const Box& box = m.domain();
    for (int k = 0; k < 1000; ++k) {
      Point x(box.dimension());
      for (int i = 0; i < box.dimension(); ++i) {
        const double lo = std::max(box.lower[i], -50.0), hi = std::min(box.upper[i], 50.0);
        x[i] = u(lo + 1e-3 * (hi - lo), hi - 1e-3 * (hi - lo));
      }
      const Matrix g = m.components(x);
      REQUIRE(((g - g.transpose()).cwiseAbs().maxCoeff()) == 0.0);
      const double lmin = Eigen::SelfAdjointEigenSolver<Matrix>(g).eigenvalues().minCoeff();
      CHECK_MESSAGE(lmin > 1e-12, m.name());
    }
  }
}

TEST_CASE("finite-difference derivatives match jet derivatives") {
  const ChartedMetric exact = example2_plane(2.0);
  const ChartedMetric fd = exact.without_closed_form();
  CHECK(exact.has_closed_form_derivatives());
  CHECK_FALSE(fd.has_closed_form_derivatives());
  const Point x = pt({1000.0, 0.7});
  const MetricDerivatives a = exact.derivatives(x), b = fd.derivatives(x);
  // Rounding in the stencil is relative to |g|, not to the derivative.
  for (int k = 0; k < 2; ++k) CHECK((a.dg[k] - b.dg[k]).norm() <= 1e-6 * std::max(a.dg[k].norm(), a.g.norm()));
  CHECK((a.d2g[0] - b.d2g[0]).norm() <= 1e-5 * a.d2g[0].norm());
}

TEST_CASE("jets carry exact second derivatives") {
  const std::vector<Jet> x = seed_jets(pt({0.5, 2.0}), 2);
  const Jet f = x[0] * x[0] * x[1] + sin(x[1]);
  CHECK(f.v == doctest::Approx(0.5 + std::sin(2.0)));
  CHECK(f.d[0] == doctest::Approx(2.0));
  CHECK(f.d[1] == doctest::Approx(0.25 + std::cos(2.0)));
  CHECK(f.hess(0, 0) == doctest::Approx(4.0));
  CHECK(f.hess(0, 1) == doctest::Approx(1.0));
  CHECK(f.hess(1, 1) == doctest::Approx(-std::sin(2.0)));
}

TEST_CASE("log quantities") {
  const LogQuantity a = LogQuantity::from_log(1000.0), b = LogQuantity::from_log(1000.0 + std::log(3.0));
  CHECK((a + b).log() == doctest::Approx(1000.0 + std::log(4.0)).epsilon(1e-15));
  CHECK((b - a).log() == doctest::Approx(1000.0 + std::log(2.0)).epsilon(1e-15));
  CHECK((a - a).is_zero());
  CHECK((a * b).log() == doctest::Approx(2000.0 + std::log(3.0)));
  CHECK((b / a).to_double() == doctest::Approx(3.0));
  CHECK((a - b).sign() == -1);
  CHECK(a.pow(3.0).log() == doctest::Approx(3000.0));
  CHECK(LogQuantity::from_double(-8.0).pow(1.0 / 3.0 * 3.0).sign() == -1);
  CHECK(LogQuantity().log_magnitude() == -std::numeric_limits<double>::infinity());
  CHECK(std::isinf(LogQuantity::from_log(1000.0).to_double()));

  CHECK_THROWS_AS(LogQuantity::from_log(1.0, 0), ParameterError);
  CHECK_THROWS_AS(LogQuantity::from_log(std::nan("")), ParameterError);
  CHECK_THROWS_AS((-a).log(), DomainError);
  CHECK_THROWS_AS(a / LogQuantity(), DomainError);
  CHECK_THROWS_AS(LogQuantity::from_double(-2.0).pow(0.5), DomainError);
  CHECK_THROWS_AS(LogQuantity().pow(-1.0), DomainError);
}

TEST_CASE("property: log-space sums agree with doubles") {
  std::mt19937_64 rng = make_stream(3, 0);
  std::uniform_real_distribution<double> u(-50.0, 50.0);
  for (int k = 0; k < 500; ++k) {
    const double x = u(rng), y = u(rng);
    const LogQuantity s = LogQuantity::from_double(x) + LogQuantity::from_double(y);
    CHECK(s.to_double() == doctest::Approx(x + y).epsilon(1e-12).scale(std::abs(x) + std::abs(y)));
  }
}

TEST_CASE("random streams are reproducible and distinct per task") {
  std::mt19937_64 a = make_stream(5, 1), b = make_stream(5, 1), c = make_stream(5, 2);
  const auto x = a(), y = b(), z = c();
  CHECK(x == y);
  CHECK(x != z);
}
