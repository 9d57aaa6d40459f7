#include "doctest.h"

#include <cmath>
#include <fstream>
#include <random>

#include "json.hpp"
#include "wmload/csv.hpp"
#include "wmload/error.hpp"
#include "wmload/stats_fit.hpp"

using namespace wmload;

namespace {

std::vector<Point> synthetic7() {
  std::ifstream in(WMLOAD_FIXTURE_DIR "/points7.csv");
  const auto cols = read_numeric_csv(in, {"x", "y"});
  std::vector<Point> pts;
  for (std::size_t i = 0; i < cols[0].size(); ++i) pts.push_back({cols[0][i], cols[1][i]});
  return pts;
}

double sse_at(std::span<const Point> pts, double a, double b) {
  double s = 0.0;
  for (const auto& p : pts) {
    const double r = p.y - (a + b * std::log(p.x));
    s += r * r;
  }
  return s;
}

// Coarse grid followed by repeated zooming around the best cell.
double grid_min_sse(std::span<const Point> pts) {
  double ca = 0.0, cb = 0.0, half = 50.0;
  double best = std::numeric_limits<double>::infinity();
  for (int level = 0; level < 40; ++level) {
    double ba = ca, bb = cb;
    for (int i = -20; i <= 20; ++i) {
      for (int j = -20; j <= 20; ++j) {
        const double a = ca + half * i / 20.0;
        const double b = cb + half * j / 20.0;
        const double s = sse_at(pts, a, b);
        if (s < best) {
          best = s;
          ba = a;
          bb = b;
        }
      }
    }
    ca = ba;
    cb = bb;
    half /= 4.0;
  }
  return best;
}

}  // namespace

TEST_CASE("exact log data is recovered") {
  std::vector<Point> pts;
  for (int x = 1; x <= 7; ++x) pts.push_back({double(x), 2.0 + std::log(double(x))});
  const FitResult r = fit(pts, ModelSpec::log(-3.0, 5.0));
  CHECK(r.converged);
  REQUIRE(r.params.size() == 2);
  CHECK(r.params[0] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(r.params[1] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.sse < 1e-24);
  CHECK(r.r_squared == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.df_model == 1);
  CHECK(r.df_error == 5);
  CHECK(r.p_value < 1e-6);
}

TEST_CASE("synthetic seven-point set: R^2 0.746 gives F = 0.746 * 5 / 0.254") {
  const FitResult r = fit(synthetic7(), ModelSpec::log());
  CHECK(r.converged);
  CHECK(r.r_squared == doctest::Approx(0.746).epsilon(1e-12));
  CHECK(r.f_stat == doctest::Approx(0.746 * 5 / 0.254).epsilon(1e-10));
  CHECK(std::fabs(r.f_stat - 14.69) / 14.69 < 0.005);
  CHECK(r.p_value < 0.05);
  CHECK(r.params[0] == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(r.params[1] == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("analytic gradients match central differences") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (ModelFamily family : {ModelFamily::Log, ModelFamily::Logistic}) {
    const std::size_t p = family == ModelFamily::Log ? 2 : 3;
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<double> params(p);
      for (auto& v : params) v = u(rng);
      if (family == ModelFamily::Logistic) params[0] = 1.0 + std::fabs(params[0]) * 3.0;
      const double x = 0.5 + 3.0 * (u(rng) + 2.0);
      std::vector<double> grad(p);
      model_gradient(family, params, x, grad);
      for (std::size_t j = 0; j < p; ++j) {
        auto hi = params;
        auto lo = params;
        hi[j] += 1e-6;
        lo[j] -= 1e-6;
        const double fd = (model_value(family, hi, x) - model_value(family, lo, x)) / 2e-6;
        CHECK(std::fabs(fd - grad[j]) < 1e-6);
      }
    }
  }
}

TEST_CASE("fit SSE matches a dense grid search") {
  std::mt19937_64 rng(99);
  std::normal_distribution<double> noise(0.0, 0.4);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 3 + trial % 8;
    std::vector<Point> pts;
    for (int i = 1; i <= n; ++i) pts.push_back({double(i), 1.5 + 0.8 * std::log(double(i)) + noise(rng)});
    const FitResult r = fit(pts, ModelSpec::log());
    CHECK(std::fabs(r.sse - grid_min_sse(pts)) < 1e-8);
  }
}

TEST_CASE("scaling y scales the log parameters and keeps R^2") {
  const auto pts = synthetic7();
  const FitResult base = fit(pts, ModelSpec::log());
  for (double c : {0.1, 3.0, -2.5}) {
    std::vector<Point> scaled = pts;
    for (auto& p : scaled) p.y *= c;
    const FitResult r = fit(scaled, ModelSpec::log());
    CHECK(r.params[0] == doctest::Approx(c * base.params[0]).epsilon(1e-9));
    CHECK(r.params[1] == doctest::Approx(c * base.params[1]).epsilon(1e-9));
    CHECK(r.r_squared == doctest::Approx(base.r_squared).epsilon(1e-9));
  }
}

TEST_CASE("logistic recovery") {
  std::vector<Point> pts;
  for (int i = 0; i <= 20; ++i) {
    const double x = 3.0 + 0.35 * i;
    pts.push_back({x, 4.2 / (1.0 + std::exp(-1.3 * (x - 6.0)))});
  }
  const FitResult r = fit(pts, default_model(ModelFamily::Logistic, pts));
  CHECK(r.converged);
  CHECK(r.params[0] == doctest::Approx(4.2).epsilon(1e-7));
  CHECK(r.params[1] == doctest::Approx(1.3).epsilon(1e-7));
  CHECK(r.params[2] == doctest::Approx(6.0).epsilon(1e-7));
  CHECK(r.df_model == 2);
}

TEST_CASE("fit input errors") {
  const std::vector<Point> two{{1, 1}, {2, 2}};
  CHECK_THROWS_AS(fit(two, ModelSpec::log()), DomainError);
  const std::vector<Point> nonpositive{{0, 1}, {1, 2}, {2, 3}};
  CHECK_THROWS_AS(fit(nonpositive, ModelSpec::log()), DomainError);
  const std::vector<Point> four{{1, 1}, {2, 2}, {3, 2}, {4, 3}};
  CHECK_THROWS_AS(fit(four, ModelSpec::logistic(-1.0, 1.0, 2.0)), DomainError);
  CHECK_THROWS_AS(fit(four, ModelSpec{ModelFamily::Log, {1.0}}), DomainError);
  // Every x equal: ln x column is constant, the Jacobian has rank 1.
  const std::vector<Point> same_x{{2, 1}, {2, 2}, {2, 3}};
  try {
    fit(same_x, ModelSpec::log());
    FAIL("expected FitError");
  } catch (const FitError& e) {
    CHECK(e.rank() == 1);
  }
}

TEST_CASE("non-convergence reports best-so-far parameters") {
  const FitResult r = fit(synthetic7(), ModelSpec::log(), FitOptions{1e-10, 1, 30});
  CHECK_FALSE(r.converged);
  CHECK(r.iterations == 1);
  CHECK(r.params.size() == 2);
}

TEST_CASE("json serialization keeps field order") {
  const FitResult r = fit(synthetic7(), ModelSpec::log());
  const std::string text = to_json(r);
  const auto j = nlohmann::ordered_json::parse(text);
  std::vector<std::string> keys;
  for (const auto& [k, v] : j.items()) keys.push_back(k);
  CHECK(keys == std::vector<std::string>{"params", "sse", "sst", "r_squared", "f_stat",
                                         "df_model", "df_error", "p_value", "converged",
                                         "iterations"});
  CHECK(j["f_stat"].get<double>() == doctest::Approx(r.f_stat));
  CHECK(to_json(r) == text);

  FitResult exact = r;
  exact.f_stat = std::numeric_limits<double>::infinity();
  CHECK(nlohmann::json::parse(to_json(exact))["f_stat"].is_null());
}
