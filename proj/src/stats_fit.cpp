#include "wmload/stats_fit.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "json.hpp"

#include "wmload/distributions.hpp"
#include "wmload/error.hpp"

namespace wmload {

ModelSpec default_model(ModelFamily family, std::span<const Point> points) {
  if (family == ModelFamily::Log || points.empty()) {
    return family == ModelFamily::Log ? ModelSpec::log() : ModelSpec::logistic(1.0, 1.0, 0.0);
  }
  double max_y = points.front().y;
  double mean_x = 0.0;
  for (const auto& p : points) {
    max_y = std::max(max_y, p.y);
    mean_x += p.x;
  }
  mean_x /= static_cast<double>(points.size());
  return ModelSpec::logistic(max_y > 0.0 ? 1.1 * max_y : 1.0, 1.0, mean_x);
}

double model_value(ModelFamily family, std::span<const double> params, double x) {
  if (family == ModelFamily::Log) {
    return params[0] + params[1] * std::log(x);
  }
  return params[0] / (1.0 + std::exp(-params[1] * (x - params[2])));
}

void model_gradient(ModelFamily family, std::span<const double> params, double x,
                    std::span<double> out) {
  if (family == ModelFamily::Log) {
    out[0] = 1.0;
    out[1] = std::log(x);
    return;
  }
  const double L = params[0];
  const double k = params[1];
  const double dx = x - params[2];
  const double e = std::exp(-k * dx);
  const double denom = 1.0 + e;
  const double s = 1.0 / denom;
  // e / (1 + e)^2 written as s (1 - s) to stay finite when e overflows.
  const double ds = s * (1.0 - s);
  out[0] = s;
  out[1] = L * ds * dx;
  out[2] = -L * ds * k;
}

namespace {

void check_inputs(std::span<const Point> points, const ModelSpec& model) {
  const std::size_t p = model.param_count();
  if (model.initial.size() != p) {
    throw DomainError("model needs " + std::to_string(p) + " initial parameters");
  }
  if (points.size() <= p) {
    throw DomainError("need more points than parameters");
  }
  for (const auto& pt : points) {
    if (!std::isfinite(pt.x) || !std::isfinite(pt.y)) {
      throw DomainError("non-finite data point");
    }
    if (model.family == ModelFamily::Log && !(pt.x > 0.0)) {
      throw DomainError("log model requires x > 0");
    }
  }
  if (model.family == ModelFamily::Logistic && !(model.initial[0] > 0.0)) {
    throw DomainError("logistic model requires L > 0 at the start");
  }
}

double sum_squares(std::span<const Point> points, ModelFamily family,
                   const Eigen::VectorXd& params) {
  const std::span<const double> view(params.data(), static_cast<std::size_t>(params.size()));
  double sse = 0.0;
  for (const auto& pt : points) {
    const double r = pt.y - model_value(family, view, pt.x);
    sse += r * r;
  }
  return sse;
}

}  // namespace

FitResult fit(std::span<const Point> points, const ModelSpec& model, const FitOptions& options) {
  check_inputs(points, model);
  const auto n = static_cast<Eigen::Index>(points.size());
  const auto p = static_cast<Eigen::Index>(model.param_count());

  Eigen::VectorXd params =
      Eigen::Map<const Eigen::VectorXd>(model.initial.data(), p);
  double sse = sum_squares(points, model.family, params);

  Eigen::MatrixXd jac(n, p);
  Eigen::VectorXd resid(n);
  std::vector<double> row(static_cast<std::size_t>(p));

  FitResult result;
  int iter = 0;
  while (iter < options.max_iter && !result.converged) {
    ++iter;
    const std::span<const double> view(params.data(), static_cast<std::size_t>(p));
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto& pt = points[static_cast<std::size_t>(i)];
      resid(i) = pt.y - model_value(model.family, view, pt.x);
      model_gradient(model.family, view, pt.x, row);
      for (Eigen::Index j = 0; j < p; ++j) jac(i, j) = row[static_cast<std::size_t>(j)];
    }
    if (!jac.allFinite() || !resid.allFinite()) {
      throw FitError(0, "model evaluation produced non-finite values");
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(jac);
    if (qr.rank() < p) {
      throw FitError(static_cast<int>(qr.rank()), "singular normal equations");
    }
    const Eigen::VectorXd step = qr.solve(resid);

    double scale = 1.0;
    Eigen::VectorXd trial = params + step;
    double trial_sse = sum_squares(points, model.family, trial);
    int halvings = 0;
    while (!(trial_sse <= sse) && halvings < options.max_halvings) {
      scale *= 0.5;
      ++halvings;
      trial = params + scale * step;
      trial_sse = sum_squares(points, model.family, trial);
    }
    if (!(trial_sse <= sse)) {
      // No descent along the Gauss-Newton direction at 2^-max_halvings:
      // stationary to working precision.
      result.converged = true;
      break;
    }
    const double drop = sse - trial_sse;
    params = trial;
    sse = trial_sse;
    if (sse == 0.0 || drop <= options.tol * (sse + drop)) {
      result.converged = true;
    }
  }

  result.params.assign(params.data(), params.data() + p);
  result.iterations = iter;
  result.sse = sse;

  double mean_y = 0.0;
  for (const auto& pt : points) mean_y += pt.y;
  mean_y /= static_cast<double>(n);
  double sst = 0.0;
  for (const auto& pt : points) sst += (pt.y - mean_y) * (pt.y - mean_y);
  result.sst = sst;
  if (sst > 0.0) {
    result.r_squared = 1.0 - sse / sst;
  } else {
    result.r_squared = sse == 0.0 ? 1.0 : 0.0;
  }

  result.df_model = static_cast<int>(p) - 1;
  result.df_error = static_cast<int>(n - p);
  const double explained = std::max(0.0, sst - sse);
  if (sse > 0.0) {
    result.f_stat = (explained / result.df_model) / (sse / result.df_error);
  } else {
    result.f_stat = explained > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  }
  result.p_value = f_p_value(result.f_stat, result.df_model, result.df_error);
  return result;
}

std::string to_json(const FitResult& result) {
  nlohmann::ordered_json j;
  j["params"] = result.params;
  j["sse"] = result.sse;
  j["sst"] = result.sst;
  j["r_squared"] = result.r_squared;
  if (std::isfinite(result.f_stat)) {
    j["f_stat"] = result.f_stat;
  } else {
    j["f_stat"] = nullptr;
  }
  j["df_model"] = result.df_model;
  j["df_error"] = result.df_error;
  j["p_value"] = result.p_value;
  j["converged"] = result.converged;
  j["iterations"] = result.iterations;
  return j.dump(2) + "\n";
}

}  // namespace wmload
