#pragma once

#include <span>
#include <string>
#include <vector>

namespace wmload {

enum class ModelFamily {
  Log,       // y = a + b ln x
  Logistic,  // y = L / (1 + exp(-k (x - x0)))
};

struct ModelSpec {
  ModelFamily family = ModelFamily::Log;
  std::vector<double> initial;

  static ModelSpec log(double a = 0.0, double b = 1.0) { return {ModelFamily::Log, {a, b}}; }
  static ModelSpec logistic(double L, double k, double x0) {
    return {ModelFamily::Logistic, {L, k, x0}};
  }

  std::size_t param_count() const noexcept { return family == ModelFamily::Log ? 2 : 3; }
};

struct Point {
  double x = 0.0;
  double y = 0.0;
};

// Logistic start derived from the data: L = 1.1 max y, k = 1, x0 = mean x.
ModelSpec default_model(ModelFamily family, std::span<const Point> points);

double model_value(ModelFamily family, std::span<const double> params, double x);

// d model / d params at x, written into `out` (size param count).
void model_gradient(ModelFamily family, std::span<const double> params, double x,
                    std::span<double> out);

struct FitOptions {
  double tol = 1e-10;  // relative SSE change that ends the descent
  int max_iter = 200;
  int max_halvings = 30;
};

struct FitResult {
  std::vector<double> params;
  double sse = 0.0;
  double sst = 0.0;
  double r_squared = 0.0;
  double f_stat = 0.0;  // +inf for an exact fit
  int df_model = 0;
  int df_error = 0;
  double p_value = 1.0;
  bool converged = false;
  int iterations = 0;
};

// Damped Gauss-Newton on the sum of squared residuals. Throws DomainError
// when the data cannot support the model (too few points, x <= 0 for the
// log model, L <= 0 start for the logistic) and FitError when the Jacobian
// loses rank.
FitResult fit(std::span<const Point> points, const ModelSpec& model,
              const FitOptions& options = {});

// Flat JSON object, keys in FitResult declaration order. A non-finite
// f_stat is written as null.
std::string to_json(const FitResult& result);

}  // namespace wmload
