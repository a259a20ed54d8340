#include "qccilc/optimize.hpp"

#include <ceres/ceres.h>

#include <algorithm>
#include <cmath>

namespace qccilc {

namespace {

class CeresObjective final : public ceres::FirstOrderFunction {
 public:
  CeresObjective(const Objective& f, int n) : f_(f), n_(n), x_(static_cast<std::size_t>(n)) {}

  bool Evaluate(const double* parameters, double* cost, double* gradient) const override {
    std::copy(parameters, parameters + n_, x_.begin());
    if (gradient) {
      grad_.assign(static_cast<std::size_t>(n_), 0.0);
      *cost = f_(x_, &grad_);
      std::copy(grad_.begin(), grad_.end(), gradient);
    } else {
      *cost = f_(x_, nullptr);
    }
    return std::isfinite(*cost);
  }
  int NumParameters() const override { return n_; }

 private:
  const Objective& f_;
  int n_;
  mutable std::vector<double> x_;
  mutable std::vector<double> grad_;
};

}  // namespace

LbfgsResult minimize_lbfgs(const Objective& f, std::vector<double> x0, const LbfgsOptions& options) {
  LbfgsResult result;
  const double f0 = f(x0, nullptr);
  if (x0.empty()) {
    result.x = std::move(x0);
    result.value = f0;
    result.converged = true;
    result.message = "no parameters";
    return result;
  }

  std::vector<double> x = x0;
  ceres::GradientProblem problem(new CeresObjective(f, static_cast<int>(x.size())));
  ceres::GradientProblemSolver::Options opts;
  opts.line_search_direction_type = ceres::LBFGS;
  opts.max_num_iterations = options.max_iterations;
  opts.gradient_tolerance = options.gradient_tolerance;
  opts.function_tolerance = options.function_tolerance;
  opts.parameter_tolerance = options.parameter_tolerance;
  opts.logging_type = ceres::SILENT;
  opts.minimizer_progress_to_stdout = false;
  ceres::GradientProblemSolver::Summary summary;
  ceres::Solve(opts, problem, x.data(), &summary);

  const double fx = f(x, nullptr);
  result.iterations = static_cast<int>(summary.iterations.size());
  result.message = summary.message;
  if (!(fx <= f0)) {
    result.x = std::move(x0);
    result.value = f0;
  } else {
    result.x = std::move(x);
    result.value = fx;
  }
  if (summary.termination_type == ceres::CONVERGENCE) {
    result.converged = true;
  } else {
    // Line searches can stall at machine precision; accept when the gradient is small.
    std::vector<double> g(result.x.size());
    f(result.x, &g);
    double gmax = 0;
    for (double v : g) gmax = std::max(gmax, std::abs(v));
    result.converged = gmax <= std::max(options.gradient_tolerance, 1e-7);
  }
  return result;
}

}  // namespace qccilc
