#pragma once

#include <functional>
#include <string>
#include <vector>

namespace qccilc {

/// Returns f(x); fills *grad (same length as x) when grad is non-null.
using Objective = std::function<double(const std::vector<double>& x, std::vector<double>* grad)>;

struct LbfgsOptions {
  int max_iterations = 500;
  double gradient_tolerance = 1e-8;
  double function_tolerance = 1e-15;
  double parameter_tolerance = 1e-15;
};

struct LbfgsResult {
  std::vector<double> x;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
  std::string message;
};

/// Unconstrained limited-memory BFGS. Never returns a point worse than x0.
LbfgsResult minimize_lbfgs(const Objective& f, std::vector<double> x0, const LbfgsOptions& options = {});

}  // namespace qccilc
