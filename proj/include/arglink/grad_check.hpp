#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "arglink/tensor.hpp"

namespace arglink {

/// Named mutable view of one parameter tensor.
struct ParamRef {
  std::string name;
  Tensor* tensor;
};

using GradMap = std::map<std::string, Tensor>;

struct GradCheckReport {
  double max_rel_error = 0.0;
  std::string worst_param;
  std::size_t worst_index = 0;
  double worst_analytic = 0.0;
  double worst_numeric = 0.0;
};

/// Central-difference check of an analytic gradient. For every entry of every
/// parameter, perturbs by +/- eps, evaluates f, and compares
/// (f+ - f-) / (2 eps) against the supplied analytic value using
/// |a - n| / max(1e-8, |a| + |n|). Returns the worst entry found.
inline GradCheckReport grad_check(const std::function<double()>& f,
                                  const std::vector<ParamRef>& params,
                                  const GradMap& analytic_grads, double eps = 1e-5) {
  if (eps <= 0.0) throw std::invalid_argument("grad_check: eps must be positive");
  GradCheckReport report;
  for (const ParamRef& p : params) {
    auto it = analytic_grads.find(p.name);
    if (it == analytic_grads.end()) {
      throw std::invalid_argument("grad_check: no analytic gradient for parameter '" + p.name +
                                  "'");
    }
    const Tensor& grad = it->second;
    require_same_shape(*p.tensor, grad, "grad_check");
    for (std::size_t i = 0; i < p.tensor->size(); ++i) {
      const double saved = (*p.tensor)[i];
      (*p.tensor)[i] = saved + eps;
      const double up = f();
      (*p.tensor)[i] = saved - eps;
      const double down = f();
      (*p.tensor)[i] = saved;
      if (!std::isfinite(up) || !std::isfinite(down)) {
        throw std::runtime_error("grad_check: non-finite loss while perturbing '" + p.name + "'");
      }
      const double numeric = (up - down) / (2.0 * eps);
      const double analytic = grad[i];
      const double rel =
          std::fabs(analytic - numeric) / std::max(1e-8, std::fabs(analytic) + std::fabs(numeric));
      if (rel > report.max_rel_error) {
        report.max_rel_error = rel;
        report.worst_param = p.name;
        report.worst_index = i;
        report.worst_analytic = analytic;
        report.worst_numeric = numeric;
      }
    }
  }
  return report;
}

}  // namespace arglink
