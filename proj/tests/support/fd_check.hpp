#pragma once

// Central finite-difference oracle for analytic gradients. Lives in test code
// only; independent of every backward implementation it checks.

#include <cmath>
#include <functional>
#include <string>

#include "gatsac/nn/param_store.hpp"

namespace testsupport {

struct FdReport {
  double max_rel_err = 0.0;
  std::string worst_param;
  int checked = 0;
};

// Relative error with an absolute-tolerance floor: central differences carry
// cancellation noise around eps*|L|/h (~1e-10 here), so coordinates whose
// true gradient sits below 1e-4 are compared absolutely at the 1e-8 level
// instead of relatively.
inline double rel_err(double a, double b) {
  const double denom = std::max({std::fabs(a), std::fabs(b), 1e-4});
  return std::fabs(a - b) / denom;
}

// loss() must be a pure function of the store's current values. grads must
// already hold the analytic gradient of loss() at the unperturbed point.
// stride > 1 checks a deterministic subsample of coordinates.
inline FdReport fd_check(gatsac::nn::ParamStore& store,
                         const std::function<double()>& loss, double h = 1e-5,
                         int stride = 1) {
  FdReport rep;
  for (auto& p : store.params()) {
    for (std::size_t i = 0; i < p.value.data.size(); i += static_cast<std::size_t>(stride)) {
      const double saved = p.value.data[i];
      p.value.data[i] = saved + h;
      const double up = loss();
      p.value.data[i] = saved - h;
      const double down = loss();
      p.value.data[i] = saved;
      const double fd = (up - down) / (2.0 * h);
      const double err = rel_err(fd, p.grad.data[i]);
      ++rep.checked;
      if (err > rep.max_rel_err) {
        rep.max_rel_err = err;
        rep.worst_param = p.name + "[" + std::to_string(i) + "]";
      }
    }
  }
  return rep;
}

}  // namespace testsupport
