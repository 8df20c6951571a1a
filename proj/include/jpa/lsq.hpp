#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "jpa/errors.hpp"

namespace jpa {

struct FitOptions {
  int max_iterations = 200;
  double step_tolerance = 1e-10;   // relative step size that counts as converged
  double damping_init = 1e-3;     // initial Levenberg damping mu
  double damping_growth = 10.0;   // mu multiplier on a rejected step
  double damping_shrink = 10.0;   // mu divisor on an accepted step
  std::vector<double> lower;      // optional per-parameter bounds (empty = unbounded)
  std::vector<double> upper;
  int multistart = 1;                 // perturbed restarts (1 = single start)
  double multistart_spread = 0.03;    // relative sigma of start perturbations
  std::uint64_t seed = 1;             // multistart perturbation seed
  double degeneracy_threshold = 1e8;  // condition number that triggers a warning

  void validate(std::size_t n_params) const;
};

struct FitResult {
  std::vector<double> estimates;
  std::vector<double> std_errors;  // empty unless converged
  double residual_norm = 0.0;      // ||r||_2 at the solution
  bool converged = false;
  int iterations = 0;
  double condition_number = 0.0;  // of J^T J in internally scaled coordinates
  std::vector<std::string> warnings;
};

// Residual map: fills `out` (fixed size) from `params`; returns false when
// the point is outside the model domain (step is rejected).
using ResidualFn = std::function<bool(std::span<const double> params, std::span<double> out)>;

// Damped Gauss-Newton (Levenberg-style schedule) with numeric central-
// difference Jacobians. Parameters are scaled internally by their initial
// magnitudes so conditioning and tolerances are meaningful across mixed SI
// units. Non-convergence is reported via the flag with the best iterate
// retained, not thrown. Deterministic for identical inputs.
FitResult damped_least_squares(const ResidualFn& fn, std::size_t n_residuals,
                               std::vector<double> init, const FitOptions& options = {});

}  // namespace jpa
