#include "jpa/lsq.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "jpa/rng.hpp"

namespace jpa {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void clamp_to_bounds(std::vector<double>& x, const std::vector<double>& lo,
                     const std::vector<double>& hi) {
  if (!lo.empty()) {
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::max(x[i], lo[i]);
  }
  if (!hi.empty()) {
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::min(x[i], hi[i]);
  }
}

struct ScaledProblem {
  const ResidualFn* fn;
  std::size_t m;
  std::vector<double> scale;   // |init| per parameter (1 for zero inits)
  std::vector<double> lo, hi;  // scaled bounds, possibly empty

  // Evaluates residuals at scaled coordinates; false when invalid/non-finite.
  bool eval(const std::vector<double>& xs, std::vector<double>& r) const {
    std::vector<double> phys(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) phys[i] = xs[i] * scale[i];
    r.resize(m);
    if (!(*fn)(phys, r)) return false;
    for (double v : r) {
      if (!std::isfinite(v)) return false;
    }
    return true;
  }

  // Central-difference Jacobian; falls back to one-sided differences when a
  // probe point leaves the model domain.
  bool jacobian(const std::vector<double>& xs, const std::vector<double>& r0,
                Eigen::MatrixXd& J) const {
    const std::size_t n = xs.size();
    J.resize(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n));
    std::vector<double> xp = xs, rp(m), rm(m);
    for (std::size_t j = 0; j < n; ++j) {
      const double h = 1e-6 * std::max(std::abs(xs[j]), 1.0);
      xp[j] = xs[j] + h;
      const bool ok_p = eval(xp, rp);
      xp[j] = xs[j] - h;
      const bool ok_m = eval(xp, rm);
      xp[j] = xs[j];
      if (ok_p && ok_m) {
        for (std::size_t i = 0; i < m; ++i) {
          J(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
              (rp[i] - rm[i]) / (2.0 * h);
        }
      } else if (ok_p) {
        for (std::size_t i = 0; i < m; ++i) {
          J(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = (rp[i] - r0[i]) / h;
        }
      } else if (ok_m) {
        for (std::size_t i = 0; i < m; ++i) {
          J(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = (r0[i] - rm[i]) / h;
        }
      } else {
        return false;
      }
    }
    return true;
  }
};

FitResult run_single_start(const ScaledProblem& prob, std::vector<double> xs,
                           const FitOptions& opt) {
  FitResult res;
  const std::size_t n = xs.size();
  std::vector<double> r(prob.m);
  clamp_to_bounds(xs, prob.lo, prob.hi);
  if (!prob.eval(xs, r)) {
    res.warnings.push_back("residual map invalid at the initial point");
    res.estimates = xs;
    for (std::size_t i = 0; i < n; ++i) res.estimates[i] *= prob.scale[i];
    res.residual_norm = kInf;
    return res;
  }

  Eigen::VectorXd rv = Eigen::Map<Eigen::VectorXd>(r.data(), static_cast<Eigen::Index>(prob.m));
  double cost = rv.squaredNorm();
  Eigen::MatrixXd J;
  bool have_jacobian = false;
  double mu = opt.damping_init;
  int rejected_in_a_row = 0;
  bool jacobian_failed = false;

  int iter = 0;
  for (; iter < opt.max_iterations; ++iter) {
    if (cost == 0.0) {
      res.converged = true;
      break;
    }
    if (!have_jacobian) {
      if (!prob.jacobian(xs, r, J)) {
        jacobian_failed = true;
        break;
      }
      have_jacobian = true;
    }
    const Eigen::MatrixXd jtj = J.transpose() * J;
    const Eigen::VectorXd jtr = J.transpose() * rv;
    Eigen::VectorXd diag = jtj.diagonal();
    const double max_diag = std::max(diag.maxCoeff(), 1e-300);
    for (Eigen::Index k = 0; k < diag.size(); ++k) {
      diag[k] = std::max(diag[k], 1e-14 * max_diag);
    }
    Eigen::MatrixXd a = jtj;
    a.diagonal() += mu * diag;
    const Eigen::VectorXd step = a.ldlt().solve(-jtr);
    if (!step.allFinite()) {
      mu *= opt.damping_growth;
      if (++rejected_in_a_row > 60) break;
      continue;
    }

    std::vector<double> xs_new(n);
    for (std::size_t i = 0; i < n; ++i) xs_new[i] = xs[i] + step[static_cast<Eigen::Index>(i)];
    clamp_to_bounds(xs_new, prob.lo, prob.hi);

    // A negligible proposal means no meaningful move remains at the current
    // damping: converged whether or not it happens to lower the cost. This is
    // what ends a fit sitting in a noise-flat or degenerate valley, where
    // larger trial steps keep being rejected.
    double step_norm = 0.0, x_norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      step_norm += (xs_new[i] - xs[i]) * (xs_new[i] - xs[i]);
      x_norm += xs_new[i] * xs_new[i];
    }
    const bool negligible =
        std::sqrt(step_norm) < opt.step_tolerance * (1.0 + std::sqrt(x_norm));

    std::vector<double> r_new(prob.m);
    double cost_new = kInf;
    if (prob.eval(xs_new, r_new)) {
      cost_new = Eigen::Map<Eigen::VectorXd>(r_new.data(), static_cast<Eigen::Index>(prob.m))
                     .squaredNorm();
    }

    if (cost_new < cost) {
      xs = std::move(xs_new);
      r = std::move(r_new);
      rv = Eigen::Map<Eigen::VectorXd>(r.data(), static_cast<Eigen::Index>(prob.m));
      cost = cost_new;
      have_jacobian = false;
      rejected_in_a_row = 0;
      mu = std::max(mu / opt.damping_shrink, 1e-15);
      if (negligible) {
        res.converged = true;
        ++iter;
        break;
      }
    } else if (negligible) {
      res.converged = true;
      ++iter;
      break;
    } else {
      mu *= opt.damping_growth;
      if (++rejected_in_a_row > 60) break;  // stalled against damping growth
    }
  }
  res.iterations = iter;

  res.estimates.resize(n);
  for (std::size_t i = 0; i < n; ++i) res.estimates[i] = xs[i] * prob.scale[i];
  res.residual_norm = std::sqrt(cost);
  if (jacobian_failed) {
    res.warnings.push_back("Jacobian evaluation left the model domain; fit aborted");
    return res;
  }
  if (!res.converged && iter >= opt.max_iterations) {
    res.warnings.push_back("no convergence within " + std::to_string(opt.max_iterations) +
                           " iterations; best iterate returned");
  } else if (!res.converged) {
    res.warnings.push_back("step search stalled; best iterate returned");
  }

  // Covariance diagnostics at the solution (scaled coordinates, then mapped
  // back): pseudo-inverse of J^T J via SVD of J.
  if (!have_jacobian && !prob.jacobian(xs, r, J)) {
    res.warnings.push_back("Jacobian unavailable at the solution; no uncertainties reported");
    return res;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(J, Eigen::ComputeThinV);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double s_max = sv.size() > 0 ? sv[0] : 0.0;
  const double s_min = sv.size() > 0 ? sv[sv.size() - 1] : 0.0;
  res.condition_number =
      (s_min > 0.0) ? (s_max / s_min) * (s_max / s_min) : kInf;
  if (res.condition_number > opt.degeneracy_threshold) {
    // Name the flat direction so the caller can see which combination of
    // parameters the data fails to separate.
    std::ostringstream oss;
    oss << "degenerate parameter combination (condition number "
        << res.condition_number << "); weakest direction:";
    const Eigen::VectorXd v = svd.matrixV().col(sv.size() - 1);
    for (Eigen::Index k = 0; k < v.size(); ++k) {
      oss << (k ? " " : " ") << (v[k] >= 0 ? "+" : "-") << std::abs(v[k]) << "*p" << k;
    }
    res.warnings.push_back(oss.str());
  }

  if (res.converged) {
    const double dof = static_cast<double>(prob.m) - static_cast<double>(n);
    const double sigma2 = dof > 0.0 ? cost / dof : 0.0;
    const double tol = std::numeric_limits<double>::epsilon() * s_max *
                       static_cast<double>(std::max(prob.m, n));
    res.std_errors.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      double var = 0.0;
      for (Eigen::Index k = 0; k < sv.size(); ++k) {
        if (sv[k] > tol) {
          const double vik = svd.matrixV()(static_cast<Eigen::Index>(i), k);
          var += vik * vik / (sv[k] * sv[k]);
        }
      }
      res.std_errors[i] = std::sqrt(sigma2 * var) * prob.scale[i];
    }
  }
  return res;
}

}  // namespace

void FitOptions::validate(std::size_t n_params) const {
  if (max_iterations <= 0) throw validation_error("max_iterations must be positive");
  if (!(step_tolerance > 0.0) || !(damping_init > 0.0) || damping_growth <= 1.0 ||
      damping_shrink <= 1.0) {
    throw validation_error("fit tolerances/damping factors must be positive (growth/shrink > 1)");
  }
  if (!lower.empty() && lower.size() != n_params) {
    throw validation_error("lower bounds size does not match parameter count");
  }
  if (!upper.empty() && upper.size() != n_params) {
    throw validation_error("upper bounds size does not match parameter count");
  }
  if (!lower.empty() && !upper.empty()) {
    for (std::size_t i = 0; i < n_params; ++i) {
      if (lower[i] > upper[i]) throw validation_error("inconsistent bounds (lower > upper)");
    }
  }
  if (multistart < 1) throw validation_error("multistart must be >= 1");
  if (multistart_spread < 0.0) throw validation_error("multistart_spread must be >= 0");
}

FitResult damped_least_squares(const ResidualFn& fn, std::size_t n_residuals,
                               std::vector<double> init, const FitOptions& options) {
  if (init.empty()) throw validation_error("no parameters to fit");
  if (n_residuals < init.size()) {
    throw validation_error("residual count " + std::to_string(n_residuals) +
                           " is below the parameter count " + std::to_string(init.size()));
  }
  options.validate(init.size());

  ScaledProblem prob;
  prob.fn = &fn;
  prob.m = n_residuals;
  prob.scale.resize(init.size());
  for (std::size_t i = 0; i < init.size(); ++i) {
    prob.scale[i] = std::abs(init[i]) > 0.0 ? std::abs(init[i]) : 1.0;
  }
  if (!options.lower.empty()) {
    prob.lo.resize(init.size());
    for (std::size_t i = 0; i < init.size(); ++i) prob.lo[i] = options.lower[i] / prob.scale[i];
  }
  if (!options.upper.empty()) {
    prob.hi.resize(init.size());
    for (std::size_t i = 0; i < init.size(); ++i) prob.hi[i] = options.upper[i] / prob.scale[i];
  }

  std::vector<double> xs0(init.size());
  for (std::size_t i = 0; i < init.size(); ++i) xs0[i] = init[i] / prob.scale[i];

  // Perturbed starts are drawn up front from one seeded stream so the result
  // is identical however the starts are scheduled.
  std::vector<std::vector<double>> starts{xs0};
  GaussianRng rng(options.seed);
  for (int k = 1; k < options.multistart; ++k) {
    std::vector<double> xs = xs0;
    for (double& x : xs) x *= 1.0 + options.multistart_spread * rng.gaussian();
    clamp_to_bounds(xs, prob.lo, prob.hi);
    starts.push_back(std::move(xs));
  }

  std::vector<FitResult> results(starts.size());
  const std::ptrdiff_t n_starts = static_cast<std::ptrdiff_t>(starts.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t k = 0; k < n_starts; ++k) {
    results[k] = run_single_start(prob, starts[k], options);
  }

  std::size_t best = 0;
  for (std::size_t k = 1; k < results.size(); ++k) {
    const auto key = [](const FitResult& fr) {
      return std::make_pair(!fr.converged, fr.residual_norm);
    };
    if (key(results[k]) < key(results[best])) best = k;
  }
  return results[best];
}

}  // namespace jpa
