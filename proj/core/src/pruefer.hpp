#pragma once

// Pruefer form u = r sin(theta), p u' = r cos(theta) of -(p u')' + (q - lambda w) u = 0:
//   theta'  = cos^2(theta) / p - G sin^2(theta)
//   (ln r)' = sin(theta) cos(theta) (1/p + G),      G = q - lambda w.

#include "wavemap/frobenius.hpp"
#include "wavemap/odeint.hpp"
#include "wavemap/slp.hpp"

namespace wavemap::detail {

struct PrueferStart {
  double rho = 0.0;
  double theta = 0.0;
  double log_r = 0.0;
  frobenius::FrobeniusExpansion series;
};

odeint::RightHandSide pruefer_rhs(const SLProblem& prob, double lambda);

double left_start_offset(const SLProblem& prob, double eps, double mu);
double right_start_offset(double eps, double mu);

/// Regular solution u ~ rho^l at rho = eps_left.
PrueferStart left_start(const SLProblem& prob, double mu, double offset, int order);
/// Recessive solution u ~ (1 - rho)^((1 + mu)/2) at rho = 1 - offset.
PrueferStart right_start(const SLProblem& prob, double mu, double offset, int order);

/// Integrates (theta, ln r) from the start to `to`.
odeint::DenseSolution integrate_pruefer(const SLProblem& prob, double mu, const PrueferStart& start, double to,
                                        double rel_tol, double abs_tol, bool dense);

}  // namespace wavemap::detail
