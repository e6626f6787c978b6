#pragma once

// Adaptive explicit Runge-Kutta integration for the initial-value problems on
// (0, 1). The method is the Dormand-Prince 8(5,3) pair (DOP853) with its
// seventh-order continuous extension; integration may run in either direction.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace wavemap::odeint {

using State = std::vector<double>;
using RightHandSide = std::function<void(double t, std::span<const double> y, std::span<double> dydt)>;
using StopCondition = std::function<bool(double t, std::span<const double> y)>;

struct IVPSpec {
  RightHandSide rhs;
  double t0 = 0.0;
  double t1 = 1.0;
  State initial_state;
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  /// Store the interpolation data of every accepted step.
  bool dense_output = true;
  std::size_t max_steps = 2'000'000;
  /// 0 selects the automatic initial step.
  double initial_step = 0.0;
  /// 0 means unbounded.
  double max_step = 0.0;
  /// Checked after every accepted step; integration ends at the first step
  /// where it returns true.
  StopCondition stop_when;
};

class DenseSolution {
 public:
  std::size_t dimension() const noexcept { return dim_; }
  std::span<const double> mesh() const noexcept { return mesh_; }
  std::span<const double> state(std::size_t i) const;
  std::span<const double> final_state() const { return state(mesh_.size() - 1); }

  double t_begin() const { return mesh_.front(); }
  double t_end() const { return mesh_.back(); }
  bool covers(double t) const;
  bool has_dense_output() const noexcept { return !coeffs_.empty() || mesh_.size() == 1; }
  bool stopped_by_event() const noexcept { return stopped_; }
  std::size_t accepted_steps() const noexcept { return mesh_.size() - 1; }
  std::size_t rejected_steps() const noexcept { return rejected_; }
  std::size_t rhs_evaluations() const noexcept { return evaluations_; }

  /// Interpolated state; exact at mesh nodes. Throws InvalidArgument outside
  /// the covered interval or when dense output was not requested.
  void evaluate(double t, std::span<double> out) const;
  State evaluate(double t) const;
  double evaluate(double t, std::size_t component) const;

 private:
  friend DenseSolution integrate(const IVPSpec& spec);

  std::size_t locate(double t) const;

  std::size_t dim_ = 0;
  std::vector<double> mesh_;
  std::vector<double> states_;  // mesh_.size() x dim_
  std::vector<double> coeffs_;  // accepted steps x 8 x dim_
  bool stopped_ = false;
  std::size_t rejected_ = 0;
  std::size_t evaluations_ = 0;
};

/// Throws IntegrationBlowUp when the step size underflows or the step budget
/// is exhausted before reaching t1.
DenseSolution integrate(const IVPSpec& spec);

}  // namespace wavemap::odeint
