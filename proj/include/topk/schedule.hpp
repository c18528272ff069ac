#pragma once

#include "topk/graph.hpp"

#include <cstdint>
#include <optional>

namespace topk {

/// Power-law two-time-scale step sizes
///   alpha(t) = alpha0 / (t+1)^tau1   (slow, optimization)
///   beta(t)  = beta0  / (t+1)^tau2   (fast, consensus)
/// An empty beta0 means "auto": 2 / (lambda2 + lambdaN) once resolved.
struct StepSchedule {
  double alpha0 = 80.0;
  std::optional<double> beta0;
  double tau1 = 1.0;
  double tau2 = 0.505;

  bool resolved() const { return beta0.has_value(); }
  bool operator==(const StepSchedule&) const = default;
};

/// Largest admissible consensus gain, 2 / (lambda2 + lambdaN).
double beta0_bound(const SpectralInfo& spec);

/// Fills an auto beta0 and validates every constraint:
///   0.5 < tau2 < tau1 <= 1,  2*tau1 - tau2 > 1,  alpha0 >= 1,
///   0 < beta0 <= 2/(lambda2+lambdaN).
/// With allow_unsafe the inequalities are skipped; the values must still be
/// finite and positive. Violations throw ScheduleError naming the inequality.
StepSchedule resolve(const StepSchedule& s, const SpectralInfo& spec, bool allow_unsafe = false);

/// Graph-independent checks only (tau ordering, alpha0); used before a graph is known.
void validate_exponents(const StepSchedule& s, bool allow_unsafe = false);

double alpha(const StepSchedule& s, std::uint64_t t);
double beta(const StepSchedule& s, std::uint64_t t);

/// Partial sums over t = 0..horizon-1 of the five series constrained by the
/// convergence theorem.
struct PartialSums {
  double alpha = 0.0;
  double beta = 0.0;
  double alpha_sq = 0.0;
  double beta_sq = 0.0;
  double alpha_sq_over_beta = 0.0;
};

PartialSums partial_sums(const StepSchedule& s, std::uint64_t horizon);

} // namespace topk
