#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace topk {

/// Private measurements, one per agent. Position i is agent i (0-based
/// internally, 1-based in every external format); values are never reordered.
class Dataset {
public:
  explicit Dataset(std::vector<double> values);

  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  std::span<const double> values() const { return values_; }

  /// Values in ascending order (computed on demand).
  std::vector<double> sorted() const;

private:
  std::vector<double> values_;
};

/// A quantile level validated against an agent count: 0 < p < 1 and n*p is
/// not an integer (checked with tolerance 1e-12).
class QuantileParam {
public:
  QuantileParam(double p, std::size_t n);

  double p() const { return p_; }
  std::size_t n() const { return n_; }

  /// True when p lies in (0,1) and n*p is not within 1e-12 of an integer.
  static bool admissible(double p, std::size_t n);

private:
  double p_;
  std::size_t n_;
};

struct PInterval {
  double lo;
  double hi;
  double mid;
};

/// Fraction of values <= xi.
double ecdf(const Dataset& d, double xi);

/// The ceil(n*p)-th smallest value; always an element of d.
double sample_quantile(const Dataset& d, const QuantileParam& q);

/// Check (pinball) loss: p*x for x >= 0, (p-1)*x otherwise.
double pinball(double p, double x);

/// f(xi) = sum_i pinball(p, z_i - xi).
double aggregate_score(const Dataset& d, double p, double xi);

/// Element of the subdifferential of pinball(p, z - xi) in xi, with the
/// indicator firing at equality: 1(xi >= z) - p.
inline double local_subgradient(double z, double p, double xi) {
  return (xi >= z ? 1.0 : 0.0) - p;
}

/// Open p-interval whose quantile is the k-th largest of n values, plus its
/// midpoint (n-k+0.5)/n which is always admissible.
PInterval p_interval_for_k(std::size_t n, std::size_t k);

/// Exhaustive minimization of aggregate_score over the data values. Ties go to
/// the smallest value.
double argmin_oracle(const Dataset& d, double p);

/// Number of top entries selected by quantile level p: k = n - floor(n*p).
std::size_t k_for_p(std::size_t n, double p);

/// Agents (0-based) whose datum is >= theta. With distinct data and theta the
/// k-th largest value this is exactly the top-k set.
std::vector<std::size_t> agents_at_or_above(const Dataset& d, double theta);

} // namespace topk
