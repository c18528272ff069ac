#include "topk/quantile.hpp"

#include "topk/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace topk {

Dataset::Dataset(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) {
    throw InvalidArgument("dataset must contain at least one value");
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw InvalidArgument("dataset value for agent " + std::to_string(i + 1) + " is not finite");
    }
  }
}

std::vector<double> Dataset::sorted() const {
  std::vector<double> s(values_);
  std::sort(s.begin(), s.end());
  return s;
}

bool QuantileParam::admissible(double p, std::size_t n) {
  if (!(p > 0.0 && p < 1.0) || n == 0) {
    return false;
  }
  const double np = static_cast<double>(n) * p;
  return std::abs(np - std::round(np)) > 1e-12;
}

QuantileParam::QuantileParam(double p, std::size_t n) : p_(p), n_(n) {
  if (!(p > 0.0 && p < 1.0)) {
    throw InvalidArgument("quantile level p=" + std::to_string(p) + " must lie in (0,1)");
  }
  if (!admissible(p, n)) {
    throw InvalidArgument("n*p = " + std::to_string(static_cast<double>(n) * p) +
                          " is an integer; p must avoid multiples of 1/" + std::to_string(n));
  }
}

double ecdf(const Dataset& d, double xi) {
  const auto v = d.values();
  const auto count = std::count_if(v.begin(), v.end(), [xi](double z) { return z <= xi; });
  return static_cast<double>(count) / static_cast<double>(d.size());
}

double sample_quantile(const Dataset& d, const QuantileParam& q) {
  if (q.n() != d.size()) {
    throw InvalidArgument("quantile parameter was validated for n=" + std::to_string(q.n()) +
                          " but the dataset has " + std::to_string(d.size()) + " values");
  }
  const auto rank = static_cast<std::size_t>(std::ceil(static_cast<double>(d.size()) * q.p()));
  std::vector<double> s = d.sorted();
  return s[std::clamp<std::size_t>(rank, 1, s.size()) - 1];
}

double pinball(double p, double x) {
  return x < 0.0 ? (p - 1.0) * x : p * x;
}

double aggregate_score(const Dataset& d, double p, double xi) {
  double f = 0.0;
  for (double z : d.values()) {
    f += pinball(p, z - xi);
  }
  return f;
}

PInterval p_interval_for_k(std::size_t n, std::size_t k) {
  if (n == 0 || k < 1 || k > n) {
    throw InvalidArgument("k=" + std::to_string(k) + " must lie in [1, " + std::to_string(n) + "]");
  }
  const double nn = static_cast<double>(n);
  const double base = static_cast<double>(n - k);
  return {base / nn, (base + 1.0) / nn, (base + 0.5) / nn};
}

double argmin_oracle(const Dataset& d, double p) {
  double best = std::numeric_limits<double>::infinity();
  double best_xi = d[0];
  for (double xi : d.values()) {
    const double f = aggregate_score(d, p, xi);
    if (f < best || (f == best && xi < best_xi)) {
      best = f;
      best_xi = xi;
    }
  }
  return best_xi;
}

std::size_t k_for_p(std::size_t n, double p) {
  return n - static_cast<std::size_t>(std::floor(static_cast<double>(n) * p));
}

std::vector<std::size_t> agents_at_or_above(const Dataset& d, double theta) {
  std::vector<std::size_t> ids;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (d[i] >= theta) {
      ids.push_back(i);
    }
  }
  return ids;
}

} // namespace topk
