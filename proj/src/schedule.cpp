#include "topk/schedule.hpp"

#include "topk/error.hpp"

#include <cmath>
#include <sstream>

namespace topk {

namespace {

std::string num(double x) {
  std::ostringstream os;
  os.precision(10);
  os << x;
  return os.str();
}

void require(bool ok, const std::string& inequality, const std::string& values) {
  if (!ok) {
    throw ScheduleError("step-size constraint violated: " + inequality + " (" + values + ")");
  }
}

void require_positive_finite(double x, const char* name) {
  if (!std::isfinite(x) || x <= 0.0) {
    throw ScheduleError(std::string(name) + " must be finite and positive (got " + num(x) + ")");
  }
}

} // namespace

double beta0_bound(const SpectralInfo& spec) {
  return 2.0 / (spec.lambda2 + spec.lambdaN);
}

void validate_exponents(const StepSchedule& s, bool allow_unsafe) {
  require_positive_finite(s.alpha0, "alpha0");
  require_positive_finite(s.tau1, "tau1");
  require_positive_finite(s.tau2, "tau2");
  if (s.beta0) {
    require_positive_finite(*s.beta0, "beta0");
  }
  if (allow_unsafe) {
    return;
  }
  require(s.tau2 > 0.5, "0.5 < tau2", "tau2=" + num(s.tau2));
  require(s.tau2 < s.tau1, "tau2 < tau1", "tau1=" + num(s.tau1) + ", tau2=" + num(s.tau2));
  require(s.tau1 <= 1.0, "tau1 <= 1", "tau1=" + num(s.tau1));
  require(2.0 * s.tau1 - s.tau2 > 1.0, "2*tau1 - tau2 > 1",
          "2*" + num(s.tau1) + " - " + num(s.tau2) + " = " + num(2.0 * s.tau1 - s.tau2));
  require(s.alpha0 >= 1.0, "alpha0 >= 1", "alpha0=" + num(s.alpha0));
}

StepSchedule resolve(const StepSchedule& s, const SpectralInfo& spec, bool allow_unsafe) {
  if (!(spec.lambda2 > 0.0)) {
    throw ScheduleError("graph is not connected (lambda2 = " + num(spec.lambda2) + ")");
  }
  validate_exponents(s, allow_unsafe);
  StepSchedule out = s;
  const double bound = beta0_bound(spec);
  if (!out.beta0) {
    out.beta0 = bound;
  }
  if (!allow_unsafe) {
    // Relative slack so a bound that was printed and re-read still passes.
    require(*out.beta0 <= bound * (1.0 + 1e-12), "beta0 <= 2/(lambda2+lambdaN)",
            "beta0=" + num(*out.beta0) + ", bound=" + num(bound));
  }
  return out;
}

double alpha(const StepSchedule& s, std::uint64_t t) {
  return s.alpha0 / std::pow(static_cast<double>(t) + 1.0, s.tau1);
}

double beta(const StepSchedule& s, std::uint64_t t) {
  if (!s.beta0) {
    throw ScheduleError("beta(t) requested from an unresolved schedule");
  }
  return *s.beta0 / std::pow(static_cast<double>(t) + 1.0, s.tau2);
}

PartialSums partial_sums(const StepSchedule& s, std::uint64_t horizon) {
  PartialSums sums;
  for (std::uint64_t t = 0; t < horizon; ++t) {
    const double a = alpha(s, t);
    const double b = beta(s, t);
    sums.alpha += a;
    sums.beta += b;
    sums.alpha_sq += a * a;
    sums.beta_sq += b * b;
    sums.alpha_sq_over_beta += a * a / b;
  }
  return sums;
}

} // namespace topk
