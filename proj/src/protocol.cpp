#include "topk/protocol.hpp"

#include "topk/error.hpp"
#include "topk/quantile.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace topk {

std::vector<AgentState> initial_states(std::span<const double> z) {
  std::vector<AgentState> states(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) {
    states[i] = {i, z[i], z[i]};
  }
  return states;
}

double compute_message(const AgentState& a, double p, double alpha_t) {
  return a.w - alpha_t * local_subgradient(a.z, p, a.w);
}

double update_estimate(double m_self, std::span<const double> received, double beta_t) {
  double pull = 0.0;
  for (double y : received) {
    pull += m_self - y;
  }
  return m_self - beta_t * pull;
}

namespace {

[[noreturn]] void diverged(std::size_t agent, double value) {
  throw DivergenceError("estimate of agent " + std::to_string(agent + 1) +
                        " became non-finite (" + std::to_string(value) + ")");
}

} // namespace

std::vector<AgentState> step_agentwise(std::span<const AgentState> states, const Graph& g, double p,
                                       double alpha_t, double beta_t, const RoundNoise& noise) {
  const std::size_t n = g.size();
  if (states.size() != n) {
    throw InvalidArgument("state count does not match graph size");
  }
  if (noise.link.size() != g.directed_link_count()) {
    throw InvalidArgument("round noise must carry one sample per directed link");
  }

  std::vector<double> messages(n);
  for (std::size_t i = 0; i < n; ++i) {
    messages[i] = compute_message(states[i], p, alpha_t);
  }

  std::vector<AgentState> next(states.begin(), states.end());
  std::vector<double> received;
  for (std::size_t i = 0; i < n; ++i) {
    const auto nb = g.neighbors(i);
    const auto ranks = g.incoming_ranks(i);
    received.resize(nb.size());
    for (std::size_t k = 0; k < nb.size(); ++k) {
      received[k] = messages[nb[k]] + noise.link[ranks[k]];
    }
    next[i].w = update_estimate(messages[i], received, beta_t);
    if (!std::isfinite(next[i].w)) {
      diverged(i, next[i].w);
    }
  }
  return next;
}

std::vector<double> step_vectorform(std::span<const double> w, const Matrix& laplacian,
                                    double p, std::span<const double> z, double alpha_t,
                                    double beta_t, std::span<const double> v) {
  const std::size_t n = w.size();
  std::vector<double> shifted(n);
  for (std::size_t i = 0; i < n; ++i) {
    shifted[i] = w[i] - alpha_t * local_subgradient(z[i], p, w[i]);
  }
  const auto lx = laplacian.multiply(shifted);
  std::vector<double> next(n);
  for (std::size_t i = 0; i < n; ++i) {
    next[i] = shifted[i] - beta_t * lx[i] + beta_t * v[i];
  }
  return next;
}

void step_in_place(std::span<double> w, std::span<const double> z, const Graph& g, double p,
                   double alpha_t, double beta_t, const RoundNoise& noise,
                   std::vector<double>& messages) {
  const std::size_t n = g.size();
  messages.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    messages[i] = w[i] - alpha_t * local_subgradient(z[i], p, w[i]);
  }
  for (std::size_t i = 0; i < n; ++i) {
    const auto nb = g.neighbors(i);
    const auto ranks = g.incoming_ranks(i);
    const double mi = messages[i];
    double pull = 0.0;
    for (std::size_t k = 0; k < nb.size(); ++k) {
      pull += mi - (messages[nb[k]] + noise.link[ranks[k]]);
    }
    w[i] = mi - beta_t * pull;
    if (!std::isfinite(w[i])) {
      diverged(i, w[i]);
    }
  }
}

double contraction_norm(const SpectralInfo& spec, double beta_t) {
  const double bound = 2.0 / (spec.lambda2 + spec.lambdaN);
  if (beta_t < 0.0 || beta_t > bound * (1.0 + 1e-12)) {
    throw InvalidArgument("contraction norm needs 0 <= beta <= 2/(lambda2+lambdaN)");
  }
  return std::max(std::abs(1.0 - spec.lambda2 * beta_t), std::abs(spec.lambdaN * beta_t - 1.0));
}

double contraction_norm_numeric(const Graph& g, double beta_t) {
  const std::size_t n = g.size();
  const Matrix l = laplacian(g);
  Matrix b = Matrix::identity(n);
  const double avg = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      b(i, j) -= beta_t * l(i, j) + avg;
    }
  }
  return symmetric_spectral_norm(b);
}

} // namespace topk
