#pragma once

#include "topk/graph.hpp"
#include "topk/linalg.hpp"
#include "topk/noise.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace topk {

struct AgentState {
  std::size_t id = 0;
  double z = 0.0;  // private datum
  double w = 0.0;  // local estimate of the quantile
};

/// Agents at round 0: w_i = z_i.
std::vector<AgentState> initial_states(std::span<const double> z);

/// Local subgradient step: m = w - alpha_t * (1(w >= z) - p).
double compute_message(const AgentState& a, double p, double alpha_t);

/// Consensus step: w+ = m_self - beta_t * sum_j (m_self - y_j).
double update_estimate(double m_self, std::span<const double> received, double beta_t);

/// One synchronous round of the distributed algorithm. All messages are
/// computed from the round-t estimates before any agent updates; agent i
/// receives y_j = m_j + v_{j->i} from each neighbor j. Throws DivergenceError
/// if any new estimate is not finite.
std::vector<AgentState> step_agentwise(std::span<const AgentState> states, const Graph& g, double p,
                                       double alpha_t, double beta_t, const RoundNoise& noise);

/// The same round in matrix form:
///   w+ = (I - beta_t L)(w - alpha_t g) + beta_t v,  g_i = 1(w_i >= z_i) - p,
/// where v_i is the incoming noise summed at agent i.
std::vector<double> step_vectorform(std::span<const double> w, const Matrix& laplacian,
                                    double p, std::span<const double> z, double alpha_t,
                                    double beta_t, std::span<const double> v);

/// Allocation-free round used by the simulator; equivalent to step_agentwise.
/// `messages` is scratch space of size n.
void step_in_place(std::span<double> w, std::span<const double> z, const Graph& g, double p,
                   double alpha_t, double beta_t, const RoundNoise& noise,
                   std::vector<double>& messages);

/// max{|1 - lambda2*beta|, |lambdaN*beta - 1|}, which equals 1 - lambda2*beta
/// when beta <= 2/(lambda2+lambdaN). Throws InvalidArgument above the bound.
double contraction_norm(const SpectralInfo& spec, double beta_t);

/// Spectral norm of I - beta_t L - (1/n) 11^T evaluated numerically.
double contraction_norm_numeric(const Graph& g, double beta_t);

} // namespace topk
