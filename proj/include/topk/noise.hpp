#pragma once

#include "topk/graph.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace topk {

enum class NoiseKind { none, gaussian };

/// Additive link noise, i.i.d. over directed links and rounds, zero mean.
struct NoiseModel {
  NoiseKind kind = NoiseKind::none;
  double sigma2 = 0.0;  // variance per directed link per round

  static NoiseModel noiseless() { return {}; }
  static NoiseModel gaussian(double sigma2);
  bool operator==(const NoiseModel&) const = default;
};

NoiseKind parse_noise_kind(const std::string& name);
std::string to_string(NoiseKind kind);

/// Counter-based standard-normal source. Every sample is a pure function of
/// (seed, replication, round, index), so any replication or round can be
/// regenerated independently and in any order.
class NoiseStream {
public:
  NoiseStream(std::uint64_t base_seed, std::uint64_t replication);

  /// Standard normal for one counter position within a round.
  double standard_normal(std::uint64_t round, std::uint64_t index) const;
  /// Fills out[k] with the standard normal for index k. Cheaper than calling
  /// standard_normal per index (Box-Muller pairs are shared).
  void fill_standard_normal(std::uint64_t round, std::span<double> out) const;

private:
  std::uint64_t key_;
};

/// One noise sample per directed link, indexed by Graph::link_rank
/// (lexicographic sender, receiver order).
struct RoundNoise {
  std::vector<double> link;
};

RoundNoise draw_round_noise(const NoiseModel& model, const Graph& g, const NoiseStream& stream,
                            std::uint64_t round);
void draw_round_noise(const NoiseModel& model, const NoiseStream& stream, std::uint64_t round,
                      RoundNoise& out);

/// v_i = sum over neighbors j of the noise on link j -> i.
std::vector<double> incoming_noise(const Graph& g, const RoundNoise& noise);

} // namespace topk
