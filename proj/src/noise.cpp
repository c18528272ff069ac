#include "topk/noise.hpp"

#include "topk/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace topk {

namespace {

// splitmix64 finalizer
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t round_key(std::uint64_t stream_key, std::uint64_t round) {
  return mix64(stream_key ^ mix64(round + kGolden));
}

// Uniform on (0, 1].
double unit_open_closed(std::uint64_t key, std::uint64_t counter) {
  const std::uint64_t bits = mix64(key + (counter + 1) * kGolden);
  return static_cast<double>((bits >> 11) + 1) * 0x1.0p-53;
}

} // namespace

NoiseModel NoiseModel::gaussian(double sigma2) {
  if (!std::isfinite(sigma2) || sigma2 < 0.0) {
    throw InvalidArgument("noise variance must be finite and >= 0");
  }
  return {NoiseKind::gaussian, sigma2};
}

NoiseKind parse_noise_kind(const std::string& name) {
  if (name == "none") return NoiseKind::none;
  if (name == "gaussian") return NoiseKind::gaussian;
  throw InvalidArgument("unknown noise type '" + name + "' (expected none or gaussian)");
}

std::string to_string(NoiseKind kind) {
  return kind == NoiseKind::none ? "none" : "gaussian";
}

NoiseStream::NoiseStream(std::uint64_t base_seed, std::uint64_t replication)
    : key_(mix64(mix64(base_seed ^ kGolden) ^ (replication * 0xD1B54A32D192ED03ULL + 1))) {}

double NoiseStream::standard_normal(std::uint64_t round, std::uint64_t index) const {
  const std::uint64_t key = round_key(key_, round);
  const std::uint64_t pair = index / 2;
  const double radius = std::sqrt(-2.0 * std::log(unit_open_closed(key, 2 * pair)));
  const double angle = 2.0 * std::numbers::pi * unit_open_closed(key, 2 * pair + 1);
  return index % 2 == 0 ? radius * std::cos(angle) : radius * std::sin(angle);
}

void NoiseStream::fill_standard_normal(std::uint64_t round, std::span<double> out) const {
  const std::uint64_t key = round_key(key_, round);
  for (std::size_t k = 0; k < out.size(); k += 2) {
    const std::uint64_t pair = k / 2;
    const double radius = std::sqrt(-2.0 * std::log(unit_open_closed(key, 2 * pair)));
    const double angle = 2.0 * std::numbers::pi * unit_open_closed(key, 2 * pair + 1);
    out[k] = radius * std::cos(angle);
    if (k + 1 < out.size()) {
      out[k + 1] = radius * std::sin(angle);
    }
  }
}

void draw_round_noise(const NoiseModel& model, const NoiseStream& stream, std::uint64_t round,
                      RoundNoise& out) {
  if (model.kind == NoiseKind::none || model.sigma2 == 0.0) {
    std::fill(out.link.begin(), out.link.end(), 0.0);
    return;
  }
  stream.fill_standard_normal(round, out.link);
  const double sd = std::sqrt(model.sigma2);
  for (double& v : out.link) {
    v *= sd;
  }
}

RoundNoise draw_round_noise(const NoiseModel& model, const Graph& g, const NoiseStream& stream,
                            std::uint64_t round) {
  RoundNoise noise{std::vector<double>(g.directed_link_count(), 0.0)};
  draw_round_noise(model, stream, round, noise);
  return noise;
}

std::vector<double> incoming_noise(const Graph& g, const RoundNoise& noise) {
  std::vector<double> v(g.size(), 0.0);
  for (std::size_t i = 0; i < g.size(); ++i) {
    for (auto rank : g.incoming_ranks(i)) {
      v[i] += noise.link[rank];
    }
  }
  return v;
}

} // namespace topk
