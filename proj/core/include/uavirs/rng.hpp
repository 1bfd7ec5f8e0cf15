#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace uavirs {

using Rng = std::mt19937_64;

constexpr std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 1469598103934665603ull;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ull;
  }
  return h;
}

inline Rng make_stream(std::uint64_t run_seed, std::string_view name) {
  const std::uint64_t tag = fnv1a(name);
  std::seed_seq seq{static_cast<std::uint32_t>(run_seed),
                    static_cast<std::uint32_t>(run_seed >> 32),
                    static_cast<std::uint32_t>(tag),
                    static_cast<std::uint32_t>(tag >> 32)};
  return Rng(seq);
}

// One run seed, split into independent named streams so that, e.g., changing
// the batch size cannot perturb the action-noise sequence.
struct RngStreams {
  Rng init;
  Rng exploration;
  Rng replay;
  Rng env;

  explicit RngStreams(std::uint64_t run_seed)
      : init(make_stream(run_seed, "init")),
        exploration(make_stream(run_seed, "exploration")),
        replay(make_stream(run_seed, "replay")),
        env(make_stream(run_seed, "env")) {}
};

}  // namespace uavirs
