#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace netmtl {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Purpose tags keep the graph, task and data streams derived from one base
/// seed disjoint.
enum class StreamTag : std::uint64_t {
  graph = 0x67726170,
  tasks = 0x7461736b,
  data = 0x64617461,
  check = 0x63686b00,
};

/// Pseudo-random source owned by exactly one consumer. Streams are derived by
/// hashing (base seed, tag, indices), so stream i never depends on how many
/// numbers stream j consumed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  static Rng stream(std::uint64_t base, StreamTag tag,
                    std::initializer_list<std::uint64_t> indices = {}) {
    std::uint64_t h = splitmix64(base ^ splitmix64(static_cast<std::uint64_t>(tag)));
    for (std::uint64_t i : indices) h = splitmix64(h ^ splitmix64(i + 0x632be59bd9b4e019ULL));
    return Rng(h);
  }

  double normal() { return normal_(engine_); }
  double uniform() { return uniform_(engine_); }
  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

}  // namespace netmtl
