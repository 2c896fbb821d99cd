#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

namespace icsp {

// xoshiro256** generator with deterministic, platform-independent derived
// streams. Streams are keyed by a root seed plus a list of labels, e.g.
// Rng::ForStream(seed, {"cflp", "10x10", "scenarios"}), so that independent
// consumers never share draws. All distribution helpers are implemented here
// rather than through <random> distributions, whose output differs between
// standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  static Rng ForStream(std::uint64_t seed,
                       std::initializer_list<std::string_view> labels);

  // Child stream; the parent is left untouched.
  Rng Split(std::string_view label) const;
  Rng Split(std::uint64_t index) const;

  std::uint64_t Next();

  // Uniform in [0, 1) with 53 bits of precision.
  double Uniform();
  double Uniform(double lo, double hi);
  // Uniform on the closed integer range [lo, hi].
  std::int64_t UniformInt(std::int64_t lo, std::int64_t hi);
  bool Bernoulli(double p);

  // k distinct indices from [0, n), in draw order (partial Fisher-Yates).
  std::vector<int> SampleWithoutReplacement(int n, int k);

  template <typename T>
  void Shuffle(std::vector<T>& values) {
    for (std::size_t i = values.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(
          UniformInt(0, static_cast<std::int64_t>(i) - 1));
      std::swap(values[i - 1], values[j]);
    }
  }

 private:
  Rng() = default;
  std::uint64_t Fingerprint() const;

  std::array<std::uint64_t, 4> state_{};
};

std::uint64_t HashLabel(std::string_view label, std::uint64_t basis);

}  // namespace icsp
