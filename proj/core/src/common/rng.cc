#include "icsp/common/rng.h"

#include <stdexcept>

namespace icsp {
namespace {

std::uint64_t SplitMix64(std::uint64_t& x) {
  x += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t Rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

std::uint64_t HashLabel(std::string_view label, std::uint64_t basis) {
  // FNV-1a over the label, then a SplitMix finaliser so that short labels
  // still land far apart.
  std::uint64_t h = 0xcbf29ce484222325ULL ^ basis;
  for (unsigned char c : label) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return SplitMix64(h);
}

Rng::Rng(std::uint64_t seed) {
  std::uint64_t x = seed;
  for (auto& s : state_) s = SplitMix64(x);
}

Rng Rng::ForStream(std::uint64_t seed,
                   std::initializer_list<std::string_view> labels) {
  Rng rng(seed);
  for (std::string_view label : labels) rng = rng.Split(label);
  return rng;
}

std::uint64_t Rng::Fingerprint() const {
  std::uint64_t h = state_[0];
  h ^= Rotl(state_[1], 17);
  h ^= Rotl(state_[2], 31);
  h ^= Rotl(state_[3], 47);
  return h;
}

Rng Rng::Split(std::string_view label) const {
  return Rng(HashLabel(label, Fingerprint()));
}

Rng Rng::Split(std::uint64_t index) const {
  std::uint64_t x = Fingerprint() ^ (index * 0xd1342543de82ef95ULL + 1);
  return Rng(SplitMix64(x));
}

std::uint64_t Rng::Next() {
  const std::uint64_t result = Rotl(state_[1] * 5, 7) * 9;
  const std::uint64_t t = state_[1] << 17;
  state_[2] ^= state_[0];
  state_[3] ^= state_[1];
  state_[1] ^= state_[2];
  state_[0] ^= state_[3];
  state_[2] ^= t;
  state_[3] = Rotl(state_[3], 45);
  return result;
}

double Rng::Uniform() {
  return static_cast<double>(Next() >> 11) * 0x1.0p-53;
}

double Rng::Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }

std::int64_t Rng::UniformInt(std::int64_t lo, std::int64_t hi) {
  if (hi < lo) throw std::invalid_argument("UniformInt: empty range");
  const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  if (span == 0) return static_cast<std::int64_t>(Next());
  // Rejection sampling to avoid modulo bias.
  const std::uint64_t limit = (~std::uint64_t{0}) - ((~std::uint64_t{0}) % span);
  std::uint64_t draw = Next();
  while (draw >= limit) draw = Next();
  return lo + static_cast<std::int64_t>(draw % span);
}

bool Rng::Bernoulli(double p) { return Uniform() < p; }

std::vector<int> Rng::SampleWithoutReplacement(int n, int k) {
  if (k < 0 || k > n) throw std::invalid_argument("SampleWithoutReplacement: k out of range");
  std::vector<int> pool(n);
  for (int i = 0; i < n; ++i) pool[i] = i;
  for (int i = 0; i < k; ++i) {
    const int j = static_cast<int>(UniformInt(i, n - 1));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(k);
  return pool;
}

}  // namespace icsp
