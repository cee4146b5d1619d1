#pragma once

#include <cstdint>

namespace gcox {

// Derives an independent stream seed from a base seed and a stream tag.
// splitmix64 finalizer; distinct (base, tag) pairs give uncorrelated streams.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t tag) {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (tag + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Stream tags used when one base seed has to feed several generators.
namespace stream {
constexpr std::uint64_t graph = 1;
constexpr std::uint64_t train_predictors = 2;
constexpr std::uint64_t test_predictors = 3;
constexpr std::uint64_t train_survival = 4;
constexpr std::uint64_t test_survival = 5;
constexpr std::uint64_t folds = 6;
}  // namespace stream

}  // namespace gcox
