#pragma once

#include <cstdint>
#include <random>

#include "atvgarch/model.hpp"

namespace atvgarch {

/// splitmix64 finalizer; used to derive independent stream seeds.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Seed for replication `rep`, attempt `attempt` of a run with `master` seed.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t rep, std::uint64_t attempt = 0) noexcept;

/// mt19937_64 with distribution code written out here, since the standard
/// library's distributions are not bit-reproducible across implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on (0, 1), 53 random bits.
  double uniform();
  /// Standard normal, Marsaglia polar method.
  double normal();
  /// Gamma(shape, 1), Marsaglia-Tsang.
  double gamma(double shape);
  /// Student-t with nu degrees of freedom rescaled to unit variance.
  double standardized_t(double nu);
  /// Draw from the standardized error distribution.
  double innovation(const ErrorDist& dist);

  std::uint64_t next_u64() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace atvgarch
