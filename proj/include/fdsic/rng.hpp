#pragma once

#include <cstdint>
#include <random>

#include "fdsic/types.hpp"

namespace fdsic {

/// Stage tags for derived random streams. Each stage of a trial draws from its
/// own stream, so changing how many numbers one stage consumes (e.g. the
/// number of circuit taps) leaves every other stage's draws unchanged.
enum class Stage : std::uint64_t {
    channel = 1,
    estimation_pilot = 2,
    estimation_noise = 3,
    quantizer = 4,
    data_frame = 5,
    dsic_preamble = 6,
    receiver_noise = 7,
};

/// Seeded random stream. Cheap to construct; not shared between threads.
class RandomStream {
  public:
    explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

    /// Independent stream for one (base seed, trial, stage) triple.
    static RandomStream derive(std::uint64_t base_seed, std::uint64_t trial, Stage stage);

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
    double normal() { return normal_(engine_); }

    /// Circularly-symmetric complex Gaussian sample with E|z|^2 = variance.
    cplx cscg(double variance) {
        const double s = std::sqrt(variance / 2.0);
        const double re = normal();
        const double im = normal();
        return {s * re, s * im};
    }

    /// Uniform integer in [0, n).
    std::size_t index(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_); }

    std::mt19937_64& engine() { return engine_; }

  private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

/// SplitMix64 finalizer, used to spread structured seeds over the state space.
std::uint64_t mix_seed(std::uint64_t x);

}  // namespace fdsic
