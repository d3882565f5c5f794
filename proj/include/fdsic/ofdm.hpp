#pragma once

#include <vector>

#include "fdsic/rng.hpp"
#include "fdsic/types.hpp"

namespace fdsic {

/// OFDM numerology. K should be a power of two for transform speed; any
/// positive K works.
struct OfdmConfig {
    int num_subcarriers = 64;
    int used_subcarriers = 64;
    int cp_length = 0;
    int constellation_order = 64;

    void validate() const;

    /// Bins carrying symbols. All K bins when used == K; otherwise the DC bin
    /// is left empty and the used bins sit symmetrically around it
    /// (ceil(U/2) positive, floor(U/2) negative).
    std::vector<int> used_bins() const;
};

/// Square QAM with unit average power, points ordered by Gray label.
struct Constellation {
    std::vector<cplx> points;
    int order = 0;
};

/// p1 = E|X|^2, p2 = E|X|^4, p3 = E[1/|X|^2] over equiprobable points.
struct ConstellationMoments {
    double p1 = 1.0;
    double p2 = 1.0;
    double p3 = 1.0;

    /// Moments of sqrt(power) * X.
    ConstellationMoments scaled(double power) const { return {p1 * power, p2 * power * power, p3 / power}; }
};

Constellation make_constellation(int order);
ConstellationMoments constellation_moments(const Constellation& c);

/// Unitary IDFT of one K-bin symbol followed by a cyclic prefix.
CVec ofdm_modulate(const CVec& freq_symbols, const OfdmConfig& cfg);

/// Drops the cyclic prefix and applies the unitary DFT to the next K samples.
CVec ofdm_demodulate(const CVec& time_samples, const OfdmConfig& cfg);

/// Uniform constellation draws on the used bins, zeros elsewhere.
CVec random_symbol_frame(RandomStream& rng, const OfdmConfig& cfg, const Constellation& constellation);
CVec random_symbol_frame(RandomStream& rng, const OfdmConfig& cfg);

}  // namespace fdsic
