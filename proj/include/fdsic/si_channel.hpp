#pragma once

#include <limits>
#include <span>
#include <vector>

#include "fdsic/pa_model.hpp"
#include "fdsic/rng.hpp"
#include "fdsic/types.hpp"

namespace fdsic {

/// Tapped-delay-line SI channel. Tap 0 is Rician, the rest Rayleigh.
struct SiChannelModel {
    /// Expected power of each tap in dB (LoS plus diffuse for tap 0).
    std::vector<double> tap_gains_db{0.0};
    /// Optional explicit delays in seconds. Empty means tap l sits at l*T.
    std::vector<double> tap_delays_s;
    /// K-factor of tap 0 in dB; +infinity gives a deterministic tap.
    double rician_factor_db = 20.0;
    double sample_period_s = 1.0;

    std::size_t num_taps() const { return tap_gains_db.size(); }
    double tap_delay(std::size_t i) const;
    std::vector<double> tap_powers() const;
    /// Largest delay in samples, rounded up.
    int span_samples() const;

    void validate() const;
};

struct SiChannelRealization {
    CVec taps;
    std::vector<double> delays_s;
    double sample_period_s = 1.0;
};

/// Frequency-domain estimate over the estimation bins and its noise variance.
struct ChannelEstimate {
    CVec h_hat;
    double noise_variance = 0.0;
};

/// E[H H^*] over the requested bins.
struct ExpectedCovariance {
    CMat matrix;
};

/// Flag value for a noiseless estimate.
inline constexpr double kNoiselessRdb = -std::numeric_limits<double>::infinity();

SiChannelRealization sample_si_channel(const SiChannelModel& model, RandomStream& rng);

/// H[k] = sum_l c_l exp(-j 2 pi k~ tau_l / (K T)) with k~ the signed bin index.
/// For taps on the sample grid this is the K-point DFT of the taps.
CVec freq_response(const SiChannelRealization& ch, int K);
CVec freq_response(const SiChannelRealization& ch, int K, std::span<const int> bins);

/// Bins x taps matrix of exp(-j 2 pi k~ tau_l / (K T)), so that H = F c.
CMat tap_delay_matrix(const SiChannelModel& model, int K, std::span<const int> bins);

ExpectedCovariance expected_covariance(const SiChannelModel& model, int K);
ExpectedCovariance expected_covariance(const SiChannelModel& model, int K, std::span<const int> bins);

/// Covariance of one deterministic realization, h h^*.
ExpectedCovariance realization_covariance(const CVec& h);

/// Adds CSCG noise with variance 10^(r_db/10) * mean_k |H[k]|^2 per bin.
ChannelEstimate estimate_channel(const CVec& h, double r_db, RandomStream& rng);

/// Estimate through a nonlinear transmitter:
///   H_hat[k] = H[k] + X3[k] H[k] / X[k] + N[k]
/// where X3 is the spectrum of the third-order PA term of the pilot. `h` and
/// `tx_frame` cover all K bins; the estimate is returned on `bins` (all bins
/// when empty).
ChannelEstimate estimate_channel_with_pa(const CVec& h, const CVec& tx_frame, const HammersteinPa& pa, double r_db,
                                         RandomStream& rng, std::span<const int> bins = {});

}  // namespace fdsic
