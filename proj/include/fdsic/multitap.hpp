#pragma once

#include <optional>
#include <span>
#include <vector>


#include "fdsic/rng.hpp"
#include "fdsic/si_channel.hpp"
#include "fdsic/types.hpp"

namespace fdsic {

/// Delay lines of the analog canceller.
struct TapDelayConfig {
    std::vector<double> delays_s;
    /// Frequency sampling interval in rad/s, 2 pi / (K T).
    double delta_w = 0.0;

    int num_taps() const { return static_cast<int>(delays_s.size()); }

    /// tau_i = i T, i = 0..M-1, aligned with the channel's tap grid.
    static TapDelayConfig matched(int num_taps, double sample_period_s, int K);
    /// M delays evenly spaced over [tau_min, tau_max].
    static TapDelayConfig evenly_spaced(int num_taps, double tau_min_s, double tau_max_s, double sample_period_s,
                                        int K);

    void validate() const;
};

/// K x M matrix of unit-modulus delay responses.
struct OmegaMatrix {
    CMat entries;
    std::vector<double> delays_s;

    int rows() const { return static_cast<int>(entries.rows()); }
    int cols() const { return static_cast<int>(entries.cols()); }
};

/// Circuit coefficients w_i = a_i exp(-j phi_i).
struct TapCoefficients {
    CVec w;
};

enum class QuantMode { ideal, round_nearest, stochastic };

/// Hardware resolution of the phase shifters and attenuators. An absent
/// field means that component is ideal.
struct QuantizerSpec {
    std::optional<int> phase_bits = 10;
    std::optional<double> atten_step_db = 0.01;
    QuantMode mode = QuantMode::stochastic;
    /// Attenuation used for a zero coefficient in round_nearest mode.
    double max_atten_db = 120.0;

    bool is_ideal() const { return mode == QuantMode::ideal || (!phase_bits && !atten_step_db); }
    void validate() const;
};

/// Omega[k, i] = exp(-j k~ delta_w tau_i) over the requested bins (all K when
/// `bins` is empty), with k~ the signed bin index.
OmegaMatrix build_omega(const TapDelayConfig& cfg, int K, std::span<const int> bins = {});

/// Least-squares solver for one Omega, factorized once and reused across
/// trials. The QR factorization is used to form the M x K solution operator,
/// so each solve is one matrix-vector product. Rejects Gram matrices with
/// condition number above 1e12.
class WienerSolver {
  public:
    explicit WienerSolver(const OmegaMatrix& omega);

    TapCoefficients solve(const CVec& h_hat) const;
    double condition_estimate() const { return condition_; }

  private:
    CMat pinv_;
    double condition_ = 0.0;
};

TapCoefficients wiener_solve(const OmegaMatrix& omega, const ChannelEstimate& estimate);

TapCoefficients quantize_coefficients(const TapCoefficients& w, const QuantizerSpec& spec, RandomStream& rng);

CVec circuit_response(const OmegaMatrix& omega, const TapCoefficients& w);

/// Mean per-bin power of h_si - h_cir.
double residual_power(const CVec& h_si, const CVec& h_cir);

}  // namespace fdsic
