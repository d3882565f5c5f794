#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fdsic/closed_form.hpp"
#include "fdsic/digital_sic.hpp"
#include "fdsic/multitap.hpp"
#include "fdsic/ofdm.hpp"
#include "fdsic/pa_model.hpp"
#include "fdsic/si_channel.hpp"

namespace fdsic {

/// Power chain in dBm. Signals are complex baseband samples whose mean
/// |x|^2 is in mW (unit-impedance convention).
struct LinkBudget {
    double tx_power_dbm = 23.0;
    double pa_gain_db = 30.0;
    double passive_isolation_db = 0.0;
    double noise_floor_dbm = -90.0;
    int adc_bits = 14;
    double pa_input_dbm = -7.0;
    bool noise_enabled = true;
    bool adc_enabled = true;
    /// ADC full scale as a multiple of the RMS of its input.
    double adc_headroom = 4.0;
    /// Fixed receive-chain latency in samples, common to the SI and canceller
    /// paths.
    int rx_latency_samples = 3;

    void validate() const;
};

enum class DelayPreset { matched, evenly_spaced, explicit_list };

struct CircuitConfig {
    int num_taps = 4;
    DelayPreset preset = DelayPreset::evenly_spaced;
    double tau_min_s = 5e-9;
    double tau_max_s = 40e-9;
    std::vector<double> delays_s;

    TapDelayConfig delays(double sample_period_s, int K) const;
    void validate() const;
};

enum class DsicMode { none, linear, nonlinear, both };

struct DsicConfig {
    DsicMode mode = DsicMode::both;
    /// Number of odd orders; highest order is 2P - 1.
    int orders = 2;
    int taps = 8;
    int samples = 4096;

    void validate() const;
};

/// analog: frequency-domain analog stage only, with a unit-power pilot and
/// the residual measured on the effective channel. full: the whole time-domain
/// receive chain with the link budget.
enum class ChainMode { analog, full };

struct TrialConfig {
    OfdmConfig ofdm;
    SiChannelModel channel;
    CircuitConfig circuit;
    QuantizerSpec quantizer;
    /// Amplifier as measured; the chain uses its normalized form.
    HammersteinPa pa = measured_pa();
    /// Replace the normalized psi_3 by its two-digit rounding (-0.06).
    bool round_normalized_pa = false;
    LinkBudget budget;
    DsicConfig dsic;
    double estimation_r_db = -50.0;
    std::uint64_t seed = 1;
    ChainMode chain = ChainMode::analog;

    /// Normalized amplifier used by the chain.
    HammersteinPa effective_pa() const;
    void validate() const;
};

/// Per-trial outcome. Stage powers are NaN when the stage was not simulated.
struct SimResult {
    /// Mean per-bin |H_SI|^2 and |H_SI - H_cir|^2 over the estimation bins.
    double channel_power = 0.0;
    double channel_residual = 0.0;

    double power_after_passive_dbm = 0.0;
    double power_after_analog_dbm = 0.0;
    double power_after_linear_dsic_dbm = 0.0;
    double power_after_nonlinear_dsic_dbm = 0.0;
    double analog_sic_db = 0.0;
    double total_sic_db = 0.0;
};

/// Precomputed per-configuration state shared by all trials.
class TrialPlan {
  public:
    explicit TrialPlan(TrialConfig cfg);

    const TrialConfig& config() const { return cfg_; }
    SimResult run(std::uint64_t trial) const;

  private:
    SimResult run_analog(std::uint64_t trial) const;
    SimResult run_full(std::uint64_t trial) const;
    CVec channel_taps(std::uint64_t trial) const;
    CVec scaled_frame(RandomStream& rng) const;
    CVec receive(const CVec& heff, const CVec& x, RandomStream& noise) const;

    TrialConfig cfg_;
    HammersteinPa pa_;
    Constellation constellation_;
    std::vector<int> used_;
    /// Channel tap delay responses over the used bins and over all bins.
    CMat chan_used_;
    CMat chan_all_;
    OmegaMatrix omega_used_;
    OmegaMatrix omega_all_;
    WienerSolver solver_;
    /// Per-bin amplitude giving the configured time-domain drive level.
    double frame_scale_ = 1.0;
    /// Receive-chain delay as a per-bin phase ramp (all bins).
    CVec latency_ramp_;
};

/// Link-level scenario: 2048-point FFT, 1200 used bins, 512-sample CP,
/// 30.72 MHz sampling, six-tap measured-style SI profile, four circuit taps
/// evenly spaced over 5-40 ns. Non-ideal RF uses 8-bit phase shifters and
/// 0.1 dB attenuator steps with rounding plus the measured amplifier; ideal
/// RF uses ideal components and a linear amplifier.
TrialConfig link_preset(bool ideal_rf);

/// Analog-stage scenario: K = 64 with every bin used, tap gains
/// {0, -25, -30, ..., -75} dB, 20 dB Rician factor, matched delays, stochastic
/// quantization, r = -50 dB and a linear amplifier.
TrialConfig analog_preset(int num_taps, std::optional<int> phase_bits, std::optional<double> atten_step_db);

/// One trial with random streams derived from (cfg.seed, trial).
SimResult run_link_trial(const TrialConfig& cfg, std::uint64_t trial = 0);

/// Uniform mid-rise quantizer with 2^bits levels over [-fullscale, fullscale]
/// applied to real and imaginary parts, clipping outside.
CVec adc_quantize(const CVec& x, int bits, double fullscale);

enum class Execution { serial, parallel };

struct McSummary {
    std::int64_t trials = 0;
    /// Linear-domain mean of the per-trial effective-channel residual.
    double mean_residual = 0.0;
    double se_residual = 0.0;
    /// -10 log10(mean_residual) and its delta-method standard error.
    double mean_sic_db = 0.0;
    double se_sic_db = 0.0;
    /// Stage powers averaged in mW, then converted to dBm.
    double power_after_passive_dbm = 0.0;
    double power_after_analog_dbm = 0.0;
    double power_after_linear_dsic_dbm = 0.0;
    double power_after_nonlinear_dsic_dbm = 0.0;
};

/// Runs `trials` independent trials and reduces them in trial order, so the
/// serial and parallel paths return bit-identical summaries.
McSummary monte_carlo_sic(const TrialConfig& cfg, std::int64_t trials, Execution exec = Execution::parallel);
std::vector<SimResult> run_trials(const TrialPlan& plan, std::int64_t trials, Execution exec);
McSummary summarize(const std::vector<SimResult>& results);

/// Closed-form average residual for the analog stage of `cfg`, with the
/// amplifier-aware form when the amplifier is nonlinear.
double theory_residual_power(const TrialConfig& cfg);
TheoryInputs theory_inputs(const TrialConfig& cfg);

struct SweepAxis {
    std::string name;
    std::vector<std::string> values;
};

struct SweepSpec {
    TrialConfig base;
    std::vector<SweepAxis> axes;
    std::int64_t trials = 1000;
};

struct SweepPoint {
    std::vector<std::pair<std::string, std::string>> coords;
    TrialConfig cfg;
};

struct SweepRow {
    SweepPoint point;
    McSummary mc;
    double theory_residual = 0.0;
};

/// Names accepted as sweep axes.
const std::vector<std::string>& sweep_axis_names();

/// Sets one axis value on a config. Throws ConfigError for unknown axes or
/// unparsable values.
void apply_axis_value(TrialConfig& cfg, const std::string& axis, const std::string& value);

/// Cartesian product of the axes, first axis slowest.
std::vector<SweepPoint> expand_grid(const SweepSpec& spec);

std::vector<SweepRow> sweep(const SweepSpec& spec, Execution exec = Execution::parallel, bool with_theory = true);

}  // namespace fdsic
