#include "fdsic/link_sim.hpp"

#include <algorithm>
#include <exception>
#include <limits>
#include <mutex>
#include <numbers>

#include "fdsic/dft.hpp"
#include "parse_util.hpp"

namespace fdsic {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double mean_power(const CVec& x) { return x.squaredNorm() / static_cast<double>(x.size()); }

double to_dbm(double mw) { return 10.0 * std::log10(mw); }

// The body of a time-domain symbol preceded by its last L - 1 samples, the
// part of the cyclic prefix a causal L-tap canceller looks back into.
CVec cyclic_extension(const CVec& body, int L) {
    const Eigen::Index n = body.size();
    const Eigen::Index pre = L - 1;
    CVec ext(n + pre);
    for (Eigen::Index i = 0; i < pre; ++i) ext[i] = body[((n - pre + i) % n + n) % n];
    ext.tail(n) = body;
    return ext;
}

const TrialConfig& validated(const TrialConfig& cfg) {
    cfg.validate();
    return cfg;
}

}  // namespace

void LinkBudget::validate() const {
    for (double v : {tx_power_dbm, pa_gain_db, passive_isolation_db, noise_floor_dbm, pa_input_dbm, adc_headroom})
        if (!std::isfinite(v)) throw ConfigError("budget: values must be finite");
    if (adc_bits < 1 || adc_bits > 48) throw ConfigError("budget: adc_bits must lie in [1, 48]");
    if (!(adc_headroom > 0.0)) throw ConfigError("budget: adc_headroom must be positive");
    if (rx_latency_samples < 0) throw ConfigError("budget: rx_latency_samples must be >= 0");
    if (std::abs(tx_power_dbm - (pa_input_dbm + pa_gain_db)) > 1.0)
        throw ConfigError("budget: tx_power_dbm disagrees with pa_input_dbm + pa_gain_db by more than 1 dB");
}

TapDelayConfig CircuitConfig::delays(double sample_period_s, int K) const {
    switch (preset) {
        case DelayPreset::matched: return TapDelayConfig::matched(num_taps, sample_period_s, K);
        case DelayPreset::evenly_spaced:
            return TapDelayConfig::evenly_spaced(num_taps, tau_min_s, tau_max_s, sample_period_s, K);
        case DelayPreset::explicit_list: {
            TapDelayConfig c;
            c.delays_s = delays_s;
            c.delta_w = 2.0 * std::numbers::pi / (K * sample_period_s);
            return c;
        }
    }
    throw ConfigError("circuit: unknown delay preset");
}

void CircuitConfig::validate() const {
    if (num_taps < 1) throw ConfigError("circuit: num_taps must be >= 1");
    if (preset == DelayPreset::evenly_spaced) {
        if (!std::isfinite(tau_min_s) || !std::isfinite(tau_max_s) || tau_min_s < 0.0)
            throw ConfigError("circuit: tau_min_s and tau_max_s must be finite and >= 0");
        if (num_taps > 1 && !(tau_max_s > tau_min_s)) throw ConfigError("circuit: tau_max_s must exceed tau_min_s");
    }
    if (preset == DelayPreset::explicit_list && static_cast<int>(delays_s.size()) != num_taps)
        throw ConfigError("circuit: explicit delays_s must list num_taps values");
}

void DsicConfig::validate() const {
    if (orders < 1 || taps < 1) throw ConfigError("dsic: orders and taps must be >= 1");
    if (samples < orders * taps) throw ConfigError("dsic: samples must be at least orders * taps");
}

HammersteinPa TrialConfig::effective_pa() const {
    HammersteinPa out = normalized(pa);
    if (round_normalized_pa && out.num_orders() > 1)
        out.odd_coeffs[1] = std::round(out.odd_coeffs[1] * 100.0) / 100.0;
    return out;
}

void TrialConfig::validate() const {
    ofdm.validate();
    channel.validate();
    circuit.validate();
    quantizer.validate();
    pa.validate();
    budget.validate();
    dsic.validate();
    if (channel.span_samples() > ofdm.num_subcarriers - 1)
        throw ConfigError("channel delay spread exceeds the OFDM symbol length");
    if (std::isnan(estimation_r_db) || estimation_r_db == std::numeric_limits<double>::infinity())
        throw ConfigError("estimation_r_db must be finite or -inf");
    circuit.delays(channel.sample_period_s, ofdm.num_subcarriers).validate();
    if (circuit.num_taps > ofdm.used_subcarriers)
        throw ConfigError("circuit: num_taps exceeds the number of used subcarriers");
}

TrialPlan::TrialPlan(TrialConfig cfg)
    : cfg_(validated(cfg)),
      pa_(cfg_.effective_pa()),
      constellation_(make_constellation(cfg_.ofdm.constellation_order)),
      used_(cfg_.ofdm.used_bins()),
      chan_used_(tap_delay_matrix(cfg_.channel, cfg_.ofdm.num_subcarriers, used_)),
      omega_used_(build_omega(cfg_.circuit.delays(cfg_.channel.sample_period_s, cfg_.ofdm.num_subcarriers),
                              cfg_.ofdm.num_subcarriers, used_)),
      solver_(omega_used_) {
    const int K = cfg_.ofdm.num_subcarriers;
    if (cfg_.chain == ChainMode::full) {
        std::vector<int> all(static_cast<size_t>(K));
        for (int k = 0; k < K; ++k) all[static_cast<size_t>(k)] = k;
        chan_all_ = tap_delay_matrix(cfg_.channel, K, all);
        omega_all_ = build_omega(cfg_.circuit.delays(cfg_.channel.sample_period_s, K), K);
        const double drive_mw = db_to_linear(cfg_.budget.pa_input_dbm);
        frame_scale_ = std::sqrt(drive_mw * K / static_cast<double>(used_.size()));
        latency_ramp_.resize(K);
        for (int k = 0; k < K; ++k)
            latency_ramp_[k] =
                std::polar(1.0, -2.0 * std::numbers::pi * signed_bin(k, K) * cfg_.budget.rx_latency_samples / K);
    } else if (static_cast<int>(used_.size()) == K) {
        chan_all_ = chan_used_;
    } else {
        std::vector<int> all(static_cast<size_t>(K));
        for (int k = 0; k < K; ++k) all[static_cast<size_t>(k)] = k;
        chan_all_ = tap_delay_matrix(cfg_.channel, K, all);
    }
}

SimResult TrialPlan::run(std::uint64_t trial) const {
    return cfg_.chain == ChainMode::analog ? run_analog(trial) : run_full(trial);
}

CVec TrialPlan::channel_taps(std::uint64_t trial) const {
    auto rng = RandomStream::derive(cfg_.seed, trial, Stage::channel);
    CVec c = sample_si_channel(cfg_.channel, rng).taps;
    if (cfg_.budget.passive_isolation_db != 0.0) c *= std::pow(10.0, -cfg_.budget.passive_isolation_db / 20.0);
    return c;
}

CVec TrialPlan::scaled_frame(RandomStream& rng) const {
    return frame_scale_ * random_symbol_frame(rng, cfg_.ofdm, constellation_);
}

SimResult TrialPlan::run_analog(std::uint64_t trial) const {
    const int K = cfg_.ofdm.num_subcarriers;
    const CVec c = channel_taps(trial);
    const CVec h_used = chan_used_ * c;

    auto noise = RandomStream::derive(cfg_.seed, trial, Stage::estimation_noise);
    ChannelEstimate est;
    if (pa_.is_linear()) {
        est = estimate_channel(h_used, cfg_.estimation_r_db, noise);
    } else {
        auto pilot_rng = RandomStream::derive(cfg_.seed, trial, Stage::estimation_pilot);
        const CVec pilot = random_symbol_frame(pilot_rng, cfg_.ofdm, constellation_);
        const CVec h_all = static_cast<int>(used_.size()) == K ? h_used : CVec(chan_all_ * c);
        est = estimate_channel_with_pa(h_all, pilot, pa_, cfg_.estimation_r_db, noise, used_);
    }

    auto qrng = RandomStream::derive(cfg_.seed, trial, Stage::quantizer);
    const TapCoefficients w = quantize_coefficients(solver_.solve(est.h_hat), cfg_.quantizer, qrng);

    SimResult r;
    r.channel_power = mean_power(h_used);
    r.channel_residual = residual_power(h_used, circuit_response(omega_used_, w));
    r.power_after_passive_dbm = kNaN;
    r.power_after_analog_dbm = kNaN;
    r.power_after_linear_dsic_dbm = kNaN;
    r.power_after_nonlinear_dsic_dbm = kNaN;
    r.analog_sic_db = sic_db(r.channel_residual);
    r.total_sic_db = r.analog_sic_db;
    return r;
}

CVec TrialPlan::receive(const CVec& heff, const CVec& x, RandomStream& noise) const {
    const CVec x_pa = std::pow(10.0, cfg_.budget.pa_gain_db / 20.0) * apply_pa(x, pa_);
    CVec y = idft_unitary(heff.cwiseProduct(dft_unitary(x_pa)));
    if (cfg_.budget.noise_enabled) {
        const double var = db_to_linear(cfg_.budget.noise_floor_dbm);
        for (Eigen::Index n = 0; n < y.size(); ++n) y[n] += noise.cscg(var);
    }
    if (cfg_.budget.adc_enabled) {
        const double rms = std::sqrt(mean_power(y));
        if (rms > 0.0) y = adc_quantize(y, cfg_.budget.adc_bits, cfg_.budget.adc_headroom * rms);
    }
    return y;
}

SimResult TrialPlan::run_full(std::uint64_t trial) const {
    const int K = cfg_.ofdm.num_subcarriers;
    const CVec c = channel_taps(trial);
    const CVec h_all = chan_all_ * c;
    const CVec h_used = chan_used_ * c;

    // Tuning: pilot through the amplifier, estimate on the used bins.
    auto pilot_rng = RandomStream::derive(cfg_.seed, trial, Stage::estimation_pilot);
    const CVec pilot = scaled_frame(pilot_rng);
    auto est_noise = RandomStream::derive(cfg_.seed, trial, Stage::estimation_noise);
    const ChannelEstimate est = estimate_channel_with_pa(h_all, pilot, pa_, cfg_.estimation_r_db, est_noise, used_);
    auto qrng = RandomStream::derive(cfg_.seed, trial, Stage::quantizer);
    const TapCoefficients w = quantize_coefficients(solver_.solve(est.h_hat), cfg_.quantizer, qrng);

    const CVec h_cir = circuit_response(omega_all_, w);
    const CVec heff = (h_all - h_cir).cwiseProduct(latency_ramp_);

    SimResult r;
    r.channel_power = mean_power(h_used);
    r.channel_residual = residual_power(h_used, circuit_response(omega_used_, w));

    auto data_rng = RandomStream::derive(cfg_.seed, trial, Stage::data_frame);
    auto pre_rng = RandomStream::derive(cfg_.seed, trial, Stage::dsic_preamble);
    auto rx_noise = RandomStream::derive(cfg_.seed, trial, Stage::receiver_noise);

    const CVec X = scaled_frame(data_rng);
    const CVec x = idft_unitary(X);
    const double gain = std::pow(10.0, cfg_.budget.pa_gain_db / 20.0);
    const CVec X_pa = gain * dft_unitary(apply_pa(x, pa_));
    r.power_after_passive_dbm = to_dbm(mean_power(h_all.cwiseProduct(X_pa)));

    const CVec y = receive(heff, x, rx_noise);
    r.power_after_analog_dbm = to_dbm(mean_power(y));
    r.analog_sic_db = r.power_after_passive_dbm - r.power_after_analog_dbm;
    double final_dbm = r.power_after_analog_dbm;

    const DsicMode mode = cfg_.dsic.mode;
    r.power_after_linear_dsic_dbm = kNaN;
    r.power_after_nonlinear_dsic_dbm = kNaN;
    if (mode == DsicMode::linear || mode == DsicMode::both) {
        const CVec Xl = scaled_frame(pre_rng);
        const CVec yl = receive(heff, idft_unitary(Xl), rx_noise);
        const auto lin = linear_ls_estimate(dft_unitary(yl), Xl, used_);
        // Parseval: mean bin power equals mean sample power.
        r.power_after_linear_dsic_dbm = to_dbm(mean_power(linear_cancel(dft_unitary(y), X, lin)));
        final_dbm = r.power_after_linear_dsic_dbm;
    }
    if (mode == DsicMode::nonlinear || mode == DsicMode::both) {
        const int P = cfg_.dsic.orders;
        const int L = cfg_.dsic.taps;
        const int S = cfg_.dsic.samples;
        const int symbols = (S + K - 1) / K;
        CMat f(static_cast<Eigen::Index>(symbols) * K, static_cast<Eigen::Index>(P) * L);
        CVec yp(static_cast<Eigen::Index>(symbols) * K);
        for (int s = 0; s < symbols; ++s) {
            const CVec xs = idft_unitary(scaled_frame(pre_rng));
            f.middleRows(static_cast<Eigen::Index>(s) * K, K) = hammerstein_regressor(cyclic_extension(xs, L), P, L, K);
            yp.segment(static_cast<Eigen::Index>(s) * K, K) = receive(heff, xs, rx_noise);
        }
        const auto model = hammerstein_ls(yp.head(S), f.topRows(S), P, L);
        r.power_after_nonlinear_dsic_dbm = to_dbm(mean_power(hammerstein_cancel(y, cyclic_extension(x, L), model)));
        final_dbm = r.power_after_nonlinear_dsic_dbm;
    }
    r.total_sic_db = r.power_after_passive_dbm - final_dbm;
    return r;
}

TrialConfig link_preset(bool ideal_rf) {
    TrialConfig cfg;
    cfg.ofdm = {2048, 1200, 512, 64};
    const double T = 1.0 / 30.72e6;
    cfg.channel.tap_gains_db = {-40.0, -55.0, -58.0, -62.0, -66.0, -70.0};
    cfg.channel.tap_delays_s = {5e-9, 12e-9, 19e-9, 26e-9, 33e-9, 40e-9};
    cfg.channel.rician_factor_db = 20.0;
    cfg.channel.sample_period_s = T;
    cfg.circuit = CircuitConfig{4, DelayPreset::evenly_spaced, 5e-9, 40e-9, {}};
    cfg.budget = LinkBudget{};
    cfg.dsic = DsicConfig{};
    cfg.estimation_r_db = -50.0;
    cfg.chain = ChainMode::full;
    cfg.seed = 1;
    if (ideal_rf) {
        cfg.quantizer = QuantizerSpec{std::nullopt, std::nullopt, QuantMode::ideal, 120.0};
        cfg.pa = ideal_pa();
    } else {
        cfg.quantizer = QuantizerSpec{8, 0.1, QuantMode::round_nearest, 120.0};
        cfg.pa = measured_pa();
    }
    return cfg;
}

TrialConfig analog_preset(int num_taps, std::optional<int> phase_bits, std::optional<double> atten_step_db) {
    TrialConfig cfg;
    cfg.ofdm = {64, 64, 0, 64};
    cfg.channel.tap_gains_db = {0.0};
    for (int g = -25; g >= -75; g -= 5) cfg.channel.tap_gains_db.push_back(g);
    cfg.channel.rician_factor_db = 20.0;
    cfg.channel.sample_period_s = 1.0;
    cfg.circuit = CircuitConfig{num_taps, DelayPreset::matched, 0.0, 0.0, {}};
    cfg.quantizer = QuantizerSpec{phase_bits, atten_step_db, QuantMode::stochastic, 120.0};
    if (!phase_bits && !atten_step_db) cfg.quantizer.mode = QuantMode::ideal;
    cfg.pa = ideal_pa();
    cfg.estimation_r_db = -50.0;
    cfg.chain = ChainMode::analog;
    cfg.dsic.mode = DsicMode::none;
    cfg.seed = 1;
    return cfg;
}

SimResult run_link_trial(const TrialConfig& cfg, std::uint64_t trial) { return TrialPlan(cfg).run(trial); }

CVec adc_quantize(const CVec& x, int bits, double fullscale) {
    if (!(fullscale > 0.0)) throw PreconditionError("adc_quantize: fullscale must be positive");
    if (bits < 1 || bits > 48) throw PreconditionError("adc_quantize: bits must lie in [1, 48]");
    const double levels = std::ldexp(1.0, bits);
    const double step = 2.0 * fullscale / levels;
    const double top = fullscale - step / 2.0;
    auto q = [&](double v) { return std::clamp((std::floor(v / step) + 0.5) * step, -top, top); };
    CVec y(x.size());
    for (Eigen::Index n = 0; n < x.size(); ++n) y[n] = cplx(q(x[n].real()), q(x[n].imag()));
    return y;
}

std::vector<SimResult> run_trials(const TrialPlan& plan, std::int64_t trials, Execution exec) {
    if (trials < 1) throw PreconditionError("monte carlo: trials must be >= 1");
    std::vector<SimResult> out(static_cast<size_t>(trials));
    if (exec == Execution::serial) {
        for (std::int64_t t = 0; t < trials; ++t) out[static_cast<size_t>(t)] = plan.run(static_cast<std::uint64_t>(t));
        return out;
    }
    std::exception_ptr failure;
    std::mutex failure_mutex;
#pragma omp parallel for schedule(dynamic, 16)
    for (std::int64_t t = 0; t < trials; ++t) {
        try {
            out[static_cast<size_t>(t)] = plan.run(static_cast<std::uint64_t>(t));
        } catch (...) {
            std::lock_guard<std::mutex> lock(failure_mutex);
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
    return out;
}

McSummary summarize(const std::vector<SimResult>& results) {
    if (results.empty()) throw PreconditionError("summarize: no trials");
    const double n = static_cast<double>(results.size());
    McSummary s;
    s.trials = static_cast<std::int64_t>(results.size());
    double sum = 0.0;
    for (const auto& r : results) sum += r.channel_residual;
    s.mean_residual = sum / n;
    double ss = 0.0;
    for (const auto& r : results) ss += (r.channel_residual - s.mean_residual) * (r.channel_residual - s.mean_residual);
    s.se_residual = results.size() > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0;
    s.mean_sic_db = sic_db(s.mean_residual);
    s.se_sic_db = s.mean_residual > 0.0 ? 10.0 / std::numbers::ln10 * s.se_residual / s.mean_residual : 0.0;

    auto stage = [&](double SimResult::*field) {
        double acc = 0.0;
        for (const auto& r : results) acc += db_to_linear(r.*field);
        return std::isnan(acc) ? kNaN : to_dbm(acc / n);
    };
    s.power_after_passive_dbm = stage(&SimResult::power_after_passive_dbm);
    s.power_after_analog_dbm = stage(&SimResult::power_after_analog_dbm);
    s.power_after_linear_dsic_dbm = stage(&SimResult::power_after_linear_dsic_dbm);
    s.power_after_nonlinear_dsic_dbm = stage(&SimResult::power_after_nonlinear_dsic_dbm);
    return s;
}

McSummary monte_carlo_sic(const TrialConfig& cfg, std::int64_t trials, Execution exec) {
    const TrialPlan plan(cfg);
    return summarize(run_trials(plan, trials, exec));
}

TheoryInputs theory_inputs(const TrialConfig& cfg) {
    cfg.validate();
    const int K = cfg.ofdm.num_subcarriers;
    const auto bins = cfg.ofdm.used_bins();
    TheoryInputs in;
    in.E = expected_covariance(cfg.channel, K, bins).matrix;
    if (cfg.budget.passive_isolation_db != 0.0) in.E *= db_to_linear(-cfg.budget.passive_isolation_db);
    in.omega = build_omega(cfg.circuit.delays(cfg.channel.sample_period_s, K), K, bins);
    const double power = in.E.trace().real() / static_cast<double>(bins.size());
    in.sigma2 = cfg.estimation_r_db == kNoiselessRdb ? 0.0 : db_to_linear(cfg.estimation_r_db) * power;
    in.constants = quant_constants(cfg.quantizer);
    const HammersteinPa pa = cfg.effective_pa();
    if (!pa.is_linear()) {
        auto m = constellation_moments(make_constellation(cfg.ofdm.constellation_order));
        if (cfg.chain == ChainMode::full)
            m = m.scaled(db_to_linear(cfg.budget.pa_input_dbm) * K / static_cast<double>(bins.size()));
        in.pa = pa_moments(pa.psi3(), m, K);
    }
    return in;
}

double theory_residual_power(const TrialConfig& cfg) {
    const TheoryInputs in = theory_inputs(cfg);
    return in.pa ? residual_power_quantized_pa(in) : residual_power_quantized(in);
}

const std::vector<std::string>& sweep_axis_names() {
    static const std::vector<std::string> names{"num_taps",  "phase_bits", "atten_step_db", "estimation_r_db",
                                                "pa_model",  "quant_mode", "dsic_mode",     "seed",
                                                "rf"};
    return names;
}

void apply_axis_value(TrialConfig& cfg, const std::string& axis, const std::string& value) {
    const std::string v = detail::lower(detail::trim(value));
    auto bad = [&]() { return ConfigError("sweep axis " + axis + ": invalid value '" + value + "'"); };
    if (axis == "num_taps") {
        auto n = detail::to_int<int>(v);
        if (!n || *n < 1) throw bad();
        cfg.circuit.num_taps = *n;
    } else if (axis == "phase_bits") {
        if (v == "ideal") {
            cfg.quantizer.phase_bits.reset();
        } else {
            auto n = detail::to_int<int>(v);
            if (!n || *n < 1) throw bad();
            cfg.quantizer.phase_bits = *n;
        }
    } else if (axis == "atten_step_db") {
        if (v == "ideal") {
            cfg.quantizer.atten_step_db.reset();
        } else {
            auto d = detail::to_double(v);
            if (!d || !(*d > 0.0) || !std::isfinite(*d)) throw bad();
            cfg.quantizer.atten_step_db = *d;
        }
    } else if (axis == "estimation_r_db") {
        auto d = v == "none" ? std::optional<double>(kNoiselessRdb) : detail::to_double(v);
        if (!d || *d == std::numeric_limits<double>::infinity()) throw bad();
        cfg.estimation_r_db = *d;
    } else if (axis == "pa_model") {
        if (v == "ideal") {
            cfg.pa = ideal_pa();
            cfg.round_normalized_pa = false;
        } else if (v == "measured") {
            cfg.pa = measured_pa();
            cfg.round_normalized_pa = false;
        } else if (v == "rounded") {
            cfg.pa = measured_pa();
            cfg.round_normalized_pa = true;
        } else {
            throw bad();
        }
    } else if (axis == "quant_mode") {
        if (v == "ideal") cfg.quantizer.mode = QuantMode::ideal;
        else if (v == "round_nearest") cfg.quantizer.mode = QuantMode::round_nearest;
        else if (v == "stochastic") cfg.quantizer.mode = QuantMode::stochastic;
        else throw bad();
    } else if (axis == "dsic_mode") {
        if (v == "none") cfg.dsic.mode = DsicMode::none;
        else if (v == "linear") cfg.dsic.mode = DsicMode::linear;
        else if (v == "nonlinear") cfg.dsic.mode = DsicMode::nonlinear;
        else if (v == "both") cfg.dsic.mode = DsicMode::both;
        else throw bad();
    } else if (axis == "rf") {
        if (v == "ideal") {
            cfg.quantizer = QuantizerSpec{std::nullopt, std::nullopt, QuantMode::ideal, cfg.quantizer.max_atten_db};
            cfg.pa = ideal_pa();
            cfg.round_normalized_pa = false;
        } else if (v == "nonideal") {
            cfg.quantizer = QuantizerSpec{8, 0.1, QuantMode::round_nearest, cfg.quantizer.max_atten_db};
            cfg.pa = measured_pa();
            cfg.round_normalized_pa = false;
        } else {
            throw bad();
        }
    } else if (axis == "seed") {
        auto n = detail::to_int<std::uint64_t>(v);
        if (!n) throw bad();
        cfg.seed = *n;
    } else {
        throw ConfigError("unknown sweep axis '" + axis + "'");
    }
}

std::vector<SweepPoint> expand_grid(const SweepSpec& spec) {
    for (const auto& a : spec.axes)
        if (a.values.empty()) throw ConfigError("sweep axis " + a.name + " has no values");
    std::vector<SweepPoint> points{SweepPoint{{}, spec.base}};
    for (const auto& axis : spec.axes) {
        std::vector<SweepPoint> next;
        next.reserve(points.size() * axis.values.size());
        for (const auto& p : points)
            for (const auto& v : axis.values) {
                SweepPoint q = p;
                apply_axis_value(q.cfg, axis.name, v);
                q.coords.emplace_back(axis.name, v);
                next.push_back(std::move(q));
            }
        points = std::move(next);
    }
    for (const auto& p : points) p.cfg.validate();
    return points;
}

std::vector<SweepRow> sweep(const SweepSpec& spec, Execution exec, bool with_theory) {
    if (spec.trials < 1) throw PreconditionError("sweep: trials must be >= 1");
    std::vector<SweepRow> rows;
    for (auto& p : expand_grid(spec)) {
        SweepRow row;
        row.mc = monte_carlo_sic(p.cfg, spec.trials, exec);
        row.theory_residual = with_theory ? theory_residual_power(p.cfg) : kNaN;
        row.point = std::move(p);
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace fdsic
