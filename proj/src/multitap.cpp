#include "fdsic/multitap.hpp"

#include <algorithm>
#include <numbers>
#include <sstream>

#include <Eigen/QR>
#include <Eigen/SVD>

#include "fdsic/dft.hpp"

namespace fdsic {

TapDelayConfig TapDelayConfig::matched(int num_taps, double sample_period_s, int K) {
    TapDelayConfig c;
    for (int i = 0; i < num_taps; ++i) c.delays_s.push_back(i * sample_period_s);
    c.delta_w = 2.0 * std::numbers::pi / (K * sample_period_s);
    return c;
}

TapDelayConfig TapDelayConfig::evenly_spaced(int num_taps, double tau_min_s, double tau_max_s,
                                             double sample_period_s, int K) {
    TapDelayConfig c;
    if (num_taps == 1) {
        c.delays_s.push_back(tau_min_s);
    } else {
        for (int i = 0; i < num_taps; ++i)
            c.delays_s.push_back(tau_min_s + (tau_max_s - tau_min_s) * i / (num_taps - 1));
    }
    c.delta_w = 2.0 * std::numbers::pi / (K * sample_period_s);
    return c;
}

void TapDelayConfig::validate() const {
    if (delays_s.empty()) throw ConfigError("circuit: at least one delay line is required");
    for (double d : delays_s)
        if (!std::isfinite(d)) throw ConfigError("circuit: delays must be finite");
    auto sorted = delays_s;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw ConfigError("circuit: delays must be distinct");
    if (!(delta_w > 0.0) || !std::isfinite(delta_w)) throw ConfigError("circuit: delta_w must be positive");
}

void QuantizerSpec::validate() const {
    if (mode == QuantMode::ideal) return;
    if (phase_bits && *phase_bits < 1) throw ConfigError("quantizer: phase_bits must be >= 1");
    if (phase_bits && *phase_bits > 52) throw ConfigError("quantizer: phase_bits above 52 is below double resolution");
    if (atten_step_db && !(*atten_step_db > 0.0 && std::isfinite(*atten_step_db)))
        throw ConfigError("quantizer: atten_step_db must be positive");
    if (!(max_atten_db > 0.0) || !std::isfinite(max_atten_db))
        throw ConfigError("quantizer: max_atten_db must be positive");
}

OmegaMatrix build_omega(const TapDelayConfig& cfg, int K, std::span<const int> bins) {
    if (K < 1) throw DimensionError("build_omega: K must be positive");
    cfg.validate();
    std::vector<int> rows;
    if (bins.empty()) {
        for (int k = 0; k < K; ++k) rows.push_back(k);
    } else {
        rows.assign(bins.begin(), bins.end());
    }
    OmegaMatrix om;
    om.delays_s = cfg.delays_s;
    om.entries.resize(static_cast<Eigen::Index>(rows.size()), cfg.num_taps());
    for (size_t r = 0; r < rows.size(); ++r) {
        if (rows[r] < 0 || rows[r] >= K) throw DimensionError("build_omega: bin index outside [0, K)");
        const double kw = signed_bin(rows[r], K) * cfg.delta_w;
        for (int i = 0; i < cfg.num_taps(); ++i)
            om.entries(static_cast<Eigen::Index>(r), i) = std::polar(1.0, -kw * cfg.delays_s[static_cast<size_t>(i)]);
    }
    return om;
}

WienerSolver::WienerSolver(const OmegaMatrix& omega) {
    if (omega.entries.cols() == 0 || omega.entries.rows() < omega.entries.cols())
        throw NumericalError("wiener: Omega must have at least as many rows as columns and one column");
    Eigen::JacobiSVD<CMat> svd(omega.entries);
    const auto& s = svd.singularValues();
    const double smin = s[s.size() - 1];
    condition_ = smin > 0.0 ? (s[0] / smin) * (s[0] / smin) : std::numeric_limits<double>::infinity();
    if (!(condition_ < 1e12)) {
        std::ostringstream msg;
        msg << "wiener: R = Omega^* Omega is ill-conditioned (condition estimate " << condition_ << ")";
        throw NumericalError(msg.str());
    }
    const Eigen::HouseholderQR<CMat> qr(omega.entries);
    pinv_ = qr.solve(CMat::Identity(omega.entries.rows(), omega.entries.rows()));
}

TapCoefficients WienerSolver::solve(const CVec& h_hat) const {
    if (h_hat.size() != pinv_.cols()) throw DimensionError("wiener: estimate length does not match Omega rows");
    return {pinv_ * h_hat};
}

TapCoefficients wiener_solve(const OmegaMatrix& omega, const ChannelEstimate& estimate) {
    return WienerSolver(omega).solve(estimate.h_hat);
}

TapCoefficients quantize_coefficients(const TapCoefficients& w, const QuantizerSpec& spec, RandomStream& rng) {
    if (spec.mode == QuantMode::ideal) return w;
    TapCoefficients out{w.w};
    if (spec.mode == QuantMode::stochastic) {
        // Both draws are taken for every tap whatever the resolution, so
        // settings that differ only in (B, delta) see the same uniforms.
        const double half_phase = spec.phase_bits ? std::numbers::pi / std::ldexp(1.0, *spec.phase_bits) : 0.0;
        const double half_atten = spec.atten_step_db ? *spec.atten_step_db / 2.0 : 0.0;
        for (Eigen::Index i = 0; i < out.w.size(); ++i) {
            const double u_a = rng.uniform(-1.0, 1.0);
            const double u_p = rng.uniform(-1.0, 1.0);
            const double n_a = u_a * half_atten;
            const double n_p = u_p * half_phase;
            out.w[i] *= std::pow(10.0, n_a / 20.0) * std::polar(1.0, -n_p);
        }
        return out;
    }
    for (Eigen::Index i = 0; i < out.w.size(); ++i) {
        const double a = std::abs(w.w[i]);
        double atten_db = a > 0.0 ? -20.0 * std::log10(a) : spec.max_atten_db;
        double phi = a > 0.0 ? -std::arg(w.w[i]) : 0.0;
        if (spec.atten_step_db) atten_db = std::round(atten_db / *spec.atten_step_db) * *spec.atten_step_db;
        if (spec.phase_bits) {
            const double step = 2.0 * std::numbers::pi / std::ldexp(1.0, *spec.phase_bits);
            phi = std::round(phi / step) * step;
        }
        out.w[i] = std::polar(std::pow(10.0, -atten_db / 20.0), -phi);
    }
    return out;
}

CVec circuit_response(const OmegaMatrix& omega, const TapCoefficients& w) {
    if (omega.entries.cols() != w.w.size())
        throw DimensionError("circuit_response: Omega has " + std::to_string(omega.entries.cols()) +
                             " columns but w has " + std::to_string(w.w.size()) + " entries");
    return omega.entries * w.w;
}

double residual_power(const CVec& h_si, const CVec& h_cir) {
    if (h_si.size() != h_cir.size() || h_si.size() == 0)
        throw DimensionError("residual_power: responses must be non-empty and of equal length");
    return (h_si - h_cir).squaredNorm() / static_cast<double>(h_si.size());
}

}  // namespace fdsic
