#include "fdsic/si_channel.hpp"

#include <algorithm>
#include <numbers>
#include <string>

#include "fdsic/dft.hpp"

namespace fdsic {
namespace {

std::vector<int> all_bins(int K) {
    std::vector<int> b(static_cast<size_t>(K));
    for (int k = 0; k < K; ++k) b[static_cast<size_t>(k)] = k;
    return b;
}

// K x L matrix of exp(-j 2 pi k~ tau_l / (K T)).
CMat delay_matrix(const std::vector<double>& delays, double T, int K, std::span<const int> bins) {
    CMat F(static_cast<Eigen::Index>(bins.size()), static_cast<Eigen::Index>(delays.size()));
    for (size_t r = 0; r < bins.size(); ++r) {
        const double f = signed_bin(bins[r], K) / (K * T);
        for (size_t l = 0; l < delays.size(); ++l)
            F(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(l)) =
                std::polar(1.0, -2.0 * std::numbers::pi * f * delays[l]);
    }
    return F;
}

void check_bins(std::span<const int> bins, int K) {
    for (int k : bins)
        if (k < 0 || k >= K) throw DimensionError("bin index " + std::to_string(k) + " outside [0, K)");
}

}  // namespace

double SiChannelModel::tap_delay(std::size_t i) const {
    return tap_delays_s.empty() ? static_cast<double>(i) * sample_period_s : tap_delays_s.at(i);
}

std::vector<double> SiChannelModel::tap_powers() const {
    std::vector<double> p;
    p.reserve(tap_gains_db.size());
    for (double g : tap_gains_db) p.push_back(db_to_linear(g));
    return p;
}

int SiChannelModel::span_samples() const {
    double mx = 0.0;
    for (size_t i = 0; i < num_taps(); ++i) mx = std::max(mx, tap_delay(i));
    return static_cast<int>(std::ceil(mx / sample_period_s - 1e-9));
}

void SiChannelModel::validate() const {
    if (tap_gains_db.empty()) throw ConfigError("channel: at least one tap is required");
    for (double g : tap_gains_db)
        if (!std::isfinite(g)) throw ConfigError("channel: tap gains must be finite");
    if (!tap_delays_s.empty()) {
        if (tap_delays_s.size() != tap_gains_db.size())
            throw ConfigError("channel: tap_delays_s must list one delay per tap gain");
        for (double d : tap_delays_s)
            if (!std::isfinite(d) || d < 0.0) throw ConfigError("channel: tap delays must be finite and >= 0");
    }
    if (std::isnan(rician_factor_db)) throw ConfigError("channel: rician_factor_db is NaN");
    if (!(sample_period_s > 0.0) || !std::isfinite(sample_period_s))
        throw ConfigError("channel: sample_period_s must be positive");
}

SiChannelRealization sample_si_channel(const SiChannelModel& model, RandomStream& rng) {
    const auto powers = model.tap_powers();
    SiChannelRealization ch;
    ch.taps.resize(static_cast<Eigen::Index>(powers.size()));
    ch.sample_period_s = model.sample_period_s;
    for (size_t l = 0; l < powers.size(); ++l) {
        ch.delays_s.push_back(model.tap_delay(l));
        if (l == 0) {
            const double kf = db_to_linear(model.rician_factor_db);
            if (std::isinf(kf)) {
                ch.taps[0] = std::sqrt(powers[0]);
            } else {
                const double los = std::sqrt(powers[0] * kf / (kf + 1.0));
                ch.taps[0] = los + rng.cscg(powers[0] / (kf + 1.0));
            }
        } else {
            ch.taps[static_cast<Eigen::Index>(l)] = rng.cscg(powers[l]);
        }
    }
    return ch;
}

CVec freq_response(const SiChannelRealization& ch, int K) {
    const auto bins = all_bins(K);
    return freq_response(ch, K, bins);
}

CVec freq_response(const SiChannelRealization& ch, int K, std::span<const int> bins) {
    if (K < 1) throw DimensionError("freq_response: K must be positive");
    if (static_cast<size_t>(ch.taps.size()) != ch.delays_s.size())
        throw DimensionError("freq_response: taps and delays differ in length");
    double mx = 0.0;
    for (double d : ch.delays_s) mx = std::max(mx, d);
    if (mx / ch.sample_period_s > K - 1 + 1e-9)
        throw DimensionError("freq_response: channel spans more than K samples");
    check_bins(bins, K);
    return delay_matrix(ch.delays_s, ch.sample_period_s, K, bins) * ch.taps;
}

CMat tap_delay_matrix(const SiChannelModel& model, int K, std::span<const int> bins) {
    model.validate();
    check_bins(bins, K);
    std::vector<double> delays;
    for (size_t l = 0; l < model.num_taps(); ++l) delays.push_back(model.tap_delay(l));
    return delay_matrix(delays, model.sample_period_s, K, bins);
}

ExpectedCovariance expected_covariance(const SiChannelModel& model, int K) {
    const auto bins = all_bins(K);
    return expected_covariance(model, K, bins);
}

ExpectedCovariance expected_covariance(const SiChannelModel& model, int K, std::span<const int> bins) {
    model.validate();
    if (model.span_samples() > K - 1) throw DimensionError("expected_covariance: channel spans more than K samples");
    const CMat F = tap_delay_matrix(model, K, bins);
    const auto p = model.tap_powers();
    Eigen::VectorXd pw(static_cast<Eigen::Index>(p.size()));
    for (size_t l = 0; l < p.size(); ++l) pw[static_cast<Eigen::Index>(l)] = p[l];
    CMat E = F * pw.asDiagonal() * F.adjoint();
    // Exact Hermitian symmetry regardless of rounding in the product.
    E = 0.5 * (E + E.adjoint()).eval();
    return {E};
}

ExpectedCovariance realization_covariance(const CVec& h) { return {h * h.adjoint()}; }

ChannelEstimate estimate_channel(const CVec& h, double r_db, RandomStream& rng) {
    ChannelEstimate est{h, 0.0};
    if (h.size() == 0) throw DimensionError("estimate_channel: empty response");
    if (r_db == kNoiselessRdb) return est;
    est.noise_variance = db_to_linear(r_db) * h.squaredNorm() / static_cast<double>(h.size());
    for (Eigen::Index k = 0; k < h.size(); ++k) est.h_hat[k] += rng.cscg(est.noise_variance);
    return est;
}

ChannelEstimate estimate_channel_with_pa(const CVec& h, const CVec& tx_frame, const HammersteinPa& pa, double r_db,
                                         RandomStream& rng, std::span<const int> bins) {
    const auto K = static_cast<int>(h.size());
    if (tx_frame.size() != K) throw DimensionError("estimate_channel_with_pa: frame and response lengths differ");
    std::vector<int> own;
    if (bins.empty()) {
        own = all_bins(K);
        bins = own;
    }
    check_bins(bins, K);
    CVec hb(static_cast<Eigen::Index>(bins.size()));
    for (size_t i = 0; i < bins.size(); ++i) {
        const int k = bins[i];
        if (tx_frame[k] == cplx(0.0))
            throw NumericalError("estimate_channel_with_pa: pilot bin " + std::to_string(k) + " is zero");
        hb[static_cast<Eigen::Index>(i)] = h[k];
    }
    ChannelEstimate est = estimate_channel(hb, r_db, rng);
    if (pa.num_orders() >= 2 && pa.psi3() != 0.0) {
        const CVec X3 = dft_unitary(third_order_component(idft_unitary(tx_frame), pa));
        for (size_t i = 0; i < bins.size(); ++i) {
            const int k = bins[i];
            est.h_hat[static_cast<Eigen::Index>(i)] += X3[k] / tx_frame[k] * h[k];
        }
    }
    return est;
}

}  // namespace fdsic
