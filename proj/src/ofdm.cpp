#include "fdsic/ofdm.hpp"

#include <string>

#include "fdsic/dft.hpp"

namespace fdsic {

void OfdmConfig::validate() const {
    if (num_subcarriers < 1) throw ConfigError("ofdm: num_subcarriers must be positive");
    if (used_subcarriers < 1 || used_subcarriers > num_subcarriers)
        throw ConfigError("ofdm: used_subcarriers must lie in [1, num_subcarriers]");
    if (cp_length < 0) throw ConfigError("ofdm: cp_length must be non-negative");
    if (constellation_order != 4 && constellation_order != 16 && constellation_order != 64)
        throw ConfigError("ofdm: constellation_order must be 4, 16 or 64");
}

std::vector<int> OfdmConfig::used_bins() const {
    const int K = num_subcarriers;
    const int U = used_subcarriers;
    std::vector<int> bins;
    bins.reserve(static_cast<size_t>(U));
    if (U == K) {
        for (int k = 0; k < K; ++k) bins.push_back(k);
        return bins;
    }
    const int pos = (U + 1) / 2;
    const int neg = U / 2;
    for (int k = 1; k <= pos; ++k) bins.push_back(k);
    for (int k = K - neg; k < K; ++k) bins.push_back(k);
    return bins;
}

Constellation make_constellation(int order) {
    int m = 0;
    switch (order) {
        case 4: m = 2; break;
        case 16: m = 4; break;
        case 64: m = 8; break;
        default: throw ConfigError("unsupported constellation order " + std::to_string(order));
    }
    const int bits = order == 4 ? 1 : (order == 16 ? 2 : 3);
    const double scale = std::sqrt(2.0 * (order - 1) / 3.0);
    // Gray label g on one axis maps to amplitude level index gray^-1(g).
    auto level = [m](int g) {
        int b = g;
        for (int s = g >> 1; s != 0; s >>= 1) b ^= s;
        return 2 * b - (m - 1);
    };
    Constellation c;
    c.order = order;
    c.points.reserve(static_cast<size_t>(order));
    for (int label = 0; label < order; ++label) {
        const int gi = label >> bits;
        const int gq = label & ((1 << bits) - 1);
        c.points.emplace_back(level(gi) / scale, level(gq) / scale);
    }
    return c;
}

ConstellationMoments constellation_moments(const Constellation& c) {
    if (c.points.empty()) throw ConfigError("constellation has no points");
    double s1 = 0, s2 = 0, s3 = 0;
    for (const auto& x : c.points) {
        const double a = std::norm(x);
        if (a == 0.0) throw NumericalError("constellation contains the origin; E[1/|X|^2] undefined");
        s1 += a;
        s2 += a * a;
        s3 += 1.0 / a;
    }
    const double n = static_cast<double>(c.points.size());
    return {s1 / n, s2 / n, s3 / n};
}

CVec ofdm_modulate(const CVec& freq_symbols, const OfdmConfig& cfg) {
    const int K = cfg.num_subcarriers;
    if (freq_symbols.size() != K)
        throw DimensionError("ofdm_modulate: expected " + std::to_string(K) + " bins, got " +
                             std::to_string(freq_symbols.size()));
    const CVec body = idft_unitary(freq_symbols);
    CVec out(K + cfg.cp_length);
    out.head(cfg.cp_length) = body.tail(cfg.cp_length);
    out.tail(K) = body;
    return out;
}

CVec ofdm_demodulate(const CVec& time_samples, const OfdmConfig& cfg) {
    const int K = cfg.num_subcarriers;
    if (time_samples.size() < K + cfg.cp_length)
        throw DimensionError("ofdm_demodulate: need at least " + std::to_string(K + cfg.cp_length) + " samples");
    return dft_unitary(time_samples.segment(cfg.cp_length, K));
}

CVec random_symbol_frame(RandomStream& rng, const OfdmConfig& cfg, const Constellation& constellation) {
    CVec X = CVec::Zero(cfg.num_subcarriers);
    const size_t n = constellation.points.size();
    for (int k : cfg.used_bins()) X[k] = constellation.points[rng.index(n)];
    return X;
}

CVec random_symbol_frame(RandomStream& rng, const OfdmConfig& cfg) {
    return random_symbol_frame(rng, cfg, make_constellation(cfg.constellation_order));
}

}  // namespace fdsic
