#include <doctest.h>

#include "fdsic/dft.hpp"
#include "fdsic/digital_sic.hpp"
#include "fdsic/ofdm.hpp"
#include "fdsic/pa_model.hpp"
#include "oracles.hpp"

using namespace fdsic;

namespace {

double power(const CVec& x) { return x.squaredNorm() / static_cast<double>(x.size()); }

// Random 64QAM OFDM body of `symbols` blocks, unit mean power.
CVec qam_body(std::mt19937_64& gen, int K, int symbols) {
    const auto pts = oracle::qam_points(64);
    std::uniform_int_distribution<std::size_t> pick(0, pts.size() - 1);
    CVec out(static_cast<Eigen::Index>(K) * symbols);
    CVec X(K);
    for (int s = 0; s < symbols; ++s) {
        for (int k = 0; k < K; ++k) X[k] = pts[pick(gen)];
        out.segment(static_cast<Eigen::Index>(s) * K, K) = oracle::idft(X);
    }
    return out;
}

// Circular convolution of each K-block with h.
CVec circ_conv(const CVec& x, const CVec& h, int K) {
    CVec y = CVec::Zero(x.size());
    for (Eigen::Index s = 0; s < x.size() / K; ++s)
        for (int n = 0; n < K; ++n)
            for (Eigen::Index l = 0; l < h.size(); ++l) y[s * K + n] += h[l] * x[s * K + ((n - l) % K + K) % K];
    return y;
}

// Block prefixed with the last L-1 samples of itself, so the regressor sees
// the cyclic history of every sample.
CVec cyclic(const CVec& block, int L) {
    CVec out(block.size() + L - 1);
    out << block.tail(L - 1), block;
    return out;
}

// Concatenated blocks each get their own cyclic history, so regress block by block.
CMat stacked_regressor(const CVec& x, int K, int P, int L) {
    const Eigen::Index blocks = x.size() / K;
    CMat f(x.size(), static_cast<Eigen::Index>(P) * L);
    for (Eigen::Index s = 0; s < blocks; ++s)
        f.middleRows(s * K, K) = hammerstein_regressor(cyclic(x.segment(s * K, K), L), P, L, K);
    return f;
}

CVec noise(std::mt19937_64& gen, Eigen::Index n, double var) {
    std::normal_distribution<double> g(0.0, std::sqrt(var / 2));
    CVec z(n);
    for (auto& v : z) v = cplx(g(gen), g(gen));
    return z;
}

CVec random_taps(std::mt19937_64& gen, int n) {
    CVec h = noise(gen, n, 1.0);
    return h / std::sqrt(h.squaredNorm());
}

struct Residuals {
    double linear = 0;
    double nonlinear = 0;
    double distortion = 0;
};

// One preamble / data pair through a cyclic channel after the PA.
Residuals one_frame(std::mt19937_64& gen, const HammersteinPa& pa, int K, int pre_symbols, double noise_var) {
    const int P = 2, L = 8;
    const CVec h = random_taps(gen, 4);
    const CVec pre = qam_body(gen, K, pre_symbols);
    const CVec data = qam_body(gen, K, 1);
    const CVec y_pre = circ_conv(apply_pa(pre, pa), h, K) + noise(gen, pre.size(), noise_var);
    const CVec y_data = circ_conv(apply_pa(data, pa), h, K) + noise(gen, K, noise_var);

    Residuals r;
    const auto lin = linear_ls_estimate(oracle::dft(y_pre.head(K)), oracle::dft(pre.head(K)));
    r.linear = power(linear_cancel(oracle::dft(y_data), oracle::dft(data), lin));

    const auto model = hammerstein_ls(y_pre, stacked_regressor(pre, K, P, L), P, L);
    r.nonlinear = power(hammerstein_cancel(y_data, cyclic(data, L), model));

    if (!pa.is_linear()) r.distortion = power(circ_conv(third_order_component(data, pa), h, K));
    return r;
}

}  // namespace

TEST_CASE("linear LS estimate and cancel") {
    std::mt19937_64 gen(3);
    const CVec tx = noise(gen, 16, 1.0);
    const auto ones = linear_ls_estimate(tx, tx);
    CHECK((ones.h_res - CVec::Ones(16)).norm() < 1e-15);
    CHECK(linear_ls_estimate(CVec::Zero(16), tx).h_res.norm() == 0.0);

    const CVec H = noise(gen, 16, 1.0);
    const CVec rx = H.cwiseProduct(tx);
    const auto est = linear_ls_estimate(rx, tx);
    CHECK(10 * std::log10(power(linear_cancel(rx, tx, est)) / power(rx)) < -200);
    CHECK(linear_cancel(rx, tx, LinearDsicEstimate{CVec::Zero(16)}) == rx);

    const std::vector<int> used{1, 2, 15};
    const auto partial = linear_ls_estimate(rx, tx, used);
    CHECK(partial.h_res[0] == cplx(0.0));
    CHECK(std::abs(partial.h_res[2] - H[2]) < 1e-14);

    CVec holed = tx;
    holed[2] = 0.0;
    CHECK_THROWS_AS(linear_ls_estimate(rx, holed), NumericalError);
    CHECK_NOTHROW(linear_ls_estimate(rx, holed, std::vector<int>{1, 3}));
    CHECK_THROWS_AS(linear_ls_estimate(rx, tx.head(8)), DimensionError);
    CHECK_THROWS_AS(linear_cancel(rx, tx, LinearDsicEstimate{CVec::Zero(8)}), DimensionError);
}

TEST_CASE("Hammerstein regressor layout") {
    std::mt19937_64 gen(4);
    const CVec x = noise(gen, 40, 1.0);
    const CMat one = hammerstein_regressor(x, 1, 1, 40);
    CHECK(one.cols() == 1);
    CHECK((one.col(0) - x).norm() == 0.0);

    const CMat f = hammerstein_regressor(x, 2, 8, 33);
    CHECK(f.rows() == 33);
    CHECK(f.cols() == 16);
    for (int s = 0; s < 33; ++s)
        for (int l = 0; l < 8; ++l) {
            const cplx v = x[s + 7 - l];
            CHECK(f(s, l) == v);
            CHECK(std::abs(f(s, 8 + l) - std::norm(v) * v) < 1e-14);
        }

    CVec unit(20);
    for (int n = 0; n < 20; ++n) unit[n] = std::polar(1.0, 0.7 * n * n);
    const CMat fu = hammerstein_regressor(unit, 2, 3, 18);
    CHECK((fu.leftCols(3) - fu.rightCols(3)).norm() < 1e-14);

    CHECK_THROWS_AS(hammerstein_regressor(x, 2, 8, 34), DimensionError);
    CHECK_THROWS_AS(hammerstein_regressor(x, 0, 8, 10), ConfigError);
}

TEST_CASE("Hammerstein LS recovers known coefficients and stays orthogonal") {
    std::mt19937_64 gen(5);
    for (int trial = 0; trial < 20; ++trial) {
        const int P = 1 + trial % 3, L = 1 + trial % 8;
        const CVec x = qam_body(gen, 64, 4);
        const int S = static_cast<int>(x.size()) - L + 1;
        const CMat f = hammerstein_regressor(x, P, L, S);
        const CVec b = noise(gen, P * L, 1.0);
        const auto exact = hammerstein_ls(f * b, f, P, L);
        CHECK((exact.b - b).norm() <= 1e-9 * b.norm());
        CHECK(hammerstein_cancel(f * b, x, exact).norm() <= 1e-9 * (f * b).norm());

        const CVec y = f * b + noise(gen, S, 0.1);
        const auto fit = hammerstein_ls(y, f, P, L);
        const CVec r = y - f * fit.b;
        CHECK((f.adjoint() * r).norm() <= 1e-8 * f.norm() * r.norm());
        CHECK(hammerstein_cancel(y, x, HammersteinDsicModel{CVec::Zero(P * L), P, L}) == y);
    }
    const CVec x = qam_body(gen, 64, 1);
    const CMat f = hammerstein_regressor(x, 2, 8, 57);
    CHECK(hammerstein_ls(CVec::Zero(57), f, 2, 8).b.norm() == 0.0);
    CHECK_THROWS_AS(hammerstein_ls(CVec::Zero(57), f, 2, 4), DimensionError);
    CHECK_THROWS_AS(hammerstein_ls(CVec::Zero(50), f, 2, 8), DimensionError);
}

TEST_CASE("constant-modulus preamble is rejected") {
    CVec unit(300);
    for (int n = 0; n < 300; ++n) unit[n] = std::polar(1.0, 0.3 * n * n);
    const CMat f = hammerstein_regressor(unit, 2, 8, 293);
    try {
        hammerstein_ls(CVec::Ones(293), f, 2, 8);
        FAIL("expected rank deficiency");
    } catch (const NumericalError& e) {
        CHECK(std::string(e.what()).find("PAPR") != std::string::npos);
    }
}

TEST_CASE("nonlinear canceller reaches the noise floor") {
    std::mt19937_64 gen(6);
    const double noise_var = 1e-6;
    const int K = 64, L = 8;
    const auto pa = normalized(measured_pa());
    const CVec h = random_taps(gen, 5);
    const CVec pre = qam_body(gen, K, 64);  // 4096 samples
    const CMat f = stacked_regressor(pre, K, 2, L);
    CHECK(f.rows() == 4096);
    const CVec y_pre = circ_conv(apply_pa(pre, pa), h, K) + noise(gen, pre.size(), noise_var);
    const auto model = hammerstein_ls(y_pre, f, 2, L);

    double resid = 0;
    const int data_symbols = 50;
    for (int s = 0; s < data_symbols; ++s) {
        const CVec data = qam_body(gen, K, 1);
        const CVec y = circ_conv(apply_pa(data, pa), h, K) + noise(gen, K, noise_var);
        resid += power(hammerstein_cancel(y, cyclic(data, L), model)) / data_symbols;
    }
    CHECK(std::abs(10 * std::log10(resid / noise_var)) < 1.0);
}

TEST_CASE("linear cancellation leaves the cubic distortion") {
    std::mt19937_64 gen(7);
    const auto pa = normalized(measured_pa());
    const double noise_var = 1e-7;
    double lin = 0, dist = 0;
    for (int t = 0; t < 200; ++t) {
        const auto r = one_frame(gen, pa, 64, 2, noise_var);
        lin += r.linear;
        dist += r.distortion;
    }
    CHECK(lin > 100 * 200 * noise_var);
    CHECK(lin / dist > 0.1);
    CHECK(lin / dist < 10.0);
}

TEST_CASE("nonlinear cancellation beats linear on amplifier-distorted frames") {
    std::mt19937_64 gen(8);
    const auto pa = normalized(measured_pa());
    double lin = 0, nl = 0;
    int wins = 0;
    const int trials = 1000;
    for (int t = 0; t < trials; ++t) {
        const auto r = one_frame(gen, pa, 64, 8, 1e-6);
        lin += r.linear;
        nl += r.nonlinear;
        wins += r.nonlinear <= r.linear;
    }
    CHECK(nl < lin);
    CHECK(wins == trials);
}

TEST_CASE("time-domain model estimates a linear channel with less noise") {
    std::mt19937_64 gen(9);
    double lin = 0, nl = 0;
    const double noise_var = 1e-3;
    for (int t = 0; t < 1000; ++t) {
        const auto r = one_frame(gen, ideal_pa(), 64, 8, noise_var);
        lin += r.linear;
        nl += r.nonlinear;
    }
    lin /= 1000;
    nl /= 1000;
    CHECK(nl < lin);
    // Per-bin LS adds noise scaled by 1/|X|^2 of the preamble bin; 16
    // coefficients over 512 samples barely add any.
    double inv = 0;
    const auto pts = oracle::qam_points(64);
    for (const auto& p : pts) inv += 1.0 / std::norm(p) / static_cast<double>(pts.size());
    CHECK(std::abs(10 * std::log10(lin / noise_var) - 10 * std::log10(1 + inv)) < 0.2);
    CHECK(10 * std::log10(nl / noise_var) < 0.3);
}
