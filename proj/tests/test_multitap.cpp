#include <doctest.h>

#include "fdsic/closed_form.hpp"
#include "fdsic/link_sim.hpp"
#include "fdsic/multitap.hpp"
#include "oracles.hpp"

using namespace fdsic;

namespace {

CVec random_vector(RandomStream& rng, int n) {
    CVec v(n);
    for (int i = 0; i < n; ++i) v[i] = rng.cscg(1.0);
    return v;
}

}  // namespace

TEST_CASE("matched delays give R = K I") {
    for (int K : {16, 64, 256}) {
        const auto om = build_omega(TapDelayConfig::matched(9, 1.0, K), K);
        const CMat R = om.entries.adjoint() * om.entries;
        CHECK((R - K * CMat::Identity(9, 9)).cwiseAbs().maxCoeff() < 1e-9 * K);
    }
    // Same with a physical sample period.
    const double T = 1.0 / 30.72e6;
    const auto om = build_omega(TapDelayConfig::matched(4, T, 2048), 2048);
    const CMat R = om.entries.adjoint() * om.entries;
    CHECK((R - 2048.0 * CMat::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-9 * 2048);
}

TEST_CASE("Omega entries") {
    TapDelayConfig zero{{0.0}, 2 * oracle::pi / 32};
    const auto om = build_omega(zero, 32);
    CHECK((om.entries - CMat::Ones(32, 1)).cwiseAbs().maxCoeff() == 0.0);

    const auto even = TapDelayConfig::evenly_spaced(4, 5e-9, 40e-9, 1.0 / 30.72e6, 2048);
    REQUIRE(even.num_taps() == 4);
    CHECK(even.delays_s[0] == 5e-9);
    CHECK(even.delays_s[3] == doctest::Approx(40e-9).epsilon(1e-15));
    CHECK(even.delays_s[1] == doctest::Approx(5e-9 + 35e-9 / 3).epsilon(1e-14));
    const auto big = build_omega(even, 2048);
    CHECK((big.entries.cwiseAbs().array() - 1.0).abs().maxCoeff() < 1e-12);

    const std::vector<int> bins{1, 2, 2046, 2047};
    const auto sub = build_omega(even, 2048, bins);
    CHECK(sub.rows() == 4);
    CHECK(std::abs(sub.entries(3, 0) - std::polar(1.0, 2 * oracle::pi * 5e-9 * 30.72e6 / 2048)) < 1e-12);

    CHECK_THROWS_AS(build_omega(TapDelayConfig{{1.0, 1.0}, 0.1}, 8), ConfigError);
    CHECK_THROWS_AS(build_omega(TapDelayConfig{{}, 0.1}, 8), ConfigError);
}

TEST_CASE("Wiener solution") {
    const int K = 64;
    RandomStream rng(1);
    SiChannelModel model;
    model.tap_gains_db = {0, -10, -20, -30};
    const auto ch = sample_si_channel(model, rng);
    const CVec h = freq_response(ch, K);
    const auto om = build_omega(TapDelayConfig::matched(4, 1.0, K), K);
    const auto w = wiener_solve(om, ChannelEstimate{h, 0.0});
    CHECK(residual_power(h, circuit_response(om, w)) < 1e-24);
    CHECK((w.w - ch.taps).norm() < 1e-12);

    const auto om1 = build_omega(TapDelayConfig::matched(1, 1.0, K), K);
    const CVec flat = CVec::Constant(K, cplx(0.4, 0.1));
    CHECK(std::abs(wiener_solve(om1, ChannelEstimate{flat, 0.0}).w[0] - cplx(0.4, 0.1)) < 1e-14);

    // Least-squares optimality and normal equations against random perturbations.
    const auto om3 = build_omega(TapDelayConfig::evenly_spaced(3, 0.2, 3.7, 1.0, K), K);
    const WienerSolver solver(om3);
    for (int t = 0; t < 10; ++t) {
        const CVec hh = random_vector(rng, K);
        const auto wo = solver.solve(hh);
        const CVec r = hh - circuit_response(om3, wo);
        CHECK((om3.entries.adjoint() * r).norm() <= 1e-8 * hh.norm());
        // Explicit normal-equations oracle.
        const CMat R = om3.entries.adjoint() * om3.entries;
        const CVec w_ref = R.inverse() * om3.entries.adjoint() * hh;
        CHECK((wo.w - w_ref).norm() < 1e-10 * w_ref.norm());
        const double best = residual_power(hh, circuit_response(om3, wo));
        for (int p = 0; p < 100; ++p) {
            TapCoefficients other{wo.w + 0.01 * random_vector(rng, 3)};
            CHECK(residual_power(hh, circuit_response(om3, other)) >= best);
        }
    }
    CHECK_THROWS_AS(solver.solve(CVec::Zero(K - 1)), DimensionError);
}

TEST_CASE("nearly coincident delays are rejected with the condition estimate") {
    const TapDelayConfig close{{0.0, 1e-9}, 2 * oracle::pi / 64};
    const auto om = build_omega(close, 64);
    try {
        WienerSolver s(om);
        FAIL("expected NumericalError");
    } catch (const NumericalError& e) {
        CHECK(std::string(e.what()).find("condition") != std::string::npos);
    }
}

TEST_CASE("round-to-nearest quantization bounds") {
    RandomStream rng(2);
    for (int B : {3, 6, 10}) {
        for (double d : {0.01, 0.1, 0.5}) {
            const QuantizerSpec spec{B, d, QuantMode::round_nearest, 120.0};
            const TapCoefficients w{random_vector(rng, 16)};
            const auto q = quantize_coefficients(w, spec, rng);
            for (int i = 0; i < 16; ++i) {
                CHECK(std::abs(20 * std::log10(std::abs(q.w[i]) / std::abs(w.w[i]))) <= d / 2 + 1e-12);
                double dphi = std::arg(q.w[i] / w.w[i]);
                CHECK(std::abs(dphi) <= oracle::pi / std::ldexp(1.0, B) + 1e-12);
                // Attenuation lands on the delta grid, phase on the 2^B grid.
                const double att = -20 * std::log10(std::abs(q.w[i])) / d;
                CHECK(std::abs(att - std::round(att)) < 1e-6);
                const double ph = -std::arg(q.w[i]) / (2 * oracle::pi / std::ldexp(1.0, B));
                CHECK(std::abs(ph - std::round(ph)) < 1e-6);
            }
        }
    }
    const QuantizerSpec spec{8, 0.1, QuantMode::round_nearest, 120.0};
    TapCoefficients zero{CVec::Zero(1)};
    const auto qz = quantize_coefficients(zero, spec, rng);
    CHECK(std::abs(qz.w[0]) == doctest::Approx(1e-6).epsilon(1e-9));
}

TEST_CASE("ideal quantizer is the identity") {
    RandomStream rng(3);
    const TapCoefficients w{random_vector(rng, 5)};
    QuantizerSpec spec;
    spec.mode = QuantMode::ideal;
    CHECK(quantize_coefficients(w, spec, rng).w == w.w);
    spec.mode = QuantMode::stochastic;
    spec.phase_bits.reset();
    spec.atten_step_db.reset();
    CHECK((quantize_coefficients(w, spec, rng).w - w.w).norm() == 0.0);
}

TEST_CASE("stochastic quantization moments") {
    for (auto [B, d] : {std::pair{6, 0.5}, std::pair{3, 2.0}, std::pair{10, 0.01}}) {
        const QuantizerSpec spec{B, d, QuantMode::stochastic, 120.0};
        const auto c = quant_constants(B, d);
        RandomStream rng(4);
        const int n = 1000000;
        TapCoefficients one{CVec::Ones(1)};
        cplx s1 = 0;
        double s2 = 0;
        for (int i = 0; i < n; ++i) {
            const cplx q = quantize_coefficients(one, spec, rng).w[0];
            s1 += q;
            s2 += std::norm(q);
        }
        CHECK(std::abs(s1.real() / n / c.mean() - 1.0) < 1e-3);
        CHECK(std::abs(s1.imag() / n) < 1e-3);
        CHECK(std::abs(s2 / n / c.A2 - 1.0) < 1e-3);
    }
}

TEST_CASE("circuit response") {
    const auto om = build_omega(TapDelayConfig::evenly_spaced(3, 0.0, 2.5, 1.0, 16), 16);
    CHECK(circuit_response(om, TapCoefficients{CVec::Zero(3)}).norm() == 0.0);
    const auto om1 = build_omega(TapDelayConfig{{0.0}, 2 * oracle::pi / 16}, 16);
    CHECK((circuit_response(om1, TapCoefficients{CVec::Ones(1)}) - CVec::Ones(16)).norm() == 0.0);
    RandomStream rng(5);
    const CVec a = random_vector(rng, 3), b = random_vector(rng, 3);
    const CVec lhs = circuit_response(om, TapCoefficients{a + b});
    const CVec rhs = circuit_response(om, TapCoefficients{a}) + circuit_response(om, TapCoefficients{b});
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
    CHECK_THROWS_AS(circuit_response(om, TapCoefficients{CVec::Zero(2)}), DimensionError);
}

TEST_CASE("residual power") {
    RandomStream rng(6);
    const CVec h = random_vector(rng, 32);
    CHECK(residual_power(h, h) == 0.0);
    CHECK(residual_power(h, CVec::Zero(32)) == doctest::Approx(h.squaredNorm() / 32).epsilon(1e-15));
    CHECK_THROWS_AS(residual_power(h, CVec::Zero(31)), DimensionError);
}

TEST_CASE("ensemble SIC orders with quantizer resolution") {
    auto mean_sic = [](std::optional<int> B, std::optional<double> d) {
        auto cfg = analog_preset(6, B, d);
        return monte_carlo_sic(cfg, 1000).mean_sic_db;
    };
    const double b6 = mean_sic(6, 0.01), b8 = mean_sic(8, 0.01), b10 = mean_sic(10, 0.01);
    CHECK(b6 <= b8);
    CHECK(b8 <= b10);
    const double d5 = mean_sic(10, 0.5), d1 = mean_sic(10, 0.1), d01 = mean_sic(10, 0.01);
    CHECK(d5 <= d1);
    CHECK(d1 <= d01);
}
