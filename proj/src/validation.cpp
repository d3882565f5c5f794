#include "fdsic/validation.hpp"

#include <algorithm>
#include <numbers>

#include "fdsic/closed_form.hpp"
#include "fdsic/dft.hpp"
#include "fdsic/digital_sic.hpp"
#include "fdsic/link_sim.hpp"

namespace fdsic {
namespace {

CheckResult at_most(std::string name, double value, double threshold) {
    return {std::move(name), value, threshold, "<=", value <= threshold};
}

CMat random_matrix(RandomStream& rng, Eigen::Index r, Eigen::Index c) {
    CMat m(r, c);
    for (Eigen::Index j = 0; j < c; ++j)
        for (Eigen::Index i = 0; i < r; ++i) m(i, j) = rng.cscg(1.0);
    return m;
}

TheoryInputs random_inputs(RandomStream& rng, int K, int M) {
    TapDelayConfig d;
    d.delta_w = 2.0 * std::numbers::pi / K;
    for (int i = 0; i < M; ++i) d.delays_s.push_back(i * 1.37 + rng.uniform(0.0, 0.5));
    TheoryInputs in;
    const CMat A = random_matrix(rng, K, 3);
    in.E = A * A.adjoint();
    in.omega = build_omega(d, K);
    in.sigma2 = rng.uniform(0.0, 0.1);
    return in;
}

double theory_mc_gap_db(const TrialConfig& cfg, std::int64_t trials) {
    const McSummary mc = monte_carlo_sic(cfg, trials);
    return std::abs(sic_db(theory_residual_power(cfg)) - mc.mean_sic_db);
}

}  // namespace

std::vector<CheckResult> run_validation_suite(std::uint64_t seed, std::int64_t trials) {
    std::vector<CheckResult> out;
    RandomStream rng(mix_seed(seed));

    {
        double worst = 0.0;
        for (int i = 0; i < 20; ++i) {
            TheoryInputs in = random_inputs(rng, 32, 1 + i % 6);
            in.constants = QuantConstants::ideal();
            const double a = residual_power_ideal(in);
            const double b = residual_power_quantized(in);
            worst = std::max(worst, std::abs(a - b) / std::abs(a));
        }
        out.push_back(at_most("ideal_constants_reduce_to_ideal_residual_rel", worst, 1e-12));
    }
    {
        const auto c = quant_constants(30, 1e-9);
        const double dev = std::max({std::abs(c.P - 1.0), std::abs(c.A1 - 1.0), std::abs(c.A2 - 1.0)});
        out.push_back(at_most("quant_constants_fine_limit_abs", dev, 1e-9));
    }
    {
        // Brute-force N_PA = X3 / X over random 64QAM frames.
        const int K = 64;
        const double psi3 = -2.24 / 35.89;
        OfdmConfig ofdm{K, K, 0, 64};
        const auto con = make_constellation(64);
        const std::int64_t frames = std::max<std::int64_t>(trials, 5000);
        cplx s1 = 0.0;
        double s2 = 0.0, s_sum = 0.0;
        for (std::int64_t f = 0; f < frames; ++f) {
            const CVec X = random_symbol_frame(rng, ofdm, con);
            const CVec x = idft_unitary(X);
            CVec x3(K);
            for (int n = 0; n < K; ++n) x3[n] = psi3 * std::norm(x[n]) * x[n];
            const CVec N = dft_unitary(x3).cwiseQuotient(X);
            s1 += N.sum();
            s2 += N.squaredNorm();
            s_sum += std::norm(N.sum());
        }
        const double n = static_cast<double>(frames) * K;
        const double m1 = s1.real() / n;
        const double m2 = s2 / n;
        const double m3 = (s_sum / static_cast<double>(frames) - K * m2) / (K * (K - 1.0));
        const PaMoments th = pa_moments(psi3, constellation_moments(con), K);
        out.push_back(at_most("pa_moment_m1_rel", std::abs(m1 / th.m1 - 1.0), 0.02));
        out.push_back(at_most("pa_moment_m2_rel", std::abs(m2 / th.m2 - 1.0), 0.02));
        out.push_back(at_most("pa_moment_m3_rel", std::abs(m3 / th.m3 - 1.0), 0.02));
    }
    {
        TrialConfig cfg = analog_preset(4, 10, 0.01);
        cfg.seed = seed;
        out.push_back(at_most("quantized_theory_vs_mc_db", theory_mc_gap_db(cfg, trials), 0.3));
        cfg.pa = measured_pa();
        out.push_back(at_most("quantized_pa_theory_vs_mc_db", theory_mc_gap_db(cfg, trials), 0.5));
    }
    {
        TrialConfig cfg = analog_preset(12, 6, 0.5);
        cfg.seed = seed;
        cfg.estimation_r_db = kNoiselessRdb;
        const TheoryInputs in = theory_inputs(cfg);
        const double floor = residual_floor_quantized(in.E, in.constants, in.K());
        const McSummary mc = monte_carlo_sic(cfg, trials);
        out.push_back(at_most("quantizer_floor_vs_mc_db", std::abs(sic_db(floor) - mc.mean_sic_db), 0.3));
    }
    {
        const int P = 2, L = 8, S = 512;
        CVec x(S + L - 1);
        for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = rng.cscg(1.0);
        CVec b(P * L);
        for (Eigen::Index i = 0; i < b.size(); ++i) b[i] = rng.cscg(1.0);
        const CMat f = hammerstein_regressor(x, P, L, S);
        const auto model = hammerstein_ls(f * b, f, P, L);
        out.push_back(at_most("hammerstein_noiseless_recovery_abs", (model.b - b).cwiseAbs().maxCoeff(), 1e-9));
    }
    {
        const HammersteinPa pa = normalized(measured_pa());
        CVec x(256);
        for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = rng.cscg(1.0);
        const double lo = 10.0 * std::log10(third_order_component(x, pa).squaredNorm());
        const double hi = 10.0 * std::log10(third_order_component(std::sqrt(10.0) * x, pa).squaredNorm());
        out.push_back(at_most("third_order_slope_error_db_per_db", std::abs((hi - lo) / 10.0 - 3.0), 0.01));
    }
    {
        const TheoryInputs in = random_inputs(rng, 64, 5);
        CVec h(64);
        for (Eigen::Index i = 0; i < h.size(); ++i) h[i] = rng.cscg(1.0);
        const auto w = WienerSolver(in.omega).solve(h);
        const double orth = (in.omega.entries.adjoint() * (h - circuit_response(in.omega, w))).norm() / h.norm();
        out.push_back(at_most("wiener_normal_equations_rel", orth, 1e-8));
    }
    return out;
}

}  // namespace fdsic
