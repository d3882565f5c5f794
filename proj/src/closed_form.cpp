#include "fdsic/closed_form.hpp"

#include <limits>
#include <numbers>
#include <sstream>

#include <Eigen/SVD>

namespace fdsic {
namespace {

// Pieces shared by the residual formulas, all reduced to M x M products:
// tr(Omega A Omega^* X) = tr(A Omega^* X Omega).
struct Traces {
    double trE = 0.0;
    double trRinv = 0.0;
    double pi_E = 0.0;    // tr(Omega R^-1 Omega^* E)
    double pi2_E = 0.0;   // tr(Omega R^-2 Omega^* E)
    double pi_D = 0.0;    // tr(Omega R^-1 Omega^* D)
    double pi2_D = 0.0;   // tr(Omega R^-2 Omega^* D)
};

CMat checked_inverse_gram(const CMat& omega) {
    const CMat R = omega.adjoint() * omega;
    Eigen::JacobiSVD<CMat> svd(R);
    const auto& s = svd.singularValues();
    const double cond = s[s.size() - 1] > 0.0 ? s[0] / s[s.size() - 1] : std::numeric_limits<double>::infinity();
    if (!(cond < 1e12)) {
        std::ostringstream msg;
        msg << "closed form: R = Omega^* Omega is singular or ill-conditioned (condition estimate " << cond << ")";
        throw NumericalError(msg.str());
    }
    CMat Rinv = R.inverse();
    return 0.5 * (Rinv + Rinv.adjoint());
}

Traces traces(const TheoryInputs& in, bool with_diag) {
    in.validate();
    const CMat& Om = in.omega.entries;
    const CMat Rinv = checked_inverse_gram(Om);
    const CMat Rinv2 = Rinv * Rinv;
    Traces t;
    t.trE = in.E.trace().real();
    t.trRinv = Rinv.trace().real();
    const CMat G = Om.adjoint() * in.E * Om;
    t.pi_E = (Rinv * G).trace().real();
    t.pi2_E = (Rinv2 * G).trace().real();
    if (with_diag) {
        const CMat GD = Om.adjoint() * in.E.diagonal().asDiagonal() * Om;
        t.pi_D = (Rinv * GD).trace().real();
        t.pi2_D = (Rinv2 * GD).trace().real();
    }
    return t;
}

}  // namespace

QuantConstants quant_constants(int phase_bits, double atten_step_db) {
    if (phase_bits < 1) throw ConfigError("quant_constants: phase_bits must be >= 1");
    if (!(atten_step_db > 0.0) || !std::isfinite(atten_step_db))
        throw ConfigError("quant_constants: atten_step_db must be positive");
    const double levels = std::ldexp(1.0, phase_bits);
    const double ln10 = std::numbers::ln10;
    const double d = atten_step_db;
    QuantConstants c;
    c.P = levels / std::numbers::pi * std::sin(std::numbers::pi / levels);
    // 10^(x) - 10^(-x) written as 2 sinh(x ln 10) to stay accurate for tiny steps.
    c.A1 = 20.0 / (d * ln10) * 2.0 * std::sinh(d / 40.0 * ln10);
    c.A2 = 10.0 / (d * ln10) * 2.0 * std::sinh(d / 20.0 * ln10);
    return c;
}

QuantConstants quant_constants(const QuantizerSpec& spec) {
    spec.validate();
    if (spec.mode == QuantMode::ideal) return QuantConstants::ideal();
    QuantConstants c;
    if (spec.phase_bits) c.P = quant_constants(*spec.phase_bits, 1.0).P;
    if (spec.atten_step_db) {
        const auto a = quant_constants(1, *spec.atten_step_db);
        c.A1 = a.A1;
        c.A2 = a.A2;
    }
    return c;
}

PaMoments pa_moments(double psi3, const ConstellationMoments& m, int K) {
    if (K < 2) throw PreconditionError("pa_moments: K must be at least 2");
    const double k = K;
    const double p1 = m.p1, p2 = m.p2, p3 = m.p3;
    const double s = psi3 * psi3 / (k * k);
    PaMoments out;
    out.psi3 = psi3;
    out.K = K;
    out.moments = m;
    out.m1 = psi3 * p1 * (2.0 * k - 1.0) / k;
    out.m2 = s * ((4 * k * k - 10 * k + 6) * p1 * p1 + (4 * k - 3) * p2 + (k - 1) * p1 * p2 * p3 +
                  2 * (k * k - 3 * k + 2) * p1 * p1 * p1 * p3);
    out.m3 = s * ((4 * k * k - 6 * k) * p1 * p1 + 4 * (k - 1) * p2);
    return out;
}

void TheoryInputs::validate() const {
    if (E.rows() == 0 || E.rows() != E.cols()) throw DimensionError("theory: E must be a non-empty square matrix");
    if (omega.rows() != E.rows())
        throw DimensionError("theory: Omega has " + std::to_string(omega.rows()) + " rows but E is " +
                             std::to_string(E.rows()) + " x " + std::to_string(E.cols()));
    if (omega.cols() < 1) throw DimensionError("theory: Omega needs at least one column");
    if (!(sigma2 >= 0.0) || !std::isfinite(sigma2)) throw ConfigError("theory: sigma2 must be finite and >= 0");
}

double residual_power_ideal(const TheoryInputs& in) {
    const Traces t = traces(in, false);
    const double K = in.K();
    return in.M() / K * in.sigma2 + (t.trE - t.pi_E) / K;
}

double residual_power_quantized(const TheoryInputs& in) {
    const Traces t = traces(in, false);
    const double K = in.K();
    const double M = in.M();
    const double a = in.constants.mean();
    const double A2 = in.constants.A2;
    return t.trE / K + (a * a - 2.0 * a) / K * t.pi_E + in.sigma2 / K * (a * a * M + (A2 - a * a) * K * t.trRinv) +
           (A2 - a * a) * t.pi2_E;
}

double residual_power_quantized_pa(const TheoryInputs& in, CrossTermSign sign) {
    if (!in.pa) throw PreconditionError("residual_power_quantized_pa: amplifier moments are required");
    const Traces t = traces(in, true);
    const double K = in.K();
    const double M = in.M();
    const double a = in.constants.mean();
    const double A2 = in.constants.A2;
    const double m1 = in.pa->m1, m2 = in.pa->m2, m3 = in.pa->m3;
    const double g = sign == CrossTermSign::plus ? 1.0 + 2.0 * m1 + m3 : 1.0 - 2.0 * m1 + m3;
    return t.trE / K + (g * a * a - 2.0 * (m1 + 1.0) * a) / K * t.pi_E + (m2 - m3) * a * a / K * t.pi_D +
           in.sigma2 / K * (a * a * M + (A2 - a * a) * K * t.trRinv) + g * (A2 - a * a) * t.pi2_E +
           (m2 - m3) * (A2 - a * a) * t.pi2_D;
}

double residual_floor_quantized(const CMat& E, const QuantConstants& c, int K) {
    return c.floor_factor() * E.trace().real() / K;
}

double residual_floor_quantized_pa(const CMat& E, const OmegaMatrix& omega, const QuantConstants& c,
                                   const PaMoments& pa, int K) {
    const CMat& Om = omega.entries;
    const CMat R = Om.adjoint() * Om;
    const CMat dev = R - static_cast<double>(K) * CMat::Identity(R.rows(), R.cols());
    if (dev.cwiseAbs().maxCoeff() > 1e-9 * K)
        throw PreconditionError("residual_floor_quantized_pa: requires matched delays (R = K I)");
    const double trE = E.trace().real();
    const double a = c.mean();
    const double tr_ood = (Om.adjoint() * E.diagonal().asDiagonal() * Om).trace().real();
    return residual_floor_quantized(E, c, K) + trE * (2.0 * pa.m1 * (c.A2 - a) + pa.m3 * c.A2) / K +
           c.A2 * (pa.m2 - pa.m3) / (static_cast<double>(K) * K) * tr_ood;
}

double sic_db(double residual_power, double reference_power) {
    if (!(residual_power > 0.0)) return std::numeric_limits<double>::infinity();
    return -10.0 * std::log10(residual_power / reference_power);
}

}  // namespace fdsic
