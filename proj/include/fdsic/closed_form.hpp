#pragma once

#include <optional>

#include "fdsic/multitap.hpp"
#include "fdsic/ofdm.hpp"
#include "fdsic/types.hpp"

namespace fdsic {

/// Moments of one quantization factor Q_ii = 10^(n_a/20) exp(-j n_p):
/// E[Q_ii] = P * A1 and E|Q_ii|^2 = A2.
struct QuantConstants {
    double P = 1.0;
    double A1 = 1.0;
    double A2 = 1.0;

    double mean() const { return P * A1; }
    /// E|Q_ii - 1|^2 = 1 - 2 P A1 + A2, the floor factor for matched delays.
    double floor_factor() const { return 1.0 - 2.0 * P * A1 + A2; }
    static QuantConstants ideal() { return {}; }
};

QuantConstants quant_constants(int phase_bits, double atten_step_db);
/// Constants for a spec whose components may be ideal.
QuantConstants quant_constants(const QuantizerSpec& spec);

/// Moments of N_PA[k] = X3[k] / X[k] for a third-order amplifier driven by a
/// random frame with every bin in use:
///   m1 = E[N_PA[k]], m2 = E|N_PA[k]|^2, m3 = E[N_PA[k1] N_PA^*[k2]], k1 != k2.
struct PaMoments {
    double m1 = 0.0;
    double m2 = 0.0;
    double m3 = 0.0;
    double psi3 = 0.0;
    int K = 0;
    ConstellationMoments moments;
};

PaMoments pa_moments(double psi3, const ConstellationMoments& moments, int K);

/// Everything the closed forms need. `E` is either an ensemble covariance or
/// a single realization's h h^*.
struct TheoryInputs {
    CMat E;
    OmegaMatrix omega;
    double sigma2 = 0.0;
    QuantConstants constants;
    std::optional<PaMoments> pa;

    int K() const { return static_cast<int>(E.rows()); }
    int M() const { return omega.cols(); }
    void validate() const;
};

/// Sign of the 2 m1 cross term in the PA-aware residual: (1 + 2 m1 + m3)
/// agrees with Monte Carlo, (1 - 2 m1 + m3) is kept for comparison only.
enum class CrossTermSign { plus, minus };

/// (M/K) sigma^2 + (1/K) tr(E - Omega R^-1 Omega^* E).
double residual_power_ideal(const TheoryInputs& in);

/// Average residual with quantized attenuators and phase shifters.
double residual_power_quantized(const TheoryInputs& in);

/// Average residual with quantized components and a third-order amplifier in
/// the estimation path. Requires `in.pa`.
double residual_power_quantized_pa(const TheoryInputs& in, CrossTermSign sign = CrossTermSign::plus);

/// (1 - 2 P A1 + A2) tr(E) / K.
double residual_floor_quantized(const CMat& E, const QuantConstants& c, int K);

/// Noise-free matched-delay floor with amplifier distortion. Throws
/// PreconditionError unless R = K I.
double residual_floor_quantized_pa(const CMat& E, const OmegaMatrix& omega, const QuantConstants& c,
                                   const PaMoments& pa, int K);

/// -10 log10(residual / reference); +infinity for a non-positive residual.
double sic_db(double residual_power, double reference_power = 1.0);

}  // namespace fdsic
