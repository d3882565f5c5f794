#include "fdsic/pa_model.hpp"

namespace fdsic {

bool HammersteinPa::is_linear() const {
    for (size_t i = 1; i < odd_coeffs.size(); ++i)
        if (odd_coeffs[i] != 0.0) return false;
    return true;
}

void HammersteinPa::validate() const {
    if (odd_coeffs.empty()) throw ConfigError("pa: at least the linear coefficient is required");
    for (double c : odd_coeffs)
        if (!std::isfinite(c)) throw ConfigError("pa: coefficients must be finite");
    if (odd_coeffs[0] == 0.0) throw ConfigError("pa: linear coefficient psi_1 must be nonzero");
}

HammersteinPa measured_pa() { return HammersteinPa{{35.89, -2.24}}; }

HammersteinPa ideal_pa() { return HammersteinPa{{1.0}}; }

HammersteinPa normalized(const HammersteinPa& pa) {
    pa.validate();
    HammersteinPa out = pa;
    const double g = pa.odd_coeffs[0];
    for (double& c : out.odd_coeffs) c /= g;
    out.odd_coeffs[0] = 1.0;
    return out;
}

CVec apply_pa(const CVec& x, const HammersteinPa& pa) {
    CVec y(x.size());
    for (Eigen::Index n = 0; n < x.size(); ++n) {
        const double a = std::norm(x[n]);
        // Horner in |x|^2.
        double g = 0.0;
        for (auto it = pa.odd_coeffs.rbegin(); it != pa.odd_coeffs.rend(); ++it) g = g * a + *it;
        y[n] = g * x[n];
    }
    return y;
}

CVec third_order_component(const CVec& x, const HammersteinPa& pa) {
    if (pa.num_orders() < 2) throw PreconditionError("third_order_component: model has no third-order term");
    const double psi3 = pa.odd_coeffs[1];
    CVec y(x.size());
    for (Eigen::Index n = 0; n < x.size(); ++n) y[n] = psi3 * std::norm(x[n]) * x[n];
    return y;
}

}  // namespace fdsic
