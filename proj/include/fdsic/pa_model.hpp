#pragma once

#include <vector>

#include "fdsic/types.hpp"

namespace fdsic {

/// Memoryless parallel Hammerstein amplifier:
///   x_pa[n] = sum_p psi_{2p+1} |x[n]|^{2p} x[n],  p = 0..P-1.
struct HammersteinPa {
    /// psi_1, psi_3, psi_5, ... (real).
    std::vector<double> odd_coeffs{1.0};

    int num_orders() const { return static_cast<int>(odd_coeffs.size()); }
    int highest_order() const { return 2 * num_orders() - 1; }
    double psi1() const { return odd_coeffs.at(0); }
    /// Third-order coefficient, 0 for a linear model.
    double psi3() const { return odd_coeffs.size() > 1 ? odd_coeffs[1] : 0.0; }
    bool is_linear() const;

    void validate() const;
};

/// Third-order fit of the measured amplifier: 35.89 x - 2.24 |x|^2 x.
HammersteinPa measured_pa();

/// Linear amplifier with unit gain.
HammersteinPa ideal_pa();

/// Divides every coefficient by psi_1, giving unit linear gain.
HammersteinPa normalized(const HammersteinPa& pa);

CVec apply_pa(const CVec& x, const HammersteinPa& pa);

/// psi_3 |x[n]|^2 x[n]. Requires a model with at least two orders.
CVec third_order_component(const CVec& x, const HammersteinPa& pa);

}  // namespace fdsic
