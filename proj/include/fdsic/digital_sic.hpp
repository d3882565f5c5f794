#pragma once

#include <span>

#include "fdsic/types.hpp"

namespace fdsic {

struct LinearDsicEstimate {
    CVec h_res;
};

/// Per-bin least squares from one preamble symbol: rx[k] / tx[k] on the used
/// bins (all bins when `used_bins` is empty), zero elsewhere.
LinearDsicEstimate linear_ls_estimate(const CVec& rx_freq, const CVec& tx_freq, std::span<const int> used_bins = {});

/// rx[k] - h_res[k] tx[k].
CVec linear_cancel(const CVec& rx_freq, const CVec& tx_freq, const LinearDsicEstimate& est);

/// Coefficients b_{p,l} of the time-domain Hammerstein canceller, stored
/// order-major: b[p * L + l].
struct HammersteinDsicModel {
    CVec b;
    int P = 0;
    int L = 0;
};

/// Regressor with S rows and P*L columns. Row s, column p*L + l holds
/// f_p(x[s + L - 1 - l]) with f_p(x) = |x|^{2p} x, i.e. `x` starts L-1
/// samples before the first observed output sample. Needs x.size() >= S+L-1.
CMat hammerstein_regressor(const CVec& x, int P, int L, int S);

/// Least-squares fit of y = f b. Throws NumericalError when the regressor is
/// rank deficient (condition number above 1e10), which happens for
/// constant-modulus preambles.
HammersteinDsicModel hammerstein_ls(const CVec& y, const CMat& f, int P, int L);

/// y minus the reconstructed SI; `x` laid out as for hammerstein_regressor.
CVec hammerstein_cancel(const CVec& y, const CVec& x, const HammersteinDsicModel& model);

}  // namespace fdsic
