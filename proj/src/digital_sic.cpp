#include "fdsic/digital_sic.hpp"

#include <sstream>
#include <string>

#include <Eigen/SVD>

namespace fdsic {

LinearDsicEstimate linear_ls_estimate(const CVec& rx_freq, const CVec& tx_freq, std::span<const int> used_bins) {
    if (rx_freq.size() != tx_freq.size()) throw DimensionError("linear_ls_estimate: rx and tx lengths differ");
    const auto K = static_cast<int>(rx_freq.size());
    LinearDsicEstimate est{CVec::Zero(K)};
    auto fit = [&](int k) {
        if (k < 0 || k >= K) throw DimensionError("linear_ls_estimate: bin index outside [0, K)");
        if (tx_freq[k] == cplx(0.0))
            throw NumericalError("linear_ls_estimate: preamble bin " + std::to_string(k) + " is zero");
        est.h_res[k] = rx_freq[k] / tx_freq[k];
    };
    if (used_bins.empty()) {
        for (int k = 0; k < K; ++k) fit(k);
    } else {
        for (int k : used_bins) fit(k);
    }
    return est;
}

CVec linear_cancel(const CVec& rx_freq, const CVec& tx_freq, const LinearDsicEstimate& est) {
    if (rx_freq.size() != tx_freq.size() || rx_freq.size() != est.h_res.size())
        throw DimensionError("linear_cancel: rx, tx and estimate lengths differ");
    return rx_freq - est.h_res.cwiseProduct(tx_freq);
}

CMat hammerstein_regressor(const CVec& x, int P, int L, int S) {
    if (P < 1 || L < 1 || S < 1) throw ConfigError("hammerstein_regressor: P, L and S must be positive");
    if (x.size() < static_cast<Eigen::Index>(S) + L - 1)
        throw DimensionError("hammerstein_regressor: need " + std::to_string(S + L - 1) + " input samples, got " +
                             std::to_string(x.size()));
    const Eigen::Index n_in = static_cast<Eigen::Index>(S) + L - 1;
    // Basis functions once per input sample, then lagged copies.
    CMat basis(n_in, P);
    for (Eigen::Index n = 0; n < n_in; ++n) {
        const double a = std::norm(x[n]);
        cplx v = x[n];
        for (int p = 0; p < P; ++p) {
            basis(n, p) = v;
            v *= a;
        }
    }
    CMat f(S, static_cast<Eigen::Index>(P) * L);
    for (int p = 0; p < P; ++p)
        for (int l = 0; l < L; ++l) f.col(static_cast<Eigen::Index>(p) * L + l) = basis.col(p).segment(L - 1 - l, S);
    return f;
}

HammersteinDsicModel hammerstein_ls(const CVec& y, const CMat& f, int P, int L) {
    if (f.cols() != static_cast<Eigen::Index>(P) * L)
        throw DimensionError("hammerstein_ls: regressor has " + std::to_string(f.cols()) + " columns, expected P*L = " +
                             std::to_string(P * L));
    if (y.size() != f.rows()) throw DimensionError("hammerstein_ls: observation and regressor row counts differ");
    if (f.rows() < f.cols()) throw NumericalError("hammerstein_ls: fewer observations than unknowns");
    Eigen::BDCSVD<CMat> svd(f, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& s = svd.singularValues();
    const double smin = s[s.size() - 1];
    const double cond = smin > 0.0 ? s[0] / smin : std::numeric_limits<double>::infinity();
    if (!(cond < 1e10)) {
        std::ostringstream msg;
        msg << "hammerstein_ls: regressor is rank deficient (condition estimate " << cond
            << "); use a high-PAPR preamble such as a random QAM OFDM symbol";
        throw NumericalError(msg.str());
    }
    return {svd.solve(y), P, L};
}

CVec hammerstein_cancel(const CVec& y, const CVec& x, const HammersteinDsicModel& model) {
    if (model.b.size() != static_cast<Eigen::Index>(model.P) * model.L)
        throw DimensionError("hammerstein_cancel: model size does not match P*L");
    const CMat f = hammerstein_regressor(x, model.P, model.L, static_cast<int>(y.size()));
    return y - f * model.b;
}

}  // namespace fdsic
