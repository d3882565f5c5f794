#include "fdsic/dft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <utility>

namespace fdsic {
namespace {

// FFTW planning is not thread safe; execution of an existing plan on new
// arrays is.
class PlanCache {
  public:
    ~PlanCache() {
        for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
    }

    fftw_plan get(int n, int sign) {
        std::lock_guard<std::mutex> lock(mutex_);
        auto key = std::make_pair(n, sign);
        auto it = plans_.find(key);
        if (it != plans_.end()) return it->second;
        // Throwaway buffers: FFTW_ESTIMATE does not touch them, and
        // FFTW_UNALIGNED lets the plan run on Eigen storage later.
        auto* in = fftw_alloc_complex(static_cast<size_t>(n));
        auto* out = fftw_alloc_complex(static_cast<size_t>(n));
        fftw_plan p = fftw_plan_dft_1d(n, in, out, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
        fftw_free(in);
        fftw_free(out);
        plans_.emplace(key, p);
        return p;
    }

  private:
    std::mutex mutex_;
    std::map<std::pair<int, int>, fftw_plan> plans_;
};

PlanCache& cache() {
    static PlanCache c;
    return c;
}

CVec transform(const CVec& x, int sign) {
    const auto n = static_cast<int>(x.size());
    if (n == 0) throw DimensionError("dft: empty input");
    CVec in = x;
    CVec out(n);
    fftw_plan p = cache().get(n, sign);
    fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(in.data()), reinterpret_cast<fftw_complex*>(out.data()));
    out *= 1.0 / std::sqrt(static_cast<double>(n));
    return out;
}

}  // namespace

CVec dft_unitary(const CVec& x) { return transform(x, FFTW_FORWARD); }
CVec idft_unitary(const CVec& X) { return transform(X, FFTW_BACKWARD); }

}  // namespace fdsic
