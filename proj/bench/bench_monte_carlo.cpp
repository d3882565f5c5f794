// Serial against OpenMP trial runner on the analog and link-level scenarios.
// Usage: bench_monte_carlo [analog_trials] [link_trials]

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <cstring>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "fdsic/link_sim.hpp"

namespace {

template <typename F>
double seconds(F&& f) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void compare(const char* label, const fdsic::TrialConfig& cfg, std::int64_t trials) {
    fdsic::McSummary serial, parallel;
    const double ts = seconds([&] { serial = fdsic::monte_carlo_sic(cfg, trials, fdsic::Execution::serial); });
    const double tp = seconds([&] { parallel = fdsic::monte_carlo_sic(cfg, trials, fdsic::Execution::parallel); });
    const bool same = std::memcmp(&serial, &parallel, sizeof serial) == 0;
    std::printf("%-8s trials=%-8lld serial=%8.3f s  parallel=%8.3f s  speedup=%5.2fx  us/trial=%8.2f  identical=%s\n",
                label, static_cast<long long>(trials), ts, tp, ts / tp, 1e6 * ts / static_cast<double>(trials),
                same ? "yes" : "NO");
}

}  // namespace

int main(int argc, char** argv) {
    const std::int64_t analog_trials = argc > 1 ? std::atoll(argv[1]) : 100000;
    const std::int64_t link_trials = argc > 2 ? std::atoll(argv[2]) : 40;
#ifdef _OPENMP
    std::printf("threads: %d\n", omp_get_max_threads());
#endif
    compare("analog", fdsic::analog_preset(9, 10, 0.01), analog_trials);
    auto pa = fdsic::analog_preset(9, 10, 0.01);
    pa.pa = fdsic::measured_pa();
    compare("analog+pa", pa, analog_trials);
    compare("link", fdsic::link_preset(false), link_trials);
    return 0;
}
