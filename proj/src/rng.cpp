#include "fdsic/rng.hpp"

namespace fdsic {

std::uint64_t mix_seed(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

RandomStream RandomStream::derive(std::uint64_t base_seed, std::uint64_t trial, Stage stage) {
    std::uint64_t s = mix_seed(base_seed);
    s = mix_seed(s ^ trial);
    s = mix_seed(s ^ static_cast<std::uint64_t>(stage));
    return RandomStream(s);
}

}  // namespace fdsic
