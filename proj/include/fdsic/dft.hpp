#pragma once

#include "fdsic/types.hpp"

namespace fdsic {

// Unitary DFT pair (1/sqrt(K) both ways) backed by FFTW. Plans are cached per
// length and executed with the new-array interface, so concurrent calls from
// several threads are safe.

CVec dft_unitary(const CVec& x);
CVec idft_unitary(const CVec& X);

/// Signed frequency index of bin k: k for k < K/2, k - K otherwise.
inline int signed_bin(int k, int K) { return (2 * k < K) ? k : k - K; }

}  // namespace fdsic
