// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <span>

#include "fhdfrc/types.hpp"

namespace fhdfrc::dsp {

/// Wrap an angle into [-pi, pi).
inline double wrap_angle(double a) {
    double w = std::fmod(a + kPi, kTwoPi);
    if (w < 0.0) w += kTwoPi;
    return w - kPi;
}

/// Unit phasor e^{j a}.
inline Complex expj(double a) { return {std::cos(a), std::sin(a)}; }

/// Forward DFT, X(l) = sum_i x(i) e^{-j 2 pi i l / n}. Any length; backed by FFTW.
CVec fft(std::span<const Complex> x);

/// Inverse DFT without the 1/n scaling.
CVec ifft_unscaled(std::span<const Complex> x);

/// Cross-correlation r(lag) = sum_i x(i + lag) conj(ref(i)) for lag = 0 .. x.size() - ref.size().
CVec xcorr_valid(std::span<const Complex> x, std::span<const Complex> ref);

double median(std::vector<double> v);

/// Pairwise summation; order-independent of thread scheduling when the input order is fixed.
double pairwise_sum(std::span<const double> v);

}  // namespace fhdfrc::dsp
