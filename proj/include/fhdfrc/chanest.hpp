// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <vector>

#include "fhdfrc/types.hpp"

namespace fhdfrc {

/// Z_m = Y_m e^{-j angle k_m}.
CVec remove_timing(std::span<const Complex> Ym, std::span<const int> k_hat, double angle_omega);

struct UEstimate {
    double u_hat = 0.0;   // folded to [-M/2, M/2)
    double delta = 0.0;   // fractional part found by the refinement
    int m_tilde = 0;      // coarse DFT peak
    int iterations = 0;
    std::vector<double> delta_history;
};

/// epsilon = min(M^{-1/3}, 0.32).
double interp_epsilon(int M);
/// epsilon cos^2(pi epsilon) / (1 - pi epsilon cot(pi epsilon)): the large-M limit of the
/// refinement gain.
double interp_gain(double epsilon);
/// Refinement gain for M samples: the reciprocal slope of Re{zeta} at zero residual.
/// Tends to interp_gain(epsilon) as M grows; at M = 10 the limit value under-corrects by ~25%.
double interp_gain(double epsilon, int M);

/// Frequency u of Z_m = c e^{-j 2 pi m u / M}: coarse M-point DFT peak, then n_iter
/// interpolated-DFT refinements. Refinement continues past n_iter (at most max_extra more
/// rounds) while the last update exceeds tol.
UEstimate estimate_u(std::span<const Complex> Zm, int n_iter = 3, double tol = 1e-12, int max_extra = 4);

struct ChannelEstimate {
    double u_hat = 0.0;
    double phi_hat_deg = 0.0;
    Complex beta_tilde_hat{0.0, 0.0};
    double delta = 0.0;
    int iterations = 0;
    bool out_of_domain = false;  // 2u/M left [-1, 1] and was clamped
};

/// phi = asin(2u/M) and beta_tilde = (1/M) sum Z_m e^{j 2 pi m u / M}.
ChannelEstimate finalize(const UEstimate& u, std::span<const Complex> Zm);

/// beta_tilde carries the DFT gain L; this divides it out.
inline Complex beta_from_tilde(Complex beta_tilde, int L) { return beta_tilde / static_cast<double>(L); }

}  // namespace fhdfrc
