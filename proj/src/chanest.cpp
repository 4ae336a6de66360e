// SPDX-License-Identifier: Apache-2.0
#include "fhdfrc/chanest.hpp"

#include <algorithm>
#include <cmath>

#include "fhdfrc/dsp.hpp"

namespace fhdfrc {
namespace {

Complex dtft(std::span<const Complex> z, double freq) {
    const double M = static_cast<double>(z.size());
    Complex acc{0.0, 0.0};
    for (size_t m = 0; m < z.size(); ++m) acc += z[m] * dsp::expj(-kTwoPi * static_cast<double>(m) * freq / M);
    return acc;
}

}  // namespace

CVec remove_timing(std::span<const Complex> Ym, std::span<const int> k_hat, double angle_omega) {
    if (Ym.size() != k_hat.size()) throw Error(Errc::InvalidConfig, "Y and k_hat lengths differ");
    CVec z(Ym.size());
    for (size_t m = 0; m < Ym.size(); ++m) z[m] = Ym[m] * dsp::expj(-angle_omega * k_hat[m]);
    return z;
}

double interp_epsilon(int M) { return std::min(std::pow(static_cast<double>(M), -1.0 / 3.0), 0.32); }

double interp_gain(double e) {
    const double pe = kPi * e;
    const double c = std::cos(pe);
    return e * c * c / (1.0 - pe * c / std::sin(pe));
}

double interp_gain(double e, int M) {
    // d zeta / dx at x = 0 for a unit tone at f + x, probed at f +- e.
    Complex zp{0.0, 0.0}, zm{0.0, 0.0}, dzp{0.0, 0.0}, dzm{0.0, 0.0};
    for (int m = 0; m < M; ++m) {
        const Complex w{0.0, kTwoPi * m / M};
        const Complex ep = dsp::expj(-kTwoPi * m * e / M);
        const Complex em = std::conj(ep);
        zp += ep;
        zm += em;
        dzp += w * ep;
        dzm += w * em;
    }
    const Complex s = zp + zm;
    const Complex slope = ((dzp - dzm) * s - (zp - zm) * (dzp + dzm)) / (s * s);
    return 1.0 / slope.real();
}

UEstimate estimate_u(std::span<const Complex> Zm, int n_iter, double tol, int max_extra) {
    const int M = static_cast<int>(Zm.size());
    if (M < 2) throw Error(Errc::TooShort, "u estimation needs M >= 2");
    UEstimate r;
    double best = -1.0;
    double total = 0.0;
    for (int mp = 0; mp < M; ++mp) {
        double a = std::abs(dtft(Zm, mp));
        total += a;
        if (a > best) {
            best = a;
            r.m_tilde = mp;
        }
    }
    if (!(total > 1e-300)) throw Error(Errc::DegenerateSpectrum, "all DFT bins of Z are zero");

    const double eps = interp_epsilon(M);
    const double gain = interp_gain(eps, M);
    for (int it = 0; it < n_iter + max_extra; ++it) {
        const double f = r.m_tilde + r.delta;
        Complex zp = dtft(Zm, f + eps);
        Complex zm = dtft(Zm, f - eps);
        Complex den = zp + zm;
        if (std::abs(den) < 1e-300) throw Error(Errc::DegenerateSpectrum, "interpolation bins cancel");
        Complex zeta = (zp - zm) / den;
        const double step = gain * zeta.real();
        r.delta += step;
        r.delta_history.push_back(r.delta);
        ++r.iterations;
        if (it + 1 >= n_iter && std::abs(step) <= tol) break;
    }
    // Z_m carries e^{-j 2 pi m u / M}, so the DFT peak sits at -u modulo M.
    double u = -(r.m_tilde + r.delta);
    u = std::fmod(u + M / 2.0, static_cast<double>(M));
    if (u < 0.0) u += M;
    r.u_hat = u - M / 2.0;
    return r;
}

ChannelEstimate finalize(const UEstimate& u, std::span<const Complex> Zm) {
    const int M = static_cast<int>(Zm.size());
    ChannelEstimate ce;
    ce.u_hat = u.u_hat;
    ce.delta = u.delta;
    ce.iterations = u.iterations;
    double s = 2.0 * u.u_hat / M;
    if (s > 1.0 || s < -1.0) {
        ce.out_of_domain = true;
        s = std::clamp(s, -1.0, 1.0);
    }
    ce.phi_hat_deg = std::asin(s) * 180.0 / kPi;
    Complex acc{0.0, 0.0};
    for (int m = 0; m < M; ++m) acc += Zm[static_cast<size_t>(m)] * dsp::expj(kTwoPi * m * u.u_hat / M);
    ce.beta_tilde_hat = acc / static_cast<double>(M);
    return ce;
}

}  // namespace fhdfrc
