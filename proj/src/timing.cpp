// SPDX-License-Identifier: Apache-2.0
#include "fhdfrc/timing.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <limits>

#include "fhdfrc/dsp.hpp"

namespace fhdfrc {
namespace {

double circ_dist(double a, double b) { return std::abs(dsp::wrap_angle(a - b)); }

}  // namespace

const char* to_string(Estimator e) noexcept { return e == Estimator::CAE ? "CAE" : "CRE"; }

CVec ratio_chain(std::span<const Complex> Ym) {
    if (Ym.size() < 3) throw Error(Errc::TooShort, "ratio chain needs at least three amplitudes");
    for (const Complex& y : Ym)
        if (std::abs(y) == 0.0) throw Error(Errc::DivZero, "zero amplitude in ratio chain");
    CVec br(Ym.size() - 1);
    for (size_t m = 0; m + 1 < Ym.size(); ++m) br[m] = Ym[m] / Ym[m + 1];
    CVec bar(Ym.size() - 2);
    for (size_t m = 0; m + 1 < br.size(); ++m) bar[m] = br[m] / br[m + 1];
    return bar;
}

double cae(std::span<const Complex> Ybar, const KappaProfile& profile) {
    if (profile.set_Mbar.empty()) throw Error(Errc::EmptySet, "CAE needs a |kappa| = 1 term");
    Complex acc{0.0, 0.0};
    for (int m : profile.set_Mbar) {
        const Complex y = Ybar[static_cast<size_t>(m)];
        acc += Complex{y.real(), profile.kappa[static_cast<size_t>(m)] * y.imag()};
    }
    return dsp::wrap_angle(std::arg(acc));
}

CreResult cre_search(std::span<const Complex> Ybar, const KappaProfile& profile, int d_max, double gate) {
    if (profile.set_Mbreve.size() < 2) throw Error(Errc::TooFew, "CRE needs at least two co-prime kappa terms");
    std::vector<int> mags = profile.breve_magnitudes();
    if (d_max <= 0) d_max = *std::max_element(mags.begin(), mags.end());
    if (gate <= 0.0) gate = kTwoPi / (3.0 * *std::min_element(mags.begin(), mags.end()));

    std::vector<std::vector<double>> sets;
    for (int m : profile.set_Mbreve) {
        const double kappa = profile.kappa[static_cast<size_t>(m)];
        const double a = std::arg(Ybar[static_cast<size_t>(m)]);
        std::vector<double> s;
        for (int d = -d_max; d <= d_max; ++d) {
            double c = (a + kTwoPi * d) / kappa;
            if (c >= -kPi && c < kPi) s.push_back(c);
        }
        if (s.empty()) s.push_back(dsp::wrap_angle(a / kappa));
        sets.push_back(std::move(s));
    }

    CreResult best;
    best.spread = std::numeric_limits<double>::infinity();
    std::vector<double> chosen(sets.size());
    std::function<void(size_t, double)> walk = [&](size_t i, double spread) {
        if (spread >= best.spread) return;
        if (i == sets.size()) {
            Complex acc{0.0, 0.0};
            for (double c : chosen) acc += dsp::expj(c);
            best.spread = spread;
            best.angle = dsp::wrap_angle(std::arg(acc));
            return;
        }
        for (double c : sets[i]) {
            double s = spread;
            for (size_t j = 0; j < i; ++j) s = std::max(s, circ_dist(c, chosen[j]));
            chosen[i] = c;
            walk(i + 1, s);
        }
    };
    walk(0, 0.0);
    best.consistent = best.spread <= gate;
    return best;
}

double cre(std::span<const Complex> Ybar, const KappaProfile& profile, int d_max, double gate) {
    CreResult r = cre_search(Ybar, profile, d_max, gate);
    if (!r.consistent) throw Error(Errc::NoConsistentTuple, "CRE candidates do not agree within the gate");
    return r.angle;
}

Estimator select_estimator(double gamma_db, double gamma_T_db, const KappaProfile& profile) {
    const bool has_cre = profile.Mbreve() >= 2;
    const bool has_cae = profile.Mbar() >= 1;
    if (has_cre && gamma_db > gamma_T_db) return Estimator::CRE;
    if (has_cae) return Estimator::CAE;
    if (has_cre) return Estimator::CRE;
    throw Error(Errc::NeitherApplicable, "profile supports neither CAE nor CRE");
}

std::vector<EtaCandidate> eta_candidates(double angle_omega, const ValidatedConfig& cfg) {
    const double period = cfg.K() / cfg.B();
    const double base = -angle_omega / kTwoPi * period;  // d = 0
    std::vector<EtaCandidate> out;
    const int d_lo = static_cast<int>(std::floor(-base / period)) - 1;
    const int d_hi = static_cast<int>(std::ceil((cfg.T() - base) / period)) + 1;
    for (int d = d_lo; d <= d_hi; ++d) {
        const double eta = base + d * period;
        if (eta <= 0.0 || eta >= cfg.T()) continue;
        out.push_back({eta, std::min(cfg.samples_of(eta), cfg.L() - 1)});
    }
    return out;
}

double omega_angle(double eta, const ValidatedConfig& cfg) {
    return dsp::wrap_angle(-kTwoPi * cfg.B() * eta / cfg.K());
}

}  // namespace fhdfrc
