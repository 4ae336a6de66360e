// SPDX-License-Identifier: Apache-2.0
#include "fhdfrc/channel.hpp"

#include <cmath>

#include "fhdfrc/dsp.hpp"

namespace fhdfrc {

Complex steering(int m, double phi_deg) { return dsp::expj(-kPi * m * std::sin(phi_deg * kPi / 180.0)); }

CVec path_composite(std::span<const Path> paths, int M) {
    CVec c(static_cast<size_t>(M), Complex{0.0, 0.0});
    for (const Path& p : paths)
        for (int m = 0; m < M; ++m) c[static_cast<size_t>(m)] += p.beta * steering(m, p.phi_deg);
    return c;
}

void check_channel(const ChannelConfig& chan, const ValidatedConfig& cfg) {
    if (chan.paths.empty()) throw Error(Errc::InvalidConfig, "channel needs at least the LoS path");
    if (!(chan.eta >= 0.0) || chan.eta >= cfg.T()) throw Error(Errc::InvalidConfig, "eta must lie in [0, T)");
    if (!(chan.noise_var >= 0.0) || !std::isfinite(chan.noise_var))
        throw Error(Errc::InvalidConfig, "noise variance must be finite and non-negative");
    if (chan.interferer) {
        const Interferer& in = *chan.interferer;
        if (!(in.delay >= 0.0) || in.delay >= cfg.T()) throw Error(Errc::InvalidConfig, "interferer delay must lie in [0, T)");
        if (in.sched.H < cfg.H() + 1 || in.sched.M != cfg.M())
            throw Error(Errc::InvalidConfig, "interferer schedule needs H + 1 hops of M antennas");
    }
}

void add_tones(CVec& out, const HopSchedule& sched, const ValidatedConfig& cfg, std::span<const Complex> composite,
               double eta, Complex gain, int hops) {
    const int L = cfg.L();
    const int L_eta = std::min(cfg.samples_of(eta), L - 1);
    const CVec table = hop_phasors(L);
    const double df = cfg.subband_spacing();
    for (int h = 0; h < hops; ++h) {
        Complex* dst = out.data() + static_cast<size_t>(h) * static_cast<size_t>(L);
        // Samples i < L - L_eta still belong to transmitted hop h; the rest to hop h + 1.
        for (int part = 0; part < 2; ++part) {
            const int src = h + part;
            if (src >= sched.H) break;
            const int i0 = part == 0 ? 0 : L - L_eta;
            const int i1 = part == 0 ? L - L_eta : L;
            for (int m = 0; m < sched.M; ++m) {
                const int k = sched.at(src, m);
                const long step = static_cast<long>(k) * cfg.L_sub();
                const Complex c = gain * composite[static_cast<size_t>(m)] * sched.mod(src, m) *
                                  dsp::expj(-kTwoPi * k * df * eta);
                for (int i = i0; i < i1; ++i) dst[i] += c * table[static_cast<size_t>((step * i) % L)];
            }
        }
    }
}

SampledFrame synth_rx(const HopSchedule& sched, const ValidatedConfig& cfg, const ChannelConfig& chan, Rng& rng) {
    check_channel(chan, cfg);
    if (sched.M != cfg.M()) throw Error(Errc::InvalidSchedule, "schedule antenna count differs from M");
    SampledFrame f;
    f.L = cfg.L();
    f.H = sched.H;
    f.L_eta = cfg.samples_of(chan.eta);
    if (f.L_eta >= f.L) f.L_eta = f.L - 1;
    f.truth = chan;
    f.samples.assign(static_cast<size_t>(f.H) * static_cast<size_t>(f.L), Complex{0.0, 0.0});

    const CVec composite = path_composite(chan.paths, sched.M);
    add_tones(f.samples, sched, cfg, composite, chan.eta, Complex{1.0, 0.0}, f.H);

    if (chan.interferer) {
        const Interferer& in = *chan.interferer;
        // |beta_0|^2 is the per-antenna signal power that gamma refers to; the interferer's
        // M tones share its power budget.
        const double amp = std::abs(chan.paths[0].beta) * std::pow(10.0, in.rel_power_db / 20.0) /
                           std::sqrt(static_cast<double>(in.sched.M));
        CVec icomp(static_cast<size_t>(sched.M));
        for (int m = 0; m < sched.M; ++m) icomp[static_cast<size_t>(m)] = steering(m, in.phi_deg);
        add_tones(f.samples, in.sched, cfg, icomp, in.delay, amp * in.phase, f.H);
    }
    if (chan.noise_var > 0.0)
        for (Complex& s : f.samples) s += cgauss(rng, chan.noise_var);
    return f;
}

double draw_eta(Rng& rng, double lo, double hi) { return uniform(rng, lo, hi); }

std::vector<Path> draw_los(Rng& rng, double phi0_deg) {
    return {Path{dsp::expj(uniform(rng, 0.0, kTwoPi)), phi0_deg}};
}

std::vector<Path> draw_rician(Rng& rng, int nlos, double nlos_power_db, double phi0_deg) {
    std::vector<Path> paths = draw_los(rng, phi0_deg);
    const double var = std::pow(10.0, nlos_power_db / 10.0);
    for (int p = 0; p < nlos; ++p) {
        Complex b = cgauss(rng, var);
        paths.push_back(Path{b, uniform(rng, -90.0, 90.0)});
    }
    return paths;
}

Interferer draw_interferer(const ValidatedConfig& cfg, Rng& rng, double rel_power_db, std::span<const int> clean) {
    Interferer in;
    in.rel_power_db = rel_power_db;
    in.delay = uniform(rng, 0.0, cfg.T());
    in.phase = dsp::expj(uniform(rng, 0.0, kTwoPi));
    in.phi_deg = uniform(rng, -90.0, 90.0);
    in.sched = random_schedule(cfg.H() + 1, cfg.M(), cfg.K(), rng, clean);
    return in;
}

}  // namespace fhdfrc
