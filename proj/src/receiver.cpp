// SPDX-License-Identifier: Apache-2.0
#include "fhdfrc/receiver.hpp"

#include <algorithm>
#include <cmath>

#include "fhdfrc/dsp.hpp"

namespace fhdfrc {

EstimationReport estimate_link(const SampledFrame& frame, const ValidatedConfig& cfg, std::span<const int> pilot,
                               const ReceiverOptions& opt) {
    EstimationReport r;
    CVec Y0 = hop_dft(frame, 0);
    const std::vector<int> known(pilot.begin(), pilot.end());
    try {
        HopSpectrum hs = detect_and_pair(Y0, cfg, opt.detect);
        r.k_hat = hs.k_hat;
        r.Ym = hs.Ym;
        r.sigma_bin = std::sqrt(hs.floor_power / std::log(2.0));
        if (!known.empty() && r.k_hat != known) r.pilot_fallback = true;
    } catch (const Error& e) {
        if (e.code() != Errc::PeakCollision || known.empty()) throw;
        r.pilot_fallback = true;
    }
    if (r.pilot_fallback) {
        r.k_hat = known;
        r.Ym.clear();
        for (int k : known) r.Ym.push_back(Y0[static_cast<size_t>(cfg.bin_of(k))]);
        r.sigma_bin = std::sqrt(offgrid_floor(Y0, cfg) / std::log(2.0));
    }

    CVec Yt = r.Ym;
    if (opt.probe) {
        r.rho = rho_from_frame(frame, cfg);
        Normalized n = normalize(r.Ym, *r.rho, opt.guard ? 10.0 * r.sigma_bin : 0.0);
        Yt = n.Y;
        r.usable = n.usable;
    } else {
        r.usable.assign(r.Ym.size(), true);
    }
    r.profile = kappa_profile(r.k_hat, r.usable);
    if (!opt.cae_subset.empty()) {
        std::vector<int> keep;
        for (int m : r.profile.set_Mbar)
            if (std::find(opt.cae_subset.begin(), opt.cae_subset.end(), m) != opt.cae_subset.end()) keep.push_back(m);
        r.profile.set_Mbar = keep;
    }
    if (r.profile.Mbar() == 0 && r.profile.Mbreve() < 2)
        throw Error(opt.probe ? Errc::CompositeTooSmall : Errc::NeitherApplicable,
                    "no usable second differences left for timing estimation");

    r.Ybar = ratio_chain(Yt);
    r.estimator = opt.force ? *opt.force : select_estimator(opt.gamma_db, opt.gamma_T_db, r.profile);
    if (r.estimator == Estimator::CRE) {
        CreResult c = cre_search(r.Ybar, r.profile);
        r.angle_omega = c.angle;
        r.cre_consistent = c.consistent;
    } else {
        r.angle_omega = cae(r.Ybar, r.profile);
    }

    r.candidates = eta_candidates(r.angle_omega, cfg);
    if (!r.candidates.empty()) {
        std::vector<int> Ls;
        for (const EtaCandidate& c : r.candidates) Ls.push_back(c.L_eta);
        if (opt.resolve && frame.H > 2) {
            ResolveOptions ro;
            ro.floor_amp = r.sigma_bin;
            ResolveResult rr = resolve_ambiguity(frame, cfg, Ls, ro);
            r.d_star = rr.index;
        }
        r.eta_hat = r.candidates[static_cast<size_t>(r.d_star)].eta;
        r.L_eta = r.candidates[static_cast<size_t>(r.d_star)].L_eta;
    }

    if (!opt.probe) {
        CVec Z = remove_timing(r.Ym, r.k_hat, r.angle_omega);
        r.channel = finalize(estimate_u(Z), Z);
    }
    return r;
}

LinkState link_state(const EstimationReport& r) {
    LinkState s;
    s.angle_omega = r.angle_omega;
    s.L_eta = r.L_eta;
    if (r.channel) {
        s.u_hat = r.channel->u_hat;
        s.beta_tilde = r.channel->beta_tilde_hat;
    }
    if (r.rho) s.rho = r.rho->rho_hat;
    return s;
}

LinkState ideal_link_state(const SampledFrame& frame, const ValidatedConfig& cfg, bool probe) {
    LinkState s;
    const ChannelConfig& t = frame.truth;
    s.angle_omega = omega_angle(t.eta, cfg);
    s.L_eta = frame.L_eta;
    const double L = cfg.L();
    if (probe) {
        CVec c = path_composite(t.paths, cfg.M());
        for (Complex& v : c) v *= L;
        s.rho = c;
    } else {
        s.u_hat = cfg.M() * std::sin(t.paths[0].phi_deg * kPi / 180.0) / 2.0;
        s.beta_tilde = L * t.paths[0].beta;
    }
    return s;
}

}  // namespace fhdfrc
