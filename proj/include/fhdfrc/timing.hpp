// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <vector>

#include "fhdfrc/config.hpp"
#include "fhdfrc/seqdesign.hpp"

namespace fhdfrc {

enum class Estimator { CAE, CRE };
const char* to_string(Estimator e) noexcept;

/// Ybreve_m = Y_m / Y_{m+1}, Ybar_m = Ybreve_m / Ybreve_{m+1}.
CVec ratio_chain(std::span<const Complex> Ym);

/// Angle of sum over set_Mbar of (Re Ybar + j kappa Im Ybar).
double cae(std::span<const Complex> Ybar, const KappaProfile& profile);

struct CreResult {
    double angle = 0.0;
    double spread = 0.0;  // max pairwise circular distance of the chosen candidates
    bool consistent = false;
};

/// Candidate matching across set_Mbreve. d_max <= 0 selects max |kappa|; gate <= 0 selects
/// 2 pi / (3 min |kappa|).
CreResult cre_search(std::span<const Complex> Ybar, const KappaProfile& profile, int d_max = 0, double gate = 0.0);
/// As cre_search, throwing NoConsistentTuple when the spread exceeds the gate.
double cre(std::span<const Complex> Ybar, const KappaProfile& profile, int d_max = 0, double gate = 0.0);

Estimator select_estimator(double gamma_db, double gamma_T_db, const KappaProfile& profile);

struct EtaCandidate {
    double eta = 0.0;
    int L_eta = 0;
};

/// All eta in (0, T) with e^{-j 2 pi B eta / K} = e^{j angle}.
std::vector<EtaCandidate> eta_candidates(double angle_omega, const ValidatedConfig& cfg);

/// Angle of the rotator for a given offset: wrap(-2 pi B eta / K).
double omega_angle(double eta, const ValidatedConfig& cfg);

}  // namespace fhdfrc
