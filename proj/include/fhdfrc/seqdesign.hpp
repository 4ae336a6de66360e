// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <vector>

#include "fhdfrc/types.hpp"

namespace fhdfrc {

/// Second differences of an ascending sub-band sequence and the index sets derived from them.
struct KappaProfile {
    std::vector<int> kappa;       // kappa[m] = k[m] - 2 k[m+1] + k[m+2]
    std::vector<int> set_M;       // kappa != 0
    std::vector<int> set_Mbar;    // |kappa| == 1
    std::vector<int> set_Mbreve;  // |kappa| > 1, kept only when they are >= 2 and co-prime

    int Mbar() const { return static_cast<int>(set_Mbar.size()); }
    int Mbreve() const { return static_cast<int>(set_Mbreve.size()); }
    /// |kappa| over set_Mbreve.
    std::vector<int> breve_magnitudes() const;
};

/// Profile of k. A non-empty `usable` mask (one flag per entry of k) removes every
/// second difference that touches an unusable entry.
KappaProfile kappa_profile(std::span<const int> k, const std::vector<bool>& usable = {});

/// Throws InvalidSchedule unless k is strictly increasing inside [0, K-1].
void check_sequence(std::span<const int> k, int K);

std::vector<double> rf_frequencies(std::span<const int> k, double f_L, double B, int K);

double mselb_cae(int Mbar, int L, double gamma);
double mselb_cre(std::span<const int> kappas, int L, double gamma);

/// First M-2 entries of the CAE recursion starting 0, 1.
std::vector<int> design_cae_prefix(int M);
/// The full length-M CAE recursion; every second difference has |kappa| = 1.
std::vector<int> design_cae(int M);

struct TailChoice {
    std::vector<int> k;
    double rho = 0.0;
};

/// CAE prefix plus the two-element tail minimising rho = (1/Mbreve^2) sum 1/kappa^2.
TailChoice design_suboptimal_detail(int M, int K);
inline std::vector<int> design_suboptimal(int M, int K) { return design_suboptimal_detail(M, K).k; }

/// 1/(M-2) > 13/144.
bool corollary_crossover(int M);

int gcd_of(std::span<const int> values);

}  // namespace fhdfrc
