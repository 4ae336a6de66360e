// SPDX-License-Identifier: Apache-2.0
#include "fhdfrc/seqdesign.hpp"

#include <cstdlib>
#include <limits>
#include <numeric>

namespace fhdfrc {

int gcd_of(std::span<const int> values) {
    int g = 0;
    for (int v : values) g = std::gcd(g, std::abs(v));
    return g;
}

std::vector<int> KappaProfile::breve_magnitudes() const {
    std::vector<int> out;
    out.reserve(set_Mbreve.size());
    for (int m : set_Mbreve) out.push_back(std::abs(kappa[static_cast<size_t>(m)]));
    return out;
}

KappaProfile kappa_profile(std::span<const int> k, const std::vector<bool>& usable) {
    if (k.size() < 3) throw Error(Errc::TooShort, "kappa profile needs at least three sub-bands");
    if (!usable.empty() && usable.size() != k.size())
        throw Error(Errc::InvalidConfig, "usable mask length differs from the sequence length");
    KappaProfile p;
    const size_t n = k.size() - 2;
    p.kappa.resize(n);
    std::vector<int> big;
    for (size_t m = 0; m < n; ++m) {
        p.kappa[m] = k[m] - 2 * k[m + 1] + k[m + 2];
        if (!usable.empty() && !(usable[m] && usable[m + 1] && usable[m + 2])) continue;
        int a = std::abs(p.kappa[m]);
        if (a == 0) continue;
        p.set_M.push_back(static_cast<int>(m));
        if (a == 1)
            p.set_Mbar.push_back(static_cast<int>(m));
        else
            big.push_back(static_cast<int>(m));
    }
    if (big.size() >= 2) {
        int g = 0;
        for (int m : big) g = std::gcd(g, std::abs(p.kappa[static_cast<size_t>(m)]));
        if (g == 1) p.set_Mbreve = std::move(big);
    }
    return p;
}

void check_sequence(std::span<const int> k, int K) {
    for (size_t i = 0; i < k.size(); ++i) {
        if (k[i] < 0 || k[i] >= K) throw Error(Errc::InvalidSchedule, "sub-band index outside [0, K-1]");
        if (i > 0 && k[i] <= k[i - 1]) throw Error(Errc::InvalidSchedule, "sequence is not strictly increasing");
    }
}

std::vector<double> rf_frequencies(std::span<const int> k, double f_L, double B, int K) {
    std::vector<double> f;
    f.reserve(k.size());
    for (int v : k) f.push_back(f_L + B * v / K);
    return f;
}

double mselb_cae(int Mbar, int L, double gamma) {
    if (Mbar < 1) throw Error(Errc::EmptySet, "CAE needs at least one |kappa| = 1 term");
    return 3.0 / (Mbar * static_cast<double>(L) * gamma);
}

double mselb_cre(std::span<const int> kappas, int L, double gamma) {
    if (kappas.size() < 2) throw Error(Errc::TooFew, "CRE needs at least two kappa values");
    for (int v : kappas)
        if (std::abs(v) <= 1) throw Error(Errc::OutOfDomain, "CRE kappa values must satisfy |kappa| > 1");
    if (gcd_of(kappas) != 1) throw Error(Errc::NotCoprime, "CRE kappa values are not co-prime");
    double s = 0.0;
    for (int v : kappas) s += 3.0 / (static_cast<double>(v) * v * L * gamma);
    double n = static_cast<double>(kappas.size());
    return s / (n * n);
}

std::vector<int> design_cae(int M) {
    if (M < 2) throw Error(Errc::TooShort, "CAE recursion needs M >= 2");
    std::vector<int> k{0, 1};
    while (static_cast<int>(k.size()) < M) {
        size_t m = k.size() - 2;
        int base = 2 * k[m + 1] - k[m];
        int next = base - 1 > k[m + 1] ? base - 1 : base + 1;
        k.push_back(next);
    }
    k.resize(static_cast<size_t>(M));
    return k;
}

std::vector<int> design_cae_prefix(int M) {
    if (M < 5) throw Error(Errc::TooShort, "sequence design needs M >= 5");
    return design_cae(M - 2);
}

TailChoice design_suboptimal_detail(int M, int K) {
    std::vector<int> k = design_cae_prefix(M);
    const int start = k.back() + 1;
    k.resize(static_cast<size_t>(M));
    TailChoice best;
    best.rho = std::numeric_limits<double>::infinity();
    for (int a = start; a < K; ++a) {
        for (int b = a + 1; b < K; ++b) {
            k[static_cast<size_t>(M - 2)] = a;
            k[static_cast<size_t>(M - 1)] = b;
            KappaProfile p = kappa_profile(k);
            if (p.Mbreve() < 2) continue;
            double s = 0.0;
            for (int v : p.breve_magnitudes()) s += 1.0 / (static_cast<double>(v) * v);
            double rho = s / (static_cast<double>(p.Mbreve()) * p.Mbreve());
            // Strict comparison keeps the lexicographically smallest pair on ties.
            if (rho < best.rho) {
                best.rho = rho;
                best.k = k;
            }
        }
    }
    if (best.k.empty()) throw Error(Errc::NoCoprimePair, "no tail pair gives a co-prime |kappa| set");
    return best;
}

bool corollary_crossover(int M) {
    if (M < 3) throw Error(Errc::TooShort, "crossover check needs M >= 3");
    return 144 > 13 * (M - 2);
}

}  // namespace fhdfrc
