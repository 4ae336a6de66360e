// SPDX-License-Identifier: Apache-2.0
#include "fhdfrc/config.hpp"

#include <cmath>
#include <sstream>

namespace fhdfrc {
namespace {

// Integer value of x if it lies within a relative 1e-9 of one, else nullopt.
std::optional<long long> as_integer(double x) {
    double r = std::round(x);
    if (std::abs(x - r) > 1e-9 * std::max(1.0, std::abs(x))) return std::nullopt;
    return static_cast<long long>(r);
}

}  // namespace

std::optional<int> ValidatedConfig::k_of_bin(int bin) const {
    int l = ((bin % L_) + L_) % L_;
    int offset = (L_ - l) % L_;
    if (offset % L_sub_ != 0) return std::nullopt;
    int k = offset / L_sub_;
    if (k >= radar_.K) return std::nullopt;
    return k;
}

int ValidatedConfig::samples_of(double eta) const {
    return static_cast<int>(std::lround(eta * radar_.fs));
}

ValidatedConfig validate(const RadarConfig& cfg) {
    auto fail = [](Errc code, const std::string& msg) -> ValidatedConfig { throw Error(code, msg); };
    if (cfg.M < 1 || cfg.K < 1 || cfg.H < 1 || cfg.N < 1)
        return fail(Errc::InvalidConfig, "M, K, H and N must be positive");
    if (!(cfg.B > 0.0) || !(cfg.T > 0.0) || !(cfg.fs > 0.0) || !std::isfinite(cfg.f_L))
        return fail(Errc::InvalidConfig, "B, T and fs must be positive");
    if (cfg.M >= cfg.K) {
        std::ostringstream os;
        os << "M=" << cfg.M << " must be smaller than K=" << cfg.K;
        return fail(Errc::TooManyAntennas, os.str());
    }
    auto lsub = as_integer(cfg.B * cfg.T / cfg.K);
    if (!lsub || *lsub < 1) return fail(Errc::NonIntegerOrthogonality, "B*T/K is not a positive integer");
    auto L = as_integer(cfg.T * cfg.fs);
    if (!L || *L < 2) return fail(Errc::InvalidConfig, "T*fs is not a positive integer");
    if (*L % 2 != 0) return fail(Errc::OddL, "L = T*fs must be even");
    if (cfg.fs < 2.0 * cfg.B * (1.0 - 1e-12)) return fail(Errc::InvalidConfig, "fs must be at least 2B");

    ValidatedConfig v;
    v.radar_ = cfg;
    v.L_ = static_cast<int>(*L);
    v.L_sub_ = static_cast<int>(*lsub);
    return v;
}

double snr_to_noise(double gamma_db, double beta0_mag) {
    return beta0_mag * beta0_mag * std::pow(10.0, -gamma_db / 10.0);
}

}  // namespace fhdfrc
