// SPDX-License-Identifier: Apache-2.0
#include "fhdfrc/waveform.hpp"

#include <algorithm>
#include <numeric>

#include "fhdfrc/dsp.hpp"

namespace fhdfrc {

void check_schedule(const HopSchedule& s, int K) {
    if (s.k.size() != static_cast<size_t>(s.H * s.M) || s.F.size() != s.k.size())
        throw Error(Errc::InvalidSchedule, "schedule storage does not match H x M");
    std::vector<char> seen(static_cast<size_t>(K));
    for (int h = 0; h < s.H; ++h) {
        std::fill(seen.begin(), seen.end(), 0);
        for (int v : s.row(h)) {
            if (v < 0 || v >= K) throw Error(Errc::InvalidSchedule, "sub-band index outside [0, K-1]");
            if (seen[static_cast<size_t>(v)]) throw Error(Errc::InvalidSchedule, "repeated sub-band within a hop");
            seen[static_cast<size_t>(v)] = 1;
        }
    }
}

HopSchedule random_schedule(int H, int M, int K, Rng& rng, std::span<const int> avoid) {
    std::vector<int> pool;
    for (int v = 0; v < K; ++v)
        if (std::find(avoid.begin(), avoid.end(), v) == avoid.end()) pool.push_back(v);
    if (static_cast<int>(pool.size()) < M) throw Error(Errc::InvalidConfig, "too few sub-bands left to draw from");
    HopSchedule s(H, M);
    for (int h = 0; h < H; ++h) {
        // Partial Fisher-Yates: the first M entries form a uniform ordered M-subset.
        for (int m = 0; m < M; ++m) {
            std::uniform_int_distribution<size_t> pick(static_cast<size_t>(m), pool.size() - 1);
            std::swap(pool[static_cast<size_t>(m)], pool[pick(rng)]);
            s.at(h, m) = pool[static_cast<size_t>(m)];
        }
    }
    return s;
}

HopSchedule random_schedule(const ValidatedConfig& cfg, Rng& rng) {
    return random_schedule(cfg.H(), cfg.M(), cfg.K(), rng);
}

HopSchedule order_schedule(const HopSchedule& s) {
    HopSchedule out = s;
    std::vector<int> idx(static_cast<size_t>(s.M));
    for (int h = 0; h < s.H; ++h) {
        std::iota(idx.begin(), idx.end(), 0);
        std::sort(idx.begin(), idx.end(), [&](int a, int b) { return s.at(h, a) < s.at(h, b); });
        for (int m = 0; m < s.M; ++m) {
            out.at(h, m) = s.at(h, idx[static_cast<size_t>(m)]);
            out.mod(h, m) = s.mod(h, idx[static_cast<size_t>(m)]);
        }
    }
    return out;
}

std::vector<int> probe_hops(int M) {
    std::vector<int> hops;
    for (int m = 1; m < M; ++m) hops.push_back(m + 2);
    return hops;
}

bool is_probe_hop(int h, int M, bool probe) { return probe && h >= 3 && h <= M + 1; }

std::vector<int> nulling_allowed(const ValidatedConfig& cfg) {
    std::vector<int> out;
    for (int k = 1; k < cfg.K(); ++k)
        if ((k * cfg.L_sub()) % 2 == 0) out.push_back(k);
    return out;
}

HopSchedule frame_schedule(const HopSchedule& s, std::span<const int> pilot, bool probe,
                           const ValidatedConfig& cfg) {
    if (s.M != cfg.M() || static_cast<int>(pilot.size()) != s.M)
        throw Error(Errc::InvalidSchedule, "pilot length differs from M");
    if (s.H < 2) throw Error(Errc::FrameTooShort, "a frame needs two pilot hops");
    if (probe && s.H < s.M + 2) throw Error(Errc::FrameTooShort, "probe hops need H >= M + 2");
    HopSchedule out = s;
    for (int h = 0; h < 2; ++h)
        for (int m = 0; m < s.M; ++m) {
            out.at(h, m) = pilot[static_cast<size_t>(m)];
            out.mod(h, m) = 1.0;
        }
    if (probe) {
        std::vector<int> allowed = nulling_allowed(cfg);
        if (static_cast<int>(allowed.size()) < s.M - 1)
            throw Error(Errc::NullingViolated, "not enough nulling-compatible sub-bands for the probe hops");
        for (int m = 1; m < s.M; ++m) {
            int h = m + 2;
            size_t next = 0;
            for (int j = 0; j < s.M; ++j) {
                out.at(h, j) = j == m ? 0 : allowed[next++];
                out.mod(h, j) = 1.0;
            }
        }
    }
    check_schedule(out, cfg.K());
    return out;
}

CVec hop_phasors(int L) {
    CVec t(static_cast<size_t>(L));
    for (int n = 0; n < L; ++n) t[static_cast<size_t>(n)] = dsp::expj(-kTwoPi * n / L);
    return t;
}

std::vector<CVec> synth_baseband(const HopSchedule& s, const ValidatedConfig& cfg) {
    const int L = cfg.L();
    const CVec table = hop_phasors(L);
    std::vector<CVec> out(static_cast<size_t>(s.M), CVec(static_cast<size_t>(s.H * L)));
    for (int m = 0; m < s.M; ++m) {
        for (int h = 0; h < s.H; ++h) {
            const long step = static_cast<long>(s.at(h, m)) * cfg.L_sub();
            const Complex F = s.mod(h, m);
            Complex* dst = out[static_cast<size_t>(m)].data() + static_cast<size_t>(h * L);
            for (int i = 0; i < L; ++i) dst[i] = F * table[static_cast<size_t>((step * i) % L)];
        }
    }
    return out;
}

std::vector<double> tau_grid(const ValidatedConfig& cfg, int n, double span_hops) {
    std::vector<double> tau(static_cast<size_t>(n));
    const double lo = -span_hops * cfg.T();
    const double step = n > 1 ? 2.0 * span_hops * cfg.T() / (n - 1) : 0.0;
    for (int i = 0; i < n; ++i) tau[static_cast<size_t>(i)] = lo + step * i;
    if (n == 1) tau[0] = 0.0;
    return tau;
}

std::vector<double> ambiguity_function(const HopSchedule& s, const ValidatedConfig& cfg,
                                       std::span<const double> tau, bool use_modulation) {
    const int K = cfg.K();
    const double T = cfg.T();
    const double df = cfg.subband_spacing();
    std::vector<double> R(tau.size());
    CVec chi(static_cast<size_t>(2 * K - 1));
    CVec E(static_cast<size_t>(K));

    for (size_t t = 0; t < tau.size(); ++t) {
        const double tv = tau[t];
        for (int k = 0; k < K; ++k) E[static_cast<size_t>(k)] = dsp::expj(kTwoPi * (cfg.f_L() + k * df) * tv);
        Complex total{0.0, 0.0};
        for (int delta = -(s.H - 1); delta <= s.H - 1; ++delta) {
            const double x = tv - delta * T;
            const double w = T - std::abs(x);
            if (w <= 0.0) continue;
            for (int dk = -(K - 1); dk <= K - 1; ++dk) {
                const double y = dk * df;
                const double a = kPi * y * w;
                const double sinc = a == 0.0 ? 1.0 : std::sin(a) / a;
                chi[static_cast<size_t>(dk + K - 1)] = w * sinc * dsp::expj(kPi * y * (x + T));
            }
            // e^{j 2 pi nu h T} is exactly 1: nu h T = (k - k') (BT/K) h is an integer.
            for (int h = std::max(0, -delta); h < s.H && h + delta < s.H; ++h) {
                const int hp = h + delta;
                for (int mp = 0; mp < s.M; ++mp) {
                    const int kp = s.at(hp, mp);
                    Complex acc{0.0, 0.0};
                    for (int m = 0; m < s.M; ++m) {
                        Complex c = chi[static_cast<size_t>(s.at(h, m) - kp + K - 1)];
                        if (use_modulation) c *= s.mod(h, m);
                        acc += c;
                    }
                    if (use_modulation) acc *= std::conj(s.mod(hp, mp));
                    total += acc * E[static_cast<size_t>(kp)];
                }
            }
        }
        R[t] = std::abs(total);
    }
    return R;
}

}  // namespace fhdfrc
