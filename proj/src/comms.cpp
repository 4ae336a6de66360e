// SPDX-License-Identifier: Apache-2.0
#include "fhdfrc/comms.hpp"

#include <algorithm>
#include <cmath>

#include "fhdfrc/dsp.hpp"
#include "fhdfrc/rxfrontend.hpp"

namespace fhdfrc {

// ==== FHCS codebook =========================================================

FhcsCodebook::FhcsCodebook(int M, int K) : M_(M), K_(K) {
    if (M < 1 || K <= M) throw Error(Errc::InvalidConfig, "codebook needs 1 <= M < K");
    if (K > 62) throw Error(Errc::InvalidConfig, "codebook supports K <= 62");
    const size_t n = static_cast<size_t>(K + 1);
    table_.assign(n * n, 0);
    for (int a = 0; a <= K; ++a) {
        table_[static_cast<size_t>(a) * n] = 1;
        for (int b = 1; b <= a; ++b)
            table_[static_cast<size_t>(a) * n + static_cast<size_t>(b)] =
                table_[static_cast<size_t>(a - 1) * n + static_cast<size_t>(b - 1)] +
                (b <= a - 1 ? table_[static_cast<size_t>(a - 1) * n + static_cast<size_t>(b)] : 0);
    }
    const std::uint64_t c = binom(K, M);
    bits_ = 0;
    while ((std::uint64_t{1} << (bits_ + 1)) <= c) ++bits_;
}

std::uint64_t FhcsCodebook::binom(int n, int k) const {
    if (k < 0 || n < 0 || k > n) return 0;
    return table_[static_cast<size_t>(n) * static_cast<size_t>(K_ + 1) + static_cast<size_t>(k)];
}

std::vector<int> FhcsCodebook::encode(std::uint64_t word) const {
    if (word >= size()) throw Error(Errc::OutOfRange, "FHCS word exceeds the codebook");
    std::vector<int> out;
    out.reserve(static_cast<size_t>(M_));
    int v = 0;
    for (int i = 0; i < M_; ++i) {
        for (;; ++v) {
            const std::uint64_t block = binom(K_ - 1 - v, M_ - 1 - i);
            if (word < block) break;
            word -= block;
        }
        out.push_back(v++);
    }
    return out;
}

std::uint64_t FhcsCodebook::rank(std::span<const int> subset) const {
    if (static_cast<int>(subset.size()) != M_) throw Error(Errc::InvalidSchedule, "subset size differs from M");
    std::uint64_t r = 0;
    int prev = -1;
    for (int i = 0; i < M_; ++i) {
        const int c = subset[static_cast<size_t>(i)];
        if (c <= prev || c >= K_) throw Error(Errc::InvalidSchedule, "subset is not ascending inside [0, K-1]");
        for (int v = prev + 1; v < c; ++v) r += binom(K_ - 1 - v, M_ - 1 - i);
        prev = c;
    }
    return r;
}

std::optional<std::uint64_t> FhcsCodebook::try_decode(std::span<const int> subset) const {
    std::uint64_t r = rank(subset);
    if (r >= size()) return std::nullopt;
    return r;
}

std::uint64_t FhcsCodebook::decode(std::span<const int> subset) const {
    auto r = try_decode(subset);
    if (!r) throw Error(Errc::OutOfRange, "subset rank lies outside the codebook");
    return *r;
}

// ==== PSK and rates =========================================================

const char* to_string(Scheme s) noexcept {
    switch (s) {
        case Scheme::PSK: return "bpsk";
        case Scheme::FHCS: return "fhcs";
        case Scheme::PFHCS: return "pfhcs";
    }
    return "unknown";
}

Scheme scheme_from_string(const std::string& s) {
    if (s == "bpsk" || s == "psk") return Scheme::PSK;
    if (s == "fhcs") return Scheme::FHCS;
    if (s == "pfhcs") return Scheme::PFHCS;
    throw Error(Errc::InvalidConfig, "unknown scheme '" + s + "'");
}

std::uint32_t gray_encode(std::uint32_t b) { return b ^ (b >> 1); }

std::uint32_t gray_decode(std::uint32_t g) {
    std::uint32_t b = g;
    for (std::uint32_t s = g >> 1; s != 0; s >>= 1) b ^= s;
    return b;
}

// Word w is transmitted at constellation index gray_decode(w), so neighbouring points differ by one bit.
double psk_phase(std::uint32_t word, int J) {
    const double n = static_cast<double>(1u << J);
    return kTwoPi * gray_decode(word) / n;
}

std::uint32_t psk_slice(double phase, int J) {
    const std::uint32_t n = 1u << J;
    double x = phase / kTwoPi * n;
    long q = std::lround(x);
    q %= static_cast<long>(n);
    if (q < 0) q += static_cast<long>(n);
    return gray_encode(static_cast<std::uint32_t>(q));
}

int bits_per_hop(const ValidatedConfig& cfg, const Modulation& mod) {
    const int psk = cfg.M() * mod.J;
    const int fhcs = FhcsCodebook(cfg.M(), cfg.K()).bits();
    switch (mod.scheme) {
        case Scheme::PSK: return psk;
        case Scheme::FHCS: return fhcs;
        case Scheme::PFHCS: return psk + fhcs;
    }
    return 0;
}

double gross_rate(const ValidatedConfig& cfg, const Modulation& mod) { return bits_per_hop(cfg, mod) / cfg.T(); }

std::vector<int> data_hops(const ValidatedConfig& cfg, bool probe) {
    std::vector<int> out;
    for (int h = 2; h < cfg.H(); ++h)
        if (!is_probe_hop(h, cfg.M(), probe)) out.push_back(h);
    return out;
}

double net_rate(const ValidatedConfig& cfg, const Modulation& mod, bool probe) {
    return gross_rate(cfg, mod) * static_cast<double>(data_hops(cfg, probe).size()) / cfg.H();
}

std::size_t payload_bits(const ValidatedConfig& cfg, const Modulation& mod, bool probe) {
    return data_hops(cfg, probe).size() * static_cast<size_t>(bits_per_hop(cfg, mod));
}

namespace {

std::uint64_t take_bits(std::span<const std::uint8_t> bits, size_t& pos, int n) {
    std::uint64_t w = 0;
    for (int i = 0; i < n; ++i) {
        const std::uint8_t b = pos < bits.size() ? bits[pos] : 0;
        ++pos;
        w = (w << 1) | (b & 1u);
    }
    return w;
}

void put_bits(Bits& out, std::uint64_t w, int n) {
    for (int i = n - 1; i >= 0; --i) out.push_back(static_cast<std::uint8_t>((w >> i) & 1u));
}

}  // namespace

HopSchedule modulate(std::span<const std::uint8_t> bits, const ValidatedConfig& cfg, const Modulation& mod,
                     std::span<const int> pilot, bool probe, Rng& rng) {
    if (mod.J < 1 || mod.J > 16) throw Error(Errc::InvalidConfig, "PSK order J must lie in [1, 16]");
    HopSchedule s = order_schedule(random_schedule(cfg, rng));
    s = frame_schedule(s, pilot, probe, cfg);
    const FhcsCodebook book(cfg.M(), cfg.K());
    size_t pos = 0;
    for (int h : data_hops(cfg, probe)) {
        if (mod.scheme != Scheme::PSK) {
            std::vector<int> row = book.encode(take_bits(bits, pos, book.bits()));
            std::copy(row.begin(), row.end(), s.row(h).begin());
        }
        for (int m = 0; m < cfg.M(); ++m) {
            s.mod(h, m) = 1.0;
            if (mod.scheme != Scheme::FHCS) {
                auto w = static_cast<std::uint32_t>(take_bits(bits, pos, mod.J));
                s.mod(h, m) = dsp::expj(psk_phase(w, mod.J));
            }
        }
    }
    return s;
}

// ==== Receiver side =========================================================

CVec reconstruct_hop(const SampledFrame& frame, int h, int L_eta_hat) {
    if (h < 1 || h >= frame.H) throw Error(Errc::OutOfRange, "reconstruction needs 1 <= h <= H-1");
    if (L_eta_hat < 0 || L_eta_hat >= frame.L) throw Error(Errc::OutOfRange, "L_eta must lie in [0, L)");
    auto prev = frame.hop(h - 1);
    auto cur = frame.hop(h);
    CVec out;
    out.reserve(static_cast<size_t>(frame.L));
    out.insert(out.end(), prev.end() - L_eta_hat, prev.end());
    out.insert(out.end(), cur.begin(), cur.end() - L_eta_hat);
    return out;
}

ResolveResult resolve_ambiguity(const SampledFrame& frame, const ValidatedConfig& cfg,
                                std::span<const int> candidate_L_eta, const ResolveOptions& opt) {
    if (candidate_L_eta.empty()) throw Error(Errc::EmptySet, "no timing candidates to resolve");
    ResolveResult res;
    if (candidate_L_eta.size() == 1) {
        res.L_eta = candidate_L_eta[0];
        res.scores = {0.0};
        return res;
    }
    const int M = cfg.M();
    const int K = cfg.K();
    const double noise_amp = opt.floor_amp >= 0.0 ? opt.floor_amp : std::sqrt(offgrid_floor(hop_dft(frame, 0), cfg));
    std::vector<double> mags(static_cast<size_t>(K));
    std::vector<int> order(static_cast<size_t>(K));
    for (int c : candidate_L_eta) {
        double score = 0.0;
        for (int h = 2; h < frame.H; ++h) {
            CVec Y = dsp::fft(reconstruct_hop(frame, h, c));
            for (int k = 0; k < K; ++k) mags[static_cast<size_t>(k)] = std::abs(Y[static_cast<size_t>(cfg.bin_of(k))]);
            for (int k = 0; k < K; ++k) order[static_cast<size_t>(k)] = k;
            std::partial_sort(order.begin(), order.begin() + M, order.end(),
                              [&](int a, int b) { return mags[static_cast<size_t>(a)] > mags[static_cast<size_t>(b)]; });
            double peak = 0.0;
            for (int i = 0; i < M; ++i) peak += mags[static_cast<size_t>(order[static_cast<size_t>(i)])];
            double off = 0.0;
            if (opt.single_offbin) {
                off = mags[static_cast<size_t>(*std::min_element(order.begin() + M, order.end()))];
            } else {
                for (int i = M; i < K; ++i) off += mags[static_cast<size_t>(order[static_cast<size_t>(i)])];
                off /= (K - M);
            }
            score += peak / (off + noise_amp + 1e-12 * peak / M);
        }
        res.scores.push_back(score);
    }
    res.index = static_cast<int>(std::max_element(res.scores.begin(), res.scores.end()) - res.scores.begin());
    res.L_eta = candidate_L_eta[static_cast<size_t>(res.index)];
    return res;
}

DemodResult demod_pfhcs(const SampledFrame& frame, const ValidatedConfig& cfg, const LinkState& link,
                        const FhcsCodebook& codebook, const Modulation& mod, bool probe) {
    const int M = cfg.M();
    const int L = cfg.L();
    DemodResult out;
    for (int h : data_hops(cfg, probe)) {
        HopDecision d;
        d.h = h;
        HopSpectrum hs;
        try {
            hs = detect_and_pair(dsp::fft(reconstruct_hop(frame, h, link.L_eta)), cfg);
        } catch (const Error& e) {
            if (e.code() != Errc::PeakCollision) throw;
            d.detect_failed = true;
        }
        if (mod.scheme != Scheme::PSK) {
            std::optional<std::uint64_t> w;
            if (!d.detect_failed) w = codebook.try_decode(hs.k_hat);
            if (!w) {
                d.erasure = true;
                ++out.erasures;
            }
            put_bits(out.bits, w.value_or(0), codebook.bits());
        }
        d.k_hat = d.detect_failed ? std::vector<int>(static_cast<size_t>(M), -1) : hs.k_hat;
        for (int m = 0; m < M; ++m) {
            std::uint32_t q = 0;
            if (!d.detect_failed) {
                const int k = hs.k_hat[static_cast<size_t>(m)];
                // The reconstructed hop starts L_eta samples early, adding e^{j 2 pi k L_sub L_eta / L}.
                const double shift = kTwoPi * static_cast<double>((static_cast<long>(k) * cfg.L_sub() * link.L_eta) % L) / L;
                Complex v = hs.Ym[static_cast<size_t>(m)] * dsp::expj(-link.angle_omega * k - shift);
                if (link.rho)
                    v /= (*link.rho)[static_cast<size_t>(m)];
                else
                    v *= std::conj(link.beta_tilde) * dsp::expj(kTwoPi * m * link.u_hat / M);
                q = psk_slice(std::arg(v), mod.J);
            }
            d.psk.push_back(q);
            if (mod.scheme != Scheme::FHCS) put_bits(out.bits, q, mod.J);
        }
        out.hops.push_back(std::move(d));
    }
    return out;
}

SymbolCount count_symbol_errors(const HopSchedule& tx, const DemodResult& rx, const Modulation& mod) {
    SymbolCount c;
    for (const HopDecision& d : rx.hops) {
        const int M = tx.M;
        bool k_ok = !d.detect_failed;
        if (k_ok)
            for (int m = 0; m < M; ++m)
                if (d.k_hat[static_cast<size_t>(m)] != tx.at(d.h, m)) k_ok = false;
        int psk_err = 0;
        for (int m = 0; m < M; ++m) {
            const std::uint32_t sent = psk_slice(std::arg(tx.mod(d.h, m)), mod.J);
            if (!k_ok || d.psk[static_cast<size_t>(m)] != sent) ++psk_err;
        }
        switch (mod.scheme) {
            case Scheme::PSK:
                c.symbols += M;
                c.errors += psk_err;
                break;
            case Scheme::FHCS:
                c.symbols += 1;
                c.errors += k_ok ? 0 : 1;
                break;
            case Scheme::PFHCS:
                c.symbols += 1;
                c.errors += (k_ok && psk_err == 0) ? 0 : 1;
                break;
        }
    }
    return c;
}

}  // namespace fhdfrc
