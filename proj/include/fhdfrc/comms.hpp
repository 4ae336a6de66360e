// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fhdfrc/channel.hpp"
#include "fhdfrc/config.hpp"
#include "fhdfrc/rng.hpp"
#include "fhdfrc/waveform.hpp"

namespace fhdfrc {

using Bits = std::vector<std::uint8_t>;  // one bit per entry, values 0/1

/// Lexicographic ranking of M-subsets of [0, K-1], truncated to the first 2^bits ranks.
class FhcsCodebook {
public:
    FhcsCodebook(int M, int K);

    int M() const { return M_; }
    int K() const { return K_; }
    int bits() const { return bits_; }
    std::uint64_t size() const { return std::uint64_t{1} << bits_; }
    std::uint64_t combinations() const { return binom(K_, M_); }

    std::vector<int> encode(std::uint64_t word) const;
    /// Rank of an ascending subset; throws OutOfRange when the rank falls outside the codebook.
    std::uint64_t decode(std::span<const int> subset) const;
    std::optional<std::uint64_t> try_decode(std::span<const int> subset) const;

    std::uint64_t rank(std::span<const int> subset) const;
    std::uint64_t binom(int n, int k) const;

private:
    int M_;
    int K_;
    int bits_;
    std::vector<std::uint64_t> table_;  // (K + 1) x (K + 1)
};

enum class Scheme { PSK, FHCS, PFHCS };
const char* to_string(Scheme s) noexcept;
Scheme scheme_from_string(const std::string& s);

struct Modulation {
    Scheme scheme = Scheme::PSK;
    int J = 1;  // PSK bits per antenna
};

// Gray-coded PSK on 2^J points at phases 2 pi q / 2^J.
double psk_phase(std::uint32_t gray_word, int J);
std::uint32_t psk_slice(double phase, int J);
std::uint32_t gray_encode(std::uint32_t b);
std::uint32_t gray_decode(std::uint32_t g);

int bits_per_hop(const ValidatedConfig& cfg, const Modulation& mod);
/// bits_per_hop / T.
double gross_rate(const ValidatedConfig& cfg, const Modulation& mod);
/// Gross rate scaled by the share of hops carrying data.
double net_rate(const ValidatedConfig& cfg, const Modulation& mod, bool probe);

/// Hops that carry data: those after the pilot pair that are not probe hops.
std::vector<int> data_hops(const ValidatedConfig& cfg, bool probe);
std::size_t payload_bits(const ValidatedConfig& cfg, const Modulation& mod, bool probe);

/// Transmit schedule for one pulse carrying `bits` (zero-padded to the payload size).
/// PSK-only hops draw their sub-bands from `rng`.
HopSchedule modulate(std::span<const std::uint8_t> bits, const ValidatedConfig& cfg, const Modulation& mod,
                     std::span<const int> pilot, bool probe, Rng& rng);

/// Last L_eta_hat samples of receiver hop h-1 followed by the first L - L_eta_hat of hop h.
CVec reconstruct_hop(const SampledFrame& frame, int h, int L_eta_hat);

struct ResolveOptions {
    bool single_offbin = false;  // compare against one unused bin instead of the mean over all
    double floor_amp = -1.0;     // negative: derive from the pilot's off-grid bins
};

struct ResolveResult {
    int index = 0;  // chosen candidate
    int L_eta = 0;
    std::vector<double> scores;
};

ResolveResult resolve_ambiguity(const SampledFrame& frame, const ValidatedConfig& cfg,
                                std::span<const int> candidate_L_eta, const ResolveOptions& opt = {});

/// What the demodulator needs from the estimation stage.
struct LinkState {
    double angle_omega = 0.0;
    int L_eta = 0;
    double u_hat = 0.0;
    Complex beta_tilde{1.0, 0.0};
    std::optional<CVec> rho;  // per-antenna equalizer; replaces beta/u when present
};

struct HopDecision {
    int h = 0;
    std::vector<int> k_hat;
    std::vector<std::uint32_t> psk;  // Gray words in antenna order
    bool erasure = false;
    bool detect_failed = false;
};

struct DemodResult {
    Bits bits;
    std::vector<HopDecision> hops;
    int erasures = 0;
};

DemodResult demod_pfhcs(const SampledFrame& frame, const ValidatedConfig& cfg, const LinkState& link,
                        const FhcsCodebook& codebook, const Modulation& mod, bool probe);

/// Symbols per data hop (M for PSK, 1 for FHCS and PFHCS) and how many differ between the
/// transmitted schedule and the decisions.
struct SymbolCount {
    int symbols = 0;
    int errors = 0;
};
SymbolCount count_symbol_errors(const HopSchedule& tx, const DemodResult& rx, const Modulation& mod);

}  // namespace fhdfrc
