// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <set>

#include "fhdfrc/comms.hpp"
#include "fhdfrc/dsp.hpp"
#include "fhdfrc/receiver.hpp"
#include "fhdfrc/seqdesign.hpp"
#include "oracles.hpp"

using namespace fhdfrc;

namespace {

Errc error_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an fhdfrc::Error");
    return Errc::Io;
}

Bits random_bits(size_t n, Rng& rng) {
    Bits b(n);
    std::bernoulli_distribution coin(0.5);
    for (auto& v : b) v = coin(rng) ? 1 : 0;
    return b;
}

}  // namespace

// ============================================================================
// codebook

TEST_CASE("FHCS codebook size for M = 10, K = 20") {
    const FhcsCodebook book(10, 20);
    CHECK(book.combinations() == 184756u);
    CHECK(book.bits() == 17);
    CHECK(book.size() == 131072u);
    CHECK(book.encode(0) == std::vector<int>{0, 1, 2, 3, 4, 5, 6, 7, 8, 9});
    CHECK(book.encode(1) == std::vector<int>{0, 1, 2, 3, 4, 5, 6, 7, 8, 10});
    CHECK(error_of([&] { book.encode(book.size()); }) == Errc::OutOfRange);
}

TEST_CASE("codebook rank agrees with lexicographic enumeration") {
    const FhcsCodebook book(4, 9);
    std::vector<int> c{0, 1, 2, 3};
    std::uint64_t r = 0;
    do {
        CHECK(book.rank(c) == r);
        if (r < book.size()) {
            CHECK(book.encode(r) == c);
            CHECK(book.decode(c) == r);
        } else {
            CHECK_FALSE(book.try_decode(c).has_value());
            CHECK(error_of([&] { book.decode(c); }) == Errc::OutOfRange);
        }
        ++r;
    } while (oracle::next_combination(c, 9));
    CHECK(r == book.combinations());
    CHECK(book.bits() == 6);  // 126 subsets
}

TEST_CASE("codebook round trip over random words") {
    const FhcsCodebook book(10, 20);
    Rng rng(12);
    std::uniform_int_distribution<std::uint64_t> word(0, book.size() - 1);
    for (int t = 0; t < 2000; ++t) {
        const auto w = word(rng);
        const auto s = book.encode(w);
        CHECK(std::is_sorted(s.begin(), s.end()));
        CHECK(std::set<int>(s.begin(), s.end()).size() == 10);
        CHECK(book.decode(s) == w);
    }
    CHECK(book.decode(book.encode(book.size() - 1)) == book.size() - 1);
}

TEST_CASE("codebook rejects bad subsets and sizes") {
    const FhcsCodebook book(3, 6);
    const std::vector<int> unsorted{2, 1, 4}, big{0, 1, 6}, shorter{0, 1};
    CHECK(error_of([&] { book.rank(unsorted); }) == Errc::InvalidSchedule);
    CHECK(error_of([&] { book.rank(big); }) == Errc::InvalidSchedule);
    CHECK(error_of([&] { book.rank(shorter); }) == Errc::InvalidSchedule);
    CHECK(error_of([] { FhcsCodebook(5, 5); }) == Errc::InvalidConfig);
}

// ============================================================================
// PSK

TEST_CASE("Gray code round trip and unit-distance neighbours") {
    for (std::uint32_t b = 0; b < 1024; ++b) {
        CHECK(gray_decode(gray_encode(b)) == b);
        if (b > 0) CHECK(__builtin_popcount(gray_encode(b) ^ gray_encode(b - 1)) == 1);
    }
}

TEST_CASE("PSK slicing inverts the mapping and tolerates small phase errors") {
    for (int J = 1; J <= 4; ++J) {
        const std::uint32_t n = 1u << J;
        for (std::uint32_t w = 0; w < n; ++w) {
            const double ph = psk_phase(w, J);
            CHECK(psk_slice(ph, J) == w);
            CHECK(psk_slice(ph + 0.45 * kTwoPi / n, J) == w);
            CHECK(psk_slice(ph - 0.45 * kTwoPi / n, J) == w);
            CHECK(psk_slice(ph + kTwoPi, J) == w);
        }
    }
    CHECK(psk_phase(1, 1) == doctest::Approx(kPi));
}

// ============================================================================
// rates

TEST_CASE("bits per hop and data rates at the default configuration") {
    const auto cfg = validate(RadarConfig{});
    CHECK(bits_per_hop(cfg, {Scheme::PSK, 1}) == 10);
    CHECK(bits_per_hop(cfg, {Scheme::FHCS, 1}) == 17);
    CHECK(bits_per_hop(cfg, {Scheme::PFHCS, 1}) == 27);
    CHECK(bits_per_hop(cfg, {Scheme::PFHCS, 2}) == 37);
    CHECK(gross_rate(cfg, {Scheme::PSK, 1}) == doctest::Approx(12.5e6));
    CHECK(gross_rate(cfg, {Scheme::FHCS, 1}) == doctest::Approx(21.25e6));
    CHECK(gross_rate(cfg, {Scheme::PFHCS, 1}) == doctest::Approx(33.75e6));
    CHECK(net_rate(cfg, {Scheme::PSK, 1}, false) == doctest::Approx(12.5e6 * 13 / 15));
    CHECK(data_hops(cfg, false).size() == 13u);
    CHECK(data_hops(cfg, true) == std::vector<int>{2, 12, 13, 14});
    CHECK(payload_bits(cfg, {Scheme::PFHCS, 1}, false) == 13u * 27u);
    CHECK(scheme_from_string("fhcs") == Scheme::FHCS);
    CHECK(scheme_from_string("bpsk") == Scheme::PSK);
    CHECK(error_of([] { scheme_from_string("qam"); }) == Errc::InvalidConfig);
}

// ============================================================================
// modulation and demodulation

TEST_CASE("modulation keeps the pilot and writes codewords into data hops") {
    const auto cfg = validate(RadarConfig{});
    const auto pilot = design_suboptimal(10, 20);
    Rng rng(3);
    const Modulation mod{Scheme::PFHCS, 1};
    const auto bits = random_bits(payload_bits(cfg, mod, false), rng);
    const auto s = modulate(bits, cfg, mod, pilot, false, rng);
    CHECK(std::vector<int>(s.row(0).begin(), s.row(0).end()) == pilot);
    const FhcsCodebook book(10, 20);
    size_t pos = 0;
    for (int h : data_hops(cfg, false)) {
        std::uint64_t w = 0;
        for (int i = 0; i < 17; ++i) w = (w << 1) | bits[pos++];
        CHECK(book.rank(std::vector<int>(s.row(h).begin(), s.row(h).end())) == w);
        for (int m = 0; m < 10; ++m) {
            const double expect = bits[pos++] ? kPi : 0.0;
            CHECK(std::abs(dsp::wrap_angle(std::arg(s.mod(h, m)) - expect)) < 1e-12);
        }
    }
    CHECK_NOTHROW(check_schedule(s, 20));
}

TEST_CASE("noise-free loopback recovers every bit for 100 seeds") {
    const auto cfg = validate(RadarConfig{});
    const auto pilot = design_suboptimal(10, 20);
    const FhcsCodebook book(10, 20);
    int exact = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        Rng rng(seed);
        const Modulation mod{static_cast<Scheme>(seed % 3), 1 + static_cast<int>(seed % 2)};
        const bool probe = seed % 4 == 3;
        const auto bits = random_bits(payload_bits(cfg, mod, probe), rng);
        const auto s = modulate(bits, cfg, mod, pilot, probe, rng);
        ChannelConfig ch;
        ch.eta = uniform(rng, 0.05e-6, 0.35e-6);
        ch.paths = probe ? draw_rician(rng) : draw_los(rng);
        const auto f = synth_rx(s, cfg, ch, rng);
        ReceiverOptions opt;
        opt.probe = probe;
        const auto rep = estimate_link(f, cfg, pilot, opt);
        const auto rx = demod_pfhcs(f, cfg, link_state(rep), book, mod, probe);
        if (rx.bits == bits && rx.erasures == 0) ++exact;
        CHECK(count_symbol_errors(s, rx, mod).errors == 0);
    }
    CHECK(exact == 100);
}

TEST_CASE("ideal link state decodes a noise-free frame") {
    const auto cfg = validate(RadarConfig{});
    const auto pilot = design_suboptimal(10, 20);
    Rng rng(77);
    const Modulation mod{Scheme::PFHCS, 2};
    const auto bits = random_bits(payload_bits(cfg, mod, false), rng);
    const auto s = modulate(bits, cfg, mod, pilot, false, rng);
    ChannelConfig ch;
    ch.eta = 0.21e-6;
    ch.paths = draw_los(rng);
    const auto f = synth_rx(s, cfg, ch, rng);
    const auto rx = demod_pfhcs(f, cfg, ideal_link_state(f, cfg, false), FhcsCodebook(10, 20), mod, false);
    CHECK(rx.bits == bits);
}

TEST_CASE("symbol counting per scheme") {
    const auto cfg = validate(RadarConfig{});
    const auto pilot = design_suboptimal(10, 20);
    Rng rng(5);
    const Modulation psk{Scheme::PSK, 1};
    const auto s = modulate(random_bits(payload_bits(cfg, psk, false), rng), cfg, psk, pilot, false, rng);
    DemodResult rx;
    for (int h : data_hops(cfg, false)) {
        HopDecision d;
        d.h = h;
        d.k_hat.assign(s.row(h).begin(), s.row(h).end());
        for (int m = 0; m < 10; ++m) d.psk.push_back(psk_slice(std::arg(s.mod(h, m)), 1));
        rx.hops.push_back(d);
    }
    rx.hops[0].psk[3] ^= 1u;
    const auto c = count_symbol_errors(s, rx, psk);
    CHECK(c.symbols == 130);
    CHECK(c.errors == 1);
    const auto p = count_symbol_errors(s, rx, {Scheme::PFHCS, 1});
    CHECK(p.symbols == 13);
    CHECK(p.errors == 1);
    CHECK(count_symbol_errors(s, rx, {Scheme::FHCS, 1}).errors == 0);
}

// ============================================================================
// timing ambiguity resolution

TEST_CASE("ambiguity resolution picks the true offset at 10 dB") {
    const auto cfg = validate(RadarConfig{});
    const auto pilot = design_suboptimal(10, 20);
    int right = 0;
    const int n = 300;
    for (int t = 0; t < n; ++t) {
        Rng rng(1000 + t);
        const auto s = frame_schedule(order_schedule(random_schedule(cfg, rng)), pilot, false, cfg);
        ChannelConfig ch;
        ch.eta = uniform(rng, 0.05e-6, 0.35e-6);
        ch.paths = draw_los(rng);
        ch.noise_var = snr_to_noise(10.0);
        const auto f = synth_rx(s, cfg, ch, rng);
        const auto cand = eta_candidates(omega_angle(ch.eta, cfg), cfg);
        std::vector<int> Ls;
        int truth = -1;
        for (size_t i = 0; i < cand.size(); ++i) {
            Ls.push_back(cand[i].L_eta);
            if (std::abs(cand[i].eta - ch.eta) < 1e-15) truth = static_cast<int>(i);
        }
        REQUIRE(truth >= 0);
        if (resolve_ambiguity(f, cfg, Ls).index == truth) ++right;
    }
    CHECK(right >= static_cast<int>(0.99 * n));
}

TEST_CASE("ambiguity scores do not depend on the overall signal scale") {
    const auto cfg = validate(RadarConfig{});
    const auto pilot = design_suboptimal(10, 20);
    Rng rng(4);
    const auto s = frame_schedule(order_schedule(random_schedule(cfg, rng)), pilot, false, cfg);
    ChannelConfig ch;
    ch.eta = 0.11e-6;
    ch.noise_var = 0.05;
    auto f = synth_rx(s, cfg, ch, rng);
    auto g = f;
    for (auto& v : g.samples) v *= 7.5;
    const std::vector<int> Ls{22, 62, 102, 142};
    const auto a = resolve_ambiguity(f, cfg, Ls), b = resolve_ambiguity(g, cfg, Ls);
    CHECK(a.index == b.index);
    for (size_t i = 0; i < Ls.size(); ++i) CHECK(a.scores[i] == doctest::Approx(b.scores[i]).epsilon(1e-9));
    CHECK(error_of([&] { resolve_ambiguity(f, cfg, std::vector<int>{}); }) == Errc::EmptySet);
    CHECK(resolve_ambiguity(f, cfg, std::vector<int>{22}).L_eta == 22);
}

TEST_CASE("hop reconstruction bounds") {
    const auto cfg = validate(RadarConfig{});
    Rng rng(0);
    const auto f = synth_rx(random_schedule(cfg, rng), cfg, ChannelConfig{}, rng);
    CHECK(error_of([&] { reconstruct_hop(f, 0, 3); }) == Errc::OutOfRange);
    CHECK(error_of([&] { reconstruct_hop(f, 2, 160); }) == Errc::OutOfRange);
    CHECK(reconstruct_hop(f, 2, 0).size() == 160u);
}
