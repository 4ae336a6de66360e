// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <set>

#include "fhdfrc/channel.hpp"
#include "fhdfrc/config.hpp"
#include "fhdfrc/dsp.hpp"
#include "fhdfrc/seqdesign.hpp"
#include "fhdfrc/waveform.hpp"
#include "oracles.hpp"

using namespace fhdfrc;

namespace {

ValidatedConfig small_cfg(int M, int K, int H, double T = 0.8e-6) {
    RadarConfig r;
    r.M = M;
    r.K = K;
    r.H = H;
    r.T = T;
    return validate(r);
}

std::vector<std::vector<int>> rows_of(const HopSchedule& s) {
    std::vector<std::vector<int>> out;
    for (int h = 0; h < s.H; ++h) out.emplace_back(s.row(h).begin(), s.row(h).end());
    return out;
}

std::vector<std::vector<oracle::cd>> mods_of(const HopSchedule& s) {
    std::vector<std::vector<oracle::cd>> out(static_cast<size_t>(s.H));
    for (int h = 0; h < s.H; ++h)
        for (int m = 0; m < s.M; ++m) out[static_cast<size_t>(h)].push_back(s.mod(h, m));
    return out;
}

}  // namespace

// ============================================================================
// schedules

TEST_CASE("random schedules are reproducible with distinct rows") {
    const auto cfg = validate(RadarConfig{});
    Rng a(42), b(42);
    const auto s1 = random_schedule(cfg, a);
    const auto s2 = random_schedule(cfg, b);
    CHECK(s1.k == s2.k);
    CHECK(s1.H == 15);
    CHECK(s1.M == 10);
    for (int h = 0; h < s1.H; ++h) {
        std::set<int> row(s1.row(h).begin(), s1.row(h).end());
        CHECK(row.size() == 10);
        CHECK(*row.begin() >= 0);
        CHECK(*row.rbegin() < 20);
    }
    CHECK_NOTHROW(check_schedule(s1, 20));
}

TEST_CASE("single-antenna single-hop schedule draws from both sub-bands") {
    Rng rng(3);
    std::set<int> seen;
    for (int i = 0; i < 64; ++i) {
        const auto s = random_schedule(1, 1, 2, rng);
        seen.insert(s.at(0, 0));
    }
    CHECK(seen == std::set<int>{0, 1});
}

TEST_CASE("random schedules honour the avoid list") {
    Rng rng(9);
    const std::vector<int> avoid{0, 1, 3};
    const auto s = random_schedule(16, 10, 20, rng, avoid);
    for (int v : s.k) CHECK(std::find(avoid.begin(), avoid.end(), v) == avoid.end());
}

TEST_CASE("ordering sorts rows, keeps multisets and is idempotent") {
    HopSchedule s(1, 3);
    s.at(0, 0) = 7;
    s.at(0, 1) = 2;
    s.at(0, 2) = 9;
    const auto o = order_schedule(s);
    CHECK(std::vector<int>(o.row(0).begin(), o.row(0).end()) == std::vector<int>{2, 7, 9});

    const auto cfg = validate(RadarConfig{});
    Rng rng(11);
    for (int t = 0; t < 50; ++t) {
        const auto r = random_schedule(cfg, rng);
        const auto once = order_schedule(r);
        const auto twice = order_schedule(once);
        CHECK(once.k == twice.k);
        for (int h = 0; h < r.H; ++h) {
            std::multiset<int> a(r.row(h).begin(), r.row(h).end()), b(once.row(h).begin(), once.row(h).end());
            CHECK(a == b);
            CHECK(std::is_sorted(once.row(h).begin(), once.row(h).end()));
        }
    }
}

TEST_CASE("ordering carries each antenna's modulation with its sub-band") {
    HopSchedule s(1, 3);
    s.at(0, 0) = 5;
    s.at(0, 1) = 1;
    s.at(0, 2) = 3;
    s.mod(0, 0) = {-1.0, 0.0};
    const auto o = order_schedule(s);
    CHECK(o.at(0, 2) == 5);
    CHECK(o.mod(0, 2).real() == doctest::Approx(-1.0));
}

TEST_CASE("frame schedule without probes writes the pilot into hops 0 and 1") {
    const auto cfg = validate(RadarConfig{});
    Rng rng(1);
    const auto pilot = design_suboptimal(10, 20);
    const auto f = frame_schedule(order_schedule(random_schedule(cfg, rng)), pilot, false, cfg);
    CHECK(std::vector<int>(f.row(0).begin(), f.row(0).end()) == pilot);
    CHECK(std::vector<int>(f.row(1).begin(), f.row(1).end()) == pilot);
}

TEST_CASE("probe hops use k = 0 on one antenna and nulling-safe sub-bands elsewhere") {
    const auto cfg = validate(RadarConfig{});
    Rng rng(1);
    const auto pilot = design_suboptimal(10, 20);
    const auto f = frame_schedule(order_schedule(random_schedule(cfg, rng)), pilot, true, cfg);
    const auto allowed = nulling_allowed(cfg);
    CHECK(probe_hops(10) == std::vector<int>{3, 4, 5, 6, 7, 8, 9, 10, 11});
    for (int m = 1; m < 10; ++m) {
        const int h = m + 2;
        CHECK(is_probe_hop(h, 10, true));
        CHECK(f.at(h, m) == 0);
        for (int j = 0; j < 10; ++j) {
            CHECK(f.mod(h, j).real() == doctest::Approx(1.0));
            if (j != m) CHECK(std::find(allowed.begin(), allowed.end(), f.at(h, j)) != allowed.end());
        }
    }
    // Antenna 0's composite comes from the pilot (k = 0 at hop 0).
    CHECK(f.at(0, 0) == 0);
    CHECK_FALSE(is_probe_hop(2, 10, true));
    CHECK_FALSE(is_probe_hop(5, 10, false));
}

TEST_CASE("probe frames need H >= M + 2") {
    const auto cfg = small_cfg(10, 20, 11);
    Rng rng(1);
    const auto pilot = design_suboptimal(10, 20);
    CHECK_THROWS_AS(frame_schedule(random_schedule(cfg, rng), pilot, true, cfg), Error);
    try {
        frame_schedule(random_schedule(cfg, rng), pilot, true, cfg);
    } catch (const Error& e) {
        CHECK(e.code() == Errc::FrameTooShort);
    }
}

TEST_CASE("nulling rule: every k for even BT/K, even k for BT/K = 1") {
    const auto four = validate(RadarConfig{});
    const auto a = nulling_allowed(four);
    CHECK(a.size() == 19);
    CHECK(a.front() == 1);
    const auto one = small_cfg(10, 20, 15, 0.2e-6);
    const auto b = nulling_allowed(one);
    for (int k : b) CHECK(k % 2 == 0);
    CHECK(b == std::vector<int>{2, 4, 6, 8, 10, 12, 14, 16, 18});
    // Nulling identity: sin(k BT pi / (2K)) vanishes for each permitted k.
    for (int k : a) CHECK(std::abs(std::sin(k * four.L_sub() * kPi / 2.0)) < 1e-12);
    for (int k : b) CHECK(std::abs(std::sin(k * one.L_sub() * kPi / 2.0)) < 1e-12);
}

// ============================================================================
// baseband synthesis

TEST_CASE("DC tone synthesises to all ones") {
    const auto cfg = small_cfg(1, 2, 1);
    HopSchedule s(1, 1);
    const auto x = synth_baseband(s, cfg);
    REQUIRE(x[0].size() == 160u);
    for (auto v : x[0]) CHECK(std::abs(v - Complex{1.0, 0.0}) < 1e-15);
}

TEST_CASE("tone k completes 4k cycles per hop with unit modulus") {
    const auto cfg = validate(RadarConfig{});
    Rng rng(5);
    auto s = random_schedule(cfg, rng);
    const auto x = synth_baseband(s, cfg);
    for (int m = 0; m < s.M; ++m) {
        const int k = s.at(0, m);
        double unwrapped = 0.0;
        for (int i = 1; i < cfg.L(); ++i)
            unwrapped += oracle::wrap(std::arg(x[static_cast<size_t>(m)][static_cast<size_t>(i)]) -
                                      std::arg(x[static_cast<size_t>(m)][static_cast<size_t>(i - 1)]));
        // Phase advance over L samples is -2 pi (4k) per hop; L - 1 steps are summed here.
        CHECK(unwrapped * cfg.L() / (cfg.L() - 1) == doctest::Approx(-kTwoPi * 4 * k).epsilon(1e-9));
        for (auto v : x[static_cast<size_t>(m)]) CHECK(std::abs(std::abs(v) - 1.0) < 1e-12);
    }
}

TEST_CASE("a pi phase term negates the tone") {
    const auto cfg = small_cfg(1, 2, 1);
    HopSchedule s(1, 1);
    s.at(0, 0) = 1;
    auto neg = s;
    neg.mod(0, 0) = dsp::expj(kPi);
    const auto a = synth_baseband(s, cfg), b = synth_baseband(neg, cfg);
    for (size_t i = 0; i < a[0].size(); ++i) CHECK(std::abs(a[0][i] + b[0][i]) < 1e-12);
}

// ============================================================================
// ambiguity function

TEST_CASE("single pulse gives the triangle T - |tau|") {
    const auto cfg = small_cfg(1, 2, 1);
    HopSchedule s(1, 1);
    s.at(0, 0) = 1;
    const auto tau = tau_grid(cfg, 101, 1.2);
    const auto R = ambiguity_function(s, cfg, tau);
    for (size_t i = 0; i < tau.size(); ++i) {
        const double expect = std::max(0.0, cfg.T() - std::abs(tau[i]));
        CHECK(R[i] == doctest::Approx(expect).epsilon(1e-9).scale(cfg.T()));
    }
}

TEST_CASE("ordering leaves the range ambiguity function unchanged") {
    const auto cfg = small_cfg(10, 20, 15, 0.2e-6);
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
        Rng rng(seed);
        const auto s = random_schedule(cfg, rng);
        const auto o = order_schedule(s);
        const auto tau = tau_grid(cfg, 512);
        const auto a = ambiguity_function(s, cfg, tau), b = ambiguity_function(o, cfg, tau);
        const double peak = *std::max_element(a.begin(), a.end());
        double worst = 0.0;
        for (size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
        CHECK(worst <= 1e-9 * peak);
    }
}

TEST_CASE("closed-form ambiguity agrees with a sampled time-domain correlation") {
    const auto cfg = validate(RadarConfig{});
    Rng rng(21);
    auto s = order_schedule(random_schedule(cfg, rng));
    std::bernoulli_distribution coin(0.5);
    for (auto& f : s.F) f = coin(rng) ? -1.0 : 1.0;
    const int over = 8 * cfg.L();
    const auto w = oracle::oversample(rows_of(s), mods_of(s), cfg.B(), cfg.K(), cfg.T(), over);
    const std::vector<int> lags{0, 3, 17, 64, 160, 640, 1281, 2560, 4000};
    std::vector<double> tau;
    for (int n : lags) tau.push_back(n * w.dt);
    const auto R = ambiguity_function(s, cfg, tau, true);
    const double R0 = oracle::sampled_raf(w, 0);
    CHECK(R[0] == doctest::Approx(R0).epsilon(0.02));
    for (size_t i = 0; i < lags.size(); ++i) CHECK(std::abs(R[i] - oracle::sampled_raf(w, lags[i])) <= 0.02 * R0);
}

TEST_CASE("zero-lag ambiguity of the conventional waveform is M H T") {
    // Co-hop cross terms vanish at tau = 0 by orthogonality, so every antenna contributes T per hop.
    const auto cfg = validate(RadarConfig{});
    Rng rng(2);
    const auto s = random_schedule(cfg, rng);
    const std::vector<double> zero{0.0};
    CHECK(ambiguity_function(s, cfg, zero)[0] == doctest::Approx(cfg.M() * cfg.H() * cfg.T()));
}

// ============================================================================
// channel

TEST_CASE("DC single path without offset is an all-ones frame") {
    const auto cfg = small_cfg(1, 2, 3);
    HopSchedule s(3, 1);
    ChannelConfig ch;
    Rng rng(0);
    const auto f = synth_rx(s, cfg, ch, rng);
    REQUIRE(f.samples.size() == 480u);
    for (auto v : f.samples) CHECK(std::abs(v - Complex{1.0, 0.0}) < 1e-15);
}

TEST_CASE("timing offset of 0.08 us is 16 samples") {
    const auto cfg = validate(RadarConfig{});
    Rng rng(0);
    const auto s = random_schedule(cfg, rng);
    ChannelConfig ch;
    ch.eta = 0.08e-6;
    const auto f = synth_rx(s, cfg, ch, rng);
    CHECK(f.L_eta == 16);
}

TEST_CASE("noise-free frame matches the sample-by-sample hop model") {
    const auto cfg = validate(RadarConfig{});
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        Rng rng(seed);
        auto s = order_schedule(random_schedule(cfg, rng));
        for (auto& f : s.F) f = dsp::expj(uniform(rng, 0, kTwoPi));
        ChannelConfig ch;
        ch.eta = uniform(rng, 0.0, cfg.T());
        ch.paths = {Path{dsp::expj(1.1), 20.0}};
        const auto f = synth_rx(s, cfg, ch, rng);
        std::vector<oracle::cd> comp;
        for (int m = 0; m < cfg.M(); ++m) comp.push_back(ch.paths[0].beta * std::polar(1.0, -kPi * m * std::sin(20.0 * kPi / 180)));
        const auto ref = oracle::direct_frame(rows_of(s), mods_of(s), comp, ch.eta, cfg.B(), cfg.K(), cfg.fs(), cfg.L());
        double num = 0.0, den = 0.0;
        for (size_t i = 0; i < ref.size(); ++i) {
            num += std::norm(f.samples[i] - ref[i]);
            den += std::norm(ref[i]);
        }
        CHECK(std::sqrt(num / den) <= 1e-12);
        CHECK(f.L_eta >= 0);
        CHECK(f.L_eta < cfg.L());
        for (auto v : f.samples) CHECK(std::abs(v) <= cfg.M() + 1e-9);
    }
}

TEST_CASE("AWGN variance matches the requested value") {
    const auto cfg = small_cfg(1, 2, 625);  // 10^5 samples
    HopSchedule s(625, 1);
    ChannelConfig ch;
    ch.paths = {Path{Complex{0.0, 0.0}, 0.0}};
    ch.noise_var = snr_to_noise(15.0);
    Rng rng(99);
    const auto f = synth_rx(s, cfg, ch, rng);
    double p = 0.0;
    for (auto v : f.samples) p += std::norm(v);
    p /= static_cast<double>(f.samples.size());
    CHECK(p == doctest::Approx(ch.noise_var).epsilon(0.02));
}

TEST_CASE("paths sharing an angle superpose into one path") {
    const auto cfg = validate(RadarConfig{});
    Rng rng(4);
    const auto s = order_schedule(random_schedule(cfg, rng));
    ChannelConfig multi;
    multi.eta = 0.12e-6;
    multi.paths = {Path{Complex{0.6, 0.2}, 35.0}, Path{Complex{-0.1, 0.4}, 35.0}, Path{Complex{0.3, -0.3}, 35.0}};
    ChannelConfig single = multi;
    single.paths = {Path{Complex{0.8, 0.3}, 35.0}};
    Rng r1(0), r2(0);
    const auto a = synth_rx(s, cfg, multi, r1), b = synth_rx(s, cfg, single, r2);
    for (size_t i = 0; i < a.samples.size(); ++i) CHECK(std::abs(a.samples[i] - b.samples[i]) < 1e-12);
}

TEST_CASE("Rician draws follow the stated power split") {
    Rng rng(17);
    double nlos = 0.0;
    double phi_min = 90, phi_max = -90;
    const int n = 4000;
    for (int i = 0; i < n; ++i) {
        const auto p = draw_rician(rng);
        REQUIRE(p.size() == 5u);
        CHECK(std::abs(std::abs(p[0].beta) - 1.0) < 1e-12);
        CHECK(p[0].phi_deg == doctest::Approx(20.0));
        for (size_t j = 1; j < p.size(); ++j) {
            nlos += std::norm(p[j].beta);
            phi_min = std::min(phi_min, p[j].phi_deg);
            phi_max = std::max(phi_max, p[j].phi_deg);
        }
    }
    CHECK(nlos / (4.0 * n) == doctest::Approx(std::pow(10.0, -0.5)).epsilon(0.05));
    CHECK(phi_min >= -90.0);
    CHECK(phi_max <= 90.0);
    CHECK(phi_max - phi_min > 170.0);
}

TEST_CASE("interferer adds power at the stated level") {
    // The M tones sit on distinct sub-bands, so their powers add up to the stated total
    // apart from cross terms left by the straddled hop windows.
    const auto cfg = validate(RadarConfig{});
    Rng rng(8);
    const auto s = order_schedule(random_schedule(cfg, rng));
    ChannelConfig ch;
    ch.paths = {Path{Complex{0.6, 0.8}, 20.0}};
    ch.interferer = draw_interferer(cfg, rng, -5.0);
    ChannelConfig clean = ch;
    clean.interferer.reset();
    Rng r1(1), r2(1);
    const auto with = synth_rx(s, cfg, ch, r1), without = synth_rx(s, cfg, clean, r2);
    double p = 0.0;
    for (size_t i = 0; i < with.samples.size(); ++i) p += std::norm(with.samples[i] - without.samples[i]);
    p /= static_cast<double>(with.samples.size());
    CHECK(p == doctest::Approx(std::pow(10.0, -0.5)).epsilon(0.15));
}

TEST_CASE("channel checks reject out-of-range offsets") {
    const auto cfg = validate(RadarConfig{});
    ChannelConfig ch;
    ch.eta = cfg.T();
    CHECK_THROWS_AS(check_channel(ch, cfg), Error);
    ch.eta = 0.1e-6;
    ch.paths.clear();
    CHECK_THROWS_AS(check_channel(ch, cfg), Error);
}
