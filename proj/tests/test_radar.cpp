// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "fhdfrc/dsp.hpp"
#include "fhdfrc/radar.hpp"
#include "fhdfrc/waveform.hpp"
#include "oracles.hpp"

using namespace fhdfrc;

namespace {

// A range whose round-trip delay is `lag` samples, nudged so sample `lag` starts the echo.
double range_for_lag(int lag, const ValidatedConfig& cfg) {
    return (lag - 1e-7) * kSpeedOfLight / (2.0 * cfg.fs());
}

RangeAngleMap map_for(const HopSchedule& s, const ValidatedConfig& cfg, const TargetScene& scene, std::uint64_t seed = 0) {
    Rng rng(seed);
    const auto echo = synth_echo(s, cfg, scene, rng);
    return angle_transform(matched_filter_bank(echo, s, cfg));
}

std::pair<int, int> argmax(const RangeAngleMap& m) {
    const auto it = std::max_element(m.power.begin(), m.power.end());
    const auto idx = static_cast<int>(it - m.power.begin());
    return {idx / m.n_u, idx % m.n_u};
}

}  // namespace

TEST_CASE("one kilometre is 1334.26 samples of round-trip delay") {
    const auto cfg = validate(RadarConfig{});
    CHECK(delay_samples(1000.0, cfg) == doctest::Approx(1334.2563).epsilon(1e-7));
}

TEST_CASE("an empty scene gives an all-zero echo and map") {
    const auto cfg = validate(RadarConfig{});
    Rng rng(0);
    const auto s = random_schedule(cfg, rng);
    TargetScene scene;
    scene.window = 2 * cfg.H() * cfg.T();
    const auto echo = synth_echo(s, cfg, scene, rng);
    CHECK(echo.size() == 10u);
    for (const auto& row : echo)
        for (auto v : row) CHECK(v == Complex{0.0, 0.0});
    const auto map = angle_transform(matched_filter_bank(echo, s, cfg));
    CHECK(map.n_lag == static_cast<int>(echo[0].size()) - cfg.H() * cfg.L() + 1);
    CHECK(*std::max_element(map.power.begin(), map.power.end()) == 0.0);
    CHECK(ca_cfar(map).empty());
}

TEST_CASE("a target peaks at its delay and at u = pi sin(theta)") {
    const auto cfg = validate(RadarConfig{});
    Rng rng(1);
    const auto s = random_schedule(cfg, rng);
    for (double theta : {0.0, 30.0, -14.4775}) {
        TargetScene scene;
        scene.targets = {Target{range_for_lag(400, cfg), theta, Complex{1.0, 0.0}}};
        const auto map = map_for(s, cfg, scene);
        const auto [lag, ui] = argmax(map);
        CHECK(lag == 400);
        CHECK(std::abs(dsp::wrap_angle(map.u_of(ui) - kPi * std::sin(theta * kPi / 180))) <= kTwoPi / map.n_u);
    }
    RangeAngleMap grid;
    grid.n_u = 512;
    CHECK(grid.u_of(384) == doctest::Approx(kPi / 2));
}

TEST_CASE("mainlobe height is the full coherent gain for both waveforms") {
    const auto cfg = validate(RadarConfig{});
    Rng rng(2);
    const auto s = random_schedule(cfg, rng);
    const auto o = order_schedule(s);
    TargetScene scene;
    scene.targets = {Target{range_for_lag(300, cfg), 0.0, Complex{0.5, 0.5}}};
    const double gain = 10.0 * 10.0 * 15.0 * 160.0;  // N M H L
    const double expect = gain * gain * 0.5;
    const auto a = map_for(s, cfg, scene), b = map_for(o, cfg, scene);
    CHECK(a.at(300, 256) == doctest::Approx(expect).epsilon(1e-6));
    CHECK(b.at(300, 256) == doctest::Approx(expect).epsilon(1e-6));
}

TEST_CASE("matched filter output is the correlation against each transmit waveform") {
    const auto cfg = validate(RadarConfig{});
    Rng rng(3);
    const auto s = random_schedule(cfg, rng);
    TargetScene scene;
    scene.targets = {Target{range_for_lag(37, cfg), 12.0, Complex{0.2, -0.9}}};
    scene.noise_var = 0.3;
    const auto echo = synth_echo(s, cfg, scene, rng);
    const auto prof = matched_filter_bank(echo, s, cfg);
    const auto ref = synth_baseband(s, cfg);
    REQUIRE(prof.size() == 100u);
    for (int nt : {0, 7, 55, 99}) {
        const auto& x = echo[static_cast<size_t>(nt / 10)];
        const auto& r = ref[static_cast<size_t>(nt % 10)];
        const int last = static_cast<int>(prof[0].size()) - 1;
        for (int lag : {0, 37, last}) {
            Complex acc{0.0, 0.0};
            for (size_t i = 0; i < r.size(); ++i) acc += x[i + static_cast<size_t>(lag)] * std::conj(r[i]);
            CHECK(std::abs(prof[static_cast<size_t>(nt)][static_cast<size_t>(lag)] - acc) < 1e-8 * (1.0 + std::abs(acc)));
        }
    }
}

TEST_CASE("angle transform matches a direct sum off the FFT path") {
    Rng rng(4);
    std::vector<CVec> prof(6, CVec(3));
    for (auto& p : prof)
        for (auto& v : p) v = cgauss(rng, 1.0);
    const auto fast = angle_transform(prof, 16);
    const auto slow = angle_transform(prof, 5);  // fewer points than profiles: direct sum
    for (int lag = 0; lag < 3; ++lag) {
        for (int i = 0; i < 16; ++i) {
            Complex acc{0.0, 0.0};
            for (int n = 0; n < 6; ++n) acc += prof[static_cast<size_t>(n)][static_cast<size_t>(lag)] * dsp::expj(n * fast.u_of(i));
            CHECK(fast.at(lag, i) == doctest::Approx(std::norm(acc)));
        }
        for (int i = 0; i < 5; ++i) {
            Complex acc{0.0, 0.0};
            for (int n = 0; n < 6; ++n) acc += prof[static_cast<size_t>(n)][static_cast<size_t>(lag)] * dsp::expj(n * slow.u_of(i));
            CHECK(slow.at(lag, i) == doctest::Approx(std::norm(acc)));
        }
    }
}

TEST_CASE("CFAR multiplier") {
    CHECK(cfar_multiplier(1e-6, 1344) == doctest::Approx(1344 * (std::pow(1e6, 1.0 / 1344) - 1)));
    CHECK(cfar_multiplier(0.5, 1) == doctest::Approx(1.0));
}

TEST_CASE("CFAR false alarms on exponential noise follow the design rate") {
    const int rows = 352, cols = 348;  // 316 x 312 tested cells
    Rng rng(5);
    std::exponential_distribution<double> ex(1.0);
    std::vector<double> p(static_cast<size_t>(rows * cols));
    for (auto& v : p) v = ex(rng);
    CfarOptions opt;
    opt.pfa = 1e-3;
    opt.peaks_only = false;
    const auto det = ca_cfar(p, rows, cols, opt);
    const double n = 316.0 * 312.0;
    CHECK(std::abs(static_cast<double>(det.size()) - n * 1e-3) <= 3 * oracle::binomial_sigma(n, 1e-3));
    for (const auto& d : det) {
        CHECK(d.lag >= 18);
        CHECK(d.lag < rows - 18);
        CHECK(d.u_index >= 18);
        CHECK(d.u_index < cols - 18);
    }
}

TEST_CASE("CFAR window sums agree with brute force") {
    const int rows = 60, cols = 50;
    Rng rng(6);
    std::exponential_distribution<double> ex(1.0);
    std::vector<double> p(static_cast<size_t>(rows * cols));
    for (auto& v : p) v = ex(rng);
    p[30 * cols + 25] = 400.0;
    p[41 * cols + 22] = 90.0;
    CfarOptions opt;
    opt.pfa = 1e-4;
    opt.guard = 1;
    opt.train = 4;
    opt.peaks_only = false;
    const auto det = ca_cfar(p, rows, cols, opt);
    const double alpha = cfar_multiplier(opt.pfa, 11 * 11 - 9);
    std::vector<Detection> ref;
    for (int r = 5; r < rows - 5; ++r)
        for (int c = 5; c < cols - 5; ++c) {
            double s = 0.0;
            for (int dr = -5; dr <= 5; ++dr)
                for (int dc = -5; dc <= 5; ++dc)
                    if (std::abs(dr) > 1 || std::abs(dc) > 1) s += p[static_cast<size_t>((r + dr) * cols + c + dc)];
            if (p[static_cast<size_t>(r * cols + c)] > alpha * s / 112.0) ref.push_back({r, c, 0.0});
        }
    CHECK(det == ref);
    CHECK(std::find(det.begin(), det.end(), Detection{30, 25, 0.0}) != det.end());
}

TEST_CASE("peak-only CFAR reports one cell per isolated target") {
    const int rows = 80, cols = 80;
    std::vector<double> p(static_cast<size_t>(rows * cols), 1.0);
    p[40 * cols + 40] = 1e4;
    p[40 * cols + 41] = 5e3;  // shoulder of the same target
    const auto det = ca_cfar(p, rows, cols, CfarOptions{});
    REQUIRE(det.size() == 1u);
    CHECK(det[0].lag == 40);
    CHECK(det[0].u_index == 40);
}

TEST_CASE("two well separated targets are both reported") {
    const auto cfg = validate(RadarConfig{});
    Rng rng(7);
    const auto s = random_schedule(cfg, rng);
    TargetScene scene;
    scene.targets = {Target{600.0, -20.0, Complex{1.0, 0.0}}, Target{1500.0, 35.0, Complex{0.0, 1.0}}};
    scene.noise_var = 1.0;
    const auto map = map_for(s, cfg, scene, 7);
    const auto det = ca_cfar(map);
    for (const auto& t : scene.targets) {
        const double lag = delay_samples(t.range_m, cfg);
        const double u = kPi * std::sin(t.angle_deg * kPi / 180);
        bool hit = false;
        for (const auto& d : det)
            if (std::abs(d.lag - lag) <= 1.0 && std::abs(dsp::wrap_angle(map.u_of(d.u_index) - u)) <= 2 * kTwoPi / map.n_u) hit = true;
        CHECK(hit);
    }
}

TEST_CASE("scene checks") {
    const auto cfg = validate(RadarConfig{});
    TargetScene bad;
    bad.targets = {Target{-1.0, 0.0, {1.0, 0.0}}};
    CHECK_THROWS_AS(check_scene(bad, cfg), Error);
    TargetScene tight;
    tight.targets = {Target{1000.0, 0.0, {1.0, 0.0}}};
    tight.window = cfg.H() * cfg.T();
    CHECK_THROWS_AS(check_scene(tight, cfg), Error);
    CHECK(default_window(tight, cfg) == doctest::Approx(1.2 * 2000.0 / kSpeedOfLight + 12e-6));
}
