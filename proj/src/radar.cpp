// SPDX-License-Identifier: Apache-2.0
#include "fhdfrc/radar.hpp"

#include <algorithm>
#include <cmath>

#include "fhdfrc/dsp.hpp"

namespace fhdfrc {

double delay_samples(double range_m, const ValidatedConfig& cfg) { return 2.0 * range_m / kSpeedOfLight * cfg.fs(); }

double default_window(const TargetScene& scene, const ValidatedConfig& cfg) {
    double rmax = 0.0;
    for (const Target& t : scene.targets) rmax = std::max(rmax, t.range_m);
    return 1.2 * 2.0 * rmax / kSpeedOfLight + cfg.H() * cfg.T();
}

void check_scene(const TargetScene& scene, const ValidatedConfig& cfg) {
    double rmax = 0.0;
    for (const Target& t : scene.targets) {
        if (!(t.range_m > 0.0)) throw Error(Errc::InvalidConfig, "target ranges must be positive");
        rmax = std::max(rmax, t.range_m);
    }
    if (scene.window > 0.0 && scene.window < 2.0 * rmax / kSpeedOfLight + cfg.H() * cfg.T())
        throw Error(Errc::InvalidConfig, "receive window is shorter than 2 R_max / c + H T");
}

std::vector<CVec> synth_echo(const HopSchedule& sched, const ValidatedConfig& cfg, const TargetScene& scene, Rng& rng) {
    check_scene(scene, cfg);
    const double window = scene.window > 0.0 ? scene.window : default_window(scene, cfg);
    const int n_samples = static_cast<int>(std::ceil(window * cfg.fs()));
    const int N = cfg.N();
    const int M = sched.M;
    const double Ts = cfg.Ts();
    const double T = cfg.T();
    const double df = cfg.subband_spacing();
    std::vector<CVec> x(static_cast<size_t>(N), CVec(static_cast<size_t>(n_samples)));

    for (const Target& tg : scene.targets) {
        const double tau = 2.0 * tg.range_m / kSpeedOfLight;
        const double s = std::sin(tg.angle_deg * kPi / 180.0);
        // Transmit-summed pulse for this target, then per-antenna receive steering.
        CVec pulse(static_cast<size_t>(n_samples));
        CVec tx_steer(static_cast<size_t>(M));
        for (int m = 0; m < M; ++m) tx_steer[static_cast<size_t>(m)] = dsp::expj(-kPi * m * s);
        for (int i = 0; i < n_samples; ++i) {
            const double t = i * Ts - tau;
            if (t < 0.0) continue;
            const int h = static_cast<int>(std::floor(t / T));
            if (h >= sched.H) break;
            const double tl = t - h * T;
            Complex acc{0.0, 0.0};
            for (int m = 0; m < M; ++m)
                acc += tx_steer[static_cast<size_t>(m)] * sched.mod(h, m) * dsp::expj(-kTwoPi * sched.at(h, m) * df * tl);
            pulse[static_cast<size_t>(i)] = tg.alpha * acc;
        }
        for (int n = 0; n < N; ++n) {
            const Complex rx = dsp::expj(-kPi * n * M * s);
            CVec& row = x[static_cast<size_t>(n)];
            for (int i = 0; i < n_samples; ++i) row[static_cast<size_t>(i)] += rx * pulse[static_cast<size_t>(i)];
        }
    }
    if (scene.noise_var > 0.0)
        for (CVec& row : x)
            for (Complex& v : row) v += cgauss(rng, scene.noise_var);
    return x;
}

std::vector<CVec> matched_filter_bank(std::span<const CVec> echo, const HopSchedule& sched, const ValidatedConfig& cfg) {
    const int M = sched.M;
    const std::vector<CVec> ref = synth_baseband(sched, cfg);
    if (echo.empty()) return {};
    const size_t nx = echo[0].size();
    const size_t nr = ref[0].size();
    if (nr > nx) throw Error(Errc::InvalidConfig, "receive window shorter than the pulse");
    const size_t n_lag = nx - nr + 1;
    size_t nfft = 1;
    while (nfft < nx + nr) nfft <<= 1;

    std::vector<CVec> R;
    for (const CVec& r : ref) {
        CVec pad(nfft);
        std::copy(r.begin(), r.end(), pad.begin());
        CVec F = dsp::fft(pad);
        for (Complex& v : F) v = std::conj(v);
        R.push_back(std::move(F));
    }
    std::vector<CVec> profiles(echo.size() * static_cast<size_t>(M));
    const double scale = 1.0 / static_cast<double>(nfft);
    CVec prod(nfft);
    for (size_t n = 0; n < echo.size(); ++n) {
        CVec pad(nfft);
        std::copy(echo[n].begin(), echo[n].end(), pad.begin());
        const CVec X = dsp::fft(pad);
        for (int mp = 0; mp < M; ++mp) {
            const CVec& Rm = R[static_cast<size_t>(mp)];
            for (size_t i = 0; i < nfft; ++i) prod[i] = X[i] * Rm[i];
            CVec r = dsp::ifft_unscaled(prod);
            CVec& out = profiles[static_cast<size_t>(mp) + n * static_cast<size_t>(M)];
            out.resize(n_lag);
            for (size_t lag = 0; lag < n_lag; ++lag) out[lag] = r[lag] * scale;
        }
    }
    return profiles;
}

RangeAngleMap angle_transform(std::span<const CVec> profiles, int n_u) {
    RangeAngleMap map;
    if (profiles.empty()) return map;
    const int NM = static_cast<int>(profiles.size());
    map.n_lag = static_cast<int>(profiles[0].size());
    map.n_u = n_u;
    map.power.assign(static_cast<size_t>(map.n_lag) * static_cast<size_t>(n_u), 0.0);
    // X(u_i) = sum_n p_n (-1)^n e^{j 2 pi n i / n_u}: an unscaled inverse DFT when NM <= n_u.
    if (NM <= n_u) {
        CVec buf(static_cast<size_t>(n_u));
        for (int lag = 0; lag < map.n_lag; ++lag) {
            std::fill(buf.begin(), buf.end(), Complex{0.0, 0.0});
            for (int n = 0; n < NM; ++n) buf[static_cast<size_t>(n)] = (n % 2 ? -1.0 : 1.0) * profiles[static_cast<size_t>(n)][static_cast<size_t>(lag)];
            CVec X = dsp::ifft_unscaled(buf);
            double* dst = map.power.data() + static_cast<size_t>(lag) * static_cast<size_t>(n_u);
            for (int i = 0; i < n_u; ++i) dst[i] = std::norm(X[static_cast<size_t>(i)]);
        }
        return map;
    }
    for (int lag = 0; lag < map.n_lag; ++lag)
        for (int i = 0; i < n_u; ++i) {
            const double u = map.u_of(i);
            Complex acc{0.0, 0.0};
            for (int n = 0; n < NM; ++n) acc += profiles[static_cast<size_t>(n)][static_cast<size_t>(lag)] * dsp::expj(n * u);
            map.power[static_cast<size_t>(lag) * static_cast<size_t>(n_u) + static_cast<size_t>(i)] = std::norm(acc);
        }
    return map;
}

double cfar_multiplier(double pfa, int n_train) {
    return n_train * (std::pow(pfa, -1.0 / n_train) - 1.0);
}

std::vector<Detection> ca_cfar(std::span<const double> power, int rows, int cols, const CfarOptions& opt) {
    const int g = opt.guard;
    const int w = opt.guard + opt.train;
    const int outer = (2 * w + 1) * (2 * w + 1);
    const int inner = (2 * g + 1) * (2 * g + 1);
    const int n_train = outer - inner;
    const double alpha = cfar_multiplier(opt.pfa, n_train);

    // Summed-area table with a zero first row and column.
    const size_t sc = static_cast<size_t>(cols + 1);
    std::vector<double> sat(static_cast<size_t>(rows + 1) * sc, 0.0);
    for (int r = 0; r < rows; ++r) {
        double run = 0.0;
        for (int c = 0; c < cols; ++c) {
            run += power[static_cast<size_t>(r) * static_cast<size_t>(cols) + static_cast<size_t>(c)];
            sat[static_cast<size_t>(r + 1) * sc + static_cast<size_t>(c + 1)] = sat[static_cast<size_t>(r) * sc + static_cast<size_t>(c + 1)] + run;
        }
    }
    auto box = [&](int r0, int c0, int r1, int c1) {  // inclusive bounds
        return sat[static_cast<size_t>(r1 + 1) * sc + static_cast<size_t>(c1 + 1)] - sat[static_cast<size_t>(r0) * sc + static_cast<size_t>(c1 + 1)] -
               sat[static_cast<size_t>(r1 + 1) * sc + static_cast<size_t>(c0)] + sat[static_cast<size_t>(r0) * sc + static_cast<size_t>(c0)];
    };
    auto at = [&](int r, int c) { return power[static_cast<size_t>(r) * static_cast<size_t>(cols) + static_cast<size_t>(c)]; };

    std::vector<Detection> out;
    for (int r = w; r < rows - w; ++r) {
        for (int c = w; c < cols - w; ++c) {
            const double cut = at(r, c);
            const double noise = (box(r - w, c - w, r + w, c + w) - box(r - g, c - g, r + g, c + g)) / n_train;
            if (!(cut > alpha * noise)) continue;
            if (opt.peaks_only) {
                bool peak = true;
                for (int dr = -w; dr <= w && peak; ++dr)
                    for (int dc = -w; dc <= w; ++dc) {
                        if (dr == 0 && dc == 0) continue;
                        const double v = at(r + dr, c + dc);
                        // Ties resolve towards the earliest cell so plateaus give one detection.
                        if (v > cut || (v == cut && (dr < 0 || (dr == 0 && dc < 0)))) {
                            peak = false;
                            break;
                        }
                    }
                if (!peak) continue;
            }
            out.push_back({r, c, cut});
        }
    }
    return out;
}

std::vector<Detection> ca_cfar(const RangeAngleMap& map, const CfarOptions& opt) {
    return ca_cfar(map.power, map.n_lag, map.n_u, opt);
}

}  // namespace fhdfrc
