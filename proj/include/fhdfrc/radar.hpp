// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <vector>

#include "fhdfrc/config.hpp"
#include "fhdfrc/rng.hpp"
#include "fhdfrc/waveform.hpp"

namespace fhdfrc {

struct Target {
    double range_m = 0.0;
    double angle_deg = 0.0;
    Complex alpha{1.0, 0.0};
};

struct TargetScene {
    std::vector<Target> targets;
    double window = 0.0;     // receive window in seconds; 0 picks a default
    double noise_var = 0.0;  // per-sample noise at each receive antenna
};

/// 1.2 * 2 R_max / c + H T, long enough to keep every target away from the CFAR border.
double default_window(const TargetScene& scene, const ValidatedConfig& cfg);
void check_scene(const TargetScene& scene, const ValidatedConfig& cfg);

/// N rows of received samples: sum_r alpha_r sum_m s_m(t - tau_r) e^{-j (m + n M) pi sin(theta_r)}.
std::vector<CVec> synth_echo(const HopSchedule& sched, const ValidatedConfig& cfg, const TargetScene& scene, Rng& rng);

/// Profiles indexed by n_tilde = m' + n M; profile[n_tilde][lag] = sum_i x_n(i + lag) conj(s_m'(i)).
std::vector<CVec> matched_filter_bank(std::span<const CVec> echo, const HopSchedule& sched, const ValidatedConfig& cfg);

/// X(lag, u_i) = sum_n profile[n](lag) e^{j n u_i}, u_i = -pi + 2 pi i / n_u.
struct RangeAngleMap {
    int n_lag = 0;
    int n_u = 0;
    std::vector<double> power;  // |X|^2, row-major by lag
    double at(int lag, int ui) const { return power[static_cast<size_t>(lag) * static_cast<size_t>(n_u) + static_cast<size_t>(ui)]; }
    double u_of(int ui) const { return -kPi + kTwoPi * ui / n_u; }
};

RangeAngleMap angle_transform(std::span<const CVec> profiles, int n_u = 512);

struct Detection {
    int lag = 0;
    int u_index = 0;
    double power = 0.0;
    bool operator==(const Detection& o) const { return lag == o.lag && u_index == o.u_index; }
};

struct CfarOptions {
    double pfa = 1e-6;
    int guard = 2;
    int train = 16;
    bool peaks_only = true;  // keep only cells that are maxima of their CFAR window
};

/// Cell-averaging CFAR over a 2D power grid (rows x cols, row-major). Cells whose window
/// leaves the grid are not tested.
std::vector<Detection> ca_cfar(std::span<const double> power, int rows, int cols, const CfarOptions& opt = {});
std::vector<Detection> ca_cfar(const RangeAngleMap& map, const CfarOptions& opt = {});

/// alpha = N (pfa^{-1/N} - 1) for N training cells.
double cfar_multiplier(double pfa, int n_train);

double delay_samples(double range_m, const ValidatedConfig& cfg);

}  // namespace fhdfrc
