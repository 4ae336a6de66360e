// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "fhdfrc/comms.hpp"
#include "fhdfrc/config.hpp"
#include "fhdfrc/receiver.hpp"

namespace fhdfrc {

enum class ChannelMode { LoS, Rician, LoSInterference };
enum class SeqChoice { CAE, CRE, Suboptimal, Custom };

const char* to_string(ChannelMode m) noexcept;
const char* to_string(SeqChoice s) noexcept;
ChannelMode channel_mode_from_string(const std::string& s);
SeqChoice seq_choice_from_string(const std::string& s);

struct SweepSpec {
    std::vector<double> grid{30.0};  // gamma in dB, or Eb/N0 in dB for SER sweeps
    int trials = 1000;
    std::uint64_t first_trial = 0;   // trial indices [first_trial, first_trial + trials)
    ChannelMode mode = ChannelMode::LoS;
    SeqChoice seq = SeqChoice::Suboptimal;
    std::vector<int> custom_seq;
    Modulation mod{};
    std::uint64_t seed = 1;
    std::optional<double> abnormal_factor;  // filter trials with err > factor * max LoS err
    double gamma_T_db = 18.0;
    double pilot_gamma_db = 15.0;  // estimation SNR for SER and rate sweeps
    bool guard = true;
    std::vector<int> cae_subset;   // restrict CAE to these second-difference indices
    bool noiseless = false;        // drop AWGN regardless of the grid
    double interferer_db = -5.0;
    double eta_lo = 0.05e-6;
    double eta_hi = 0.35e-6;
    double phi0_deg = 20.0;
    int nlos = 4;
    double nlos_power_db = -5.0;
    int threads = 0;               // 0: hardware concurrency
};

/// Numeric table with named columns, written as CSV.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    double at(size_t row, const std::string& col) const;
    std::vector<double> column(const std::string& col) const;
};

void write_csv(std::ostream& os, const Table& t);
std::string format_double(double v);

/// Run fn(i) for i in [0, n) on a worker pool; fn must only write to slot i of its outputs.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn, int threads = 0);

/// Pilot sequence for a spec.
std::vector<int> pilot_sequence(const SweepSpec& spec, const ValidatedConfig& cfg);

/// Per-trial generator: depends only on (seed, grid point, trial index).
Rng trial_rng(std::uint64_t seed, std::size_t point, std::uint64_t trial);

/// One random frame for the sweep settings at the given SNR.
struct TrialFrame {
    HopSchedule sched;
    SampledFrame frame;
    Bits bits;
};
TrialFrame make_trial_frame(const SweepSpec& spec, const ValidatedConfig& cfg, std::span<const int> pilot,
                            double gamma_db, Rng& rng, bool with_data);

/// Per-trial wrapped squared timing errors at one SNR, for each estimator.
struct OmegaTrials {
    std::vector<double> cae, cre, selected;
    int failures = 0;
};
OmegaTrials omega_trials(const SweepSpec& spec, const ValidatedConfig& cfg, std::size_t point, double gamma_db);

/// gamma_db, mse_cae, mse_cre, mse_selected, mselb_cae, mselb_cre, failures (+ filtered columns).
Table run_mse_omega(const SweepSpec& spec, const ValidatedConfig& cfg);
/// gamma_db, mse_u, mse_u_true_omega, mean_abs_u_err.
Table run_mse_u(const SweepSpec& spec, const ValidatedConfig& cfg);
/// gamma_db, mse_beta, mean_abs_beta, abs_mean_beta, mse_beta_true_omega.
Table run_mse_beta(const SweepSpec& spec, const ValidatedConfig& cfg);
/// ebn0_db, gamma_db, ser, ser_ideal, ber, ber_ideal, symbols.
Table run_ser(const SweepSpec& spec, const ValidatedConfig& cfg);
/// gamma_db, rate_bps, rate_ideal_bps, gross_bps.
Table run_rate(const SweepSpec& spec, const ValidatedConfig& cfg);

/// gamma = Eb/N0 * E / (L * B * T) for E bits per hop.
double ebn0_to_gamma_db(double ebn0_db, const ValidatedConfig& cfg, int bits_per_hop);

/// First grid point where the sign of log(a) - log(b) changes, interpolated linearly in dB.
std::optional<double> find_crossover(const std::vector<double>& grid, const std::vector<double>& a,
                                     const std::vector<double>& b);

}  // namespace fhdfrc
