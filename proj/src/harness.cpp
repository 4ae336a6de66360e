// SPDX-License-Identifier: Apache-2.0
#include "fhdfrc/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <limits>
#include <thread>

#include "fhdfrc/dsp.hpp"

namespace fhdfrc {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double mean_of(const std::vector<double>& v) {
    if (v.empty()) return kNaN;
    return dsp::pairwise_sum(v) / static_cast<double>(v.size());
}

void add_noise(SampledFrame& f, double var, Rng& rng) {
    f.truth.noise_var = var;
    if (var <= 0.0) return;
    for (Complex& s : f.samples) s += cgauss(rng, var);
}

double sq_wrap(double a, double b) {
    double e = dsp::wrap_angle(a - b);
    return e * e;
}

// Payload bits carried by correctly demodulated symbols.
double good_bits(const HopSchedule& tx, const DemodResult& rx, const Modulation& mod, int fhcs_bits) {
    double bits = 0.0;
    for (const HopDecision& d : rx.hops) {
        bool k_ok = !d.detect_failed;
        if (k_ok)
            for (int m = 0; m < tx.M; ++m)
                if (d.k_hat[static_cast<size_t>(m)] != tx.at(d.h, m)) k_ok = false;
        if (!k_ok) continue;
        if (mod.scheme != Scheme::PSK) bits += fhcs_bits;
        if (mod.scheme != Scheme::FHCS)
            for (int m = 0; m < tx.M; ++m)
                if (d.psk[static_cast<size_t>(m)] == psk_slice(std::arg(tx.mod(d.h, m)), mod.J)) bits += mod.J;
    }
    return bits;
}

ReceiverOptions receiver_options(const SweepSpec& spec, double gamma_db, bool resolve) {
    ReceiverOptions ro;
    ro.gamma_db = gamma_db;
    ro.gamma_T_db = spec.gamma_T_db;
    ro.probe = spec.mode == ChannelMode::Rician;
    ro.guard = spec.guard;
    ro.cae_subset = spec.cae_subset;
    ro.resolve = resolve;
    return ro;
}

}  // namespace

const char* to_string(ChannelMode m) noexcept {
    switch (m) {
        case ChannelMode::LoS: return "los";
        case ChannelMode::Rician: return "rician";
        case ChannelMode::LoSInterference: return "los-intf";
    }
    return "unknown";
}

const char* to_string(SeqChoice s) noexcept {
    switch (s) {
        case SeqChoice::CAE: return "cae";
        case SeqChoice::CRE: return "cre";
        case SeqChoice::Suboptimal: return "suboptimal";
        case SeqChoice::Custom: return "custom";
    }
    return "unknown";
}

ChannelMode channel_mode_from_string(const std::string& s) {
    if (s == "los") return ChannelMode::LoS;
    if (s == "rician") return ChannelMode::Rician;
    if (s == "los-intf" || s == "interference") return ChannelMode::LoSInterference;
    throw Error(Errc::InvalidConfig, "unknown channel mode '" + s + "'");
}

SeqChoice seq_choice_from_string(const std::string& s) {
    if (s == "cae") return SeqChoice::CAE;
    if (s == "cre") return SeqChoice::CRE;
    if (s == "suboptimal") return SeqChoice::Suboptimal;
    if (s == "custom") return SeqChoice::Custom;
    throw Error(Errc::InvalidConfig, "unknown sequence choice '" + s + "'");
}

// ==== Tables ================================================================

double Table::at(size_t row, const std::string& col) const {
    auto it = std::find(columns.begin(), columns.end(), col);
    if (it == columns.end()) throw Error(Errc::OutOfRange, "no column '" + col + "'");
    return rows.at(row).at(static_cast<size_t>(it - columns.begin()));
}

std::vector<double> Table::column(const std::string& col) const {
    std::vector<double> out;
    for (size_t r = 0; r < rows.size(); ++r) out.push_back(at(r, col));
    return out;
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

void write_csv(std::ostream& os, const Table& t) {
    for (size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
    os << '\n';
    for (const auto& row : t.rows) {
        for (size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_double(row[i]);
        os << '\n';
    }
}

// ==== Execution =============================================================

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn, int threads) {
    unsigned hw = threads > 0 ? static_cast<unsigned>(threads) : std::max(1u, std::thread::hardware_concurrency());
    hw = static_cast<unsigned>(std::min<std::size_t>(hw, std::max<std::size_t>(n, 1)));
    if (hw <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::atomic<bool> failed{false};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < hw; ++w)
        pool.emplace_back([&] {
            for (std::size_t i; !failed && (i = next.fetch_add(1)) < n;) {
                try {
                    fn(i);
                } catch (...) {
                    if (!failed.exchange(true)) error = std::current_exception();
                }
            }
        });
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

std::vector<int> pilot_sequence(const SweepSpec& spec, const ValidatedConfig& cfg) {
    std::vector<int> k;
    switch (spec.seq) {
        case SeqChoice::CAE: k = design_cae(cfg.M()); break;
        case SeqChoice::Suboptimal: k = design_suboptimal(cfg.M(), cfg.K()); break;
        case SeqChoice::CRE:
        case SeqChoice::Custom:
            if (spec.custom_seq.empty())
                throw Error(Errc::InvalidConfig, "this sequence choice needs an explicit sequence");
            k = spec.custom_seq;
            break;
    }
    if (static_cast<int>(k.size()) != cfg.M()) throw Error(Errc::InvalidConfig, "pilot length differs from M");
    check_sequence(k, cfg.K());
    return k;
}

Rng trial_rng(std::uint64_t seed, std::size_t point, std::uint64_t trial) {
    return make_rng(splitmix64(seed + 0x5851F42D4C957F2Dull * (point + 1)), trial);
}

TrialFrame make_trial_frame(const SweepSpec& spec, const ValidatedConfig& cfg, std::span<const int> pilot,
                            double gamma_db, Rng& rng, bool with_data) {
    TrialFrame tf;
    const bool probe = spec.mode == ChannelMode::Rician;
    if (with_data) {
        tf.bits.resize(payload_bits(cfg, spec.mod, probe));
        std::bernoulli_distribution coin(0.5);
        for (auto& b : tf.bits) b = coin(rng) ? 1 : 0;
        tf.sched = modulate(tf.bits, cfg, spec.mod, pilot, probe, rng);
    } else {
        tf.sched = frame_schedule(order_schedule(random_schedule(cfg, rng)), pilot, probe, cfg);
    }
    ChannelConfig chan;
    chan.eta = draw_eta(rng, spec.eta_lo, spec.eta_hi);
    chan.paths = probe ? draw_rician(rng, spec.nlos, spec.nlos_power_db, spec.phi0_deg) : draw_los(rng, spec.phi0_deg);
    if (spec.mode == ChannelMode::LoSInterference) {
        std::vector<int> clean(pilot.begin(), pilot.begin() + std::min<std::ptrdiff_t>(3, static_cast<std::ptrdiff_t>(pilot.size())));
        chan.interferer = draw_interferer(cfg, rng, spec.interferer_db, clean);
    }
    chan.noise_var = 0.0;
    tf.frame = synth_rx(tf.sched, cfg, chan, rng);
    if (!spec.noiseless && std::isfinite(gamma_db)) add_noise(tf.frame, snr_to_noise(gamma_db, std::abs(chan.paths[0].beta)), rng);
    return tf;
}

// ==== Sweeps ================================================================

OmegaTrials omega_trials(const SweepSpec& spec, const ValidatedConfig& cfg, std::size_t point, double gamma_db) {
    const std::vector<int> pilot = pilot_sequence(spec, cfg);
    const size_t n = static_cast<size_t>(spec.trials);
    OmegaTrials out;
    out.cae.assign(n, kNaN);
    out.cre.assign(n, kNaN);
    out.selected.assign(n, kNaN);
    std::vector<char> failed(n, 0);
    parallel_for(n, [&](size_t t) {
        Rng rng = trial_rng(spec.seed, point, spec.first_trial + t);
        TrialFrame tf = make_trial_frame(spec, cfg, pilot, gamma_db, rng, false);
        const double truth = omega_angle(tf.frame.truth.eta, cfg);
        try {
            EstimationReport r = estimate_link(tf.frame, cfg, pilot, receiver_options(spec, gamma_db, false));
            out.selected[t] = sq_wrap(r.angle_omega, truth);
            if (r.profile.Mbar() >= 1) out.cae[t] = sq_wrap(cae(r.Ybar, r.profile), truth);
            if (r.profile.Mbreve() >= 2) out.cre[t] = sq_wrap(cre_search(r.Ybar, r.profile).angle, truth);
        } catch (const Error&) {
            // A trial that cannot be estimated counts as the worst wrapped error.
            failed[t] = 1;
            out.selected[t] = out.cae[t] = out.cre[t] = kPi * kPi;
        }
    }, spec.threads);
    for (char f : failed) out.failures += f;
    return out;
}

Table run_mse_omega(const SweepSpec& spec, const ValidatedConfig& cfg) {
    const std::vector<int> pilot = pilot_sequence(spec, cfg);
    const KappaProfile prof = kappa_profile(pilot);
    Table t;
    t.columns = {"gamma_db", "mse_cae", "mse_cre", "mse_selected", "mselb_cae", "mselb_cre", "failures"};
    const bool filter = spec.abnormal_factor && spec.mode == ChannelMode::Rician;
    if (filter) {
        t.columns.insert(t.columns.end(), {"mse_cae_filtered", "mse_cre_filtered", "mse_selected_filtered", "abnormal"});
    }
    for (size_t p = 0; p < spec.grid.size(); ++p) {
        const double g = spec.grid[p];
        const double gamma = std::pow(10.0, g / 10.0);
        OmegaTrials tr = omega_trials(spec, cfg, p, g);
        const double lb_cae = prof.Mbar() >= 1 ? mselb_cae(prof.Mbar(), cfg.L(), gamma) : kNaN;
        const double lb_cre = prof.Mbreve() >= 2 ? mselb_cre(prof.breve_magnitudes(), cfg.L(), gamma) : kNaN;
        std::vector<double> row{g, mean_of(tr.cae), mean_of(tr.cre), mean_of(tr.selected), lb_cae, lb_cre,
                                static_cast<double>(tr.failures)};
        if (filter) {
            SweepSpec los = spec;
            los.mode = ChannelMode::LoS;
            OmegaTrials ref = omega_trials(los, cfg, p, g);
            int abnormal = 0;
            auto filtered = [&](const std::vector<double>& e, const std::vector<double>& r, bool count) {
                double lim = -1.0;
                for (double v : r)
                    if (!std::isnan(v)) lim = std::max(lim, v);
                lim *= *spec.abnormal_factor;
                std::vector<double> keep;
                for (double v : e) {
                    if (std::isnan(v)) return kNaN;
                    if (v > lim) {
                        if (count) ++abnormal;
                        continue;
                    }
                    keep.push_back(v);
                }
                return mean_of(keep);
            };
            row.push_back(filtered(tr.cae, ref.cae, false));
            row.push_back(filtered(tr.cre, ref.cre, false));
            row.push_back(filtered(tr.selected, ref.selected, true));
            row.push_back(abnormal);
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

namespace {

struct ChannelTrial {
    double u_err2 = kNaN, u_err2_true = kNaN, u_abs = kNaN;
    Complex x{kNaN, kNaN}, x_true{kNaN, kNaN};
};

std::vector<ChannelTrial> channel_trials(const SweepSpec& spec, const ValidatedConfig& cfg, size_t point, double g) {
    if (spec.mode == ChannelMode::Rician) throw Error(Errc::InvalidConfig, "u and beta sweeps need a line-of-sight channel");
    const std::vector<int> pilot = pilot_sequence(spec, cfg);
    std::vector<ChannelTrial> out(static_cast<size_t>(spec.trials));
    parallel_for(out.size(), [&](size_t t) {
        Rng rng = trial_rng(spec.seed, point, spec.first_trial + t);
        TrialFrame tf = make_trial_frame(spec, cfg, pilot, g, rng, false);
        const ChannelConfig& truth = tf.frame.truth;
        const double u = cfg.M() * std::sin(truth.paths[0].phi_deg * kPi / 180.0) / 2.0;
        const Complex bt = static_cast<double>(cfg.L()) * truth.paths[0].beta;
        ChannelTrial c;
        try {
            EstimationReport r = estimate_link(tf.frame, cfg, pilot, receiver_options(spec, g, false));
            c.u_err2 = std::pow(r.channel->u_hat - u, 2);
            c.u_abs = std::abs(r.channel->u_hat - u);
            c.x = r.channel->beta_tilde_hat * std::conj(bt) / std::norm(bt);
            CVec Z = remove_timing(r.Ym, r.k_hat, omega_angle(truth.eta, cfg));
            ChannelEstimate ce = finalize(estimate_u(Z), Z);
            c.u_err2_true = std::pow(ce.u_hat - u, 2);
            c.x_true = ce.beta_tilde_hat * std::conj(bt) / std::norm(bt);
        } catch (const Error&) {
            c.u_err2 = c.u_err2_true = std::pow(cfg.M() / 2.0, 2);
            c.u_abs = cfg.M() / 2.0;
            c.x = c.x_true = 0.0;
        }
        out[t] = c;
    }, spec.threads);
    return out;
}

}  // namespace

Table run_mse_u(const SweepSpec& spec, const ValidatedConfig& cfg) {
    Table t;
    t.columns = {"gamma_db", "mse_u", "mse_u_true_omega", "mean_abs_u_err"};
    for (size_t p = 0; p < spec.grid.size(); ++p) {
        auto tr = channel_trials(spec, cfg, p, spec.grid[p]);
        std::vector<double> a, b, c;
        for (const auto& x : tr) {
            a.push_back(x.u_err2);
            b.push_back(x.u_err2_true);
            c.push_back(x.u_abs);
        }
        t.rows.push_back({spec.grid[p], mean_of(a), mean_of(b), mean_of(c)});
    }
    return t;
}

Table run_mse_beta(const SweepSpec& spec, const ValidatedConfig& cfg) {
    Table t;
    t.columns = {"gamma_db", "mse_beta", "mean_abs_beta", "abs_mean_beta", "mse_beta_true_omega"};
    for (size_t p = 0; p < spec.grid.size(); ++p) {
        auto tr = channel_trials(spec, cfg, p, spec.grid[p]);
        std::vector<double> sq, ab, re, im, sq_true;
        for (const auto& x : tr) {
            sq.push_back(std::norm(x.x - 1.0));
            ab.push_back(std::abs(x.x - 1.0));
            re.push_back(x.x.real());
            im.push_back(x.x.imag());
            sq_true.push_back(std::norm(x.x_true - 1.0));
        }
        const double bias = std::abs(Complex{mean_of(re), mean_of(im)} - 1.0);
        t.rows.push_back({spec.grid[p], mean_of(sq), mean_of(ab), bias, mean_of(sq_true)});
    }
    return t;
}

double ebn0_to_gamma_db(double ebn0_db, const ValidatedConfig& cfg, int bits_per_hop) {
    const double bt = cfg.B() * cfg.T();
    return ebn0_db + 10.0 * std::log10(bits_per_hop / (cfg.L() * bt));
}

namespace {

struct LinkTrial {
    double sym = 0, err = 0, err_ideal = 0, bits = 0, bit_err = 0, bit_err_ideal = 0, good = 0, good_ideal = 0;
};

std::vector<LinkTrial> link_trials(const SweepSpec& spec, const ValidatedConfig& cfg, size_t point, double data_gamma_db) {
    const std::vector<int> pilot = pilot_sequence(spec, cfg);
    const bool probe = spec.mode == ChannelMode::Rician;
    const FhcsCodebook book(cfg.M(), cfg.K());
    std::vector<LinkTrial> out(static_cast<size_t>(spec.trials));
    parallel_for(out.size(), [&](size_t t) {
        Rng rng = trial_rng(spec.seed, point, spec.first_trial + t);
        TrialFrame tf = make_trial_frame(spec, cfg, pilot, std::numeric_limits<double>::infinity(), rng, true);
        const double b0 = std::abs(tf.frame.truth.paths[0].beta);
        SampledFrame est = tf.frame;
        SampledFrame data = tf.frame;
        if (!spec.noiseless) {
            add_noise(est, snr_to_noise(spec.pilot_gamma_db, b0), rng);
            add_noise(data, snr_to_noise(data_gamma_db, b0), rng);
        }
        LinkTrial lt;
        auto score = [&](const LinkState& ls, double& err, double& bit_err, double& good) {
            DemodResult d = demod_pfhcs(data, cfg, ls, book, spec.mod, probe);
            SymbolCount sc = count_symbol_errors(tf.sched, d, spec.mod);
            lt.sym = sc.symbols;
            err = sc.errors;
            double be = 0;
            for (size_t i = 0; i < tf.bits.size(); ++i) be += (i < d.bits.size() && d.bits[i] == tf.bits[i]) ? 0 : 1;
            bit_err = be;
            good = good_bits(tf.sched, d, spec.mod, book.bits());
        };
        lt.bits = static_cast<double>(tf.bits.size());
        score(ideal_link_state(data, cfg, probe), lt.err_ideal, lt.bit_err_ideal, lt.good_ideal);
        try {
            EstimationReport r = estimate_link(est, cfg, pilot, receiver_options(spec, spec.pilot_gamma_db, true));
            score(link_state(r), lt.err, lt.bit_err, lt.good);
        } catch (const Error&) {
            lt.err = lt.sym;
            lt.bit_err = lt.bits / 2.0;
            lt.good = 0.0;
        }
        out[t] = lt;
    }, spec.threads);
    return out;
}

}  // namespace

Table run_ser(const SweepSpec& spec, const ValidatedConfig& cfg) {
    Table t;
    t.columns = {"ebn0_db", "gamma_db", "ser", "ser_ideal", "ber", "ber_ideal", "symbols"};
    const int E = bits_per_hop(cfg, spec.mod);
    for (size_t p = 0; p < spec.grid.size(); ++p) {
        const double g = ebn0_to_gamma_db(spec.grid[p], cfg, E);
        auto tr = link_trials(spec, cfg, p, g);
        std::vector<double> sym, err, erri, bits, be, bei;
        for (const auto& x : tr) {
            sym.push_back(x.sym);
            err.push_back(x.err);
            erri.push_back(x.err_ideal);
            bits.push_back(x.bits);
            be.push_back(x.bit_err);
            bei.push_back(x.bit_err_ideal);
        }
        const double S = dsp::pairwise_sum(sym), B = dsp::pairwise_sum(bits);
        t.rows.push_back({spec.grid[p], g, dsp::pairwise_sum(err) / S, dsp::pairwise_sum(erri) / S,
                          dsp::pairwise_sum(be) / B, dsp::pairwise_sum(bei) / B, S});
    }
    return t;
}

Table run_rate(const SweepSpec& spec, const ValidatedConfig& cfg) {
    Table t;
    t.columns = {"gamma_db", "rate_bps", "rate_ideal_bps", "gross_bps"};
    const bool probe = spec.mode == ChannelMode::Rician;
    const double elapsed = static_cast<double>(data_hops(cfg, probe).size()) * cfg.T();
    for (size_t p = 0; p < spec.grid.size(); ++p) {
        auto tr = link_trials(spec, cfg, p, spec.grid[p]);
        std::vector<double> good, goodi;
        for (const auto& x : tr) {
            good.push_back(x.good / elapsed);
            goodi.push_back(x.good_ideal / elapsed);
        }
        t.rows.push_back({spec.grid[p], mean_of(good), mean_of(goodi), gross_rate(cfg, spec.mod)});
    }
    return t;
}

std::optional<double> find_crossover(const std::vector<double>& grid, const std::vector<double>& a,
                                     const std::vector<double>& b) {
    auto diff = [&](size_t i) { return std::log10(a[i]) - std::log10(b[i]); };
    for (size_t i = 1; i < grid.size(); ++i) {
        const double d0 = diff(i - 1), d1 = diff(i);
        if (!std::isfinite(d0) || !std::isfinite(d1)) continue;
        if (d0 == 0.0) return grid[i - 1];
        if ((d0 < 0) != (d1 < 0) || d1 == 0.0) return grid[i - 1] + (grid[i] - grid[i - 1]) * d0 / (d0 - d1);
    }
    return std::nullopt;
}

}  // namespace fhdfrc
