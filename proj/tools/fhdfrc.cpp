// SPDX-License-Identifier: Apache-2.0
// Command-line front end: sequence design, ambiguity cuts, Monte Carlo sweeps,
// radar detection and file-based link loopback.
#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "fhdfrc/config_file.hpp"
#include "fhdfrc/dsp.hpp"
#include "fhdfrc/frame_io.hpp"
#include "fhdfrc/harness.hpp"
#include "fhdfrc/radar.hpp"
#include "fhdfrc/receiver.hpp"

using namespace fhdfrc;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;

int exit_code_for(Errc c) {
    switch (c) {
        case Errc::InvalidConfig:
        case Errc::NonIntegerOrthogonality:
        case Errc::TooManyAntennas:
        case Errc::OddL:
        case Errc::TooShort:
        case Errc::FrameTooShort:
        case Errc::InvalidSchedule:
        case Errc::NoCoprimePair:
        case Errc::NotCoprime:
        case Errc::TooFew:
        case Errc::Io:
            return kExitConfig;
        default:
            return kExitNumeric;
    }
}

struct Globals {
    std::string config;
    std::uint64_t seed = 1;
    int trials = 0;
    std::string out;
    int M = 0, K = 0, H = 0, N = 0;
    double T = 0.0;
};

// Expand "a:step:b" or "a,b,c" into a grid.
std::vector<double> parse_grid(const std::string& s) {
    std::vector<double> g;
    if (s.find(':') != std::string::npos) {
        std::stringstream ss(s);
        std::string a, st, b;
        std::getline(ss, a, ':');
        std::getline(ss, st, ':');
        std::getline(ss, b, ':');
        const double lo = std::stod(a), step = std::stod(st), hi = std::stod(b);
        if (!(step > 0.0)) throw Error(Errc::InvalidConfig, "grid step must be positive");
        for (int i = 0; lo + i * step <= hi + 1e-9; ++i) g.push_back(lo + i * step);
        return g;
    }
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) g.push_back(std::stod(item));
    return g;
}

std::vector<int> parse_ints(const std::string& s) {
    std::vector<int> v;
    std::string t;
    for (char c : s)
        if (c != '[' && c != ']' && c != ' ') t.push_back(c);
    std::stringstream ss(t);
    std::string item;
    while (std::getline(ss, item, ',')) v.push_back(std::stoi(item));
    return v;
}

std::string join(const std::vector<int>& v) {
    std::string s = "[";
    for (size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s + "]";
}

FileConfig base_config(const Globals& g) {
    FileConfig fc = g.config.empty() ? FileConfig{} : load_config(g.config);
    if (g.M) fc.radar.M = g.M;
    if (g.K) fc.radar.K = g.K;
    if (g.H) fc.radar.H = g.H;
    if (g.N) fc.radar.N = g.N;
    if (g.T > 0.0) fc.radar.T = g.T;
    if (g.trials > 0) fc.sweep.trials = g.trials;
    fc.sweep.seed = g.seed;
    return fc;
}

// Writes to --out when given, stdout otherwise.
class Output {
public:
    explicit Output(const std::string& path) {
        if (!path.empty()) {
            file_ = std::make_unique<std::ofstream>(path);
            if (!*file_) throw Error(Errc::Io, "cannot open '" + path + "' for writing");
        }
    }
    std::ostream& os() { return file_ ? *file_ : std::cout; }

private:
    std::unique_ptr<std::ofstream> file_;
};

struct SweepFlags {
    std::string grid;
    std::string mode;
    std::string seq;
    std::string seq_values;
    std::string scheme;
    int J = 0;
    double abnormal = 0.0;
    std::string cae_subset;
    int threads = -1;
    double gamma_T = -1e9;
    bool noiseless = false;
    bool no_guard = false;
};

void add_sweep_flags(CLI::App* sub, SweepFlags& f) {
    sub->add_option("--grid", f.grid, "SNR grid in dB: 'lo:step:hi' or a comma list");
    sub->add_option("--mode", f.mode, "los | rician | los-intf");
    sub->add_option("--seq", f.seq, "cae | cre | suboptimal | custom");
    sub->add_option("--seq-values", f.seq_values, "explicit pilot sequence, e.g. 0,1,2,3,4,5,6,7,17,19");
    sub->add_option("--scheme", f.scheme, "bpsk | fhcs | pfhcs");
    sub->add_option("--J", f.J, "PSK bits per antenna");
    sub->add_option("--abnormal", f.abnormal, "drop trials whose error exceeds this multiple of the worst LoS error");
    sub->add_option("--cae-subset", f.cae_subset, "second-difference indices CAE may use");
    sub->add_option("--threads", f.threads, "worker threads (0: all cores)");
    sub->add_option("--gamma-T", f.gamma_T, "CAE/CRE switch SNR in dB");
    sub->add_flag("--noiseless", f.noiseless, "disable AWGN");
    sub->add_flag("--no-guard", f.no_guard, "keep antennas with faded composites");
}

SweepSpec apply_sweep_flags(SweepSpec s, const SweepFlags& f) {
    if (!f.grid.empty()) s.grid = parse_grid(f.grid);
    if (!f.mode.empty()) s.mode = channel_mode_from_string(f.mode);
    if (!f.seq.empty()) s.seq = seq_choice_from_string(f.seq);
    if (!f.seq_values.empty()) {
        s.custom_seq = parse_ints(f.seq_values);
        if (f.seq.empty()) s.seq = SeqChoice::Custom;
    }
    if (!f.scheme.empty()) s.mod.scheme = scheme_from_string(f.scheme);
    if (f.J > 0) s.mod.J = f.J;
    if (f.abnormal > 0.0) s.abnormal_factor = f.abnormal;
    if (!f.cae_subset.empty()) s.cae_subset = parse_ints(f.cae_subset);
    if (f.threads >= 0) s.threads = f.threads;
    if (f.gamma_T > -1e8) s.gamma_T_db = f.gamma_T;
    if (f.noiseless) s.noiseless = true;
    if (f.no_guard) s.guard = false;
    return s;
}

TargetScene default_scene(Rng& rng) {
    TargetScene sc;
    const double r[3] = {1000.0, 1500.0, 3000.0};
    const double a[3] = {30.0, 60.0, -60.0};
    for (int i = 0; i < 3; ++i) sc.targets.push_back({r[i], a[i], dsp::expj(uniform(rng, 0.0, kTwoPi))});
    return sc;
}

TargetScene load_scene(const std::string& path, Rng& rng) {
    if (path.empty()) return default_scene(rng);
    std::ifstream in(path);
    if (!in) throw Error(Errc::Io, "cannot open scene '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
        TargetScene sc;
        for (const auto& t : j.at("targets")) {
            Target tg;
            tg.range_m = t.at("range_m").get<double>();
            tg.angle_deg = t.at("angle_deg").get<double>();
            tg.alpha = t.contains("alpha_re") ? Complex{t["alpha_re"].get<double>(), t.value("alpha_im", 0.0)}
                                              : dsp::expj(uniform(rng, 0.0, kTwoPi));
            sc.targets.push_back(tg);
        }
        sc.window = j.value("window", 0.0);
        sc.noise_var = j.value("noise_var", 0.0);
        return sc;
    } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::InvalidConfig, std::string("bad scene file: ") + e.what());
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"FH-MIMO DFRC link simulator"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    app.add_option("--config", g.config, "JSON config file");
    app.add_option("--seed", g.seed, "master seed");
    app.add_option("--trials", g.trials, "Monte Carlo trials per grid point");
    app.add_option("--out", g.out, "output file (default: stdout)");
    app.add_option("--M", g.M, "transmit antennas");
    app.add_option("--K", g.K, "sub-bands");
    app.add_option("--H", g.H, "hops per pulse");
    app.add_option("--N", g.N, "radar receive antennas");
    app.add_option("--T", g.T, "hop duration in seconds");

    // design-seq
    auto* design = app.add_subcommand("design-seq", "design a hopping sequence and report its bounds");
    std::string design_mode = "suboptimal";
    std::string design_values;
    double design_gamma_db = 30.0;
    design->add_option("--mode", design_mode, "cae | cre | suboptimal")->check(CLI::IsMember({"cae", "cre", "suboptimal"}));
    design->add_option("--seq", design_values, "sequence to evaluate (required for --mode cre)");
    design->add_option("--gamma-db", design_gamma_db, "reference SNR for the bounds");

    // ambiguity
    auto* amb = app.add_subcommand("ambiguity", "range ambiguity function cut as CSV");
    bool amb_ordered = false, amb_unordered = false, amb_frame = false;
    std::int64_t psk_seed = -1;
    int amb_points = 4096;
    double amb_span = 2.0;
    auto* o1 = amb->add_flag("--ordered", amb_ordered, "ascending per-hop ordering");
    auto* o2 = amb->add_flag("--unordered", amb_unordered, "conventional random ordering (default)");
    o1->excludes(o2);
    amb->add_option("--psk-seed", psk_seed, "embed random BPSK drawn from this seed (implies --ordered)");
    amb->add_flag("--frame", amb_frame, "replace the first two hops by the sub-optimal pilot");
    amb->add_option("--points", amb_points, "tau grid points");
    amb->add_option("--span", amb_span, "tau grid half-width in hops");

    // sweeps
    SweepFlags sf;
    auto* s_omega = app.add_subcommand("simulate-mse-omega", "timing phase MSE against SNR");
    auto* s_u = app.add_subcommand("simulate-mse-u", "u MSE against SNR");
    auto* s_beta = app.add_subcommand("simulate-mse-beta", "normalised beta MSE against SNR");
    auto* s_ser = app.add_subcommand("simulate-ser", "SER against Eb/N0 with frozen estimates");
    auto* s_rate = app.add_subcommand("simulate-rate", "achievable rate against SNR");
    for (auto* s : {s_omega, s_u, s_beta, s_ser, s_rate}) add_sweep_flags(s, sf);

    // radar-detect
    auto* radar = app.add_subcommand("radar-detect", "range-angle map and CA-CFAR detections");
    std::string scene_path, cuts_path;
    bool radar_unordered = false, radar_psk = false;
    double pfa = 1e-6;
    radar->add_option("--scene", scene_path, "scene JSON (default: 1/1.5/3 km at 30/60/-60 deg)");
    radar->add_flag("--unordered", radar_unordered, "use the conventional waveform");
    radar->add_flag("--psk", radar_psk, "embed random BPSK");
    radar->add_option("--pfa", pfa, "CFAR false-alarm probability");
    radar->add_option("--cuts", cuts_path, "write range and angle cuts through each detection here");

    // tx / rx
    auto* tx = app.add_subcommand("tx", "modulate a byte file into a received frame file");
    std::string bits_file, frame_file;
    double tx_eta = 0.08e-6, tx_gamma = 1e9, tx_phi = 20.0;
    std::string link_scheme = "pfhcs";
    tx->add_option("--bits-file", bits_file, "payload bytes")->required();
    tx->add_option("--frame-file", frame_file, "frame output")->required();
    tx->add_option("--eta", tx_eta, "timing offset in seconds");
    tx->add_option("--gamma-db", tx_gamma, "SNR in dB (default: noise-free)");
    tx->add_option("--phi", tx_phi, "LoS angle of departure in degrees");
    tx->add_option("--scheme", link_scheme, "bpsk | fhcs | pfhcs");
    auto* rx = app.add_subcommand("rx", "demodulate a frame file into bytes");
    std::string rx_frame, rx_bits;
    rx->add_option("--frame-file", rx_frame, "frame input")->required();
    rx->add_option("--bits-file", rx_bits, "decoded payload output (default: --out or stdout)");
    rx->add_option("--scheme", link_scheme, "bpsk | fhcs | pfhcs");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : kExitConfig;
    }

    try {
        FileConfig fc = base_config(g);
        const ValidatedConfig cfg = validate(fc.radar);
        Output out(g.out);

        if (*design) {
            std::vector<int> k;
            if (!design_values.empty())
                k = parse_ints(design_values);
            else if (design_mode == "cae")
                k = design_cae(cfg.M());
            else if (design_mode == "suboptimal")
                k = design_suboptimal(cfg.M(), cfg.K());
            else
                throw Error(Errc::InvalidConfig, "--mode cre evaluates a given sequence; pass --seq");
            check_sequence(k, cfg.K());
            const KappaProfile p = kappa_profile(k);
            const double gamma = std::pow(10.0, design_gamma_db / 10.0);
            const double lb_cae = p.Mbar() >= 1 ? mselb_cae(p.Mbar(), cfg.L(), gamma) : std::nan("");
            const double lb_cre = p.Mbreve() >= 2 ? mselb_cre(p.breve_magnitudes(), cfg.L(), gamma) : std::nan("");
            std::vector<int> breve;
            for (int m : p.set_Mbreve) breve.push_back(p.kappa[static_cast<size_t>(m)]);
            std::ostream& os = out.os();
            os << "sequence: " << join(k) << "\n"
               << "kappa:    " << join(p.kappa) << "\n"
               << "Mbar:     " << p.Mbar() << "\n"
               << "Mbreve:   " << p.Mbreve() << " " << join(breve) << "\n"
               << "mselb_cae(L=" << cfg.L() << ", gamma=" << design_gamma_db << " dB): " << format_double(lb_cae) << "\n"
               << "mselb_cre(L=" << cfg.L() << ", gamma=" << design_gamma_db << " dB): " << format_double(lb_cre) << "\n\n";
            os << "m,k,kappa\n";
            for (int m = 0; m < static_cast<int>(k.size()); ++m)
                os << m << "," << k[static_cast<size_t>(m)] << ","
                   << (m < static_cast<int>(p.kappa.size()) ? std::to_string(p.kappa[static_cast<size_t>(m)]) : "") << "\n";
            return 0;
        }

        if (*amb) {
            Rng rng = make_rng(g.seed, 0);
            HopSchedule conv = random_schedule(cfg, rng);
            if (amb_frame) conv = frame_schedule(conv, design_suboptimal(cfg.M(), cfg.K()), false, cfg);
            HopSchedule s = conv;
            const bool psk = psk_seed >= 0;
            if (amb_ordered || psk) s = order_schedule(conv);
            if (psk) {
                Rng prng = make_rng(static_cast<std::uint64_t>(psk_seed), 1);
                std::bernoulli_distribution coin(0.5);
                for (int h = amb_frame ? 2 : 0; h < s.H; ++h)
                    for (int m = 0; m < s.M; ++m) s.mod(h, m) = coin(prng) ? -1.0 : 1.0;
            }
            const std::vector<double> tau = tau_grid(cfg, amb_points, amb_span);
            const std::vector<double> R = ambiguity_function(s, cfg, tau, psk);
            const std::vector<double> zero{0.0};
            const double ref = ambiguity_function(conv, cfg, zero)[0];
            Table t;
            t.columns = {"tau_s", "R", "R_db"};
            for (size_t i = 0; i < tau.size(); ++i)
                t.rows.push_back({tau[i], R[i], 20.0 * std::log10(std::max(R[i], 1e-300) / ref)});
            write_csv(out.os(), t);
            return 0;
        }

        for (auto* s : {s_omega, s_u, s_beta, s_ser, s_rate}) {
            if (!*s) continue;
            SweepSpec spec = apply_sweep_flags(fc.sweep, sf);
            Table t = s == s_omega ? run_mse_omega(spec, cfg)
                    : s == s_u     ? run_mse_u(spec, cfg)
                    : s == s_beta  ? run_mse_beta(spec, cfg)
                    : s == s_ser   ? run_ser(spec, cfg)
                                   : run_rate(spec, cfg);
            write_csv(out.os(), t);
            return 0;
        }

        if (*radar) {
            Rng rng = make_rng(g.seed, 0);
            TargetScene scene = load_scene(scene_path, rng);
            HopSchedule s = random_schedule(cfg, rng);
            if (!radar_unordered) s = order_schedule(s);
            if (radar_psk) {
                std::bernoulli_distribution coin(0.5);
                for (auto& f : s.F) f = coin(rng) ? -1.0 : 1.0;
            }
            auto echo = synth_echo(s, cfg, scene, rng);
            auto map = angle_transform(matched_filter_bank(echo, s, cfg));
            CfarOptions co;
            co.pfa = pfa;
            auto det = ca_cfar(map, co);
            Table t;
            t.columns = {"lag", "tau_s", "range_m", "u", "angle_deg", "power"};
            for (const Detection& d : det) {
                const double tau = d.lag * cfg.Ts();
                const double u = map.u_of(d.u_index);
                t.rows.push_back({static_cast<double>(d.lag), tau, tau * kSpeedOfLight / 2.0, u,
                                  std::asin(std::clamp(u / kPi, -1.0, 1.0)) * 180.0 / kPi, d.power});
            }
            write_csv(out.os(), t);
            if (!cuts_path.empty()) {
                std::ofstream cuts(cuts_path);
                if (!cuts) throw Error(Errc::Io, "cannot open '" + cuts_path + "'");
                cuts << "detection,axis,index,value,power\n";
                for (size_t i = 0; i < det.size(); ++i) {
                    for (int lag = 0; lag < map.n_lag; ++lag)
                        cuts << i << ",range," << lag << "," << format_double(lag * cfg.Ts()) << ","
                             << format_double(map.at(lag, det[i].u_index)) << "\n";
                    for (int ui = 0; ui < map.n_u; ++ui)
                        cuts << i << ",angle," << ui << "," << format_double(map.u_of(ui)) << ","
                             << format_double(map.at(det[i].lag, ui)) << "\n";
                }
            }
            return 0;
        }

        const Modulation mod{scheme_from_string(link_scheme), fc.sweep.mod.J};
        const std::vector<int> pilot = design_suboptimal(cfg.M(), cfg.K());

        if (*tx) {
            std::ifstream in(bits_file, std::ios::binary);
            if (!in) throw Error(Errc::Io, "cannot open '" + bits_file + "'");
            std::stringstream ss;
            ss << in.rdbuf();
            Bits bits = bytes_to_bits(ss.str());
            const size_t cap = payload_bits(cfg, mod, false);
            if (bits.size() > cap) {
                std::cerr << "payload truncated to " << cap << " bits\n";
                bits.resize(cap);
            }
            Rng rng = make_rng(g.seed, 0);
            HopSchedule s = modulate(bits, cfg, mod, pilot, false, rng);
            ChannelConfig chan;
            chan.eta = tx_eta;
            chan.paths = {Path{dsp::expj(uniform(rng, 0.0, kTwoPi)), tx_phi}};
            chan.noise_var = tx_gamma < 1e8 ? snr_to_noise(tx_gamma) : 0.0;
            SampledFrame f = synth_rx(s, cfg, chan, rng);
            FrameFile ff{static_cast<std::uint32_t>(f.L), static_cast<std::uint32_t>(f.H), cfg.fs(), bits.size(), f.samples};
            write_frame(frame_file, ff);
            return 0;
        }

        if (*rx) {
            FrameFile ff = read_frame(rx_frame);
            if (static_cast<int>(ff.L) != cfg.L() || static_cast<int>(ff.H) != cfg.H())
                throw Error(Errc::InvalidConfig, "frame dimensions do not match the configuration");
            SampledFrame f;
            f.L = cfg.L();
            f.H = cfg.H();
            f.samples = ff.samples;
            EstimationReport r = estimate_link(f, cfg, pilot);
            DemodResult d = demod_pfhcs(f, cfg, link_state(r), FhcsCodebook(cfg.M(), cfg.K()), mod, false);
            Bits bits = d.bits;
            bits.resize(std::min<size_t>(bits.size(), ff.payload_bits));
            const std::string bytes = bits_to_bytes(bits);
            if (!rx_bits.empty()) {
                std::ofstream o(rx_bits, std::ios::binary);
                if (!o) throw Error(Errc::Io, "cannot open '" + rx_bits + "'");
                o << bytes;
            } else {
                out.os() << bytes;
            }
            std::cerr << "estimator=" << to_string(r.estimator) << " angle_omega=" << r.angle_omega
                      << " eta_hat=" << r.eta_hat << " erasures=" << d.erasures << "\n";
            return 0;
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    return 0;
}
