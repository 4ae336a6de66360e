// SPDX-License-Identifier: Apache-2.0
#include "fhdfrc/config_file.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace fhdfrc {
namespace {

using nlohmann::json;

void reject_unknown(const json& j, const char* section, const std::set<std::string>& known) {
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!known.count(it.key()))
            throw Error(Errc::InvalidConfig, std::string("unknown key '") + it.key() + "' in section '" + section + "'");
}

template <typename T>
void get(const json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

FileConfig parse_config(const std::string& text) {
    FileConfig fc;
    json root;
    try {
        root = json::parse(text);
    } catch (const json::exception& e) {
        throw Error(Errc::InvalidConfig, std::string("config is not valid JSON: ") + e.what());
    }
    if (!root.is_object()) throw Error(Errc::InvalidConfig, "config root must be an object");
    reject_unknown(root, "root", {"radar", "channel", "sweep"});
    try {
        if (root.contains("radar")) {
            const json& r = root["radar"];
            reject_unknown(r, "radar", {"M", "K", "B", "f_L", "T", "H", "fs", "N"});
            get(r, "M", fc.radar.M);
            get(r, "K", fc.radar.K);
            get(r, "B", fc.radar.B);
            get(r, "f_L", fc.radar.f_L);
            get(r, "T", fc.radar.T);
            get(r, "H", fc.radar.H);
            if (r.contains("fs"))
                get(r, "fs", fc.radar.fs);
            else
                fc.radar.fs = 2.0 * fc.radar.B;
            get(r, "N", fc.radar.N);
        }
        SweepSpec& s = fc.sweep;
        if (root.contains("channel")) {
            const json& c = root["channel"];
            reject_unknown(c, "channel", {"mode", "eta_lo", "eta_hi", "phi0_deg", "nlos", "nlos_power_db",
                                          "interferer_db", "guard", "noiseless"});
            if (c.contains("mode")) s.mode = channel_mode_from_string(c["mode"].get<std::string>());
            get(c, "eta_lo", s.eta_lo);
            get(c, "eta_hi", s.eta_hi);
            get(c, "phi0_deg", s.phi0_deg);
            get(c, "nlos", s.nlos);
            get(c, "nlos_power_db", s.nlos_power_db);
            get(c, "interferer_db", s.interferer_db);
            get(c, "guard", s.guard);
            get(c, "noiseless", s.noiseless);
        }
        if (root.contains("sweep")) {
            const json& w = root["sweep"];
            reject_unknown(w, "sweep", {"grid", "trials", "seq", "custom_seq", "scheme", "J", "seed", "gamma_T_db",
                                        "pilot_gamma_db", "abnormal_factor", "cae_subset", "threads"});
            get(w, "grid", s.grid);
            get(w, "trials", s.trials);
            if (w.contains("seq")) s.seq = seq_choice_from_string(w["seq"].get<std::string>());
            get(w, "custom_seq", s.custom_seq);
            if (w.contains("scheme")) s.mod.scheme = scheme_from_string(w["scheme"].get<std::string>());
            get(w, "J", s.mod.J);
            get(w, "seed", s.seed);
            get(w, "gamma_T_db", s.gamma_T_db);
            get(w, "pilot_gamma_db", s.pilot_gamma_db);
            if (w.contains("abnormal_factor")) s.abnormal_factor = w["abnormal_factor"].get<double>();
            get(w, "cae_subset", s.cae_subset);
            get(w, "threads", s.threads);
        }
    } catch (const json::exception& e) {
        throw Error(Errc::InvalidConfig, std::string("bad config value: ") + e.what());
    }
    if (fc.sweep.trials < 1) throw Error(Errc::InvalidConfig, "trials must be at least 1");
    for (size_t i = 1; i < fc.sweep.grid.size(); ++i)
        if (!(fc.sweep.grid[i] > fc.sweep.grid[i - 1])) throw Error(Errc::InvalidConfig, "sweep grid must increase");
    return fc;
}

FileConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::Io, "cannot open config '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

}  // namespace fhdfrc
