#pragma once

// Scenario files: flat sectioned key=value text describing one end-to-end
// run. Parsing is strict: unknown sections or keys are rejected with a
// nearest-match suggestion, and the mode decides which sections must be
// present.

#include <algorithm>
#include <cctype>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "uwb/channel.hpp"
#include "uwb/clipper.hpp"
#include "uwb/detection.hpp"
#include "uwb/dll.hpp"
#include "uwb/power_link.hpp"
#include "uwb/tank.hpp"

namespace uwb {

enum class ScenarioMode { wired_wired, wired_wireless, all_wireless };
enum class CaptureMode { synced, notch };
enum class DataPattern { prbs, zeros, ones };

inline const char* to_string(ScenarioMode m) {
    switch (m) {
        case ScenarioMode::wired_wired: return "wired_wired";
        case ScenarioMode::wired_wireless: return "wired_wireless";
        case ScenarioMode::all_wireless: return "all_wireless";
    }
    return "?";
}

struct Scenario {
    ScenarioMode mode = ScenarioMode::wired_wired;
    CaptureMode capture = CaptureMode::synced;
    double bit_rate = 230e6;
    std::size_t n_bits = 2048;
    std::size_t n_avg = 1;
    std::uint64_t seed = 1;
    double sample_rate = 80e9;
    int prbs_order = 15;
    std::uint32_t prbs_seed = 1;
    DataPattern data = DataPattern::prbs;
    double p_out_dbm = -11.0;  // radiated power the TX chain is scaled to
    double p_dc_mw = 3.7;      // reported DC draw for the efficiency stanza
    std::size_t welch_segment = 8192;

    TankParams tank;
    double phase_jitter = 0.0;  // rad RMS per carrier cycle; 0 = ideal tone
    ClipperConfig clipper;
    // TX output chain around the clipper
    double hp_corner = 1.0e9;
    double tx_out_lo = 3.7e9;   // antenna/matching response edges
    double tx_out_hi = 5.0e9;
    double spur_dbm = -999.0;   // 915 MHz synthesizer leakage; <= -200 = off

    bool dll_enabled = true;
    DllConfig dll;

    ChannelConfig channel;
    DetectionConfig detection;
    bool has_power_link = false;
    PowerLinkParams power_link;
    double i_load = 4e-3;
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

inline std::size_t edit_distance(const std::string& a, const std::string& b) {
    std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        cur[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

inline bool shares_long_substring(const std::string& a, const std::string& b, std::size_t n) {
    if (a.size() < n || b.size() < n) return false;
    for (std::size_t i = 0; i + n <= a.size(); ++i)
        if (b.find(a.substr(i, n)) != std::string::npos) return true;
    return false;
}

inline std::string suggest(const std::string& key, const std::vector<std::string>& valid) {
    std::string best;
    std::size_t best_d = 4;  // suggest only near matches
    for (const auto& v : valid) {
        std::size_t d = edit_distance(key, v);
        if (d >= best_d && shares_long_substring(key, v, 4)) d = best_d - 1;
        if (d < best_d) {
            best_d = d;
            best = v;
        }
    }
    return best;
}

}  // namespace detail

class ScenarioError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

namespace detail {

struct KeyHandler {
    std::string name;
    std::function<void(Scenario&, const std::string&)> apply;
};

inline double parse_num(const std::string& section, const std::string& key,
                        const std::string& value) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        while (pos < value.size() && std::isspace(static_cast<unsigned char>(value[pos]))) ++pos;
        if (pos != value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ScenarioError("[" + section + "] " + key + ": cannot parse number from '" + value +
                            "'");
    }
}

inline bool parse_bool(const std::string& section, const std::string& key,
                       const std::string& value) {
    if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
    if (value == "false" || value == "0" || value == "no" || value == "off") return false;
    throw ScenarioError("[" + section + "] " + key + ": expected a boolean, got '" + value + "'");
}

using SectionTable = std::map<std::string, std::vector<KeyHandler>>;

inline const SectionTable& scenario_keys() {
    static const SectionTable table = [] {
        SectionTable t;
        auto add = [&t](const std::string& sec, const std::string& key,
                        std::function<void(Scenario&, const std::string&, const std::string&,
                                           const std::string&)> fn) {
            t[sec].push_back({key, [sec, key, fn](Scenario& s, const std::string& v) {
                                  fn(s, sec, key, v);
                              }});
        };
        auto addn = [&add](const std::string& sec, const std::string& key,
                           std::function<void(Scenario&, double)> set) {
            add(sec, key,
                [set](Scenario& s, const std::string& sc, const std::string& k,
                      const std::string& v) { set(s, parse_num(sc, k, v)); });
        };

        add("scenario", "mode",
            [](Scenario& s, const std::string&, const std::string&, const std::string& v) {
                if (v == "wired_wired") s.mode = ScenarioMode::wired_wired;
                else if (v == "wired_wireless") s.mode = ScenarioMode::wired_wireless;
                else if (v == "all_wireless") s.mode = ScenarioMode::all_wireless;
                else
                    throw ScenarioError("[scenario] mode: expected wired_wired, wired_wireless or "
                                        "all_wireless, got '" + v + "'");
            });
        add("scenario", "data",
            [](Scenario& s, const std::string&, const std::string&, const std::string& v) {
                if (v == "prbs") s.data = DataPattern::prbs;
                else if (v == "zeros") s.data = DataPattern::zeros;
                else if (v == "ones") s.data = DataPattern::ones;
                else throw ScenarioError("[scenario] data: expected prbs, zeros or ones");
            });
        add("scenario", "capture",
            [](Scenario& s, const std::string&, const std::string&, const std::string& v) {
                if (v == "synced") s.capture = CaptureMode::synced;
                else if (v == "notch") s.capture = CaptureMode::notch;
                else throw ScenarioError("[scenario] capture: expected synced or notch");
            });
        addn("scenario", "bit_rate", [](Scenario& s, double v) { s.bit_rate = v; });
        addn("scenario", "n_bits", [](Scenario& s, double v) { s.n_bits = static_cast<std::size_t>(v); });
        addn("scenario", "n_avg", [](Scenario& s, double v) { s.n_avg = static_cast<std::size_t>(v); });
        addn("scenario", "seed", [](Scenario& s, double v) { s.seed = static_cast<std::uint64_t>(v); });
        addn("scenario", "sample_rate", [](Scenario& s, double v) { s.sample_rate = v; });
        addn("scenario", "prbs_order", [](Scenario& s, double v) { s.prbs_order = static_cast<int>(v); });
        addn("scenario", "prbs_seed", [](Scenario& s, double v) { s.prbs_seed = static_cast<std::uint32_t>(v); });
        addn("scenario", "p_out_dbm", [](Scenario& s, double v) { s.p_out_dbm = v; });
        addn("scenario", "p_dc_mw", [](Scenario& s, double v) { s.p_dc_mw = v; });
        addn("scenario", "welch_segment", [](Scenario& s, double v) { s.welch_segment = static_cast<std::size_t>(v); });

        addn("tank", "l", [](Scenario& s, double v) { s.tank.inductance = v; });
        addn("tank", "c", [](Scenario& s, double v) { s.tank.capacitance = v; });
        addn("tank", "r_loss", [](Scenario& s, double v) { s.tank.r_loss = v; });
        addn("tank", "r_antenna", [](Scenario& s, double v) { s.tank.r_antenna = v; });
        addn("tank", "drive_amp", [](Scenario& s, double v) { s.tank.drive_amp = v; });
        addn("tank", "drive_freq", [](Scenario& s, double v) { s.tank.drive_freq = v; });
        addn("tank", "phase_jitter", [](Scenario& s, double v) { s.phase_jitter = v; });

        addn("clipper", "v_max", [](Scenario& s, double v) { s.clipper.v_max = v; });
        addn("clipper", "v_mid", [](Scenario& s, double v) { s.clipper.v_mid = v; });
        addn("clipper", "dac_bits", [](Scenario& s, double v) { s.clipper.dac_bits = static_cast<int>(v); });
        addn("clipper", "dac_fullscale", [](Scenario& s, double v) { s.clipper.dac_fullscale = v; });
        addn("clipper", "knee_width", [](Scenario& s, double v) { s.clipper.knee_width = v; });
        addn("clipper", "hp_corner", [](Scenario& s, double v) { s.hp_corner = v; });
        addn("clipper", "tx_out_lo", [](Scenario& s, double v) { s.tx_out_lo = v; });
        addn("clipper", "tx_out_hi", [](Scenario& s, double v) { s.tx_out_hi = v; });
        addn("clipper", "spur_dbm", [](Scenario& s, double v) { s.spur_dbm = v; });

        add("dll", "enabled",
            [](Scenario& s, const std::string& sc, const std::string& k, const std::string& v) {
                s.dll_enabled = parse_bool(sc, k, v);
            });
        addn("dll", "loop_gain", [](Scenario& s, double v) { s.dll.loop_gain = v; });
        addn("dll", "loop_tau", [](Scenario& s, double v) { s.dll.loop_tau = v; });
        addn("dll", "rc_tau", [](Scenario& s, double v) { s.dll.rc_tau = v; });
        addn("dll", "delay_min", [](Scenario& s, double v) { s.dll.delay_min = v; });
        addn("dll", "delay_max", [](Scenario& s, double v) { s.dll.delay_max = v; });
        addn("dll", "step_dt", [](Scenario& s, double v) { s.dll.step_dt = v; });

        addn("channel", "distance", [](Scenario& s, double v) { s.channel.distance = v; });
        addn("channel", "center_freq", [](Scenario& s, double v) { s.channel.center_freq = v; });
        addn("channel", "tx_band_lo", [](Scenario& s, double v) { s.channel.tx_band_lo = v; });
        addn("channel", "tx_band_hi", [](Scenario& s, double v) { s.channel.tx_band_hi = v; });
        addn("channel", "rx_band_lo", [](Scenario& s, double v) { s.channel.rx_band_lo = v; });
        addn("channel", "rx_band_hi", [](Scenario& s, double v) { s.channel.rx_band_hi = v; });
        addn("channel", "gain_cal", [](Scenario& s, double v) { s.channel.gain_cal_db = v; });
        addn("channel", "noise_density", [](Scenario& s, double v) { s.channel.noise_density_dbm_hz = v; });
        addn("channel", "analysis_bandwidth", [](Scenario& s, double v) { s.channel.analysis_bandwidth = v; });

        addn("detection", "notch_width_max", [](Scenario& s, double v) { s.detection.notch_width_max = v; });
        addn("detection", "trigger_level", [](Scenario& s, double v) { s.detection.trigger_level = v; });
        addn("detection", "segment_len", [](Scenario& s, double v) { s.detection.segment_len = v; });
        addn("detection", "cds_spacing", [](Scenario& s, double v) { s.detection.cds_spacing = v; });
        addn("detection", "slope_threshold", [](Scenario& s, double v) { s.detection.slope_threshold = v; });
        addn("detection", "integ_window", [](Scenario& s, double v) { s.detection.integ_window = v; });

        addn("power_link", "f_link", [](Scenario& s, double v) { s.power_link.f_link = v; });
        addn("power_link", "k", [](Scenario& s, double v) { s.power_link.k = v; });
        addn("power_link", "q_tx", [](Scenario& s, double v) { s.power_link.q_tx = v; });
        addn("power_link", "q_rx", [](Scenario& s, double v) { s.power_link.q_rx = v; });
        addn("power_link", "l_rx", [](Scenario& s, double v) { s.power_link.l_rx = v; });
        addn("power_link", "v_source", [](Scenario& s, double v) { s.power_link.v_source = v; });
        addn("power_link", "diode_drop", [](Scenario& s, double v) { s.power_link.diode_drop = v; });
        addn("power_link", "c_filter", [](Scenario& s, double v) { s.power_link.c_filter = v; });
        addn("power_link", "v_target", [](Scenario& s, double v) { s.power_link.v_target = v; });
        addn("power_link", "detune_gain", [](Scenario& s, double v) { s.power_link.detune_gain = v; });
        addn("power_link", "i_load", [](Scenario& s, double v) { s.i_load = v; });
        return t;
    }();
    return table;
}

}  // namespace detail

// Full validation of a parsed scenario; throws ScenarioError naming the
// offending key path.
inline void validate_scenario(const Scenario& s) {
    auto fail = [](const std::string& msg) { throw ScenarioError(msg); };
    if (s.bit_rate <= 0.0) fail("[scenario] bit_rate: must be > 0");
    if (s.n_bits < 1) fail("[scenario] n_bits: must be >= 1");
    if (s.n_avg < 1) fail("[scenario] n_avg: must be >= 1");
    if (s.sample_rate <= 0.0) fail("[scenario] sample_rate: must be > 0");
    if (s.prbs_order < 2 || s.prbs_order > 31) fail("[scenario] prbs_order: must be in 2..31");
    if (s.welch_segment < 64) fail("[scenario] welch_segment: must be >= 64");
    try {
        check_tank(s.tank, "[tank]");
        check_clipper(s.clipper, "[clipper]");
        check_channel(s.channel, "[channel]");
        check_detection(s.detection, "[detection]");
        DllConfig dll = s.dll;
        dll.tank_period = 1.0 / s.tank.f0();
        check_dll(dll, "[dll]");
        if (s.has_power_link) check_power_link(s.power_link, "[power_link]");
    } catch (const std::invalid_argument& e) {
        fail(e.what());
    }
    if (s.mode == ScenarioMode::all_wireless && !s.has_power_link)
        fail("all_wireless mode requires a [power_link] section");
    if (s.hp_corner <= 0.0 || s.hp_corner >= 0.5 * s.sample_rate)
        fail("[clipper] hp_corner: must lie in (0, sample_rate/2)");
    if (!(s.tx_out_lo > 0.0 && s.tx_out_lo < s.tx_out_hi && s.tx_out_hi < 0.5 * s.sample_rate))
        fail("[clipper] tx_out_lo/tx_out_hi: need 0 < lo < hi < sample_rate/2");
}

inline Scenario parse_scenario(std::istream& in, const std::string& origin = "<stream>") {
    Scenario s;
    const auto& table = detail::scenario_keys();
    std::string line, section;
    std::size_t lineno = 0;
    std::vector<std::string> section_names;
    for (const auto& [name, _] : table) section_names.push_back(name);

    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const std::string where = origin + ":" + std::to_string(lineno);

        if (line.front() == '[') {
            if (line.back() != ']')
                throw ScenarioError(where + ": malformed section header '" + line + "'");
            section = detail::trim(line.substr(1, line.size() - 2));
            auto it = table.find(section);
            if (it == table.end()) {
                const auto hint = detail::suggest(section, section_names);
                throw ScenarioError(where + ": unknown section [" + section + "]" +
                                    (hint.empty() ? "" : "; did you mean [" + hint + "]?"));
            }
            if (section == "power_link") s.has_power_link = true;
            continue;
        }

        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ScenarioError(where + ": expected key = value, got '" + line + "'");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        if (section.empty())
            throw ScenarioError(where + ": key '" + key + "' appears before any section");

        const auto& handlers = table.at(section);
        const auto it = std::find_if(handlers.begin(), handlers.end(),
                                     [&](const detail::KeyHandler& h) { return h.name == key; });
        if (it == handlers.end()) {
            std::vector<std::string> names;
            for (const auto& h : handlers) names.push_back(h.name);
            const auto hint = detail::suggest(key, names);
            throw ScenarioError(where + ": unknown key '" + key + "' in [" + section + "]" +
                                (hint.empty() ? "" : "; did you mean '" + hint + "'?"));
        }
        try {
            it->apply(s, value);
        } catch (const ScenarioError&) {
            throw;
        } catch (const std::exception& e) {
            throw ScenarioError(where + ": " + e.what());
        }
    }
    validate_scenario(s);
    return s;
}

inline Scenario load_scenario(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ScenarioError("load_scenario: cannot open " + path);
    return parse_scenario(f, path);
}

}  // namespace uwb
