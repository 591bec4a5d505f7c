#pragma once

// End-to-end scenario execution: PRBS -> auxiliary-bit schedule -> DLL
// lock -> tank/clip/gate/couple -> channel -> detection -> BER, with the
// spectrum, mask margins and power figures assembled into one report.
//
// Frame layout on the air: a silent lead-in for the noise estimate, a
// known alternating preamble that calibrates the amplitude threshold,
// then the payload. Every data bit carries its auxiliary quarter-period
// "1", so bit slots are T_b + T/4 long; detections falling inside the
// auxiliary windows are discarded before bit recovery.

#include <cstdio>
#include <functional>
#include <mutex>
#include <thread>

#include "uwb/channel.hpp"
#include "uwb/clipper.hpp"
#include "uwb/detection.hpp"
#include "uwb/dll.hpp"
#include "uwb/mask.hpp"
#include "uwb/scenario.hpp"
#include "uwb/spectrum.hpp"
#include "uwb/tank.hpp"

namespace uwb {

struct LinkReport {
    ScenarioMode mode = ScenarioMode::wired_wired;
    BerResult ber;
    double rx_power_dbm = 0.0;
    double noise_floor_dbm = 0.0;
    double snr_db = 0.0;
    double tx_efficiency_pct = 0.0;      // steady-state tank split
    double chip_efficiency_pct = 0.0;    // radiated over DC draw
    double energy_per_bit_pj = 0.0;
    double data_rate_mbps = 0.0;
    double occupied_lo_hz = 0.0;
    double occupied_hi_hz = 0.0;
    MaskCheckResult mask;
    bool pass_mask = false;
    double power_link_efficiency_pct = 0.0;  // all_wireless only
    bool dll_locked = false;
    double dll_lead_s = 0.0;
    std::size_t pulse_count = 0;     // radiated pulses inside "1" windows
    double pulse_rate_hz = 0.0;      // pulses per second of gated-on time
};

struct RunArtifacts {
    Spectrum tx_spectrum;
    Waveform v3;          // radiated waveform (after the TX output chain)
    Waveform rx;          // receiver input
    std::vector<DllTrajectoryPoint> dll_trajectory;
    BitStream tx_payload;
    BitStream rx_payload;
};

namespace detail {

// Frame geometry in symbol slots.
struct FrameLayout {
    std::size_t silent_slots = 32;
    std::size_t preamble_bits = 128;
    double slot = 0.0;     // s, T_b + T/4
    double t_sched = 0.0;  // schedule (preamble) start
    double t_payload = 0.0;
    double total = 0.0;
};

inline double sample_std(const Waveform& w, std::size_t i0, std::size_t i1) {
    double m = 0.0, m2 = 0.0;
    const double n = static_cast<double>(i1 - i0);
    for (std::size_t i = i0; i < i1; ++i) {
        m += w.samples[i];
        m2 += w.samples[i] * w.samples[i];
    }
    m /= n;
    return std::sqrt(std::max(0.0, m2 / n - m * m));
}

// Envelope statistic for one slot: the RMS amplitude of the strongest
// integ-window stretch inside the slot's data portion.
inline double slot_stat(const Waveform& w, double t0, double t1, double integ_window) {
    std::size_t i0 = w.index_at(t0);
    std::size_t i1 = w.index_at(t1);
    if (i1 <= i0) return 0.0;
    const std::size_t n = i1 - i0;
    std::size_t win = static_cast<std::size_t>(std::llround(integ_window * w.sample_rate));
    win = std::max<std::size_t>(1, std::min(win, n));
    double acc = 0.0;
    for (std::size_t i = i0; i < i0 + win; ++i) acc += w.samples[i] * w.samples[i];
    double best = acc;
    for (std::size_t i = i0 + win; i < i1; ++i) {
        acc += w.samples[i] * w.samples[i] - w.samples[i - win] * w.samples[i - win];
        best = std::max(best, acc);
    }
    return std::sqrt(best / static_cast<double>(win));
}

}  // namespace detail

// Run one scenario to a full report. Deterministic for a fixed scenario
// including its seed.
inline LinkReport run_scenario(const Scenario& sc, RunArtifacts* artifacts = nullptr) {
    validate_scenario(sc);

    const double T = 1.0 / sc.tank.f0();
    const double tb = 1.0 / sc.bit_rate;
    detail::FrameLayout frame;
    frame.slot = tb + 0.25 * T;
    {
        const double n_slots_est = static_cast<double>(frame.silent_slots + frame.preamble_bits) +
                                   static_cast<double>(sc.n_bits * sc.n_avg) + 1.0;
        const double samples_est = n_slots_est * frame.slot * sc.sample_rate;
        if (samples_est > 4e8)
            throw ScenarioError("scenario too large: about " + std::to_string(samples_est) +
                                " samples; lower n_bits, n_avg or sample_rate");
    }

    // --- data: preamble + payload, each data bit repeated n_avg times ---
    BitStream prbs;
    prbs.bit_rate = sc.bit_rate;
    switch (sc.data) {
        case DataPattern::prbs:
            prbs = prbs_generate(sc.prbs_order, sc.prbs_seed, sc.n_bits, sc.bit_rate);
            break;
        case DataPattern::zeros:
            prbs.bits.assign(sc.n_bits, 0);
            break;
        case DataPattern::ones:
            prbs.bits.assign(sc.n_bits, 1);
            break;
    }
    BitStream tx_bits;
    tx_bits.bit_rate = sc.bit_rate;
    for (std::size_t i = 0; i < frame.preamble_bits; ++i)
        tx_bits.bits.push_back(i % 2 == 0 ? 1 : 0);
    for (std::size_t i = 0; i < sc.n_bits; ++i)
        for (std::size_t r = 0; r < sc.n_avg; ++r) tx_bits.bits.push_back(prbs.bits[i]);

    auto sched = insert_aux_bits(tx_bits, T);
    frame.t_sched = static_cast<double>(frame.silent_slots) * frame.slot;
    frame.t_payload = frame.t_sched + static_cast<double>(frame.preamble_bits) * frame.slot;
    frame.total = frame.t_sched + sched.total_duration() + frame.slot;

    // --- DLL lock on the commensurate training pattern ---
    LinkReport rep;
    rep.mode = sc.mode;
    double gate_delay = 0.75 * T;  // ideal quarter-period lead
    if (sc.dll_enabled) {
        DllConfig dll = sc.dll;
        dll.tank_period = T;
        TankParams tone = sc.tank;
        tone.drive_freq = sc.tank.f0();
        auto pa = tank_steady_state_wave(tone, 2.6e-6, 64.0 / T);
        auto train = insert_aux_bits(
            dll_training_bits(40, dll_training_rate(T, sc.bit_rate)), T);
        auto lock = dll_run(train, pa, dll, 2.5e-6, 0.5 * (dll.dmin() + dll.dmax()));
        rep.dll_locked = lock.state.locked;
        rep.dll_lead_s = lock.final_lead;
        if (lock.state.locked) gate_delay = lock.state.delay;
        if (artifacts) artifacts->dll_trajectory = lock.trajectory;
    }

    // --- waveform chain ---
    // clip thresholds pass through the DACs first
    ClipperConfig clip = sc.clipper;
    clip.v_max = dac_quantize(clip.v_max, clip);
    if (clip.v_mid > 0.0) clip.v_mid = dac_quantize(clip.v_mid, clip);
    auto vc = sc.phase_jitter > 0.0
                  ? tank_steady_state_wave_jittered(sc.tank, frame.total, sc.sample_rate,
                                                    sc.phase_jitter, derive_seed(sc.seed, 0x70EEull))
                  : tank_steady_state_wave(sc.tank, frame.total, sc.sample_rate);
    auto v2 = clip_waveform(vc, clip);
    vc.samples.clear();
    vc.samples.shrink_to_fit();

    const auto bounds = sched.boundaries(frame.t_sched);
    std::vector<double> edges(bounds.size());
    const double edge_shift = gate_delay - 0.75 * T;  // relative to the ideal lead
    for (std::size_t i = 0; i < bounds.size(); ++i) edges[i] = bounds[i] + edge_shift;
    BitStream gate_bits;
    gate_bits.bit_rate = sc.bit_rate;
    gate_bits.bits = sched.symbols;
    auto v2g = ook_gate(v2, gate_bits, clip, edges);
    v2.samples.clear();
    v2.samples.shrink_to_fit();

    auto v3 = antenna_couple(v2g, sc.hp_corner);
    v2g.samples.clear();
    v2g.samples.shrink_to_fit();

    // --- radiated pulse statistics over the "1" data windows ---
    // counted on the raw coupled pulse train: the antenna band response
    // rings each pulse into a wavelet, which would double-count
    {
        double v3peak = 0.0;
        for (double v : v3.samples) v3peak = std::max(v3peak, std::fabs(v));
        const double level = 0.4 * v3peak;
        std::size_t pulses = 0;
        double on_time = 0.0;
        const double margin = T;
        for (std::size_t k = 0; k < sched.symbols.size(); ++k) {
            if (!sched.symbols[k] || sched.durations[k] < tb) continue;  // data "1" bits only
            const double a = bounds[k] + margin;
            const double b = bounds[k + 1] - margin;
            if (b <= a) continue;
            Waveform win;
            win.sample_rate = v3.sample_rate;
            const std::size_t i0 = v3.index_at(a), i1 = v3.index_at(b);
            win.samples.assign(v3.samples.begin() + static_cast<std::ptrdiff_t>(i0),
                               v3.samples.begin() + static_cast<std::ptrdiff_t>(i1));
            if (win.samples.empty()) continue;
            pulses += count_pulses(win, level);
            on_time += b - a;
        }
        rep.pulse_count = pulses;
        rep.pulse_rate_hz = on_time > 0.0 ? static_cast<double>(pulses) / on_time : 0.0;
    }

    v3 = band_limit(v3, sc.tx_out_lo, sc.tx_out_hi);

    // scale the radiated waveform so its band power over the TX output
    // band equals the programmed output power
    {
        const std::size_t nseg = std::min<std::size_t>(sc.welch_segment, v3.samples.size());
        auto s_cal = welch_psd(v3, nseg, 0.5, Window::hann);
        const double p_now_dbm = band_power_dbm(s_cal, sc.tx_out_lo, sc.tx_out_hi);
        const double scale = std::pow(10.0, (sc.p_out_dbm - p_now_dbm) / 20.0);
        for (double& v : v3.samples) v *= scale;
    }
    if (sc.spur_dbm > -200.0) add_spur(v3, sc.tank.f0(), sc.spur_dbm);

    // --- spectrum and mask at the TX output ---
    const std::size_t seg = std::min<std::size_t>(sc.welch_segment, v3.samples.size());
    auto spec = welch_psd(v3, seg, 0.5, Window::hann);
    const auto occ = occupied_band(spec, 10.0);
    rep.occupied_lo_hz = occ.f_lo;
    rep.occupied_hi_hz = occ.f_hi;
    rep.mask = mask_check(spec, fcc_indoor_mask(), /*partial=*/true);
    rep.pass_mask = rep.mask.pass;

    // --- channel ---
    Waveform rx;
    if (sc.mode == ScenarioMode::wired_wired) {
        rx = v3;
    } else {
        ChannelConfig ch = sc.channel;
        ch.rng_seed = derive_seed(sc.seed, 0xC0FFEEull);
        rx = apply_channel(v3, ch);
    }

    // --- link budget figures (wired capture measures the TX directly) ---
    {
        const auto budget = rx_power_budget(sc.p_out_dbm, sc.channel);
        rep.noise_floor_dbm = budget.noise_floor_dbm;
        if (sc.mode == ScenarioMode::wired_wired) {
            rep.rx_power_dbm = sc.p_out_dbm;
            rep.snr_db = sc.p_out_dbm - budget.noise_floor_dbm;
        } else {
            rep.rx_power_dbm = budget.rx_power_dbm;
            rep.snr_db = budget.snr_db;
        }
    }

    // --- detection ---
    // The receiver front end band-limits the record (signal and the
    // channel's additive noise alike) to the analysis bandwidth around
    // the band center before any statistic is taken; this is the noise
    // bandwidth the link budget integrates over.
    Waveform rx_det = rx;
    if (sc.mode != ScenarioMode::wired_wired) {
        const double half = 0.5 * std::min(sc.channel.analysis_bandwidth,
                                           sc.channel.rx_band_hi - sc.channel.rx_band_lo);
        const double det_lo = std::max(sc.channel.rx_band_lo, sc.channel.center_freq - half);
        const double det_hi = std::min(sc.channel.rx_band_hi, sc.channel.center_freq + half);
        rx_det = band_limit(rx, det_lo, det_hi);
    }
    DetectionConfig det = sc.detection;
    const double sigma = detail::sample_std(rx_det, 0, rx_det.index_at(frame.t_sched - 2.0 * T));
    // measurement window guards: the leading guard lets the previous
    // auxiliary pulse's ring die out, the trailing one excludes the
    // slot's own auxiliary onset
    const double g0 = std::min(1.0e-9, 0.25 * tb);
    const double g1 = std::min(0.2e-9, 0.05 * tb);

    // preamble statistics calibrate the amplitude threshold
    double mu1 = 0.0, mu0 = 0.0;
    {
        std::size_t n1 = 0, n0 = 0;
        for (std::size_t i = 0; i < frame.preamble_bits; ++i) {
            const double t0 = frame.t_sched + static_cast<double>(i) * frame.slot + edge_shift;
            const double pk = detail::slot_stat(rx_det, t0 + g0, t0 + tb - g1, det.integ_window);
            if (i % 2 == 0) {
                mu1 += pk;
                ++n1;
            } else {
                mu0 += pk;
                ++n0;
            }
        }
        mu1 /= static_cast<double>(n1);
        mu0 /= static_cast<double>(n0);
    }
    const double amp_threshold = 0.5 * (mu1 + mu0);
    if (det.slope_threshold <= 0.0)
        det.slope_threshold = std::max(3.0 * sigma, 0.25 * (mu1 - mu0));
    if (det.trigger_level <= 0.0) det.trigger_level = amp_threshold;

    // payload slots: one statistic per transmitted symbol repeat
    const std::size_t n_slots = sc.n_bits * sc.n_avg;
    BitStream rx_payload;
    rx_payload.bit_rate = sc.bit_rate / static_cast<double>(sc.n_avg);

    if (sc.capture == CaptureMode::synced) {
        std::vector<double> peaks(n_slots);
        for (std::size_t k = 0; k < n_slots; ++k) {
            const double t0 = frame.t_payload + static_cast<double>(k) * frame.slot + edge_shift;
            peaks[k] = detail::slot_stat(rx_det, t0 + g0, t0 + tb - g1, det.integ_window);
        }
        for (std::size_t i = 0; i < sc.n_bits; ++i) {
            std::vector<double> group(peaks.begin() + static_cast<std::ptrdiff_t>(i * sc.n_avg),
                                      peaks.begin() + static_cast<std::ptrdiff_t>((i + 1) * sc.n_avg));
            rx_payload.bits.push_back(
                static_cast<std::uint8_t>(average_pulses(group, sc.n_avg, amp_threshold)));
        }
    } else {
        auto trig = notch_triggers(rx_det, det);
        auto caps = capture_segments(rx_det, trig, det);
        std::vector<double> detections;
        for (const auto& seg2 : caps.segments)
            if (cds_detect(seg2, det)) detections.push_back(seg2.timestamp);
        // discard detections inside auxiliary windows
        std::vector<double> gated;
        for (double t : detections) {
            const double rel = t - frame.t_payload - edge_shift;
            if (rel < 0.0) continue;
            const double in_slot = std::fmod(rel, frame.slot);
            if (in_slot >= g0 && in_slot < tb - g1) gated.push_back(rel);
        }
        auto slots = recover_bits(gated, 1.0 / frame.slot, n_slots, 0.0);
        for (std::size_t i = 0; i < sc.n_bits; ++i) {
            int any = 0;
            for (std::size_t r = 0; r < sc.n_avg; ++r) any |= slots.bits[i * sc.n_avg + r];
            rx_payload.bits.push_back(static_cast<std::uint8_t>(any));
        }
    }

    BitStream tx_payload;
    tx_payload.bit_rate = rx_payload.bit_rate;
    tx_payload.bits = prbs.bits;
    rep.ber = ber_compute(tx_payload, rx_payload);

    // --- power figures ---
    rep.tx_efficiency_pct = steady_state_efficiency(sc.tank.r_loss, sc.tank.r_antenna);
    rep.chip_efficiency_pct = chip_efficiency(sc.p_out_dbm, sc.p_dc_mw);
    rep.data_rate_mbps = sc.bit_rate / static_cast<double>(sc.n_avg) / 1e6;
    rep.energy_per_bit_pj = energy_per_bit_pj(sc.p_dc_mw, sc.bit_rate / static_cast<double>(sc.n_avg));
    if (sc.mode == ScenarioMode::all_wireless)
        rep.power_link_efficiency_pct = link_efficiency(sc.power_link, sc.i_load);

    if (artifacts) {
        artifacts->tx_spectrum = std::move(spec);
        artifacts->v3 = std::move(v3);
        artifacts->rx = std::move(rx);
        artifacts->tx_payload = std::move(tx_payload);
        artifacts->rx_payload = std::move(rx_payload);
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Parameter sweep
// ---------------------------------------------------------------------------

namespace detail {

using ParamSetter = std::function<void(Scenario&, double)>;

inline const std::map<std::string, ParamSetter>& sweep_params() {
    static const std::map<std::string, ParamSetter> table = {
        {"scenario.p_out_dbm", [](Scenario& s, double v) { s.p_out_dbm = v; }},
        {"scenario.bit_rate", [](Scenario& s, double v) { s.bit_rate = v; }},
        {"scenario.n_avg", [](Scenario& s, double v) { s.n_avg = static_cast<std::size_t>(v); }},
        {"scenario.n_bits", [](Scenario& s, double v) { s.n_bits = static_cast<std::size_t>(v); }},
        {"channel.distance", [](Scenario& s, double v) { s.channel.distance = v; }},
        {"channel.gain_cal", [](Scenario& s, double v) { s.channel.gain_cal_db = v; }},
        {"channel.noise_density", [](Scenario& s, double v) { s.channel.noise_density_dbm_hz = v; }},
        {"tank.drive_amp", [](Scenario& s, double v) { s.tank.drive_amp = v; }},
        {"clipper.v_max", [](Scenario& s, double v) { s.clipper.v_max = v; }},
        {"power_link.i_load", [](Scenario& s, double v) { s.i_load = v; }},
    };
    return table;
}

}  // namespace detail

struct SweepRow {
    double value = 0.0;
    LinkReport report;
};

// One run per value with a per-index derived seed; rows keep input order.
// Points execute in parallel up to `jobs`.
inline std::vector<SweepRow> sweep(const Scenario& base, const std::string& param_path,
                                   const std::vector<double>& values, unsigned jobs = 1,
                                   std::size_t index_offset = 0) {
    const auto& params = detail::sweep_params();
    const auto it = params.find(param_path);
    if (it == params.end()) {
        std::string valid;
        for (const auto& [name, _] : params) valid += (valid.empty() ? "" : ", ") + name;
        throw ScenarioError("sweep: unknown parameter path '" + param_path +
                            "'; valid paths: " + valid);
    }
    std::vector<SweepRow> rows(values.size());
    if (values.empty()) return rows;

    std::mutex next_mutex;
    std::size_t next = 0;
    auto worker = [&]() {
        for (;;) {
            std::size_t i;
            {
                std::lock_guard<std::mutex> lk(next_mutex);
                if (next >= values.size()) return;
                i = next++;
            }
            Scenario s = base;
            it->second(s, values[i]);
            s.seed = derive_seed(base.seed, index_offset + i);
            rows[i].value = values[i];
            rows[i].report = run_scenario(s);
        }
    };
    const unsigned n_threads = std::max(1u, std::min<unsigned>(jobs, values.size()));
    if (n_threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    return rows;
}

// ---------------------------------------------------------------------------
// CSV emission (deterministic formatting)
// ---------------------------------------------------------------------------

inline std::string format_csv_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

inline std::string report_csv_header() {
    std::string h =
        "mode,n_bits,n_errors,ber,ci_lo,ci_hi,rx_power_dbm,noise_floor_dbm,snr_db,"
        "tx_efficiency_pct,chip_efficiency_pct,energy_per_bit_pj,data_rate_mbps,"
        "occupied_lo_hz,occupied_hi_hz,pass_mask,min_margin_db,power_link_efficiency_pct,"
        "dll_locked,pulse_rate_hz";
    const auto mask = fcc_indoor_mask();
    for (std::size_t i = 0; i < mask.bands.size(); ++i)
        h += ",margin_band" + std::to_string(i) + "_db";
    return h;
}

inline std::string report_csv_row(const LinkReport& r) {
    std::string s;
    s += to_string(r.mode);
    auto add = [&s](const std::string& v) { s += "," + v; };
    add(std::to_string(r.ber.n_bits));
    add(std::to_string(r.ber.n_errors));
    add(format_csv_double(r.ber.ber));
    add(format_csv_double(r.ber.ci_lo));
    add(format_csv_double(r.ber.ci_hi));
    add(format_csv_double(r.rx_power_dbm));
    add(format_csv_double(r.noise_floor_dbm));
    add(format_csv_double(r.snr_db));
    add(format_csv_double(r.tx_efficiency_pct));
    add(format_csv_double(r.chip_efficiency_pct));
    add(format_csv_double(r.energy_per_bit_pj));
    add(format_csv_double(r.data_rate_mbps));
    add(format_csv_double(r.occupied_lo_hz));
    add(format_csv_double(r.occupied_hi_hz));
    add(r.pass_mask ? "1" : "0");
    add(format_csv_double(r.mask.min_margin_db));
    add(format_csv_double(r.power_link_efficiency_pct));
    add(r.dll_locked ? "1" : "0");
    add(format_csv_double(r.pulse_rate_hz));
    for (const auto& b : r.mask.bands)
        add(b.evaluated ? format_csv_double(b.margin_db) : "nan");
    return s;
}

inline std::string sweep_csv_header() {
    return "rx_power_dbm,snr_db,n_bits,n_errors,ber,ci_lo,ci_hi,n_avg";
}

inline std::string sweep_csv_row(const SweepRow& row, std::size_t n_avg) {
    std::string s = format_csv_double(row.report.rx_power_dbm);
    auto add = [&s](const std::string& v) { s += "," + v; };
    add(format_csv_double(row.report.snr_db));
    add(std::to_string(row.report.ber.n_bits));
    add(std::to_string(row.report.ber.n_errors));
    add(format_csv_double(row.report.ber.ber));
    add(format_csv_double(row.report.ber.ci_lo));
    add(format_csv_double(row.report.ber.ci_hi));
    add(std::to_string(n_avg));
    return s;
}

inline void write_spectrum_csv(const Spectrum& s, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("write_spectrum_csv: cannot open " + path);
    f << "freq_hz,psd_dbm_per_mhz\n";
    for (std::size_t k = 0; k < s.bin_freqs.size(); ++k)
        f << format_csv_double(s.bin_freqs[k]) << "," << format_csv_double(s.psd_dbm_per_mhz[k])
          << "\n";
}

inline Spectrum load_spectrum_csv(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("load_spectrum_csv: cannot open " + path);
    Spectrum s;
    std::string line;
    while (std::getline(f, line)) {
        const auto comma = line.find(',');
        if (comma == std::string::npos) continue;
        try {
            const double freq = std::stod(line.substr(0, comma));
            const double psd = std::stod(line.substr(comma + 1));
            s.bin_freqs.push_back(freq);
            s.psd_dbm_per_mhz.push_back(psd);
        } catch (const std::exception&) {
            continue;  // header row
        }
    }
    if (s.bin_freqs.size() < 2)
        throw std::runtime_error("load_spectrum_csv: no data rows in " + path);
    s.rbw_hz = s.bin_freqs[1] - s.bin_freqs[0];
    return s;
}

inline void write_dll_trajectory_csv(const std::vector<DllTrajectoryPoint>& traj,
                                     const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("write_dll_trajectory_csv: cannot open " + path);
    f << "t_s,delay_s,v_ctrl,filt_a,filt_b,lock_error_s\n";
    for (const auto& p : traj)
        f << format_csv_double(p.t) << "," << format_csv_double(p.delay) << ","
          << format_csv_double(p.v_ctrl) << "," << format_csv_double(p.filt_a) << ","
          << format_csv_double(p.filt_b) << "," << format_csv_double(p.lock_error_s) << "\n";
}

}  // namespace uwb
