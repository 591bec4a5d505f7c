#pragma once

// Behavioral delay-locked loop that aligns the OOK switching edges to
// precede the PA zero crossings by a quarter period.
//
// The phase detector follows the two-filter scheme: filter A averages the
// delay-line output with a DC gain of 1/2, filter B averages the NOR of
// the inverted PA square with the same data, and their difference drives
// a slew-limited integrator controlling the delay line. With the
// auxiliary quarter-period "1" inserted after every data bit, a data bit
// of 3.75 carrier periods makes each symbol span exactly four cycles, so
// every edge recurs at a fixed carrier phase and the filter balance picks
// out one stable delay. The loop is trained on a fixed word whose ones
// density (7/15) places that balance point exactly at the quarter-period
// lead; the companion equilibrium a half period away is unstable. Without
// the auxiliary bits a 50%-duty pattern spanning whole carrier periods
// leaves the error at zero for every delay, so the loop simply holds its
// initial alignment - including the false point where the bits trail the
// carrier by a quarter period. With no data at all, filter A decays and
// the always-on PA square pulls the control down until the delay line
// rests at its clamp.

#include <algorithm>
#include <vector>

#include "uwb/waveform.hpp"

namespace uwb {

struct DllConfig {
    double tank_period = 1.0 / 915e6;  // s
    double delay_min = 0.0;            // s; 0 = default 0.05*T
    double delay_max = 0.0;            // s; 0 = default 0.95*T
    double loop_gain = 2.5e7;          // 1/(V*s)
    double loop_tau = 1e-6;            // s, slew/compensation time constant
    double rc_tau = 1.5e-7;            // s, pulse-averaging filters
    double step_dt = 0.0;              // s; 0 = default T/64
    double pd_ref_delay = -1.0;        // s; <0 = default T/8 (buffer chain delay)

    double dmin() const { return delay_min > 0.0 ? delay_min : 0.05 * tank_period; }
    double dmax() const { return delay_max > 0.0 ? delay_max : 0.95 * tank_period; }
    double dt() const { return step_dt > 0.0 ? step_dt : tank_period / 64.0; }
    double ref_delay() const { return pd_ref_delay >= 0.0 ? pd_ref_delay : tank_period / 8.0; }
};

inline void check_dll(const DllConfig& c, const char* who) {
    if (c.tank_period <= 0.0)
        throw std::invalid_argument(std::string(who) + ": tank_period must be > 0");
    if (!(c.dmin() > 0.0 && c.dmin() < c.dmax() && c.dmax() < c.tank_period))
        throw std::invalid_argument(std::string(who) + ": need 0 < delay_min < delay_max < T");
    if (c.loop_tau <= 0.0 || c.rc_tau <= 0.0 || c.dt() <= 0.0 || c.loop_gain <= 0.0)
        throw std::invalid_argument(std::string(who) + ": loop constants must be > 0");
}

struct DllState {
    double delay = 0.0;   // s
    double v_ctrl = 0.0;  // V
    double filt_a = 0.0;  // V
    double filt_b = 0.0;  // V
    bool locked = false;
};

// Control swing mapped onto the delay-line span.
inline constexpr double kDllCtrlRange = 1.0;  // V

inline double dll_delay_from_ctrl(const DllConfig& cfg, double v_ctrl) {
    double d = cfg.dmin() + (v_ctrl / kDllCtrlRange + 0.5) * (cfg.dmax() - cfg.dmin());
    return std::clamp(d, cfg.dmin(), cfg.dmax());
}

inline double dll_ctrl_from_delay(const DllConfig& cfg, double delay) {
    return ((delay - cfg.dmin()) / (cfg.dmax() - cfg.dmin()) - 0.5) * kDllCtrlRange;
}

// One loop update on binary inputs. filt_a tracks the delayed data with
// gain 1/2, filt_b tracks NOR(~pa, data) = pa AND NOT data; the filter
// difference feeds the slew-limited control integrator, and the delay
// line follows the control affinely inside its clamp.
inline DllState dll_step(const DllState& s, const DllConfig& cfg, int pa_square,
                         int delayed_data) {
    check_dll(cfg, "dll_step");
    if ((pa_square != 0 && pa_square != 1) || (delayed_data != 0 && delayed_data != 1))
        throw std::invalid_argument("dll_step: inputs must be binary");

    const double dt = cfg.dt();
    DllState out = s;
    const double a_in = 0.5 * static_cast<double>(delayed_data);
    const int nor_in = (pa_square == 1 && delayed_data == 0) ? 1 : 0;
    out.filt_a += (a_in - s.filt_a) * dt / cfg.rc_tau;
    out.filt_b += (static_cast<double>(nor_in) - s.filt_b) * dt / cfg.rc_tau;

    double dv = cfg.loop_gain * (out.filt_a - out.filt_b) * dt;
    const double slew = kDllCtrlRange * dt / cfg.loop_tau;
    dv = std::clamp(dv, -slew, slew);
    out.v_ctrl = std::clamp(s.v_ctrl + dv, -0.5 * kDllCtrlRange, 0.5 * kDllCtrlRange);
    out.delay = dll_delay_from_ctrl(cfg, out.v_ctrl);
    return out;
}

// Quarter-period criterion: measured lead minus T/4, wrapped to
// (-T/2, T/2].
inline double lock_error(const DllState&, const DllConfig& cfg, double measured_lead) {
    const double t = cfg.tank_period;
    double e = measured_lead - 0.25 * t;
    e = std::fmod(e, t);
    if (e > 0.5 * t) e -= t;
    if (e <= -0.5 * t) e += t;
    return e;
}

// ---------------------------------------------------------------------------
// Symbol schedule
// ---------------------------------------------------------------------------

// Bit stream annotated with per-symbol durations; the transmitted stream
// once auxiliary timing bits are inserted.
struct SymbolSchedule {
    std::vector<std::uint8_t> symbols;
    std::vector<double> durations;        // s, one per symbol
    std::vector<std::size_t> data_index;  // positions of the original data bits

    double total_duration() const {
        double acc = 0.0;
        for (double d : durations) acc += d;
        return acc;
    }
    // Symbol boundaries; one more entry than symbols.
    std::vector<double> boundaries(double t_start = 0.0) const {
        std::vector<double> b(symbols.size() + 1);
        b[0] = t_start;
        for (std::size_t i = 0; i < symbols.size(); ++i) b[i + 1] = b[i] + durations[i];
        return b;
    }
};

inline SymbolSchedule make_schedule(const BitStream& data) {
    if (data.bit_rate <= 0.0)
        throw std::invalid_argument("make_schedule: bit_rate must be > 0");
    SymbolSchedule s;
    const double tb = 1.0 / data.bit_rate;
    s.symbols = data.bits;
    s.durations.assign(data.bits.size(), tb);
    s.data_index.resize(data.bits.size());
    for (std::size_t i = 0; i < data.bits.size(); ++i) s.data_index[i] = i;
    return s;
}

// Auxiliary quarter-period "1" appended after every data bit. Total
// duration is exactly n*(T_b + T/4).
inline SymbolSchedule insert_aux_bits(const BitStream& data, double tank_period) {
    if (data.bit_rate <= 0.0)
        throw std::invalid_argument("insert_aux_bits: bit_rate must be > 0");
    if (tank_period <= 0.0)
        throw std::invalid_argument("insert_aux_bits: tank_period must be > 0");
    SymbolSchedule s;
    const double tb = 1.0 / data.bit_rate;
    const double taux = 0.25 * tank_period;
    s.symbols.reserve(2 * data.bits.size());
    s.durations.reserve(2 * data.bits.size());
    s.data_index.reserve(data.bits.size());
    for (std::size_t i = 0; i < data.bits.size(); ++i) {
        s.data_index.push_back(s.symbols.size());
        s.symbols.push_back(data.bits[i]);
        s.durations.push_back(tb);
        s.symbols.push_back(1);
        s.durations.push_back(taux);
    }
    return s;
}

// Bit rate commensurate with the tank so that one data bit plus the
// auxiliary quarter period spans an integer number of carrier cycles;
// every edge then recurs at a repeatable carrier phase.
inline double dll_training_rate(double tank_period, double target_rate) {
    const double m = std::max(1.0, std::round(1.0 / (target_rate * tank_period) + 0.25));
    return 1.0 / ((m - 0.25) * tank_period);
}

// Fixed 15-bit training word with 7 ones: the ones density at which the
// two pulse-averaging filters balance exactly at the quarter-period lead.
inline BitStream dll_training_bits(std::size_t n_tiles, double bit_rate) {
    static const std::uint8_t word[15] = {0, 1, 1, 0, 1, 0, 0, 1, 1, 1, 0, 0, 0, 1, 0};
    BitStream out;
    out.bit_rate = bit_rate;
    out.bits.reserve(15 * n_tiles);
    for (std::size_t k = 0; k < n_tiles; ++k)
        out.bits.insert(out.bits.end(), word, word + 15);
    return out;
}

// ---------------------------------------------------------------------------
// Closed-loop run
// ---------------------------------------------------------------------------

struct DllTrajectoryPoint {
    double t = 0.0;
    double delay = 0.0;
    double v_ctrl = 0.0;
    double filt_a = 0.0;
    double filt_b = 0.0;
    double lock_error_s = 0.0;
};

struct DllRunResult {
    DllState state;
    std::vector<DllTrajectoryPoint> trajectory;
    double final_lead = 0.0;  // s, mean lead of the trailing data-bit edges
};

namespace detail {

// Upward zero crossings of the PA waveform, linearly interpolated.
inline std::vector<double> upward_zero_crossings(const Waveform& pa) {
    std::vector<double> zc;
    for (std::size_t i = 1; i < pa.samples.size(); ++i) {
        if (pa.samples[i - 1] < 0.0 && pa.samples[i] >= 0.0) {
            const double f = -pa.samples[i - 1] / (pa.samples[i] - pa.samples[i - 1]);
            zc.push_back(pa.time_at(i - 1) + f / pa.sample_rate);
        }
    }
    return zc;
}

inline double lead_to_next_crossing(const std::vector<double>& zc, double t_edge) {
    auto it = std::upper_bound(zc.begin(), zc.end(), t_edge);
    if (it == zc.end()) return -1.0;
    return *it - t_edge;
}

}  // namespace detail

// Run the loop on a symbol schedule against the PA waveform. The data
// stream is read through the evolving delay; the PA square is the
// waveform sign seen through the buffer-chain delay. Lock is declared
// when every data-bit edge in the trailing 10% of the run leads the next
// PA zero crossing by T/4 within 0.02*T.
inline DllRunResult dll_run(const SymbolSchedule& sched, const Waveform& pa,
                            const DllConfig& cfg, double duration, double initial_delay) {
    check_dll(cfg, "dll_run");
    check_waveform(pa, "dll_run");
    if (pa.t0 > 0.0 || pa.t0 + pa.duration() < duration)
        throw std::invalid_argument("dll_run: pa waveform must cover [0, duration]");
    if (initial_delay < cfg.dmin() || initial_delay > cfg.dmax())
        throw std::invalid_argument("dll_run: initial_delay outside the delay-line range");
    if (sched.symbols.empty())
        throw std::invalid_argument("dll_run: empty schedule");

    const double T = cfg.tank_period;
    const double dt = cfg.dt();
    const auto bounds = sched.boundaries();
    const double sched_len = bounds.back();

    std::vector<double> bit_edges;
    bit_edges.reserve(sched.data_index.size());
    for (std::size_t i : sched.data_index) bit_edges.push_back(bounds[i]);

    const auto zc = detail::upward_zero_crossings(pa);

    DllState s;
    s.delay = initial_delay;
    s.v_ctrl = dll_ctrl_from_delay(cfg, initial_delay);
    s.filt_a = 0.25;
    s.filt_b = 0.25;

    DllRunResult res;
    const std::size_t nsteps = static_cast<std::size_t>(duration / dt);
    // The control engages only after the averaging filters reach their
    // periodic orbit; the settling transient would otherwise integrate
    // into a spurious delay kick.
    const std::size_t settle_steps =
        std::min(nsteps / 4, static_cast<std::size_t>(3.0 * cfg.rc_tau / dt));
    const std::size_t traj_stride = std::max<std::size_t>(1, nsteps / 2000);
    std::size_t sym_hint = 0;      // schedule lookup cursor
    std::size_t next_bit_edge = 0; // lead measurement cursor
    double last_err = 0.0;
    std::vector<std::pair<double, double>> lead_log;  // (t, lead)

    for (std::size_t step = 0; step < nsteps; ++step) {
        const double t = static_cast<double>(step) * dt;

        // Delayed data level: schedule wraps so the training word can
        // tile an arbitrarily long run.
        double tb = t - s.delay;
        tb = std::fmod(tb, sched_len);
        if (tb < 0.0) tb += sched_len;
        while (sym_hint + 1 < bounds.size() && bounds[sym_hint + 1] <= tb) ++sym_hint;
        while (sym_hint > 0 && bounds[sym_hint] > tb) --sym_hint;
        const int data_bin = sched.symbols[sym_hint] ? 1 : 0;

        const double tref = t - cfg.ref_delay();
        const int pa_bin = (tref >= 0.0 && pa.samples[pa.index_at(tref)] > 0.0) ? 1 : 0;

        if (step < settle_steps) {
            s.filt_a += (0.5 * data_bin - s.filt_a) * dt / cfg.rc_tau;
            s.filt_b += ((pa_bin == 1 && data_bin == 0 ? 1.0 : 0.0) - s.filt_b) * dt / cfg.rc_tau;
        } else {
            s = dll_step(s, cfg, pa_bin, data_bin);
        }

        // Lead of each data-bit boundary as it goes by (first pass of the
        // schedule plus its tiled repeats).
        const double t_mod = std::fmod(t, sched_len);
        while (next_bit_edge < bit_edges.size() && bit_edges[next_bit_edge] + s.delay <= t_mod) {
            const double t_edge = t - t_mod + bit_edges[next_bit_edge] + s.delay;
            const double lead = detail::lead_to_next_crossing(zc, t_edge);
            if (lead >= 0.0) {
                last_err = lock_error(s, cfg, lead);
                lead_log.emplace_back(t, lead);
            }
            ++next_bit_edge;
        }
        if (next_bit_edge >= bit_edges.size() && t_mod < dt) next_bit_edge = 0;

        if (step % traj_stride == 0)
            res.trajectory.push_back({t, s.delay, s.v_ctrl, s.filt_a, s.filt_b, last_err});
    }

    const double t_tail = 0.9 * duration;
    bool locked = false;
    double lead_acc = 0.0;
    std::size_t lead_n = 0;
    for (const auto& [te, lead] : lead_log) {
        if (te < t_tail) continue;
        if (lead_n == 0) locked = true;
        if (std::fabs(lock_error(s, cfg, lead)) >= 0.02 * T) locked = false;
        lead_acc += lead;
        ++lead_n;
    }
    s.locked = locked && lead_n > 0;
    res.final_lead = lead_n ? lead_acc / static_cast<double>(lead_n) : -1.0;
    res.state = s;
    return res;
}

}  // namespace uwb
