#pragma once

// Inductive power subsystem: two-coil resonant link efficiency, the
// dual-halfwave rectifier, the slow detuning regulator that sheds excess
// received power, and the coupled-tank design calculators for the
// VCO-free operating mode.

#include <algorithm>

#include "uwb/waveform.hpp"

namespace uwb {

struct PowerLinkParams {
    double f_link = 1.5e6;        // Hz
    double k = 0.04605662;        // coupling ratio
    double q_tx = 30.0;
    double q_rx = 20.0;
    double l_rx = 4.774648e-6;    // H, secondary coil inductance
    double v_source = 40.0;       // V, drive amplitude referred to the link input
    double diode_drop = 0.4;      // V
    double c_filter = 10e-6;      // F
    double v_target = 3.6;        // V, regulated rectifier output
    double detune_gain = 3.4e-8;  // F/(V*s)
    double c_tune_min = 0.2e-9;   // F, detuning bound (max detune)
    double c_tune_nominal = 0.0;  // F; 0 = derive the resonant value from f_link and l_rx
    double limiter_ratio = 1.15;  // limiter threshold over v_target

    double c_resonant() const {
        return 1.0 / (4.0 * kPi * kPi * f_link * f_link * l_rx);
    }
};

inline void check_power_link(const PowerLinkParams& p, const char* who) {
    if (p.f_link <= 0.0 || p.q_tx <= 0.0 || p.q_rx <= 0.0 || p.l_rx <= 0.0 ||
        p.v_source <= 0.0 || p.diode_drop <= 0.0 || p.c_filter <= 0.0 || p.v_target <= 0.0 ||
        p.detune_gain <= 0.0)
        throw std::invalid_argument(std::string(who) + ": parameters must be positive");
    if (!(p.k > 0.0 && p.k < 1.0))
        throw std::invalid_argument(std::string(who) + ": coupling k must lie in (0,1)");
}

// Loaded quality factor of the secondary tank: the equivalent load
// resistance v_target/i_load across the coil reactance at f_link.
inline double loaded_q(const PowerLinkParams& p, double i_load) {
    const double r_load = p.v_target / i_load;
    return r_load / (2.0 * kPi * p.f_link * p.l_rx);
}

// Two-coil resonant link efficiency, percent. The first factor is the
// coupling-limited link term; the second splits the secondary power
// between coil loss and the load. Heavier loads lower the loaded Q and
// push more of the circulating power into the load, so efficiency rises
// with load current.
inline double link_efficiency(const PowerLinkParams& p, double i_load) {
    check_power_link(p, "link_efficiency");
    if (i_load <= 0.0)
        throw std::invalid_argument("link_efficiency: i_load must be > 0");
    const double kq = p.k * p.k * p.q_tx * p.q_rx;
    const double ql = loaded_q(p, i_load);
    return 100.0 * (kq / (1.0 + kq)) * (p.q_rx / (p.q_rx + ql));
}

struct RectifierOutput {
    double v_dc = 0.0;
    double ripple = 0.0;
};

// Quasi-static dual-halfwave rectifier: one diode drop, ripple at twice
// the link frequency.
inline RectifierOutput rectifier_output(double v_peak, const PowerLinkParams& p, double i_load) {
    check_power_link(p, "rectifier_output");
    if (i_load <= 0.0)
        throw std::invalid_argument("rectifier_output: i_load must be > 0");
    if (v_peak <= p.diode_drop)
        throw std::invalid_argument("rectifier_output: v_peak must exceed the diode drop");
    RectifierOutput out;
    out.v_dc = v_peak - p.diode_drop;
    out.ripple = i_load / (2.0 * p.f_link * p.c_filter);
    return out;
}

struct RegulatorState {
    double c_tune = 0.0;          // F
    double v_rect = 0.0;          // V
    bool limiter_active = false;
};

// Amplitude attenuation of the detuned secondary relative to resonance:
// the universal resonance curve 1/sqrt(1 + (2 Q delta)^2) with fractional
// detune delta.
inline double detune_attenuation(const PowerLinkParams& p, double c_tune) {
    const double f_res = 1.0 / (2.0 * kPi * std::sqrt(p.l_rx * c_tune));
    const double delta = (f_res - p.f_link) / p.f_link;
    const double x = 2.0 * p.q_rx * delta;
    return 1.0 / std::sqrt(1.0 + x * x);
}

// Open-circuit drive seen by the rectifier with the tank exactly tuned.
inline double tuned_peak_voltage(const PowerLinkParams& p) {
    return p.v_source * p.k * std::sqrt(p.q_tx * p.q_rx);
}

inline RegulatorState make_regulator_state(const PowerLinkParams& p) {
    RegulatorState s;
    s.c_tune = p.c_tune_nominal > 0.0 ? p.c_tune_nominal : p.c_resonant();
    s.v_rect = std::min(std::max(tuned_peak_voltage(p) * detune_attenuation(p, s.c_tune) -
                                     p.diode_drop, 0.0),
                        p.limiter_ratio * p.v_target);
    s.limiter_active = false;
    return s;
}

// One regulation step: walk the tuning capacitor against the rectified
// voltage error, recompute the rectified voltage through the resonance
// curve, clamp at the limiter. dt must be small against the regulation
// time constant.
inline RegulatorState detune_step(const RegulatorState& s, const PowerLinkParams& p, double dt) {
    check_power_link(p, "detune_step");
    if (dt <= 0.0)
        throw std::invalid_argument("detune_step: dt must be > 0");

    RegulatorState out = s;
    const double c_nom = p.c_tune_nominal > 0.0 ? p.c_tune_nominal : p.c_resonant();
    out.c_tune = std::clamp(s.c_tune - p.detune_gain * (s.v_rect - p.v_target) * dt,
                            p.c_tune_min, c_nom);
    double v = tuned_peak_voltage(p) * detune_attenuation(p, out.c_tune) - p.diode_drop;
    if (v < 0.0) v = 0.0;
    const double limit = p.limiter_ratio * p.v_target;
    out.limiter_active = v > limit;
    out.v_rect = std::min(v, limit);
    return out;
}

// Quality factor needed to keep the clipped-edge rate when the tank is
// run at a lower frequency: scales inversely with frequency.
inline double vco_free_required_q(double f_target, double f_ref, double q_ref) {
    if (f_target <= 0.0 || f_ref <= 0.0 || q_ref <= 0.0)
        throw std::invalid_argument("vco_free_required_q: arguments must be > 0");
    return q_ref * f_ref / f_target;
}

// Maximum OOK rate when the tank is driven from the power coil: one bit
// per clip event, two clip events per carrier period.
inline double vco_free_max_rate(double f_power) {
    if (f_power <= 0.0)
        throw std::invalid_argument("vco_free_max_rate: f_power must be > 0");
    return 2.0 * f_power;
}

}  // namespace uwb
