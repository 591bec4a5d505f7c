#pragma once

// Series-resonant LC tank behavior: steady-state drive, the on/off
// oscillation envelope of the conventional pulsed scheme, and the
// efficiency figures that follow from the loss split between the tank
// resistance and the antenna.

#include <optional>
#include <random>

#include "uwb/waveform.hpp"

namespace uwb {

// Defaults describe the nominal 915 MHz tank with Q = 20, split so the
// antenna takes 21.35% of the drive power in the steady state.
struct TankParams {
    double inductance = 10e-9;         // H
    double capacitance = 3.026e-12;    // F
    double r_loss = 2.26067;           // ohm, series loss in the tank
    double r_antenna = 0.61367;        // ohm, radiation load
    double drive_amp = 0.05;           // V, drive amplitude at the tank input
    std::optional<double> drive_freq;  // Hz; defaults to resonance

    double f0() const { return 1.0 / (2.0 * kPi * std::sqrt(inductance * capacitance)); }
    double omega0() const { return 2.0 * kPi * f0(); }
    double quality() const { return omega0() * inductance / (r_loss + r_antenna); }
    // Neper frequency of the series tank; omega0/alpha == 2Q by construction.
    double alpha() const { return (r_loss + r_antenna) / (2.0 * inductance); }
};

inline void check_tank(const TankParams& p, const char* who) {
    if (p.inductance <= 0.0 || p.capacitance <= 0.0 || p.r_loss < 0.0 || p.r_antenna < 0.0 ||
        p.r_loss + p.r_antenna <= 0.0 || p.drive_amp < 0.0)
        throw std::invalid_argument(std::string(who) + ": invalid tank parameters");
    if (p.drive_freq && *p.drive_freq <= 0.0)
        throw std::invalid_argument(std::string(who) + ": drive_freq must be > 0");
}

struct PulseBurstSpec {
    double t_p = 0.0;  // s, on-duration of the conventional scheme's baseband pulse
};

// Voltage magnification from drive to the capacitor node of the series
// tank at frequency f. Equals Q at resonance.
inline double tank_voltage_gain(const TankParams& p, double f) {
    const double w = 2.0 * kPi * f;
    const double r = p.r_loss + p.r_antenna;
    const double x = w * p.inductance - 1.0 / (w * p.capacitance);
    return (1.0 / (w * p.capacitance)) / std::sqrt(r * r + x * x);
}

// Steady-state tank node waveform: a sine at the drive frequency with
// the resonant voltage magnification applied, zero phase at t = 0.
inline Waveform tank_steady_state_wave(const TankParams& p, double duration, double sample_rate) {
    check_tank(p, "tank_steady_state_wave");
    const double f = p.drive_freq.value_or(p.f0());
    if (sample_rate <= 10.0 * f)
        throw std::invalid_argument("tank_steady_state_wave: sample_rate must exceed 10*f0");
    if (duration <= 0.0)
        throw std::invalid_argument("tank_steady_state_wave: duration must be > 0");

    const double amp = p.drive_amp * tank_voltage_gain(p, f);
    Waveform w;
    w.sample_rate = sample_rate;
    w.samples.resize(static_cast<std::size_t>(std::llround(duration * sample_rate)));
    if (w.samples.empty()) w.samples.resize(1);
    const double wrad = 2.0 * kPi * f;
    for (std::size_t i = 0; i < w.samples.size(); ++i)
        w.samples[i] = amp * std::sin(wrad * static_cast<double>(i) / sample_rate);
    return w;
}

// Same waveform with a phase random walk on the tone, for studying
// synthesizer jitter. jitter_rms_per_cycle is the RMS phase increment
// per carrier period, radians.
inline Waveform tank_steady_state_wave_jittered(const TankParams& p, double duration,
                                                double sample_rate, double jitter_rms_per_cycle,
                                                std::uint64_t seed) {
    Waveform w = tank_steady_state_wave(p, duration, sample_rate);
    if (jitter_rms_per_cycle <= 0.0) return w;
    const double f = p.drive_freq.value_or(p.f0());
    const double amp = p.drive_amp * tank_voltage_gain(p, f);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> dist(0.0, jitter_rms_per_cycle * std::sqrt(f / sample_rate));
    double phase = 0.0;
    const double dphi = 2.0 * kPi * f / sample_rate;
    for (std::size_t i = 0; i < w.samples.size(); ++i) {
        w.samples[i] = amp * std::sin(phase);
        phase += dphi + dist(rng);
    }
    return w;
}

// Normalized oscillation envelope of the conventional on/off scheme:
// exponential build-up while driven, exponential decay after t_p.
inline double tank_onoff_envelope(const TankParams& p, const PulseBurstSpec& spec, double t) {
    check_tank(p, "tank_onoff_envelope");
    if (spec.t_p <= 0.0)
        throw std::invalid_argument("tank_onoff_envelope: t_p must be > 0");
    if (t < 0.0)
        throw std::invalid_argument("tank_onoff_envelope: t must be >= 0");
    const double a = p.alpha();
    if (t <= spec.t_p) return 1.0 - std::exp(-a * t);
    return (1.0 - std::exp(-a * spec.t_p)) * std::exp(-a * (t - spec.t_p));
}

// Fraction of drive power reaching the antenna once the tank resonates
// in the steady state: the resistive divider between radiation and loss.
inline double steady_state_efficiency(double r_loss, double r_antenna) {
    if (r_loss < 0.0 || r_antenna < 0.0 || r_loss + r_antenna <= 0.0)
        throw std::invalid_argument("steady_state_efficiency: resistances must be >= 0, sum > 0");
    return 100.0 * r_antenna / (r_antenna + r_loss);
}

// Energy-averaged efficiency of a single on/off burst of width t_p:
// the steady-state efficiency scaled by the mean of the build-up
// envelope over the on-window. Approaches the steady-state value as
// alpha*t_p grows and eta_ss * alpha*t_p/2 for very short bursts.
inline double transient_pulse_efficiency(const TankParams& p, const PulseBurstSpec& spec) {
    check_tank(p, "transient_pulse_efficiency");
    if (spec.t_p <= 0.0)
        throw std::invalid_argument("transient_pulse_efficiency: t_p must be > 0");
    const double x = p.alpha() * spec.t_p;
    const double mean_env = 1.0 - (1.0 - std::exp(-x)) / x;
    return steady_state_efficiency(p.r_loss, p.r_antenna) * mean_env;
}

}  // namespace uwb
