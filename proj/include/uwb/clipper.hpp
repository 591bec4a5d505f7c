#pragma once

// DAC-thresholded voltage clipper, OOK gating of the clipped tank output,
// the high-pass antenna coupling that turns clip corners into the radiated
// pulse train, and the chip-level power figures.

#include "uwb/tank.hpp"
#include "uwb/waveform.hpp"

namespace uwb {

struct ClipperConfig {
    double v_max = 0.25;        // V, upper clip threshold
    double v_mid = 0.0;         // V, AC ground; lower clip = 2*v_mid - v_max
    int dac_bits = 8;
    double dac_fullscale = 1.2; // V
    double knee_width = 0.0;    // V, 0 = hard clip

    double v_lo() const { return 2.0 * v_mid - v_max; }
};

inline void check_clipper(const ClipperConfig& c, const char* who) {
    if (!(c.v_mid < c.v_max))
        throw std::invalid_argument(std::string(who) + ": require v_mid < v_max");
    if (c.dac_bits < 1 || c.dac_bits > 16)
        throw std::invalid_argument(std::string(who) + ": dac_bits out of range");
    if (c.dac_fullscale <= 0.0)
        throw std::invalid_argument(std::string(who) + ": dac_fullscale must be > 0");
    if (c.knee_width < 0.0)
        throw std::invalid_argument(std::string(who) + ": knee_width must be >= 0");
}

// Nearest of the 2^bits uniform DAC levels spanning [0, fullscale]; ties
// round toward the higher code.
inline double dac_quantize(double v, const ClipperConfig& cfg) {
    check_clipper(cfg, "dac_quantize");
    if (v < 0.0 || v > cfg.dac_fullscale)
        throw std::invalid_argument("dac_quantize: voltage outside [0, dac_fullscale]");
    const double levels = static_cast<double>((1 << cfg.dac_bits) - 1);
    const double lsb = cfg.dac_fullscale / levels;
    double code = std::floor(v / lsb + 0.5);
    if (code > levels) code = levels;
    return code * lsb;
}

namespace detail {

// Hard clip with an optional cubic knee of half-width k around each
// threshold. The Hermite blend matches value and slope at both knee ends
// and is monotone, so the output never crosses the rail.
inline double clip_sample(double v, double lo, double hi, double k) {
    if (k <= 0.0) return std::min(std::max(v, lo), hi);
    if (v >= hi + k) return hi;
    if (v > hi - k) {
        const double u = (v - (hi - k)) / (2.0 * k);
        const double a = 2 * u * u * u - 3 * u * u + 1;
        const double b = u * u * u - 2 * u * u + u;
        const double c = 3 * u * u - 2 * u * u * u;
        return (hi - k) * a + 2.0 * k * b + hi * c;
    }
    if (v <= lo - k) return lo;
    if (v < lo + k) {
        const double u = ((lo + k) - v) / (2.0 * k);
        const double a = 2 * u * u * u - 3 * u * u + 1;
        const double b = u * u * u - 2 * u * u + u;
        const double c = 3 * u * u - 2 * u * u * u;
        return (lo + k) * a - 2.0 * k * b + lo * c;
    }
    return v;
}

}  // namespace detail

// Clip the waveform between v_max and the mirrored lower threshold about
// v_mid. knee_width = 0 reproduces the ideal two-diode limiter.
inline Waveform clip_waveform(const Waveform& w, const ClipperConfig& cfg) {
    check_waveform(w, "clip_waveform");
    check_clipper(cfg, "clip_waveform");
    Waveform out = w;
    const double lo = cfg.v_lo();
    for (double& v : out.samples) v = detail::clip_sample(v, lo, cfg.v_max, cfg.knee_width);
    return out;
}

// OOK gate: bit k selects the clipped signal on [edge_times[k],
// edge_times[k+1]); zeros short the output to v_mid. Outside the schedule
// the output rests at v_mid. Switching snaps to the nearest sample.
inline Waveform ook_gate(const Waveform& w_clipped, const BitStream& bits,
                         const ClipperConfig& cfg, const std::vector<double>& edge_times) {
    check_waveform(w_clipped, "ook_gate");
    check_clipper(cfg, "ook_gate");
    if (edge_times.size() != bits.bits.size() + 1)
        throw std::invalid_argument("ook_gate: need exactly one edge per bit boundary (bits+1)");
    for (std::size_t i = 1; i < edge_times.size(); ++i)
        if (!(edge_times[i] > edge_times[i - 1]))
            throw std::invalid_argument("ook_gate: edge_times must be strictly increasing");

    Waveform out = w_clipped;
    std::fill(out.samples.begin(), out.samples.end(), cfg.v_mid);
    for (std::size_t k = 0; k < bits.bits.size(); ++k) {
        if (!bits.bits[k]) continue;
        std::size_t i0 = w_clipped.index_at(edge_times[k]);
        std::size_t i1 = w_clipped.index_at(edge_times[k + 1]);
        for (std::size_t i = i0; i < i1; ++i) out.samples[i] = w_clipped.samples[i];
    }
    return out;
}

// Antenna coupling: a single-pole high-pass that differentiates the slow
// content of the clipped signal and passes the clip corners as pulses.
inline Waveform antenna_couple(const Waveform& w, double hp_corner_hz) {
    return filter_first_order(w, FilterMode::highpass, hp_corner_hz, 1.0);
}

// Additive tone, used to inject the synthesizer leakage spur.
inline void add_spur(Waveform& w, double freq_hz, double power_dbm, double ref_ohms = 50.0) {
    const double amp = std::sqrt(2.0 * dbm_to_power(power_dbm) * ref_ohms);
    const double wrad = 2.0 * kPi * freq_hz;
    for (std::size_t i = 0; i < w.samples.size(); ++i)
        w.samples[i] += amp * std::sin(wrad * (w.t0 + static_cast<double>(i) / w.sample_rate));
}

// Radiated power over DC draw, percent.
inline double chip_efficiency(double p_out_dbm, double p_dc_mw) {
    if (p_dc_mw <= 0.0)
        throw std::invalid_argument("chip_efficiency: p_dc must be > 0");
    return 100.0 * dbm_to_power(p_out_dbm) * 1e3 / p_dc_mw;
}

// DC power over bit rate, pJ/bit.
inline double energy_per_bit_pj(double p_dc_mw, double bit_rate) {
    if (bit_rate <= 0.0)
        throw std::invalid_argument("energy_per_bit_pj: rate must be > 0");
    return p_dc_mw * 1e-3 / bit_rate * 1e12;
}

// Counts onsets of |v| excursions above `level`. An excursion already in
// progress at the first sample is not counted.
inline std::size_t count_pulses(const Waveform& w, double level) {
    std::size_t count = 0;
    bool above = !w.samples.empty() && std::fabs(w.samples.front()) >= level;
    for (double v : w.samples) {
        bool a = std::fabs(v) >= level;
        if (a && !above) ++count;
        above = a;
    }
    return count;
}

}  // namespace uwb
