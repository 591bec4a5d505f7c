#pragma once

// Over-the-air path: flat free-space attenuation calibrated by a single
// composite antenna/mismatch gain, band responses at both ends modeled as
// second-order edges, and additive white Gaussian noise at a configured
// density.

#include <random>

#include "uwb/waveform.hpp"

namespace uwb {

struct ChannelConfig {
    double distance = 1.0;              // m
    double center_freq = 4e9;           // Hz, frequency at which the flat loss is taken
    double tx_band_lo = 3.3e9;          // Hz
    double tx_band_hi = 8e9;            // Hz
    double rx_band_lo = 2.4e9;          // Hz
    double rx_band_hi = 8e9;            // Hz
    double gain_cal_db = -13.5;         // dB, composite antenna gains and mismatch
    double noise_density_dbm_hz = -161.8;
    double analysis_bandwidth = 1.5e9;  // Hz, cap for the noise-floor integration
    std::uint64_t rng_seed = 1;
};

inline void check_channel(const ChannelConfig& c, const char* who) {
    if (c.distance <= 0.0)
        throw std::invalid_argument(std::string(who) + ": distance must be > 0");
    if (!(c.tx_band_lo > 0.0 && c.tx_band_lo < c.tx_band_hi))
        throw std::invalid_argument(std::string(who) + ": invalid tx_band");
    if (!(c.rx_band_lo > 0.0 && c.rx_band_lo < c.rx_band_hi))
        throw std::invalid_argument(std::string(who) + ": invalid rx_band");
    if (!std::isfinite(c.noise_density_dbm_hz))
        throw std::invalid_argument(std::string(who) + ": noise_density must be finite");
    if (c.center_freq <= 0.0 || c.analysis_bandwidth <= 0.0)
        throw std::invalid_argument(std::string(who) + ": invalid center_freq/analysis_bandwidth");
}

inline constexpr double kSpeedOfLight = 299792458.0;

inline double free_space_path_loss_db(double distance_m, double freq_hz) {
    if (distance_m <= 0.0 || freq_hz <= 0.0)
        throw std::invalid_argument("free_space_path_loss_db: arguments must be > 0");
    return 20.0 * std::log10(4.0 * kPi * distance_m * freq_hz / kSpeedOfLight);
}

struct RxBudget {
    double rx_power_dbm = 0.0;
    double noise_floor_dbm = 0.0;
    double snr_db = 0.0;
};

inline RxBudget rx_power_budget(double p_out_dbm, const ChannelConfig& cfg) {
    check_channel(cfg, "rx_power_budget");
    RxBudget b;
    b.rx_power_dbm =
        p_out_dbm - free_space_path_loss_db(cfg.distance, cfg.center_freq) + cfg.gain_cal_db;
    const double bw = std::min(cfg.rx_band_hi - cfg.rx_band_lo, cfg.analysis_bandwidth);
    b.noise_floor_dbm = cfg.noise_density_dbm_hz + 10.0 * std::log10(bw);
    b.snr_db = b.rx_power_dbm - b.noise_floor_dbm;
    return b;
}

namespace detail {

// Biquad section evaluated in direct form I. Band edges use Q = 0.8,
// a knee slightly sharper than Butterworth with under 0.3 dB of
// passband peaking.
struct Biquad {
    double b0, b1, b2, a1, a2;
    double x1 = 0.0, x2 = 0.0, y1 = 0.0, y2 = 0.0;

    double step(double x) {
        double y = b0 * x + b1 * x1 + b2 * x2 - a1 * y1 - a2 * y2;
        x2 = x1;
        x1 = x;
        y2 = y1;
        y1 = y;
        return y;
    }
};

inline constexpr double kBandEdgeQ = 0.8;

inline Biquad biquad_lowpass(double fc, double fs, double q = kBandEdgeQ) {
    const double k = std::tan(kPi * fc / fs);
    const double norm = 1.0 / (1.0 + k / q + k * k);
    Biquad f{};
    f.b0 = k * k * norm;
    f.b1 = 2.0 * f.b0;
    f.b2 = f.b0;
    f.a1 = 2.0 * (k * k - 1.0) * norm;
    f.a2 = (1.0 - k / q + k * k) * norm;
    return f;
}

inline Biquad biquad_highpass(double fc, double fs, double q = kBandEdgeQ) {
    const double k = std::tan(kPi * fc / fs);
    const double norm = 1.0 / (1.0 + k / q + k * k);
    Biquad f{};
    f.b0 = norm;
    f.b1 = -2.0 * norm;
    f.b2 = norm;
    f.a1 = 2.0 * (k * k - 1.0) * norm;
    f.a2 = (1.0 - k / q + k * k) * norm;
    return f;
}

}  // namespace detail

// Second-order band edges applied in cascade (highpass at f_lo, lowpass
// at f_hi), zero initial state.
inline Waveform band_limit(const Waveform& w, double f_lo, double f_hi) {
    check_waveform(w, "band_limit");
    if (!(f_lo > 0.0 && f_lo < f_hi))
        throw std::invalid_argument("band_limit: require 0 < f_lo < f_hi");
    if (f_hi >= 0.5 * w.sample_rate)
        throw std::invalid_argument("band_limit: f_hi must be below Nyquist");
    auto hp = detail::biquad_highpass(f_lo, w.sample_rate);
    auto lp = detail::biquad_lowpass(f_hi, w.sample_rate);
    Waveform out = w;
    for (double& v : out.samples) v = lp.step(hp.step(v));
    return out;
}

// Deterministic per-trial seed split for parallel Monte Carlo streams.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (index + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// TX band limit -> flat attenuation at the band center -> RX band limit
// -> additive white Gaussian noise of the configured density across the
// Nyquist band. Deterministic under rng_seed.
inline Waveform apply_channel(const Waveform& w, const ChannelConfig& cfg,
                              double ref_ohms = 50.0) {
    check_waveform(w, "apply_channel");
    check_channel(cfg, "apply_channel");
    if (w.sample_rate < 2.0 * cfg.rx_band_hi)
        throw std::invalid_argument("apply_channel: sample_rate must cover 2x the RX band edge");

    Waveform out = band_limit(w, cfg.tx_band_lo, cfg.tx_band_hi);
    const double loss_db =
        free_space_path_loss_db(cfg.distance, cfg.center_freq) - cfg.gain_cal_db;
    const double scale = std::pow(10.0, -loss_db / 20.0);
    for (double& v : out.samples) v *= scale;
    out = band_limit(out, cfg.rx_band_lo, cfg.rx_band_hi);

    const double n0_w_hz = dbm_to_power(cfg.noise_density_dbm_hz);
    const double sigma = std::sqrt(n0_w_hz * 0.5 * w.sample_rate * ref_ohms);
    if (sigma > 0.0) {
        std::mt19937_64 rng(cfg.rng_seed);
        std::normal_distribution<double> dist(0.0, sigma);
        for (double& v : out.samples) v += dist(rng);
    }
    return out;
}

}  // namespace uwb
