#pragma once

// Sampled-signal substrate shared by every stage of the simulator:
// real-valued waveforms, PRBS bit sources, single-pole filters and
// the dBm/watt conversions used for power bookkeeping.

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace uwb {

inline constexpr double kPi = 3.14159265358979323846;

// Uniformly sampled voltage signal. t0 is the time of samples[0].
struct Waveform {
    std::vector<double> samples;
    double sample_rate = 0.0;  // Hz
    double t0 = 0.0;           // s

    std::size_t size() const { return samples.size(); }
    double dt() const { return 1.0 / sample_rate; }
    double duration() const { return static_cast<double>(samples.size()) / sample_rate; }
    double time_at(std::size_t i) const { return t0 + static_cast<double>(i) / sample_rate; }
    // Nearest sample index for a time instant, clamped to the record.
    std::size_t index_at(double t) const {
        double x = (t - t0) * sample_rate;
        if (x < 0.0) return 0;
        std::size_t i = static_cast<std::size_t>(std::llround(x));
        return i >= samples.size() ? samples.size() - 1 : i;
    }
};

inline void check_waveform(const Waveform& w, const char* who) {
    if (w.sample_rate <= 0.0)
        throw std::invalid_argument(std::string(who) + ": sample_rate must be > 0");
    if (w.samples.empty())
        throw std::invalid_argument(std::string(who) + ": waveform must hold at least one sample");
    for (double v : w.samples)
        if (!std::isfinite(v))
            throw std::invalid_argument(std::string(who) + ": waveform contains non-finite sample");
}

struct BitStream {
    std::vector<std::uint8_t> bits;
    double bit_rate = 0.0;  // bits/s
};

// ---------------------------------------------------------------------------
// PRBS source (maximal-length Fibonacci LFSR)
// ---------------------------------------------------------------------------

// Feedback tap sets giving maximal-length sequences for registers of
// 2..31 bits. Index = order, value = tap positions (1-based, MSB first).
inline const std::vector<int>& lfsr_taps(int order) {
    static const std::vector<std::vector<int>> table = {
        {},            // 0
        {},            // 1
        {2, 1},        // 2
        {3, 2},        // 3
        {4, 3},        // 4
        {5, 3},        // 5
        {6, 5},        // 6
        {7, 6},        // 7
        {8, 6, 5, 4},  // 8
        {9, 5},        // 9
        {10, 7},       // 10
        {11, 9},       // 11
        {12, 6, 4, 1}, // 12
        {13, 4, 3, 1}, // 13
        {14, 5, 3, 1}, // 14
        {15, 14},      // 15
        {16, 15, 13, 4}, // 16
        {17, 14},      // 17
        {18, 11},      // 18
        {19, 6, 2, 1}, // 19
        {20, 17},      // 20
        {21, 19},      // 21
        {22, 21},      // 22
        {23, 18},      // 23
        {24, 23, 22, 17}, // 24
        {25, 22},      // 25
        {26, 6, 2, 1}, // 26
        {27, 5, 2, 1}, // 27
        {28, 25},      // 28
        {29, 27},      // 29
        {30, 6, 4, 1}, // 30
        {31, 28},      // 31
    };
    if (order < 2 || order > 31)
        throw std::invalid_argument("prbs_generate: unsupported order " + std::to_string(order) +
                                    " (expected 2..31)");
    return table[static_cast<std::size_t>(order)];
}

// n bits of the maximal-length sequence for the given register order.
// Fibonacci form: output is the register MSB, feedback the parity of the
// tapped bits, shifted in at the LSB. Deterministic in (order, seed). A
// zero seed is the LFSR stuck state and is rejected.
inline BitStream prbs_generate(int order, std::uint32_t seed, std::size_t n, double bit_rate = 1.0) {
    const auto& taps = lfsr_taps(order);
    if (n < 1) throw std::invalid_argument("prbs_generate: n must be >= 1");
    const std::uint32_t mask = (order == 31) ? 0x7FFFFFFFu : ((1u << order) - 1u);
    std::uint32_t state = seed & mask;
    if (state == 0u)
        throw std::invalid_argument("prbs_generate: seed must be nonzero in the low 'order' bits");

    BitStream out;
    out.bit_rate = bit_rate;
    out.bits.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.bits[i] = static_cast<std::uint8_t>((state >> (order - 1)) & 1u);
        std::uint32_t fb = 0u;
        for (int t : taps) fb ^= (state >> (t - 1)) & 1u;
        state = ((state << 1) | fb) & mask;
    }
    return out;
}

// ---------------------------------------------------------------------------
// First-order filters (bilinear transform, corner prewarped)
// ---------------------------------------------------------------------------

enum class FilterMode { highpass, lowpass };

// Single-pole filter run over the whole record from zero initial state.
// For lowpass the DC gain equals `gain`; for highpass `gain` is the
// high-frequency passband gain. Prewarping keeps |H| = gain/sqrt(2)
// exactly at the corner.
inline Waveform filter_first_order(const Waveform& w, FilterMode mode, double corner_hz,
                                   double gain = 1.0) {
    check_waveform(w, "filter_first_order");
    if (corner_hz <= 0.0 || corner_hz >= 0.5 * w.sample_rate)
        throw std::invalid_argument("filter_first_order: corner must lie in (0, sample_rate/2)");

    const double k = std::tan(kPi * corner_hz / w.sample_rate);  // wc/(2 fs), prewarped
    const double a = (1.0 - k) / (1.0 + k);

    Waveform out;
    out.sample_rate = w.sample_rate;
    out.t0 = w.t0;
    out.samples.resize(w.samples.size());

    double y1 = 0.0, x1 = 0.0;
    if (mode == FilterMode::lowpass) {
        const double b = k / (1.0 + k);
        for (std::size_t i = 0; i < w.samples.size(); ++i) {
            const double x = w.samples[i];
            const double y = a * y1 + gain * b * (x + x1);
            out.samples[i] = y;
            y1 = y;
            x1 = x;
        }
    } else {
        const double b = 1.0 / (1.0 + k);
        for (std::size_t i = 0; i < w.samples.size(); ++i) {
            const double x = w.samples[i];
            const double y = a * y1 + gain * b * (x - x1);
            out.samples[i] = y;
            y1 = y;
            x1 = x;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Power conversions
// ---------------------------------------------------------------------------

inline double power_to_dbm(double watts) {
    if (watts <= 0.0)
        throw std::invalid_argument("power_to_dbm: power must be > 0");
    return 10.0 * std::log10(watts / 1e-3);
}

inline double dbm_to_power(double dbm) { return 1e-3 * std::pow(10.0, dbm / 10.0); }

// Mean power of a record into a reference resistance, watts.
inline double mean_power_watts(const Waveform& w, double ref_ohms = 50.0) {
    double acc = 0.0;
    for (double v : w.samples) acc += v * v;
    return acc / (static_cast<double>(w.samples.size()) * ref_ohms);
}

// ---------------------------------------------------------------------------
// Raw waveform dump
// Layout: magic "UWBW", u32 version, f64 sample_rate, u64 n, n x f64 samples,
// all little-endian.
// ---------------------------------------------------------------------------

inline constexpr std::uint32_t kWaveformDumpVersion = 1;

inline void dump_waveform(const Waveform& w, const std::string& path) {
    check_waveform(w, "dump_waveform");
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("dump_waveform: cannot open " + path);
    f.write("UWBW", 4);
    std::uint32_t version = kWaveformDumpVersion;
    f.write(reinterpret_cast<const char*>(&version), sizeof version);
    f.write(reinterpret_cast<const char*>(&w.sample_rate), sizeof w.sample_rate);
    std::uint64_t n = w.samples.size();
    f.write(reinterpret_cast<const char*>(&n), sizeof n);
    f.write(reinterpret_cast<const char*>(w.samples.data()),
            static_cast<std::streamsize>(n * sizeof(double)));
    if (!f) throw std::runtime_error("dump_waveform: write failed for " + path);
}

inline Waveform load_waveform(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("load_waveform: cannot open " + path);
    char magic[4] = {};
    f.read(magic, 4);
    if (!f || std::memcmp(magic, "UWBW", 4) != 0)
        throw std::runtime_error("load_waveform: bad magic in " + path);
    std::uint32_t version = 0;
    f.read(reinterpret_cast<char*>(&version), sizeof version);
    if (!f || version != kWaveformDumpVersion)
        throw std::runtime_error("load_waveform: unsupported version in " + path);
    Waveform w;
    f.read(reinterpret_cast<char*>(&w.sample_rate), sizeof w.sample_rate);
    std::uint64_t n = 0;
    f.read(reinterpret_cast<char*>(&n), sizeof n);
    if (!f) throw std::runtime_error("load_waveform: truncated header in " + path);
    w.samples.resize(n);
    f.read(reinterpret_cast<char*>(w.samples.data()),
           static_cast<std::streamsize>(n * sizeof(double)));
    if (!f) throw std::runtime_error("load_waveform: truncated samples in " + path);
    check_waveform(w, "load_waveform");
    return w;
}

}  // namespace uwb
