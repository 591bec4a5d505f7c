#pragma once

// Receiver-side detection: notch-triggered segmented capture, the
// correlated-sampling slope detector, bit recovery from detection
// timestamps, pulse-group averaging and BER statistics, plus the analytic
// OOK reference curve.

#include <algorithm>
#include <vector>

#include "uwb/waveform.hpp"

namespace uwb {

struct DetectionConfig {
    double notch_width_max = 500e-12;  // s
    double trigger_level = 0.0;        // V; <= 0 means derive from noise
    double segment_len = 10e-9;        // s
    double cds_spacing = 100e-12;      // s
    double slope_threshold = 0.0;      // V; <= 0 means derive from noise
    double integ_window = 1.0e-9;      // s, envelope-detector integration time
};

inline void check_detection(const DetectionConfig& c, const char* who) {
    if (c.notch_width_max <= 0.0 || c.segment_len <= 0.0 || c.cds_spacing <= 0.0)
        throw std::invalid_argument(std::string(who) + ": durations must be > 0");
    if (2.0 * c.cds_spacing >= c.segment_len)
        throw std::invalid_argument(std::string(who) + ": need 2*cds_spacing < segment_len");
}

// Times at which |v| crosses trigger_level and returns inside
// notch_width_max. A refractory window of segment_len follows each
// trigger, mirroring the scope's segmented storage.
inline std::vector<double> notch_triggers(const Waveform& w, const DetectionConfig& cfg) {
    check_waveform(w, "notch_triggers");
    check_detection(cfg, "notch_triggers");
    if (1.0 / w.sample_rate > cfg.cds_spacing / 4.0)
        throw std::invalid_argument("notch_triggers: sample period must be <= cds_spacing/4");
    if (cfg.trigger_level <= 0.0)
        throw std::invalid_argument("notch_triggers: trigger_level must be set > 0");

    std::vector<double> out;
    const double dt = w.dt();
    const std::size_t max_width = static_cast<std::size_t>(cfg.notch_width_max / dt);
    const std::size_t refractory = static_cast<std::size_t>(cfg.segment_len / dt);
    std::size_t i = 0;
    const std::size_t n = w.samples.size();
    while (i < n) {
        if (std::fabs(w.samples[i]) >= cfg.trigger_level) {
            std::size_t j = i;
            while (j < n && std::fabs(w.samples[j]) >= cfg.trigger_level) ++j;
            if (j - i <= max_width && j < n) {
                out.push_back(w.time_at(i));
                i += refractory;
                continue;
            }
            i = j;
        } else {
            ++i;
        }
    }
    return out;
}

struct Segment {
    std::vector<double> samples;
    double sample_rate = 0.0;
    double timestamp = 0.0;  // trigger time
    double t_start = 0.0;    // time of samples[0]
};

struct CaptureResult {
    std::vector<Segment> segments;
    std::size_t dropped = 0;  // triggers too close to the record edge
};

// One segment of segment_len per trigger, centered on the trigger time.
inline CaptureResult capture_segments(const Waveform& w, const std::vector<double>& triggers,
                                      const DetectionConfig& cfg) {
    check_waveform(w, "capture_segments");
    check_detection(cfg, "capture_segments");
    CaptureResult res;
    const std::size_t len =
        static_cast<std::size_t>(std::llround(cfg.segment_len * w.sample_rate));
    for (double t : triggers) {
        if (t < w.t0 || t > w.t0 + w.duration())
            throw std::invalid_argument("capture_segments: trigger outside waveform span");
        const double start_t = t - 0.5 * cfg.segment_len;
        const double idx = (start_t - w.t0) * w.sample_rate;
        if (idx < 0.0 || static_cast<double>(w.samples.size()) < idx + static_cast<double>(len)) {
            ++res.dropped;
            continue;
        }
        Segment seg;
        seg.sample_rate = w.sample_rate;
        seg.timestamp = t;
        seg.t_start = start_t;
        const std::size_t i0 = static_cast<std::size_t>(std::llround(idx));
        seg.samples.assign(w.samples.begin() + static_cast<std::ptrdiff_t>(i0),
                           w.samples.begin() + static_cast<std::ptrdiff_t>(i0 + len));
        res.segments.push_back(std::move(seg));
    }
    return res;
}

// Correlated-sampling slope detector. Three samples are read at the
// segment's dominant peak minus one spacing, then +spacing, +2*spacing;
// a pulse is flagged when the first interval rises by at least the
// threshold and the second does not.
inline bool cds_detect(const Segment& seg, const DetectionConfig& cfg) {
    check_detection(cfg, "cds_detect");
    if (seg.sample_rate <= 0.0 || seg.samples.size() < 2)
        throw std::invalid_argument("cds_detect: invalid segment");
    const double span = static_cast<double>(seg.samples.size() - 1) / seg.sample_rate;
    if (span < 2.0 * cfg.cds_spacing)
        throw std::invalid_argument("cds_detect: segment shorter than 2*cds_spacing");
    if (cfg.slope_threshold <= 0.0)
        throw std::invalid_argument("cds_detect: slope_threshold must be set > 0");

    const std::size_t step =
        std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(cfg.cds_spacing * seg.sample_rate)));
    std::size_t kpk = 0;
    double best = -1.0;
    for (std::size_t i = 0; i < seg.samples.size(); ++i) {
        if (std::fabs(seg.samples[i]) > best) {
            best = std::fabs(seg.samples[i]);
            kpk = i;
        }
    }
    const double sign = seg.samples[kpk] >= 0.0 ? 1.0 : -1.0;
    // Align the triple so it straddles the peak.
    std::size_t i0 = (kpk >= step) ? kpk - step : 0;
    if (i0 + 2 * step >= seg.samples.size()) {
        if (seg.samples.size() <= 2 * step) return false;
        i0 = seg.samples.size() - 1 - 2 * step;
    }
    const double v0 = sign * seg.samples[i0];
    const double v1 = sign * seg.samples[i0 + step];
    const double v2 = sign * seg.samples[i0 + 2 * step];
    const bool edge1 = (v1 - v0) >= cfg.slope_threshold;
    const bool edge2 = (v2 - v1) >= cfg.slope_threshold;
    return edge1 && !edge2;
}

// Bit slots of width 1/bit_rate starting at t_origin; a slot reads 1 iff
// some detection timestamp falls inside it.
inline BitStream recover_bits(const std::vector<double>& detection_times, double bit_rate,
                              std::size_t n_expected, double t_origin = 0.0) {
    if (bit_rate <= 0.0)
        throw std::invalid_argument("recover_bits: bit_rate must be > 0");
    BitStream out;
    out.bit_rate = bit_rate;
    out.bits.assign(n_expected, 0);
    for (double t : detection_times) {
        const double x = (t - t_origin) * bit_rate;
        if (x < 0.0) continue;
        const std::size_t k = static_cast<std::size_t>(x);
        if (k < n_expected) out.bits[k] = 1;
    }
    return out;
}

// Averaged-amplitude bit decision over one group of pulse peaks.
inline int average_pulses(const std::vector<double>& peak_amps, std::size_t n_avg,
                          double threshold) {
    if (n_avg < 1)
        throw std::invalid_argument("average_pulses: n_avg must be >= 1");
    if (peak_amps.size() != n_avg)
        throw std::invalid_argument("average_pulses: amplitude count must equal n_avg");
    double mean = 0.0;
    for (double a : peak_amps) mean += a;
    mean /= static_cast<double>(n_avg);
    return mean >= threshold ? 1 : 0;
}

struct BerResult {
    std::size_t n_bits = 0;
    std::size_t n_errors = 0;
    double ber = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 0.0;
};

// Hamming error rate with the Wilson 95% score interval.
inline BerResult ber_compute(const BitStream& tx, const BitStream& rx) {
    if (tx.bits.size() != rx.bits.size())
        throw std::invalid_argument("ber_compute: stream lengths differ");
    if (tx.bits.empty())
        throw std::invalid_argument("ber_compute: empty streams");
    BerResult r;
    r.n_bits = tx.bits.size();
    for (std::size_t i = 0; i < tx.bits.size(); ++i)
        if ((tx.bits[i] != 0) != (rx.bits[i] != 0)) ++r.n_errors;
    const double n = static_cast<double>(r.n_bits);
    const double p = static_cast<double>(r.n_errors) / n;
    r.ber = p;
    const double z = 1.959963985;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (p + z2 / (2.0 * n)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    r.ci_lo = (r.n_errors == 0) ? 0.0 : std::max(0.0, center - half);
    r.ci_hi = (r.n_errors == r.n_bits) ? 1.0 : std::min(1.0, center + half);
    return r;
}

// Merge of independent trials: counts add, interval recomputed.
inline BerResult ber_merge(const BerResult& a, const BerResult& b) {
    BitStream tx, rx;
    tx.bit_rate = rx.bit_rate = 1.0;
    tx.bits.assign(a.n_bits + b.n_bits, 0);
    rx.bits.assign(a.n_bits + b.n_bits, 0);
    for (std::size_t i = 0; i < a.n_errors + b.n_errors; ++i) rx.bits[i] = 1;
    return ber_compute(tx, rx);
}

inline double gaussian_q(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

// Analytic OOK error rate Q(sqrt(2*gamma)) at the given SNR in dB.
inline double analytic_ook_ber(double snr_db) {
    const double gamma = std::pow(10.0, snr_db / 10.0);
    return gaussian_q(std::sqrt(2.0 * gamma));
}

}  // namespace uwb
