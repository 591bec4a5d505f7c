#pragma once

// Welch-averaged one-sided power spectral density, calibrated to dBm/MHz
// into a reference resistance, plus band-power integration over it.

#include <algorithm>
#include <complex>
#include <vector>

#include "uwb/waveform.hpp"

namespace uwb {

// PSD values below this floor are clamped so that silent bins stay
// representable in dB.
inline constexpr double kPsdFloorDbmPerMhz = -300.0;

struct Spectrum {
    std::vector<double> bin_freqs;         // Hz, uniform ascending
    std::vector<double> psd_dbm_per_mhz;   // one-sided
    double rbw_hz = 0.0;                   // equivalent noise bandwidth of a bin

    double bin_width() const { return bin_freqs.size() > 1 ? bin_freqs[1] - bin_freqs[0] : 0.0; }
};

enum class Window { hann, rect };

namespace detail {

// In-place iterative radix-2 FFT. n must be a power of two.
inline void fft_radix2(std::vector<std::complex<double>>& a) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = -2.0 * kPi / static_cast<double>(len);
        const std::complex<double> wlen(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                auto u = a[i + k];
                auto v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
}

inline std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

}  // namespace detail

// Welch PSD of a record. Segments of `segment_len` samples overlap by
// `overlap_fraction`; each is windowed, zero-padded to the next power of
// two and averaged in power. Calibration: 10*log10(V^2/Hz / R * 1e9)
// gives dBm/MHz into `ref_ohms`.
inline Spectrum welch_psd(const Waveform& w, std::size_t segment_len, double overlap_fraction,
                          Window window, double ref_ohms = 50.0) {
    check_waveform(w, "welch_psd");
    if (segment_len < 2 || segment_len > w.samples.size())
        throw std::invalid_argument("welch_psd: segment_len must be in [2, waveform length]");
    if (overlap_fraction < 0.0 || overlap_fraction >= 1.0)
        throw std::invalid_argument("welch_psd: overlap_fraction must be in [0, 1)");
    if (ref_ohms <= 0.0)
        throw std::invalid_argument("welch_psd: ref_ohms must be > 0");

    std::vector<double> win(segment_len, 1.0);
    if (window == Window::hann) {
        for (std::size_t i = 0; i < segment_len; ++i)
            win[i] = 0.5 - 0.5 * std::cos(2.0 * kPi * static_cast<double>(i) /
                                          static_cast<double>(segment_len - 1));
    }
    double wsum = 0.0, w2sum = 0.0;
    for (double v : win) {
        wsum += v;
        w2sum += v * v;
    }

    const std::size_t hop = std::max<std::size_t>(
        1, segment_len - static_cast<std::size_t>(std::floor(overlap_fraction *
                                                             static_cast<double>(segment_len))));
    const std::size_t nfft = detail::next_pow2(segment_len);
    const std::size_t nbins = nfft / 2 + 1;
    const double fs = w.sample_rate;

    std::vector<double> pacc(nbins, 0.0);
    std::size_t nseg = 0;
    std::vector<std::complex<double>> buf(nfft);
    for (std::size_t start = 0; start + segment_len <= w.samples.size(); start += hop) {
        std::fill(buf.begin(), buf.end(), std::complex<double>(0.0, 0.0));
        for (std::size_t i = 0; i < segment_len; ++i)
            buf[i] = std::complex<double>(w.samples[start + i] * win[i], 0.0);
        detail::fft_radix2(buf);
        for (std::size_t k = 0; k < nbins; ++k) pacc[k] += std::norm(buf[k]);
        ++nseg;
    }

    Spectrum s;
    s.rbw_hz = fs * w2sum / (wsum * wsum);  // window equivalent noise bandwidth
    s.bin_freqs.resize(nbins);
    s.psd_dbm_per_mhz.resize(nbins);
    const double df = fs / static_cast<double>(nfft);
    // V^2/Hz -> dBm/MHz into ref_ohms: +10log10(1e9/R)
    const double cal_db = 10.0 * std::log10(1e9 / ref_ohms);
    for (std::size_t k = 0; k < nbins; ++k) {
        s.bin_freqs[k] = df * static_cast<double>(k);
        double p = pacc[k] / (static_cast<double>(nseg) * fs * w2sum);
        if (k != 0 && k != nbins - 1) p *= 2.0;  // one-sided
        double db = (p > 0.0) ? 10.0 * std::log10(p) + cal_db : kPsdFloorDbmPerMhz;
        s.psd_dbm_per_mhz[k] = std::max(db, kPsdFloorDbmPerMhz);
    }
    return s;
}

// Trapezoidal integral of the linear PSD over [f_lo, f_hi], in dBm.
// Band edges between bins are handled by linear interpolation of the
// linear-scale density.
inline double band_power_dbm(const Spectrum& s, double f_lo, double f_hi) {
    if (s.bin_freqs.size() < 2)
        throw std::invalid_argument("band_power_dbm: spectrum needs at least two bins");
    if (!(f_lo < f_hi))
        throw std::invalid_argument("band_power_dbm: require f_lo < f_hi");
    if (f_lo < s.bin_freqs.front() || f_hi > s.bin_freqs.back())
        throw std::invalid_argument("band_power_dbm: band outside spectrum span");

    const double df = s.bin_width();
    auto lin = [&](std::size_t k) {
        return std::pow(10.0, s.psd_dbm_per_mhz[k] / 10.0);  // mW/MHz
    };
    auto lin_at = [&](double f) {
        double x = (f - s.bin_freqs.front()) / df;
        std::size_t k = std::min(static_cast<std::size_t>(x), s.bin_freqs.size() - 2);
        double frac = x - static_cast<double>(k);
        return lin(k) * (1.0 - frac) + lin(k + 1) * frac;
    };

    // Integrate in MHz so the density units cancel to mW.
    double acc = 0.0;
    std::size_t k0 = static_cast<std::size_t>(std::ceil((f_lo - s.bin_freqs.front()) / df));
    std::size_t k1 = static_cast<std::size_t>(std::floor((f_hi - s.bin_freqs.front()) / df));
    if (k0 > k1 || k0 >= s.bin_freqs.size()) {
        // band inside one bin gap
        acc = 0.5 * (lin_at(f_lo) + lin_at(f_hi)) * (f_hi - f_lo) / 1e6;
    } else {
        if (s.bin_freqs[k0] > f_lo)
            acc += 0.5 * (lin_at(f_lo) + lin(k0)) * (s.bin_freqs[k0] - f_lo) / 1e6;
        for (std::size_t k = k0; k < k1; ++k)
            acc += 0.5 * (lin(k) + lin(k + 1)) * df / 1e6;
        if (f_hi > s.bin_freqs[k1])
            acc += 0.5 * (lin(k1) + lin_at(f_hi)) * (f_hi - s.bin_freqs[k1]) / 1e6;
    }
    if (acc <= 0.0) return kPsdFloorDbmPerMhz;
    return 10.0 * std::log10(acc);
}

// Outermost frequencies at which the PSD is within `rel_db` of its peak.
struct OccupiedBand {
    double f_lo = 0.0;
    double f_hi = 0.0;
    double peak_dbm_per_mhz = kPsdFloorDbmPerMhz;
    double peak_freq = 0.0;
};

inline OccupiedBand occupied_band(const Spectrum& s, double rel_db = 10.0) {
    if (s.bin_freqs.empty())
        throw std::invalid_argument("occupied_band: empty spectrum");
    OccupiedBand b;
    std::size_t kpk = 0;
    for (std::size_t k = 0; k < s.psd_dbm_per_mhz.size(); ++k) {
        if (s.psd_dbm_per_mhz[k] > b.peak_dbm_per_mhz) {
            b.peak_dbm_per_mhz = s.psd_dbm_per_mhz[k];
            kpk = k;
        }
    }
    b.peak_freq = s.bin_freqs[kpk];
    const double thr = b.peak_dbm_per_mhz - rel_db;
    std::size_t lo = kpk, hi = kpk;
    for (std::size_t k = 0; k < s.psd_dbm_per_mhz.size(); ++k) {
        if (s.psd_dbm_per_mhz[k] >= thr) {
            lo = std::min(lo, k);
            hi = std::max(hi, k);
        }
    }
    b.f_lo = s.bin_freqs[lo];
    b.f_hi = s.bin_freqs[hi];
    return b;
}

}  // namespace uwb
