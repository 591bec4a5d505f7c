#pragma once

// Spectral mask bookkeeping: band limits in dBm/MHz, margin evaluation
// against a measured spectrum, and the CSV representation the CLI ships
// the regulatory constants in.

#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "uwb/spectrum.hpp"

namespace uwb {

struct MaskBand {
    double f_lo = 0.0;
    double f_hi = 0.0;
    double limit_dbm_per_mhz = 0.0;
};

struct SpectralMask {
    std::vector<MaskBand> bands;
};

inline void check_mask(const SpectralMask& m, const char* who) {
    if (m.bands.empty())
        throw std::invalid_argument(std::string(who) + ": mask has no bands");
    for (std::size_t i = 0; i < m.bands.size(); ++i) {
        const auto& b = m.bands[i];
        if (!(b.f_lo >= 0.0 && b.f_lo < b.f_hi) || !std::isfinite(b.limit_dbm_per_mhz))
            throw std::invalid_argument(std::string(who) + ": invalid band entry");
        if (i > 0 && b.f_lo < m.bands[i - 1].f_hi)
            throw std::invalid_argument(std::string(who) + ": bands must be sorted and disjoint");
    }
}

// FCC indoor UWB limits; external-standard constants, shipped as an
// editable data file but also available as the built-in default.
inline SpectralMask fcc_indoor_mask() {
    SpectralMask m;
    m.bands = {
        {0.96e9, 1.61e9, -75.3},
        {1.61e9, 1.99e9, -53.3},
        {1.99e9, 3.1e9, -51.3},
        {3.1e9, 10.6e9, -41.3},
        {10.6e9, 20e9, -51.3},
    };
    return m;
}

inline SpectralMask load_mask(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("load_mask: cannot open " + path);
    SpectralMask m;
    std::string line;
    while (std::getline(f, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ss(line);
        std::string cell;
        std::vector<double> vals;
        while (std::getline(ss, cell, ',')) {
            // skip the header row
            if (cell.find_first_not_of(" \t\r") == std::string::npos) continue;
            try {
                vals.push_back(std::stod(cell));
            } catch (const std::exception&) {
                vals.clear();
                break;
            }
        }
        if (vals.size() == 3) m.bands.push_back({vals[0], vals[1], vals[2]});
    }
    check_mask(m, "load_mask");
    return m;
}

inline void save_mask(const SpectralMask& m, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("save_mask: cannot open " + path);
    f << "f_lo_hz,f_hi_hz,limit_dbm_per_mhz\n";
    char buf[128];
    for (const auto& b : m.bands) {
        std::snprintf(buf, sizeof buf, "%.6g,%.6g,%.4g\n", b.f_lo, b.f_hi, b.limit_dbm_per_mhz);
        f << buf;
    }
}

struct MaskBandResult {
    MaskBand band;
    bool evaluated = false;
    double margin_db = 0.0;  // limit minus the in-band PSD maximum
};

struct MaskCheckResult {
    std::vector<MaskBandResult> bands;
    bool pass = false;
    double min_margin_db = 0.0;  // over evaluated bands
};

// Margin per band = limit - max PSD inside the band. Bands outside the
// spectrum span are flagged unevaluated; that is an error unless the
// caller opts into a partial verdict.
inline MaskCheckResult mask_check(const Spectrum& s, const SpectralMask& m, bool partial = false) {
    check_mask(m, "mask_check");
    if (s.bin_freqs.size() < 2)
        throw std::invalid_argument("mask_check: spectrum needs at least two bins");

    MaskCheckResult res;
    res.pass = true;
    res.min_margin_db = 1e9;
    bool any_unevaluated = false;
    for (const auto& band : m.bands) {
        MaskBandResult r;
        r.band = band;
        if (band.f_lo < s.bin_freqs.front() || band.f_hi > s.bin_freqs.back()) {
            r.evaluated = false;
            any_unevaluated = true;
        } else {
            double peak = kPsdFloorDbmPerMhz;
            for (std::size_t k = 0; k < s.bin_freqs.size(); ++k)
                if (s.bin_freqs[k] >= band.f_lo && s.bin_freqs[k] <= band.f_hi)
                    peak = std::max(peak, s.psd_dbm_per_mhz[k]);
            r.evaluated = true;
            r.margin_db = band.limit_dbm_per_mhz - peak;
            res.min_margin_db = std::min(res.min_margin_db, r.margin_db);
            if (r.margin_db < 0.0) res.pass = false;
        }
        res.bands.push_back(r);
    }
    if (any_unevaluated && !partial)
        throw std::runtime_error(
            "mask_check: spectrum narrower than the mask span; pass --partial to evaluate the "
            "covered bands only");
    return res;
}

}  // namespace uwb
