// Acceptance suite: one pass/fail line per criterion, exit code equals
// the number of failures. Tolerances are pinned in code next to each
// check.

#include <cstdarg>
#include <cstdio>
#include <cmath>
#include <random>
#include <string>

#include "uwb/runner.hpp"

using namespace uwb;

namespace {

int g_failures = 0;

void criterion(int num, const std::string& name, bool pass, const std::string& detail) {
    std::printf("[%s] criterion %2d: %s  (%s)\n", pass ? "PASS" : "FAIL", num, name.c_str(),
                detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list args;
    va_start(args, f);
    std::vsnprintf(buf, sizeof buf, f, args);
    va_end(args);
    return buf;
}

Scenario load_preset(const char* name) {
    return load_scenario(std::string(UWBSIM_DATA_DIR) + "/scenarios/" + name);
}

double pout_for_snr(const Scenario& sc, double snr) {
    const double fspl = free_space_path_loss_db(sc.channel.distance, sc.channel.center_freq);
    const double nf = rx_power_budget(0.0, sc.channel).noise_floor_dbm;
    return snr + nf + fspl - sc.channel.gain_cal_db;
}

// Log-linear interpolation of the BER-vs-SNR curve's crossing of `target`.
double ber_crossing(Scenario base, int n_avg, double snr_lo, double snr_hi, double step,
                    double target) {
    double prev_snr = snr_lo, prev_ber = 1.0;
    for (double snr = snr_lo; snr <= snr_hi + 1e-9; snr += step) {
        Scenario sc = base;
        sc.n_avg = static_cast<std::size_t>(n_avg);
        sc.p_out_dbm = pout_for_snr(sc, snr);
        sc.seed = 1000 + static_cast<std::uint64_t>(std::lround(snr * 8)) + n_avg;
        const auto rep = run_scenario(sc);
        const double ber = rep.ber.ber > 0.0 ? rep.ber.ber : 0.5 / static_cast<double>(rep.ber.n_bits);
        if (ber <= target && prev_ber > target) {
            const double f = (std::log10(prev_ber) - std::log10(target)) /
                             (std::log10(prev_ber) - std::log10(ber));
            return prev_snr + f * (snr - prev_snr);
        }
        prev_snr = snr;
        prev_ber = ber;
    }
    return 1e9;
}

}  // namespace

int main() {
    // 1. efficiency formulas ------------------------------------------------
    {
        const double ss = steady_state_efficiency(50.0, 50.0);
        const double chip = chip_efficiency(-1.0, 3.72);
        criterion(1, "efficiency formulas", ss == 50.0 && std::fabs(chip - 21.35) <= 0.1,
                  fmt("steady %.4f %%, chip %.4f %%", ss, chip));
    }

    // 2. 2Q identity ----------------------------------------------------------
    {
        std::mt19937 rng(2024);
        std::uniform_real_distribution<double> lL(std::log(1e-9), std::log(1e-6));
        std::uniform_real_distribution<double> lC(std::log(1e-13), std::log(1e-9));
        std::uniform_real_distribution<double> lR(std::log(0.1), std::log(1e3));
        double worst = 0.0;
        for (int i = 0; i < 1000; ++i) {
            TankParams p;
            p.inductance = std::exp(lL(rng));
            p.capacitance = std::exp(lC(rng));
            p.r_loss = std::exp(lR(rng));
            p.r_antenna = std::exp(lR(rng));
            const double rel = std::fabs(p.omega0() / p.alpha() - 2.0 * p.quality()) /
                               (2.0 * p.quality());
            worst = std::max(worst, rel);
        }
        criterion(2, "2Q identity", worst < 1e-9, fmt("worst relative error %.2e", worst));
    }

    // 3. transient-vs-steady gap ------------------------------------------------
    {
        TankParams p;
        p.r_loss = p.r_antenna = 1.437169;  // Q = 20, symmetric split
        PulseBurstSpec spec{3.0 / p.f0()};
        const double eta = transient_pulse_efficiency(p, spec);

        // independent route: numerical energy integration of the envelope
        // model at 80 GS/s
        const double fs = 80e9;
        const std::size_t n = static_cast<std::size_t>(spec.t_p * fs);
        double e_out = 0.0;
        const double eta_ss = steady_state_efficiency(p.r_loss, p.r_antenna);
        for (std::size_t i = 0; i <= n; ++i) {
            const double t = static_cast<double>(i) / fs;
            const double w = (i == 0 || i == n) ? 0.5 : 1.0;  // trapezoid
            e_out += w * eta_ss * tank_onoff_envelope(p, spec, t) / fs;
        }
        const double eta_sim = e_out / spec.t_p;
        const bool pass = std::fabs(eta - 10.2) <= 0.2 &&
                          std::fabs(eta_sim - eta) / eta <= 0.01;
        criterion(3, "transient efficiency gap", pass,
                  fmt("closed form %.3f %%, energy simulation %.3f %%", eta, eta_sim));
    }

    // 4. clipped-pulse rate --------------------------------------------------------
    Scenario wired = load_preset("wired_wired_default.scn");
    LinkReport wired_rep;
    {
        wired_rep = run_scenario(wired);
        const double rate = wired_rep.pulse_rate_hz;
        criterion(4, "clipped-pulse rate", std::fabs(rate - 1.83e9) / 1.83e9 <= 0.01,
                  fmt("%.4f GHz in \"1\" windows", rate / 1e9));
    }

    // 5. spectrum occupancy and mask --------------------------------------------------
    {
        const bool band_ok =
            wired_rep.occupied_lo_hz >= 2.7e9 && wired_rep.occupied_hi_hz <= 5.3e9;
        const bool mask_ok = wired_rep.pass_mask && wired_rep.mask.min_margin_db >= 0.0;
        criterion(5, "occupied band and FCC mask", band_ok && mask_ok,
                  fmt("-10 dB band [%.3f, %.3f] GHz, min margin %.2f dB",
                      wired_rep.occupied_lo_hz / 1e9, wired_rep.occupied_hi_hz / 1e9,
                      wired_rep.mask.min_margin_db));
    }

    // 6. link budget --------------------------------------------------------------------
    {
        ChannelConfig ch;  // defaults: 1 m, 4 GHz center, gain_cal -13.5 dB
        const auto b = rx_power_budget(-1.0, ch);
        const bool pass = std::fabs(b.rx_power_dbm - (-59.0)) <= 0.5 &&
                          std::fabs(b.noise_floor_dbm - (-70.0)) <= 0.2 &&
                          std::fabs(b.snr_db - 11.0) <= 0.7;
        criterion(6, "link budget anchors", pass,
                  fmt("rx %.2f dBm, noise %.2f dBm, snr %.2f dB", b.rx_power_dbm,
                      b.noise_floor_dbm, b.snr_db));
    }

    // 7. BER consistency ------------------------------------------------------------------
    {
        double snr_1e6 = 0.0;
        for (double snr = 8.0; snr <= 13.0; snr += 1e-4) {
            if (analytic_ook_ber(snr) <= 1e-6) {
                snr_1e6 = snr;
                break;
            }
        }
        double snr_1e3 = 0.0;
        for (double snr = 4.0; snr <= 9.0; snr += 1e-4) {
            if (analytic_ook_ber(snr) <= 1e-3) {
                snr_1e3 = snr;
                break;
            }
        }
        Scenario sc = load_preset("ber_mc_20gs.scn");
        sc.p_out_dbm = pout_for_snr(sc, snr_1e3);
        const auto rep = run_scenario(sc);
        const double ratio = rep.ber.ber / 1e-3;
        const bool pass = snr_1e6 >= 10.5 && snr_1e6 <= 11.0 && rep.ber.n_bits >= 30000 &&
                          ratio >= 1.0 / 3.0 && ratio <= 3.0;
        criterion(7, "BER consistency", pass,
                  fmt("analytic 1e-6 at %.2f dB; MC %zu/%zu = %.3e at %.2f dB (x%.2f of 1e-3)",
                      snr_1e6, rep.ber.n_errors, rep.ber.n_bits, rep.ber.ber, snr_1e3, ratio));
    }

    // 8. averaging bracket ---------------------------------------------------------------------
    {
        Scenario sc = load_preset("ber_mc_20gs.scn");
        sc.n_bits = 12000;
        const double c1 = ber_crossing(sc, 1, 4.5, 10.5, 0.75, 1e-3);
        const double c5 = ber_crossing(sc, 5, 0.0, 6.0, 0.75, 1e-3);
        const double delta = c1 - c5;
        criterion(8, "5-pulse averaging bracket", delta >= 3.0 && delta <= 7.0,
                  fmt("1e-3 crossing shifts by %.2f dB (single %.2f dB, averaged %.2f dB)",
                      delta, c1, c5));
    }

    // 9. DLL lock and false lock ------------------------------------------------------------------
    {
        DllConfig cfg;
        cfg.tank_period = 1.0 / 915e6;
        const double T = cfg.tank_period;
        TankParams tone;
        tone.drive_freq = 915e6;
        auto pa = tank_steady_state_wave(tone, 2.7e-6, 64.0 * 915e6);
        auto train = insert_aux_bits(dll_training_bits(40, dll_training_rate(T, 230e6)), T);

        int locked = 0, converged = 0;
        for (int i = 0; i < 50; ++i) {
            const double d0 =
                cfg.dmin() + (cfg.dmax() - cfg.dmin()) * (static_cast<double>(i) + 0.5) / 50.0;
            auto res = dll_run(train, pa, cfg, 2.5e-6, d0);
            if (!res.state.locked) continue;
            ++locked;
            if (std::fabs(lock_error(res.state, cfg, res.final_lead)) < 0.02 * T) ++converged;
        }

        // auxiliary bits disabled: a half-duty whole-period pattern leaves
        // the loop blind, so the quarter-period-lag start persists
        BitStream alt;
        alt.bit_rate = 1.0 / (4.0 * T);
        for (int i = 0; i < 512; ++i) alt.bits.push_back(i % 2 == 0 ? 1 : 0);
        auto res_lag = dll_run(make_schedule(alt), pa, cfg, 2.0e-6, 0.25 * T);
        const double lag_err = std::fabs(res_lag.final_lead - 0.75 * T);

        const bool pass = locked >= 25 && converged == locked && lag_err < 0.02 * T;
        criterion(9, "DLL quarter-period lock", pass,
                  fmt("%d/50 locked, %d at T/4 lead; lag start holds within %.4f T", locked,
                      converged, lag_err / T));
    }

    // 10. power link ----------------------------------------------------------------------------
    {
        PowerLinkParams p;  // shipped fit
        const double e4 = link_efficiency(p, 4e-3);
        const double e10 = link_efficiency(p, 10e-3);

        const double dt = 1e-6;
        auto s = make_regulator_state(p);
        for (int i = 0; i < 400000; ++i) s = detune_step(s, p, dt);
        PowerLinkParams boosted = p;
        boosted.v_source = 1.5 * p.v_source;
        bool overshoot = false;
        auto s2 = s;
        // regulation time constant from the loop linearization at the
        // settled point
        const double dc = 1e-12;
        auto probe = s;
        probe.c_tune += dc;
        const double dv_dc =
            (detune_step(probe, p, 1e-9).v_rect - detune_step(s, p, 1e-9).v_rect) / dc;
        const double tau = 1.0 / (p.detune_gain * std::fabs(dv_dc));
        const std::size_t settle_horizon = static_cast<std::size_t>(10.0 * tau / dt);
        std::size_t t_back = 0;
        for (std::size_t i = 0; i < settle_horizon; ++i) {
            s2 = detune_step(s2, boosted, dt);
            if (s2.v_rect > p.limiter_ratio * p.v_target + 1e-9) overshoot = true;
            if (t_back == 0 && std::fabs(s2.v_rect - p.v_target) <= 0.02 * p.v_target)
                t_back = i + 1;
        }
        const bool settled =
            t_back > 0 && std::fabs(s2.v_rect - p.v_target) <= 0.02 * p.v_target;
        const bool pass = std::fabs(e4 - 28.0) <= 2.0 && std::fabs(e10 - 40.0) <= 2.0 &&
                          !overshoot && settled;
        criterion(10, "inductive power link", pass,
                  fmt("%.2f %% at 4 mA, %.2f %% at 10 mA; recovery in %.1f tau, overshoot %s",
                      e4, e10, static_cast<double>(t_back) * dt / tau, overshoot ? "yes" : "no"));
    }

    // 11. VCO-free calculators ------------------------------------------------------------------
    {
        const double q5 = vco_free_required_q(915e6 / 5.0, 915e6, 20.0);
        const double rate = vco_free_max_rate(13.67e6);
        const bool pass = q5 == 100.0 && rate >= 20e6 && rate <= 30e6;
        criterion(11, "VCO-free design calculators", pass,
                  fmt("Q at f0/5 = %.1f, max rate %.2f Mbps", q5, rate / 1e6));
    }

    // 12. determinism ---------------------------------------------------------------------------
    {
        Scenario sc = load_preset("ber_mc_20gs.scn");
        sc.n_bits = 2048;
        RunArtifacts a1, a2;
        const auto r1 = run_scenario(sc, &a1);
        const auto r2 = run_scenario(sc, &a2);
        const std::string csv1 = report_csv_row(r1);
        const std::string csv2 = report_csv_row(r2);

        write_spectrum_csv(a1.tx_spectrum, "acc_spec1.csv");
        write_spectrum_csv(a2.tx_spectrum, "acc_spec2.csv");
        std::ifstream f1("acc_spec1.csv", std::ios::binary), f2("acc_spec2.csv", std::ios::binary);
        std::string s1((std::istreambuf_iterator<char>(f1)), std::istreambuf_iterator<char>());
        std::string s2((std::istreambuf_iterator<char>(f2)), std::istreambuf_iterator<char>());
        f1.close();
        f2.close();
        std::remove("acc_spec1.csv");
        std::remove("acc_spec2.csv");

        const std::vector<double> vals = {-7.0, -5.0, -3.0, -1.0};
        Scenario sw = sc;
        sw.n_bits = 512;
        auto rows1 = sweep(sw, "scenario.p_out_dbm", vals, 1);
        auto rows8 = sweep(sw, "scenario.p_out_dbm", vals, 8);
        bool sweep_same = rows1.size() == rows8.size();
        for (std::size_t i = 0; sweep_same && i < rows1.size(); ++i)
            sweep_same = sweep_csv_row(rows1[i], sw.n_avg) == sweep_csv_row(rows8[i], sw.n_avg);

        const bool pass = csv1 == csv2 && s1 == s2 && sweep_same;
        criterion(12, "end-to-end determinism", pass,
                  fmt("report %s, spectrum %s, sweep jobs 1 vs 8 %s",
                      csv1 == csv2 ? "identical" : "DIFFERS", s1 == s2 ? "identical" : "DIFFERS",
                      sweep_same ? "identical" : "DIFFERS"));
    }

    std::printf("%d of 12 criteria passed\n", 12 - g_failures);
    return g_failures;
}
