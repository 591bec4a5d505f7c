// uwbsim - scenario runner for the clipped-sinusoid UWB link simulator.
//
//   uwbsim run <scenario> [--out DIR] [--seed S]
//   uwbsim sweep <scenario> --param <path> --values a,b,c [--jobs N] [--out DIR] [--seed S]
//   uwbsim mask <spectrum.csv> [--mask <file>] [--partial]
//
// Exit codes: 0 ok, 1 usage, 2 invalid configuration, 3 mask failure.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>

#include "uwb/runner.hpp"

namespace {

std::vector<double> parse_values(const std::string& list) {
    std::vector<double> out;
    std::stringstream ss(list);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        if (cell.empty()) continue;
        out.push_back(std::stod(cell));
    }
    return out;
}

void print_report(const uwb::LinkReport& r) {
    std::printf("mode                 %s\n", uwb::to_string(r.mode));
    std::printf("bits                 %zu (%zu errors)\n", r.ber.n_bits, r.ber.n_errors);
    std::printf("ber                  %.3e  [%.3e, %.3e]\n", r.ber.ber, r.ber.ci_lo, r.ber.ci_hi);
    std::printf("rx power             %.2f dBm\n", r.rx_power_dbm);
    std::printf("noise floor          %.2f dBm\n", r.noise_floor_dbm);
    std::printf("snr                  %.2f dB\n", r.snr_db);
    std::printf("occupied band        %.3f - %.3f GHz (-10 dB)\n", r.occupied_lo_hz / 1e9,
                r.occupied_hi_hz / 1e9);
    std::printf("mask                 %s (min margin %.2f dB)\n", r.pass_mask ? "pass" : "FAIL",
                r.mask.min_margin_db);
    std::printf("pulse rate           %.3f GHz in \"1\" windows\n", r.pulse_rate_hz / 1e9);
    std::printf("dll                  %s\n", r.dll_locked ? "locked" : "not locked");
    std::printf("tx efficiency        %.2f %%\n", r.tx_efficiency_pct);
    std::printf("chip efficiency      %.2f %%\n", r.chip_efficiency_pct);
    std::printf("energy per bit       %.2f pJ\n", r.energy_per_bit_pj);
    std::printf("data rate            %.2f Mbps\n", r.data_rate_mbps);
    if (r.mode == uwb::ScenarioMode::all_wireless)
        std::printf("power link           %.2f %%\n", r.power_link_efficiency_pct);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"uwbsim - clipped-sinusoid UWB impulse-radio link simulator"};
    app.require_subcommand(1);

    std::string scenario_path, out_dir, param_path, values_list, mask_path, spectrum_path;
    unsigned jobs = 1;
    std::size_t index_offset = 0;
    long long seed_override = -1;
    bool partial = false;

    auto* run = app.add_subcommand("run", "run one scenario and write its reports");
    run->add_option("scenario", scenario_path, "scenario file")->required();
    run->add_option("--out", out_dir, "output directory for CSV/waveform dumps");
    run->add_option("--seed", seed_override, "override the scenario seed");

    auto* sweep_cmd = app.add_subcommand("sweep", "run a parameter sweep");
    sweep_cmd->add_option("scenario", scenario_path, "scenario file")->required();
    sweep_cmd->add_option("--param", param_path, "parameter path, e.g. scenario.p_out_dbm")
        ->required();
    sweep_cmd->add_option("--values", values_list, "comma-separated values")->required();
    sweep_cmd->add_option("--jobs", jobs, "parallel workers");
    sweep_cmd->add_option("--index-offset", index_offset,
                          "global index of the first value (for split sweeps)");
    sweep_cmd->add_option("--out", out_dir, "output directory");
    sweep_cmd->add_option("--seed", seed_override, "override the scenario seed");

    auto* mask_cmd = app.add_subcommand("mask", "check a spectrum dump against a mask");
    mask_cmd->add_option("spectrum", spectrum_path, "spectrum CSV {freq_hz,psd_dbm_per_mhz}")
        ->required();
    mask_cmd->add_option("--mask", mask_path, "mask CSV; built-in FCC indoor limits if omitted");
    mask_cmd->add_flag("--partial", partial, "evaluate only the bands the spectrum covers");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*run) {
            uwb::Scenario sc = uwb::load_scenario(scenario_path);
            if (seed_override >= 0) sc.seed = static_cast<std::uint64_t>(seed_override);
            uwb::RunArtifacts art;
            const auto rep = uwb::run_scenario(sc, &art);
            print_report(rep);
            if (!out_dir.empty()) {
                std::filesystem::create_directories(out_dir);
                const auto base = std::filesystem::path(out_dir);
                {
                    std::ofstream f(base / "report.csv");
                    f << uwb::report_csv_header() << "\n"
                      << uwb::report_csv_row(rep) << "\n";
                }
                uwb::write_spectrum_csv(art.tx_spectrum, (base / "spectrum.csv").string());
                uwb::dump_waveform(art.v3, (base / "tx_waveform.uwbw").string());
                uwb::dump_waveform(art.rx, (base / "rx_waveform.uwbw").string());
                if (!art.dll_trajectory.empty())
                    uwb::write_dll_trajectory_csv(art.dll_trajectory,
                                                  (base / "dll_trajectory.csv").string());
            }
            return 0;
        }
        if (*sweep_cmd) {
            uwb::Scenario sc = uwb::load_scenario(scenario_path);
            if (seed_override >= 0) sc.seed = static_cast<std::uint64_t>(seed_override);
            const auto values = parse_values(values_list);
            const auto rows = uwb::sweep(sc, param_path, values, jobs, index_offset);
            std::string csv = uwb::sweep_csv_header() + "\n";
            for (const auto& row : rows) csv += uwb::sweep_csv_row(row, sc.n_avg) + "\n";
            std::cout << csv;
            if (!out_dir.empty()) {
                std::filesystem::create_directories(out_dir);
                std::ofstream f(std::filesystem::path(out_dir) / "sweep.csv");
                f << csv;
            }
            return 0;
        }
        if (*mask_cmd) {
            const auto spec = uwb::load_spectrum_csv(spectrum_path);
            const auto mask =
                mask_path.empty() ? uwb::fcc_indoor_mask() : uwb::load_mask(mask_path);
            const auto res = uwb::mask_check(spec, mask, partial);
            for (const auto& b : res.bands) {
                if (b.evaluated)
                    std::printf("band %7.3f - %7.3f GHz  limit %6.1f  margin %+7.2f dB\n",
                                b.band.f_lo / 1e9, b.band.f_hi / 1e9, b.band.limit_dbm_per_mhz,
                                b.margin_db);
                else
                    std::printf("band %7.3f - %7.3f GHz  limit %6.1f  not evaluated\n",
                                b.band.f_lo / 1e9, b.band.f_hi / 1e9, b.band.limit_dbm_per_mhz);
            }
            std::printf("%s (min margin %.2f dB)\n", res.pass ? "PASS" : "FAIL",
                        res.min_margin_db);
            return res.pass ? 0 : 3;
        }
    } catch (const uwb::ScenarioError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
