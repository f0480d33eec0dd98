#pragma once

#include <array>
#include <string>
#include <vector>

#include "mrsusp/config.hpp"
#include "mrsusp/io.hpp"
#include "mrsusp/sim.hpp"

namespace mrsusp {

/// Row order of every benchmark table.
inline constexpr std::array<ControllerKind, 5> kBenchControllers = {
    ControllerKind::Passive, ControllerKind::Skyhook, ControllerKind::Groundhook,
    ControllerKind::Skygroundhook, ControllerKind::PdSkygroundhook};

struct BumpBenchRow {
    ControllerKind kind;
    Metrics metrics;
};

/// Run all five controllers over the identical configured bump.
inline std::vector<BumpBenchRow> bump_bench(const AppConfig& cfg) {
    if (cfg.road.kind != RoadKind::Bump)
        throw ConfigError("road.kind: bump-bench requires a bump road");
    std::vector<BumpBenchRow> rows;
    rows.reserve(kBenchControllers.size());
    for (const auto kind : kBenchControllers) {
        const SimConfig sim_cfg = cfg.make_sim(kind);
        const Metrics m = compute_metrics(simulate(sim_cfg), sim_cfg.metrics_skip);
        rows.push_back({kind, m});
    }
    return rows;
}

inline std::string bump_bench_csv(const std::vector<BumpBenchRow>& rows) {
    std::string text =
        "method,rms_a_s,rms_a_u,peak_travel_mm,peak_tire_load_N,"
        "pct_rms_a_s,pct_rms_a_u,pct_peak_travel_mm,pct_peak_tire_load_N\n";
    const Metrics& base = rows.front().metrics;
    for (const auto& r : rows) {
        const Metrics& m = r.metrics;
        text += std::string(name(r.kind)) + ',' + fmt17(m.rms_a_s) + ',' + fmt17(m.rms_a_u) +
                ',' + fmt17(m.peak_travel_mm) + ',' + fmt17(m.peak_tire_load_n) + ',' +
                fmt17(percent_reduction(base.rms_a_s, m.rms_a_s)) + ',' +
                fmt17(percent_reduction(base.rms_a_u, m.rms_a_u)) + ',' +
                fmt17(percent_reduction(base.peak_travel_mm, m.peak_travel_mm)) + ',' +
                fmt17(percent_reduction(base.peak_tire_load_n, m.peak_tire_load_n)) + '\n';
    }
    return text;
}

struct SweepBenchRow {
    ControllerKind kind;
    FrequencyResponse response;
};

/// Stepped-sine response of all five controllers over the configured grid.
inline std::vector<SweepBenchRow> sweep_bench(const AppConfig& cfg) {
    const auto freqs = cfg.sweep.grid();
    std::vector<SweepBenchRow> rows;
    rows.reserve(kBenchControllers.size());
    for (const auto kind : kBenchControllers) {
        SimConfig sim_cfg = cfg.make_sim(kind);
        rows.push_back({kind, frequency_response(sim_cfg, freqs, cfg.sweep.amplitude,
                                                 cfg.sweep.cycles_settle,
                                                 cfg.sweep.cycles_measure)});
    }
    return rows;
}

inline std::string sweep_response_csv(const std::vector<SweepBenchRow>& rows) {
    std::string text = "method,freq_hz,rms_a_s,rms_a_u\n";
    for (const auto& r : rows)
        for (const auto& p : r.response.points)
            text += std::string(name(r.kind)) + ',' + fmt17(p.freq_hz) + ',' + fmt17(p.rms_a_s) +
                    ',' + fmt17(p.rms_a_u) + '\n';
    return text;
}

inline std::string sweep_peaks_csv(const std::vector<SweepBenchRow>& rows) {
    std::string text = "method,mode,peak_freq_hz,peak_value,pct_reduction_vs_passive\n";
    const auto& base = rows.front().response;
    for (const auto& r : rows) {
        const ModalPeak peaks[2] = {r.response.mode1, r.response.mode2};
        const ModalPeak base_peaks[2] = {base.mode1, base.mode2};
        for (int mode = 0; mode < 2; ++mode) {
            text += std::string(name(r.kind)) + ',' + std::to_string(mode + 1) + ',' +
                    fmt17(peaks[mode].freq_hz) + ',' + fmt17(peaks[mode].value) + ',' +
                    fmt17(percent_reduction(base_peaks[mode].value, peaks[mode].value)) + '\n';
        }
    }
    return text;
}

}  // namespace mrsusp
