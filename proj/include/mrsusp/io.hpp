#pragma once

#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "mrsusp/config.hpp"
#include "mrsusp/sim.hpp"
#include "mrsusp/tune.hpp"
#include "mrsusp/version.hpp"

namespace mrsusp {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Full double precision, 17 significant digits.
inline std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// Write with LF endings regardless of platform.
inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << text;
    if (!out) throw IoError("write failed: " + path);
}

inline void write_trajectory_csv(const std::string& path, const Trajectory& traj) {
    std::string text = "t,z_s,z_u,v_s,v_u,x,a_s,a_u,f_desired,f_realized,voltage,z_r\n";
    for (const auto& s : traj.samples) {
        text += fmt17(s.t) + ',' + fmt17(s.state.z_s) + ',' + fmt17(s.state.z_u) + ',' +
                fmt17(s.state.v_s) + ',' + fmt17(s.state.v_u) + ',' + fmt17(s.state.x) + ',' +
                fmt17(s.a_s) + ',' + fmt17(s.a_u) + ',' + fmt17(s.f_desired) + ',' +
                fmt17(s.f_realized) + ',' + fmt17(s.voltage) + ',' + fmt17(s.z_r) + '\n';
    }
    write_text_file(path, text);
}

inline void write_road_csv(const std::string& path, const TabulatedRoad& road) {
    std::string text = "t,z_r\n";
    for (std::size_t i = 0; i < road.z.size(); ++i)
        text += fmt17(road.t0 + double(i) * road.dt) + ',' + fmt17(road.z[i]) + '\n';
    write_text_file(path, text);
}

inline Json metrics_to_json(const Metrics& m) {
    return Json{{"rms_a_s", m.rms_a_s},
                {"rms_a_u", m.rms_a_u},
                {"peak_travel_mm", m.peak_travel_mm},
                {"rms_travel_mm", m.rms_travel_mm},
                {"peak_tire_load_N", m.peak_tire_load_n},
                {"rms_tire_load_N", m.rms_tire_load_n},
                {"energy_monitor_max_rise_J", m.energy_monitor_max_rise_j}};
}

/// ISO-8601 UTC timestamp; honors SOURCE_DATE_EPOCH so reruns can be
/// byte-identical.
inline std::string run_timestamp() {
    std::time_t t = std::time(nullptr);
    if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH")) {
        char* end = nullptr;
        const long long v = std::strtoll(epoch, &end, 10);
        if (end && *end == '\0') t = std::time_t(v);
    }
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

inline Json make_manifest(const std::string& command, const std::string& config_path,
                          const std::string& out_dir, const std::vector<std::uint64_t>& seeds,
                          const AppConfig& cfg) {
    Json m;
    m["tool"] = "mrsusp";
    m["version"] = kVersion;
    m["command"] = command;
    m["timestamp"] = run_timestamp();
    m["config_path"] = config_path;
    m["out_dir"] = out_dir;
    m["seeds"] = seeds;
    m["config_echo"] = app_config_to_json(cfg);
    return m;
}

inline void write_json_file(const std::string& path, const Json& j) {
    write_text_file(path, j.dump(2) + "\n");
}

}  // namespace mrsusp
