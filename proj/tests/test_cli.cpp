#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

const std::string kCli = MRSUSP_CLI_PATH;

struct RunResult {
    int exit_code = -1;
    std::string stdout_text;
    std::string stderr_text;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

RunResult run_cli(const std::string& args, const fs::path& dir) {
    const fs::path out = dir / "stdout.txt";
    const fs::path err = dir / "stderr.txt";
    const std::string cmd = "SOURCE_DATE_EPOCH=0 " + kCli + " " + args + " > " + out.string() +
                            " 2> " + err.string();
    const int raw = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    r.stdout_text = slurp(out);
    r.stderr_text = slurp(err);
    return r;
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("mrsusp_cli_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter()++));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    static int& counter() {
        static int c = 0;
        return c;
    }
};

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    out << text;
}

// A fast config: implicit plant and a short bump keep the suite quick.
const char* kFastConfig = R"({
  "road": {"kind": "bump", "h_b": 0.02, "t1": 0.1, "t2": 0.5},
  "sim": {"mode": "implicit", "dt": 0.001, "t_end": 1.5}
})";

}  // namespace

TEST_CASE("simulate writes trajectory, metrics, and manifest") {
    TempDir tmp;
    write_file(tmp.path / "cfg.json", kFastConfig);
    const auto out = (tmp.path / "out").string();
    const auto r = run_cli("simulate --config " + (tmp.path / "cfg.json").string() + " --out " +
                               out,
                           tmp.path);
    CAPTURE(r.stderr_text);
    REQUIRE(r.exit_code == 0);
    CHECK(fs::exists(out + "/trajectory.csv"));
    CHECK(fs::exists(out + "/metrics.json"));
    CHECK(fs::exists(out + "/manifest.json"));

    const auto metrics = nlohmann::json::parse(slurp(out + "/metrics.json"));
    CHECK(metrics["rms_a_s"].get<double>() > 0.0);

    const std::string traj = slurp(out + "/trajectory.csv");
    CHECK(traj.rfind("t,z_s,z_u,v_s,v_u,x,a_s,a_u,f_desired,f_realized,voltage,z_r\n", 0) == 0);
}

TEST_CASE("simulate with a missing config exits 2") {
    TempDir tmp;
    const auto r = run_cli("simulate --config /nonexistent/cfg.json --out " +
                               (tmp.path / "out").string(),
                           tmp.path);
    CHECK(r.exit_code == 2);
}

TEST_CASE("simulate with a negative mass exits 2 naming the field") {
    TempDir tmp;
    write_file(tmp.path / "cfg.json", R"({"vehicle": {"m_s": -10}})");
    const auto r = run_cli("simulate --config " + (tmp.path / "cfg.json").string() + " --out " +
                               (tmp.path / "out").string(),
                           tmp.path);
    CHECK(r.exit_code == 2);
    CHECK(r.stderr_text.find("vehicle.m_s") != std::string::npos);
}

TEST_CASE("config echo round trip reproduces outputs byte-for-byte") {
    TempDir tmp;
    write_file(tmp.path / "cfg.json", kFastConfig);
    const auto out1 = (tmp.path / "out1").string();
    const auto out2 = (tmp.path / "out2").string();
    REQUIRE(run_cli("simulate --config " + (tmp.path / "cfg.json").string() + " --out " + out1,
                    tmp.path)
                .exit_code == 0);
    REQUIRE(run_cli("simulate --config " + out1 + "/manifest.json --out " + out2, tmp.path)
                .exit_code == 0);
    CHECK(slurp(out1 + "/trajectory.csv") == slurp(out2 + "/trajectory.csv"));
    CHECK(slurp(out1 + "/metrics.json") == slurp(out2 + "/metrics.json"));
}

TEST_CASE("bump-bench writes the five-controller table deterministically") {
    TempDir tmp;
    write_file(tmp.path / "cfg.json", kFastConfig);
    const auto out1 = (tmp.path / "b1").string();
    const auto out2 = (tmp.path / "b2").string();
    const auto r1 = run_cli("bump-bench --config " + (tmp.path / "cfg.json").string() +
                                " --out " + out1,
                            tmp.path);
    CAPTURE(r1.stderr_text);
    REQUIRE(r1.exit_code == 0);
    const std::string csv = slurp(out1 + "/bump_bench.csv");
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 6);
    CHECK(csv.find("passive,") != std::string::npos);
    CHECK(csv.find("pd_skygroundhook,") != std::string::npos);

    REQUIRE(run_cli("bump-bench --config " + (tmp.path / "cfg.json").string() + " --out " + out2,
                    tmp.path)
                .exit_code == 0);
    CHECK(slurp(out1 + "/bump_bench.csv") == slurp(out2 + "/bump_bench.csv"));
    CHECK(slurp(out1 + "/manifest.json") == slurp(out2 + "/manifest.json"));
}

TEST_CASE("sweep writes responses and a ten-row peaks summary") {
    TempDir tmp;
    // Low damping so the passive peaks land on the modes; a coarse grid
    // keeps the runtime small.
    write_file(tmp.path / "cfg.json", R"({
      "vehicle": {"c_s": 100},
      "sim": {"mode": "implicit", "dt": 0.0005},
      "sweep": {"f_lo": 0.85, "f_hi": 13.0, "df": 0.05,
                "amplitude": 0.002, "cycles_settle": 10, "cycles_measure": 5}
    })");
    const auto out = (tmp.path / "out").string();
    const auto r = run_cli("sweep --config " + (tmp.path / "cfg.json").string() + " --out " + out,
                           tmp.path);
    CAPTURE(r.stderr_text);
    REQUIRE(r.exit_code == 0);

    const std::string peaks = slurp(out + "/sweep_peaks.csv");
    CHECK(std::count(peaks.begin(), peaks.end(), '\n') == 11);  // header + 10 rows

    // Passive peak frequencies within one grid step of the undamped modes
    // (1.2494 and 10.983 Hz for the low-damping parameter set).
    std::istringstream ss(peaks);
    std::string line;
    std::getline(ss, line);  // header
    double f_mode1 = 0.0, f_mode2 = 0.0;
    while (std::getline(ss, line)) {
        if (line.rfind("passive,1,", 0) == 0) f_mode1 = std::stod(line.substr(10));
        if (line.rfind("passive,2,", 0) == 0) f_mode2 = std::stod(line.substr(10));
    }
    CHECK(std::abs(f_mode1 - 1.2494) <= 0.05 + 1e-9);
    CHECK(std::abs(f_mode2 - 10.983) <= 0.05 + 1e-9);

    const std::string resp = slurp(out + "/sweep_response.csv");
    CHECK(resp.rfind("method,freq_hz,rms_a_s,rms_a_u\n", 0) == 0);
}

TEST_CASE("tune emits the road ensemble and a report") {
    TempDir tmp;
    write_file(tmp.path / "cfg.json", R"({
      "tune": {"road_steps": 1000, "t_end": 1.0,
               "gd": {"max_iters": 2}, "grid": {"points": 3}}
    })");
    const auto out = (tmp.path / "out").string();
    const auto r = run_cli("tune --config " + (tmp.path / "cfg.json").string() + " --out " + out +
                               " --seeds 1,2",
                           tmp.path);
    CAPTURE(r.stderr_text);
    REQUIRE(r.exit_code == 0);
    CHECK(fs::exists(out + "/road_seed1.csv"));
    CHECK(fs::exists(out + "/road_seed2.csv"));
    CHECK_FALSE(fs::exists(out + "/road_seed3.csv"));

    const auto report = nlohmann::json::parse(slurp(out + "/tune_report.json"));
    CHECK(report["theta_star"].size() == 4);
    CHECK(report["evaluations"].get<int>() > 0);
    CHECK(report.contains("j_published"));
    CHECK(report.contains("config_echo"));
}

TEST_CASE("tune rejects an all-zero weight pair") {
    TempDir tmp;
    write_file(tmp.path / "cfg.json", R"({"tune": {"lambda_s": 0, "lambda_u": 0}})");
    const auto r = run_cli("tune --config " + (tmp.path / "cfg.json").string() + " --out " +
                               (tmp.path / "out").string(),
                           tmp.path);
    CHECK(r.exit_code == 2);
    CHECK(r.stderr_text.find("lambda") != std::string::npos);
}

TEST_CASE("freqs prints machine-readable natural frequencies") {
    TempDir tmp;
    const auto r = run_cli("freqs", tmp.path);
    REQUIRE(r.exit_code == 0);
    double w1 = 0.0, w2 = 0.0, f1 = 0.0;
    std::istringstream ss(r.stdout_text);
    std::string line;
    while (std::getline(ss, line)) {
        if (line.rfind("omega1_rad_s=", 0) == 0) w1 = std::stod(line.substr(13));
        if (line.rfind("omega2_rad_s=", 0) == 0) w2 = std::stod(line.substr(13));
        if (line.rfind("omega1_hz=", 0) == 0) f1 = std::stod(line.substr(10));
    }
    CHECK(std::abs(w1 - 7.85) <= 0.01);
    CHECK(std::abs(w2 - 69.01) <= 0.01);
    CHECK(f1 == Catch::Approx(w1 / (2.0 * M_PI)).epsilon(1e-9));

    const auto bad = run_cli("freqs --config /nonexistent.json", tmp.path);
    CHECK(bad.exit_code == 2);
}

TEST_CASE("road gen honors seed overrides") {
    TempDir tmp;
    write_file(tmp.path / "cfg.json", R"({"road": {"kind": "brownian", "n_steps": 500}})");
    const auto out = (tmp.path / "out").string();
    const auto r = run_cli("road gen --config " + (tmp.path / "cfg.json").string() + " --out " +
                               out + " --seeds 3,4",
                           tmp.path);
    CAPTURE(r.stderr_text);
    REQUIRE(r.exit_code == 0);
    CHECK(fs::exists(out + "/road_seed3.csv"));
    CHECK(fs::exists(out + "/road_seed4.csv"));

    // Deterministic content for a fixed seed.
    const auto out2 = (tmp.path / "out2").string();
    REQUIRE(run_cli("road gen --config " + (tmp.path / "cfg.json").string() + " --out " + out2 +
                        " --seeds 3",
                    tmp.path)
                .exit_code == 0);
    CHECK(slurp(out + "/road_seed3.csv") == slurp(out2 + "/road_seed3.csv"));
}

TEST_CASE("divergent configurations exit 3") {
    TempDir tmp;
    // An enormous eta-free unstable setup: explicit mode at a huge dt blows
    // up the hysteresis integration within the run.
    write_file(tmp.path / "cfg.json", R"({
      "road": {"kind": "bump", "h_b": 5.0, "t1": 0.0001, "t2": 0.02},
      "sim": {"mode": "explicit", "dt": 0.01, "t_end": 2.0}
    })");
    const auto r = run_cli("simulate --config " + (tmp.path / "cfg.json").string() + " --out " +
                               (tmp.path / "out").string(),
                           tmp.path);
    CHECK(r.exit_code == 3);
}
