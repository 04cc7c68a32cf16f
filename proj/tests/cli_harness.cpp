// End-to-end checks against the plrsim binary; argv[1] is its path.
// Fixtures are generated with the library itself and placed under a temp dir.

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "plr/plr.hpp"

namespace fs = std::filesystem;

namespace {

int failures = 0;

void check_impl(bool ok, const char* expr, int line) {
    if (!ok) {
        std::printf("FAIL cli_harness.cpp:%d: %s\n", line, expr);
        ++failures;
    }
}
#define CHECK(cond) check_impl((cond), #cond, __LINE__)

std::string plrsim;  // quoted binary path
fs::path work;

std::string q(const fs::path& p) { return "'" + p.string() + "'"; }

int run(const std::string& args, const fs::path& stdout_path = {}) {
    std::string cmd = plrsim + " " + args;
    cmd += stdout_path.empty() ? std::string(" > /dev/null 2>&1")
                               : " > " + q(stdout_path) + " 2>&1";
    const int rc = std::system(cmd.c_str());
    if (rc == -1 || !WIFEXITED(rc)) return -1;
    return WEXITSTATUS(rc);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

plr::ImageGray8 disc_frame(int size, double radius_px) {
    plr::ImageGray8 img(size, size, 200);
    const double c = size / 2.0;
    for (int y = 0; y < size; ++y)
        for (int x = 0; x < size; ++x) {
            const double dx = x + 0.5 - c;
            const double dy = y + 0.5 - c;
            if (dx * dx + dy * dy <= radius_px * radius_px) img.at(x, y) = 10;
        }
    return img;
}

void check_usage_and_help() {
    CHECK(run("--help", work / "help.txt") == 0);
    const std::string help = slurp(work / "help.txt");
    CHECK(help.find("simulate") != std::string::npos);
    CHECK(help.find("measure") != std::string::npos);

    CHECK(run("") == 2);                  // a subcommand is required
    CHECK(run("frobnicate") == 2);        // unknown subcommand
    CHECK(run("simulate --bogus") == 2);  // unknown flag
    CHECK(run("simulate") == 2);          // missing required options
}

void check_equilibrium_table() {
    const fs::path csv = work / "eq.csv";
    CHECK(run("equilibrium --out " + q(csv)) == 0);

    std::ifstream in(csv);
    std::string line;
    CHECK(bool(std::getline(in, line)));
    CHECK(line == "luminance_blondels,diameter_moon_spencer_mm,diameter_equilibrium_mm");

    int rows = 0;
    double prev_lum = 0.0, prev_ms = 99.0, prev_eq = 99.0;
    bool anchor_seen = false;
    while (std::getline(in, line)) {
        double lum = 0.0, ms = 0.0, eq = 0.0;
        CHECK(std::sscanf(line.c_str(), "%lf,%lf,%lf", &lum, &ms, &eq) == 3);
        CHECK(lum > prev_lum);
        CHECK(ms < prev_ms);
        CHECK(eq < prev_eq);
        if (std::fabs(lum - std::pow(10.0, 0.5)) < 1e-9) {
            anchor_seen = true;
            CHECK(std::fabs(ms - 4.9) < 1e-9);
        }
        prev_lum = lum;
        prev_ms = ms;
        prev_eq = eq;
        ++rows;
    }
    CHECK(rows == 101);
    CHECK(anchor_seen);

    CHECK(run("equilibrium --points 1 --out " + q(work / "eq1.csv")) == 2);
}

void check_simulate() {
    const fs::path sched = work / "sched.csv";
    plr::write_schedule(sched.string(),
                        plr::LightSchedule({{0.0, 0.316228}, {3000.0, 12.589}}));

    const std::string base =
        "simulate --schedule " + q(sched) + " --hippus --seed 5 --duration-ms 8000 --out ";
    CHECK(run(base + q(work / "t1.csv")) == 0);
    CHECK(run(base + q(work / "t2.csv")) == 0);
    const std::string t1 = slurp(work / "t1.csv");
    CHECK(!t1.empty());
    CHECK(t1 == slurp(work / "t2.csv"));  // same seed: byte-identical

    CHECK(run("simulate --schedule " + q(sched) +
              " --hippus --seed 6 --duration-ms 8000 --out " + q(work / "t3.csv")) == 0);
    CHECK(t1 != slurp(work / "t3.csv"));

    const plr::SimTrace trace = plr::parse_trace((work / "t1.csv").string());
    CHECK(trace.rows.size() == 241);  // t=0 plus 8000/33.3 frames
    CHECK(trace.rows[0].time_ms == 0.0);

    // default duration: schedule end + 10 s
    CHECK(run("simulate --schedule " + q(sched) + " --out " + q(work / "t4.csv")) == 0);
    CHECK(plr::parse_trace((work / "t4.csv").string()).rows.size() == 391);

    // schedule rejected by semantic validation
    {
        std::ofstream bad(work / "bad_sched.csv", std::ios::binary);
        bad << "time_ms,luminance_blondels\n0,0\n";
    }
    CHECK(run("simulate --schedule " + q(work / "bad_sched.csv") + " --out " +
              q(work / "t5.csv")) == 2);
    CHECK(run("simulate --schedule " + q(work / "missing.csv") + " --out " +
              q(work / "t6.csv")) == 2);
}

void check_simulate_frames() {
    const fs::path tex = work / "tex.ppm";
    plr::ImageRGB8 flat(64, 64);
    for (auto& b : flat.pixels) b = 180;
    plr::write_ppm(tex.string(), flat);

    const fs::path sched = work / "sched.csv";
    const fs::path frames = work / "frames";
    CHECK(run("simulate --schedule " + q(sched) + " --out " + q(work / "tf.csv") +
              " --duration-ms 66.6 --frames-dir " + q(frames) + " --texture " + q(tex) +
              " --width 64 --height 64 --mm-per-px 0.25") == 0);
    CHECK(fs::exists(frames / "frame_000000.ppm"));
    CHECK(fs::exists(frames / "frame_000002.ppm"));
    CHECK(!fs::exists(frames / "frame_000003.ppm"));

    const plr::ImageRGB8 f0 = plr::read_ppm((frames / "frame_000000.ppm").string());
    CHECK(f0.width == 64);
    CHECK(f0.height == 64);
    CHECK(f0.at(32, 32)[0] == 0);  // pupil disc is black
    // ring sample 5 mm from centre: the flat texture colour
    const std::uint8_t* ring = f0.at(32 + 20, 32);
    CHECK(ring[0] >= 179 && ring[0] <= 181);

    CHECK(run("simulate --schedule " + q(sched) + " --out " + q(work / "tg.csv") +
              " --duration-ms 66.6 --frames-dir " + q(work / "frames2")) == 2);  // no texture
}

void check_fit_rindex() {
    const fs::path csv = work / "fit.csv";
    {
        std::ofstream out(csv, std::ios::binary);
        out << plr::kFitSamplesHeader << "\n";
        for (const double lum : {std::pow(10.0, 1.1), 1.0, std::pow(10.0, -0.5)}) {
            const double raw = plr::equilibrium_raw_diameter({lum});
            out << plr::detail::format_double(lum) << ","
                << plr::detail::format_double(plr::apply_individuality(raw, 0.54)) << "\n";
        }
    }
    CHECK(run("fit-rindex --samples " + q(csv), work / "fit_out.txt") == 0);
    const double estimated = std::stod(slurp(work / "fit_out.txt"));
    CHECK(std::fabs(estimated - 0.54) < 1e-6);

    {
        std::ofstream out(work / "fit_empty.csv", std::ios::binary);
        out << plr::kFitSamplesHeader << "\n";
    }
    CHECK(run("fit-rindex --samples " + q(work / "fit_empty.csv")) == 2);
}

void check_measure() {
    const fs::path f0 = work / "m0.pgm";
    const fs::path f1 = work / "m1.pgm";
    plr::write_pgm(f0.string(), disc_frame(256, 50.0));
    plr::write_pgm(f1.string(), disc_frame(256, 50.0));

    const fs::path out = work / "meas.csv";
    CHECK(run("measure --threshold 128 --iris-px 300 --out " + q(out) + " " + q(f0) + " " +
              q(f1)) == 0);
    const plr::MeasuredSeries series = plr::parse_measured(out.string());
    CHECK(series.samples.size() == 2);
    CHECK(series.samples[0].time_ms == 0.0);
    CHECK(series.samples[1].time_ms == 33.3);
    CHECK(std::fabs(series.samples[0].diameter_mm - 4.0) <= 0.08);

    // explicit roi covering the disc gives the same answer
    CHECK(run("measure --threshold 128 --iris-px 300 --roi 70,70,120,120 --out " +
              q(work / "meas_roi.csv") + " " + q(f0)) == 0);
    const plr::MeasuredSeries roi = plr::parse_measured((work / "meas_roi.csv").string());
    CHECK(roi.samples.size() == 1);
    CHECK(roi.samples[0].diameter_mm == series.samples[0].diameter_mm);

    const fs::path bright = work / "bright.pgm";
    plr::write_pgm(bright.string(), plr::ImageGray8(64, 64, 255));
    CHECK(run("measure --threshold 128 --iris-px 300 --out " + q(work / "mb.csv") + " " +
              q(bright)) == 1);  // no pupil found

    CHECK(run("measure --threshold 300 --iris-px 300 --out " + q(work / "mc.csv") + " " +
              q(f0)) == 2);  // threshold outside 0..255
    CHECK(run("measure --threshold 128 --iris-px 300 --out " + q(work / "md.csv") + " " +
              q(work / "missing.pgm")) == 2);
}

void check_deform() {
    const fs::path tex = work / "tex.ppm";  // written by check_simulate_frames
    const fs::path d1 = work / "d1.ppm";
    const fs::path d2 = work / "d2.ppm";

    CHECK(run("deform --texture " + q(tex) + " --diameter 6.5 --out " + q(d1)) == 0);
    CHECK(run("deform --texture " + q(tex) + " --diameter 6.5 --out " + q(d2)) == 0);
    const std::string bytes = slurp(d1);
    CHECK(!bytes.empty());
    CHECK(bytes == slurp(d2));  // rendering is deterministic

    const plr::ImageRGB8 img = plr::read_ppm(d1.string());
    CHECK(img.width == 512);
    CHECK(img.height == 512);
    CHECK(img.at(256, 256)[0] == 0);  // inside the 6.5 mm pupil
    CHECK(img.at(5, 5)[0] == 0);      // background
    const std::uint8_t* ring = img.at(256 + 166, 256);  // 4.98 mm from centre
    CHECK(ring[0] >= 179 && ring[0] <= 181);

    CHECK(run("deform --texture " + q(tex) + " --diameter 6.5 --pupil-dx 0.9 --out " +
              q(work / "d3.ppm")) == 0);
    CHECK(run("deform --texture " + q(tex) + " --diameter 1.9 --out " + q(work / "d4.ppm")) == 2);
    CHECK(run("deform --texture " + q(tex) + " --diameter 6.5 --pupil-dx 1.3 --out " +
              q(work / "d5.ppm")) == 2);  // offset beyond 20% of the radius
}

void check_validate() {
    const fs::path out = work / "validate.txt";
    const int rc = run("validate", out);
    CHECK(rc == 0 || rc == 1);

    const std::string text = slurp(out);
    std::istringstream lines(text);
    std::string line;
    int count = 0;
    bool threshold_pass = false;
    for (const char* name : {"equilibrium-fidelity", "threshold-constant", "latency",
                             "convergence", "dilation-asymmetry", "variability-roundtrip",
                             "hippus", "deformation-invariance", "measurement"})
        CHECK(text.find(name) != std::string::npos);
    while (std::getline(lines, line)) {
        if (line.empty()) continue;
        CHECK(line.rfind("PASS  ", 0) == 0 || line.rfind("FAIL  ", 0) == 0);
        if (line.rfind("PASS  threshold-constant", 0) == 0) threshold_pass = true;
        ++count;
    }
    CHECK(count == 9);
    CHECK(threshold_pass);
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::printf("usage: cli_harness <path-to-plrsim>\n");
        return 2;
    }
    plrsim = "'" + std::string(argv[1]) + "'";
    work = fs::temp_directory_path() / "plr_cli_harness";
    fs::remove_all(work);
    fs::create_directories(work);

    check_usage_and_help();
    check_equilibrium_table();
    check_simulate();
    check_simulate_frames();
    check_fit_rindex();
    check_measure();
    check_deform();
    check_validate();

    if (failures == 0) {
        fs::remove_all(work);
        std::printf("CLI harness: all checks passed\n");
        return 0;
    }
    std::printf("CLI harness: %d check(s) failed; artifacts kept in %s\n", failures,
                work.string().c_str());
    return 1;
}
