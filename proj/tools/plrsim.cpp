// plrsim: pupil light reflex simulator and iris renderer.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "plr/plr.hpp"

namespace {

std::ostream& open_or_stdout(const std::string& path, std::ofstream& file) {
    if (path.empty()) return std::cout;
    file.open(path, std::ios::binary);
    if (!file)
        throw std::invalid_argument("cannot open " + path);
    return file;
}

void run_equilibrium(const std::string& out_path, int points) {
    if (points < 2)
        throw std::invalid_argument("equilibrium: need at least 2 points");
    std::ofstream file;
    std::ostream& out = open_or_stdout(out_path, file);
    out << "luminance_blondels,diameter_moon_spencer_mm,diameter_equilibrium_mm\n";
    for (int i = 0; i < points; ++i) {
        const double lg = -5.0 + 10.0 * i / (points - 1);
        const plr::Luminance lum{std::pow(10.0, lg)};
        out << plr::detail::format_double(lum.blondels) << ","
            << plr::detail::format_double(plr::moon_spencer_diameter(lum)) << ","
            << plr::detail::format_double(plr::equilibrium_raw_diameter(lum)) << "\n";
    }
}

struct SimulateArgs {
    std::string schedule_path;
    std::string out_path;
    double r_index = 0.5;
    double velocity_s = 600.0;
    double freq_r = 0.4;
    double frame_interval_ms = 33.3;
    double duration_ms = 0.0;  // 0 = last schedule time + 10 s
    bool hippus = false;
    std::uint64_t seed = 0;
    std::string frames_dir;
    std::string texture_path;
    int width = 512;
    int height = 512;
    double mm_per_px = 0.03;
    double iris_radius_mm = 6.0;
    double ref_pupil_mm = 3.0;
};

void run_simulate(const SimulateArgs& a) {
    const plr::LightSchedule schedule = plr::parse_schedule(a.schedule_path);
    if (schedule.empty())
        throw std::invalid_argument("simulate: schedule file has no rows");
    const double duration =
        a.duration_ms > 0.0 ? a.duration_ms : schedule.points().back().time_ms + 10000.0;
    const plr::SubjectProfile profile{a.r_index, a.velocity_s, a.freq_r};

    std::unique_ptr<plr::HippusGenerator> hippus;
    if (a.hippus) hippus = std::make_unique<plr::HippusGenerator>(a.seed);

    const plr::SimTrace trace =
        plr::simulate(schedule, profile, a.frame_interval_ms, duration, hippus.get());
    plr::write_trace(a.out_path, trace);
    if (trace.clamped_luminance_samples > 0)
        std::cerr << "note: " << trace.clamped_luminance_samples
                  << " hippus samples clamped to the luminance range\n";

    if (a.frames_dir.empty()) return;
    if (a.texture_path.empty())
        throw std::invalid_argument("simulate: --frames-dir requires --texture");
    std::filesystem::create_directories(a.frames_dir);

    plr::IrisTexture texture;
    texture.image = plr::read_texture_image(a.texture_path);
    texture.reference = plr::IrisGeometry{{0, 0}, a.iris_radius_mm, {0, 0}, a.ref_pupil_mm};
    // The raw diameter drives the animation; it is guaranteed to stay inside the
    // renderable pupil range, unlike the envelope-adjusted output column.
    const plr::IrisGeometry base{{0, 0}, a.iris_radius_mm, {0, 0}, trace.rows.front().diameter_raw_mm};
    const plr::IrisMesh mesh = plr::build_mesh(base, texture);
    for (std::size_t k = 0; k < trace.rows.size(); ++k) {
        const plr::IrisMesh frame_mesh =
            plr::deform_mesh(mesh, base, trace.rows[k].diameter_raw_mm);
        const plr::ImageRGB8 frame =
            plr::render_frame(frame_mesh, texture, a.width, a.height, a.mm_per_px);
        char name[32];
        std::snprintf(name, sizeof(name), "frame_%06zu.ppm", k);
        plr::write_ppm((std::filesystem::path(a.frames_dir) / name).string(), frame);
    }
}

struct MeasureArgs {
    std::vector<std::string> frame_paths;
    std::string out_path;
    int threshold = 0;
    double iris_px = 0.0;
    std::vector<int> roi;  // x,y,w,h; empty = full frame
    double frame_interval_ms = 33.3;
};

void run_measure(const MeasureArgs& a) {
    plr::MeasuredSeries series;
    series.iris_px_diameter = a.iris_px;
    series.frame_rate_hz = 1000.0 / a.frame_interval_ms;
    for (std::size_t i = 0; i < a.frame_paths.size(); ++i) {
        const plr::ImageGray8 frame = plr::read_pgm(a.frame_paths[i]);
        plr::RectPx roi{0, 0, frame.width, frame.height};
        if (!a.roi.empty()) roi = {a.roi[0], a.roi[1], a.roi[2], a.roi[3]};
        const double d = plr::measure_pupil(frame, roi, a.threshold, a.iris_px);
        series.samples.push_back({static_cast<double>(i) * a.frame_interval_ms, d});
    }
    plr::write_measured(a.out_path, series);
}

struct DeformArgs {
    std::string texture_path;
    std::string out_path;
    double diameter = 0.0;
    int width = 512;
    int height = 512;
    double mm_per_px = 0.03;
    double iris_radius_mm = 6.0;
    double ref_pupil_mm = 3.0;
    double pupil_dx = 0.0;
    double pupil_dy = 0.0;
};

void run_deform(const DeformArgs& a) {
    plr::IrisTexture texture;
    texture.image = plr::read_texture_image(a.texture_path);
    texture.reference = plr::IrisGeometry{{0, 0}, a.iris_radius_mm, {0, 0}, a.ref_pupil_mm};
    const plr::IrisGeometry geom{
        {0, 0}, a.iris_radius_mm, {a.pupil_dx, a.pupil_dy}, a.ref_pupil_mm};
    plr::IrisMesh mesh = plr::build_mesh(geom, texture);
    mesh = plr::deform_mesh(mesh, geom, a.diameter);
    plr::write_ppm(a.out_path, plr::render_frame(mesh, texture, a.width, a.height, a.mm_per_px));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"pupil light reflex simulator and iris renderer"};
    app.require_subcommand(1);
    int rc = 0;

    // equilibrium
    std::string eq_out;
    int eq_points = 101;
    auto* eq = app.add_subcommand("equilibrium", "settled diameter table over the luminance range");
    eq->add_option("--out", eq_out, "output CSV path (default stdout)");
    eq->add_option("--points", eq_points, "log-spaced sample count")->capture_default_str();
    eq->callback([&] { run_equilibrium(eq_out, eq_points); });

    // simulate
    SimulateArgs sim;
    auto* simulate = app.add_subcommand("simulate", "run a stimulus schedule to a trace CSV");
    simulate->add_option("--schedule", sim.schedule_path, "schedule CSV")->required()->check(CLI::ExistingFile);
    simulate->add_option("--out", sim.out_path, "trace CSV output")->required();
    simulate->add_option("--r-index", sim.r_index, "individual variability index in [0,1]")->capture_default_str();
    simulate->add_option("--velocity-s", sim.velocity_s, "iris velocity constant S")->capture_default_str();
    simulate->add_option("--freq-r", sim.freq_r, "stimulus flicker frequency R, Hz")->capture_default_str();
    simulate->add_option("--frame-interval-ms", sim.frame_interval_ms, "frame period")->capture_default_str();
    simulate->add_option("--duration-ms", sim.duration_ms, "simulated span (default: schedule end + 10 s)");
    simulate->add_flag("--hippus", sim.hippus, "add seeded hippus jitter");
    simulate->add_option("--seed", sim.seed, "hippus seed")->capture_default_str();
    simulate->add_option("--frames-dir", sim.frames_dir, "also render one PPM per frame into this directory");
    simulate->add_option("--texture", sim.texture_path, "iris texture (PPM/PGM)")->check(CLI::ExistingFile);
    simulate->add_option("--width", sim.width, "frame width, px")->capture_default_str();
    simulate->add_option("--height", sim.height, "frame height, px")->capture_default_str();
    simulate->add_option("--mm-per-px", sim.mm_per_px, "viewport scale")->capture_default_str();
    simulate->add_option("--iris-radius-mm", sim.iris_radius_mm, "iris radius")->capture_default_str();
    simulate->add_option("--ref-pupil-mm", sim.ref_pupil_mm, "pupil diameter in the texture photo")->capture_default_str();
    simulate->callback([&] { run_simulate(sim); });

    // fit-rindex
    std::string fit_samples_path;
    auto* fit = app.add_subcommand("fit-rindex", "estimate the variability index from settled pairs");
    fit->add_option("--samples", fit_samples_path, "CSV: luminance_blondels,diameter_mm")
        ->required()
        ->check(CLI::ExistingFile);
    fit->callback([&] {
        const auto samples = plr::parse_fit_samples(fit_samples_path);
        std::printf("%.9g\n", plr::estimate_r_index(samples));
    });

    // measure
    MeasureArgs meas;
    auto* measure = app.add_subcommand("measure", "pupil diameters from PGM frames");
    measure->add_option("--threshold", meas.threshold, "dark-pixel threshold 0..255")
        ->required()
        ->check(CLI::Range(0, 255));
    measure->add_option("--iris-px", meas.iris_px, "iris diameter in pixels")->required();
    measure->add_option("--roi", meas.roi, "x,y,w,h region of interest")->delimiter(',')->expected(4);
    measure->add_option("--frame-interval-ms", meas.frame_interval_ms, "frame period")->capture_default_str();
    measure->add_option("--out", meas.out_path, "measured CSV output")->required();
    measure->add_option("frames", meas.frame_paths, "PGM frames in time order")
        ->required()
        ->check(CLI::ExistingFile);
    measure->callback([&] { run_measure(meas); });

    // deform
    DeformArgs def;
    auto* deform = app.add_subcommand("deform", "render the iris at a given pupil diameter");
    deform->add_option("--texture", def.texture_path, "iris texture (PPM/PGM)")->required()->check(CLI::ExistingFile);
    deform->add_option("--diameter", def.diameter, "target pupil diameter, mm")->required();
    deform->add_option("--out", def.out_path, "output PPM")->required();
    deform->add_option("--width", def.width, "frame width, px")->capture_default_str();
    deform->add_option("--height", def.height, "frame height, px")->capture_default_str();
    deform->add_option("--mm-per-px", def.mm_per_px, "viewport scale")->capture_default_str();
    deform->add_option("--iris-radius-mm", def.iris_radius_mm, "iris radius")->capture_default_str();
    deform->add_option("--ref-pupil-mm", def.ref_pupil_mm, "pupil diameter in the texture photo")->capture_default_str();
    deform->add_option("--pupil-dx", def.pupil_dx, "pupil centre x offset, mm")->capture_default_str();
    deform->add_option("--pupil-dy", def.pupil_dy, "pupil centre y offset, mm")->capture_default_str();
    deform->callback([&] { run_deform(def); });

    // validate
    auto* validate = app.add_subcommand("validate", "run the built-in acceptance checks");
    validate->callback([&] {
        if (!plr::report_acceptance(std::cout, plr::run_acceptance_suite())) rc = 1;
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const plr::MeasurementError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::logic_error& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return rc;
}
