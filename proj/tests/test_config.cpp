#include "doctest.h"

#include "levsim/config.hpp"
#include "levsim/io.hpp"
#include "levsim/presets.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <string>

using namespace levsim;

namespace {

std::string throw_message(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const std::exception& e) {
        return e.what();
    }
    return {};
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string temp_file(const std::string& name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

} // namespace

TEST_SUITE("config") {

TEST_CASE("format/parse round trip preserves every preset exactly [config][roundtrip]") {
    for (const auto& name : presets::names()) {
        const SystemParams p = presets::get(name);
        const SystemParams q = config::parse_params_text(config::format_params_text(p));
        CHECK(q.omega_z == p.omega_z);
        CHECK(q.gamma_g == p.gamma_g);
        CHECK(q.A_t == p.A_t);
        CHECK(q.A_p == p.A_p);
        CHECK(q.N_0 == p.N_0);
        CHECK(q.gamma_f == p.gamma_f);
        CHECK(q.Gamma_f == p.Gamma_f);
    }
}

TEST_CASE("comments, blank lines and whitespace are tolerated [config][syntax]") {
    const std::string text =
        "# run parameters\n"
        "\n"
        "  omega_z = 40   # trap frequency\n"
        "gamma_g=5e-5\n"
        "A_t = 0.5\n"
        "A_p = 0.5\n"
        "\t N_0 = 1e8 \n"
        "gamma_f = 0.148148148148\n"
        "Gamma_f = 0.00548696844993\n";
    const SystemParams p = config::parse_params_text(text);
    CHECK(p.omega_z == doctest::Approx(40.0));
    CHECK(p.N_0 == doctest::Approx(1.0e8));
    CHECK(p.gamma_f == doctest::Approx(0.148148148148));
}

TEST_CASE("unknown keys are rejected with the line number [config][errors]") {
    const std::string msg = throw_message([] {
        config::parse_params_text("omega_z = 40\nbogus = 1\n");
    });
    CHECK(msg.find("line 2") != std::string::npos);
    CHECK(msg.find("bogus") != std::string::npos);

    CHECK_THROWS_AS(config::parse_params_text("omega_z = 40\nbogus = 1\n"),
                    std::invalid_argument);
}

TEST_CASE("duplicate keys are rejected with the line number [config][errors]") {
    const std::string msg = throw_message([] {
        config::parse_params_text("omega_z = 40\nomega_z = 41\n");
    });
    CHECK(msg.find("line 2") != std::string::npos);
    CHECK(msg.find("omega_z") != std::string::npos);
}

TEST_CASE("malformed numbers and missing separators are rejected [config][errors]") {
    std::string msg = throw_message([] {
        config::parse_params_text("omega_z = 40x\n");
    });
    CHECK(msg.find("line 1") != std::string::npos);

    msg = throw_message([] {
        config::parse_params_text("omega_z = 40\ngamma_g 5e-5\n");
    });
    CHECK(msg.find("line 2") != std::string::npos);

    CHECK_THROWS_AS(config::parse_params_text("omega_z =\n"),
                    std::invalid_argument);
}

TEST_CASE("microphysical triple replaces the feedback pair [config][triple]") {
    const std::string text =
        "omega_z = 40\n"
        "gamma_g = 5e-5\n"
        "A_t = 0.5\n"
        "A_p = 0.5\n"
        "N_0 = 1e8\n"
        "chi = 2\n"
        "Phi = 3\n"
        "G = 0.05\n";
    const SystemParams p = config::parse_params_text(text);
    CHECK(p.gamma_f == 2.0 * 2.0 * 3.0 * 0.05);
    CHECK(p.Gamma_f == 2.0 * 2.0 * 3.0 * 0.05 * 0.05);

    // A partial triple is an error ...
    CHECK_THROWS_AS(config::parse_params_text(
                        "omega_z = 40\ngamma_g = 5e-5\nA_t = 0.5\nA_p = 0.5\n"
                        "N_0 = 1e8\nchi = 2\nPhi = 3\n"),
                    std::invalid_argument);
    // ... and so is mixing it with explicit feedback coefficients.
    CHECK_THROWS_AS(config::parse_params_text(
                        "omega_z = 40\ngamma_g = 5e-5\nA_t = 0.5\nA_p = 0.5\n"
                        "N_0 = 1e8\nchi = 2\nPhi = 3\nG = 0.05\ngamma_f = 0.1\n"),
                    std::invalid_argument);
}

TEST_CASE("parsed parameters are validated [config][validate]") {
    // gamma_f < 9*Gamma_f has no steady state and must be refused.
    CHECK_THROWS_AS(config::parse_params_text(
                        "omega_z = 40\ngamma_g = 5e-5\nA_t = 0.5\nA_p = 0.5\n"
                        "N_0 = 1e8\ngamma_f = 0.1\nGamma_f = 0.1\n"),
                    std::invalid_argument);
    // Missing keys are reported.
    CHECK_THROWS_AS(config::parse_params_text("omega_z = 40\n"),
                    std::invalid_argument);
    // Half of the feedback pair is rejected too.
    CHECK_THROWS_AS(config::parse_params_text(
                        "omega_z = 40\ngamma_g = 5e-5\nA_t = 0.5\nA_p = 0.5\n"
                        "N_0 = 1e8\ngamma_f = 0.1\n"),
                    std::invalid_argument);
    // Leaving the feedback description out entirely means no feedback.
    const SystemParams p = config::parse_params_text(
        "omega_z = 40\ngamma_g = 5e-5\nA_t = 0.5\nA_p = 0.5\nN_0 = 1e8\n");
    CHECK(p.gamma_f == 0.0);
    CHECK(p.Gamma_f == 0.0);
}

TEST_CASE("load_params reads a file and reports open failures [config][file]") {
    const std::string path = temp_file("levsim_test_params.cfg");
    {
        std::ofstream out(path);
        out << config::format_params_text(presets::get("fig6"));
    }
    const SystemParams p = config::load_params(path);
    CHECK(p.N_0 == doctest::Approx(1.0e8));
    std::remove(path.c_str());

    CHECK_THROWS_AS(config::load_params("/nonexistent/params.cfg"),
                    std::invalid_argument);
}

TEST_CASE("csv writers embed the parameter header and fixed columns [config][io]") {
    const SystemParams p = presets::get("fig6");
    const std::string prov = io::format_params(p);
    CHECK(prov.find("# omega_z = 40") != std::string::npos);
    CHECK(prov.find("# N_0 = 1") != std::string::npos);

    Distribution1D dist;
    dist.axis = Axis::x;
    dist.grid = {-1.0, 0.0, 1.0};
    dist.density = {0.25, 0.5, 0.25};

    const std::string dpath = temp_file("levsim_test_dist.csv");
    io::write_distribution_csv(dpath, dist, prov);
    const std::string text = slurp(dpath);
    CHECK(text.find("# omega_z = 40") != std::string::npos);
    CHECK(text.find("x,density") != std::string::npos);
    std::remove(dpath.c_str());

    moments::MomentTrace trace;
    trace.t = {0.0, 1.0};
    trace.states.resize(2);
    const std::string mpath = temp_file("levsim_test_trace.csv");
    io::write_moment_trace_csv(mpath, trace, prov);
    CHECK(slurp(mpath).find("t,n,x2,p2,xp") != std::string::npos);
    std::remove(mpath.c_str());
}

TEST_CASE("binary field dumps round trip bit-exactly [config][io]") {
    fp2d::PhaseGrid grid;
    grid.nx = 5;
    grid.np = 7;
    grid.x_max = 2.5;
    grid.p_max = 3.5;
    grid.dx = 2.0 * grid.x_max / (grid.nx - 1);
    grid.dp = 2.0 * grid.p_max / (grid.np - 1);

    fp2d::WignerField field;
    field.grid = grid;
    field.time = 1.25;
    field.values.resize(grid.size());
    for (std::size_t k = 0; k < field.values.size(); ++k)
        field.values[k] = 0.01 * static_cast<double>(k) + 1.0 / 3.0;

    const std::string path = temp_file("levsim_test_field.bin");
    io::write_field_binary(path, field);
    const fp2d::WignerField back = io::read_field_binary(path);
    std::remove(path.c_str());

    CHECK(back.grid.nx == grid.nx);
    CHECK(back.grid.np == grid.np);
    CHECK(back.grid.x_max == grid.x_max);
    CHECK(back.grid.p_max == grid.p_max);
    CHECK(back.time == field.time);
    REQUIRE(back.values.size() == field.values.size());
    std::size_t mismatched = 0;
    for (std::size_t k = 0; k < field.values.size(); ++k)
        if (back.values[k] != field.values[k]) ++mismatched;
    CHECK(mismatched == 0);

    CHECK_THROWS_AS(io::read_field_binary("/nonexistent/field.bin"),
                    std::runtime_error);
}

}  // TEST_SUITE
