#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sys/wait.h>

#include "qumi/io.hpp"
#include "qumi/verify.hpp"

using Catch::Approx;
using namespace qumi;
using json = nlohmann::json;

namespace {

namespace fs = std::filesystem;

fs::path scratch_dir() {
    const fs::path dir = fs::temp_directory_path() / "qumi_cli_tests";
    fs::create_directories(dir);
    return dir;
}

fs::path write_file(const std::string& name, const std::string& contents) {
    const fs::path path = scratch_dir() / name;
    std::ofstream out(path, std::ios::binary);
    out << contents;
    return path;
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

struct CommandResult {
    int exit_code;
    std::string output;  // stdout and stderr merged
};

CommandResult run_cli(const std::string& args) {
    const std::string command = std::string(QUMI_CLI_PATH) + " " + args + " 2>&1";
    FILE* pipe = popen(command.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string output;
    char buffer[4096];
    while (std::size_t n = std::fread(buffer, 1, sizeof buffer, pipe)) output.append(buffer, n);
    const int status = pclose(pipe);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, output};
}

measures::SearchConfig small_config() {
    measures::SearchConfig cfg;
    cfg.grid_polar = 16;
    cfg.grid_azimuthal = 32;
    return cfg;
}

} // namespace

TEST_CASE("number formatting uses 12 significant digits", "[io]") {
    CHECK(io::format_number(2.0) == "2");
    CHECK(io::format_number(0.4512050593046013) == "0.451205059305");
    CHECK(io::format_number(-1.0) == "-1");
    CHECK(io::format_number(0.125) == "0.125");
}

TEST_CASE("family parsing", "[io]") {
    CHECK_NOTHROW(io::family_from_params("werner", {{"p", 0.5}}));
    REQUIRE_THROWS_AS(io::family_from_params("werner", {}), Error);
    REQUIRE_THROWS_AS(io::family_from_params("werner", {{"p", 0.5}, {"q", 1.0}}), Error);
    REQUIRE_THROWS_AS(io::family_from_params("ghz", {}), Error);
    CHECK_NOTHROW(io::family_from_params("pure", {{"re0", 1.0}}));
    CHECK_NOTHROW(
        io::family_from_params("x_state", {{"c1", 0.1}, {"c2", 0.1}, {"c3", 0.3}, {"r", 0}, {"s", 0}}));
}

TEST_CASE("state files", "[io]") {
    SECTION("family form") {
        const auto rho = io::state_from_json(json::parse(
            R"({"family": {"name": "werner", "params": {"p": 1.0}}})"));
        CHECK(linalg::max_abs_diff(rho.matrix(), states::werner(1.0).matrix()) == 0.0);
    }
    SECTION("matrix form round trip") {
        const auto original = states::werner(0.5);
        const auto reparsed = io::state_from_json(json::parse(io::state_to_json_string(original)));
        CHECK(linalg::max_abs_diff(reparsed.matrix(), original.matrix()) < 1e-12);
    }
    SECTION("exactly one of matrix/family") {
        REQUIRE_THROWS_AS(io::state_from_json(json::parse("{}")), Error);
        REQUIRE_THROWS_AS(
            io::state_from_json(json::parse(
                R"({"matrix": [], "family": {"name": "werner", "params": {"p": 1}}})")),
            Error);
    }
    SECTION("malformed matrix") {
        REQUIRE_THROWS_AS(io::state_from_json(json::parse(R"({"matrix": [[1, 2], [3, 4]]})")),
                          Error);
    }
}

TEST_CASE("report serialization", "[io]") {
    const auto report = measures::full_report(states::werner(1.0), small_config());
    const json j = json::parse(io::report_to_json_string(report));
    CHECK(j.at("i_quantum").get<double>() == Approx(2.0).margin(1e-9));
    CHECK(j.at("i_lhv").get<double>() == Approx(1.0).margin(1e-9));
    CHECK(j.at("q_lhv").get<double>() == Approx(1.0).margin(1e-9));
    CHECK(j.at("case_tag").get<std::string>() == "BothBlochZero");
    CHECK(j.at("q_mid").get<std::string>() == "NonUnique");
    CHECK(j.at("q_discord_a").get<double>() == Approx(1.0).margin(1e-5));
    CHECK(j.at("q_sym").get<double>() == Approx(1.0).margin(1e-5));
    CHECK(j.at("optimal_a").is_array());
}

TEST_CASE("measure reports survive the matrix round trip", "[io][property]") {
    const auto cfg = small_config();
    const std::vector<states::StateFamilyParams> families{
        states::WernerParams{0.5},
        states::BellDiagonalParams{0.3, -0.1, 0.2},
        states::XStateParams{0.2, 0.1, 0.5, 0.0, 0.3},
        states::PureParams{{std::sqrt(0.8), 0.0, 0.0, std::sqrt(0.2)}},
    };
    for (const auto& family : families) {
        const auto rho = states::make_state(family);
        const auto reparsed = io::state_from_json(json::parse(io::state_to_json_string(rho)));
        const auto before = measures::full_report(rho, cfg);
        const auto after = measures::full_report(reparsed, cfg);
        REQUIRE(std::abs(before.i_quantum - after.i_quantum) < 1e-12);
        REQUIRE(std::abs(before.i_lhv - after.i_lhv) < 1e-12);
        REQUIRE(std::abs(before.q_lhv - after.q_lhv) < 1e-12);
        REQUIRE(before.q_mid.has_value() == after.q_mid.has_value());
        if (before.q_mid) REQUIRE(std::abs(*before.q_mid - *after.q_mid) < 1e-12);
        REQUIRE(std::abs(before.q_discord_a - after.q_discord_a) < 1e-12);
        REQUIRE(std::abs(before.q_sym - after.q_sym) < 1e-12);
    }
}

TEST_CASE("sweep specs", "[io]") {
    SECTION("valid") {
        const auto spec = io::sweep_from_json(json::parse(
            R"({"family": "werner", "sweep": {"param": "p", "start": 0, "stop": 1, "steps": 11}})"));
        CHECK(spec.steps == 11);
        CHECK(spec.param == "p");
    }
    SECTION("too few steps") {
        REQUIRE_THROWS_AS(io::sweep_from_json(json::parse(
                              R"({"family": "werner",
                                  "sweep": {"param": "p", "start": 0, "stop": 1, "steps": 1}})")),
                          Error);
    }
    SECTION("reversed range") {
        REQUIRE_THROWS_AS(io::sweep_from_json(json::parse(
                              R"({"family": "werner",
                                  "sweep": {"param": "p", "start": 1, "stop": 0, "steps": 3}})")),
                          Error);
    }
    SECTION("swept parameter duplicated in fixed") {
        REQUIRE_THROWS_AS(io::sweep_from_json(json::parse(
                              R"({"family": "werner", "fixed": {"p": 0.2},
                                  "sweep": {"param": "p", "start": 0, "stop": 1, "steps": 3}})")),
                          Error);
    }
}

TEST_CASE("sweeps", "[io]") {
    const auto cfg = small_config();
    SECTION("werner endpoints and determinism") {
        io::SweepSpec spec{"werner", {}, "p", 0.0, 1.0, 11};
        const auto first = io::run_sweep(spec, cfg);
        CHECK_FALSE(first.had_errors);
        const auto second = io::run_sweep(spec, cfg);
        CHECK(first.csv == second.csv);  // byte identical

        std::istringstream lines(first.csv);
        std::string line;
        std::getline(lines, line);
        CHECK(line == io::kCsvHeader);
        std::vector<std::string> rows;
        while (std::getline(lines, line)) rows.push_back(line);
        REQUIRE(rows.size() == 11);
        // q_lhv column of the first and last rows
        auto field = [](const std::string& row, int index) {
            std::istringstream ss(row);
            std::string cell;
            for (int k = 0; k <= index; ++k) std::getline(ss, cell, ',');
            return cell;
        };
        CHECK(std::stod(field(rows.front(), 3)) == Approx(0.0).margin(1e-9));
        CHECK(std::stod(field(rows.back(), 3)) == Approx(1.0).margin(1e-9));
        CHECK(field(rows.front(), 5) == "NonUnique");
    }
    SECTION("rows crossing the physical boundary carry the error tag") {
        io::SweepSpec spec{"bell_diagonal", {{"f2", 0.0}, {"f3", 0.0}}, "f1", 0.0, 1.5, 4};
        const auto outcome = io::run_sweep(spec, cfg);
        CHECK(outcome.had_errors);
        CHECK(outcome.csv.find("NotPositive") != std::string::npos);
    }
}

TEST_CASE("cli measure", "[cli]") {
    SECTION("werner family file") {
        const auto path = write_file(
            "singlet.json", R"({"family": {"name": "werner", "params": {"p": 1.0}}})");
        const auto res = run_cli("measure " + path.string() + " --grid 16,32");
        REQUIRE(res.exit_code == 0);
        const json j = json::parse(res.output);
        CHECK(j.at("i_quantum").get<double>() == Approx(2.0).margin(1e-9));
        CHECK(j.at("q_lhv").get<double>() == Approx(1.0).margin(1e-9));
        CHECK(j.at("q_mid").get<std::string>() == "NonUnique");
        CHECK(j.at("case_tag").get<std::string>() == "BothBlochZero");
    }
    SECTION("identity/4 matrix file gives all zeros") {
        const auto rho = states::DensityMatrix2Q::validate(0.25 * linalg::Matrix4::identity());
        const auto path = write_file("mixed.json", io::state_to_json_string(rho));
        const auto res = run_cli("measure " + path.string() + " --grid 16,32");
        REQUIRE(res.exit_code == 0);
        const json j = json::parse(res.output);
        CHECK(std::abs(j.at("i_quantum").get<double>()) < 1e-9);
        CHECK(std::abs(j.at("q_lhv").get<double>()) < 1e-9);
        CHECK(std::abs(j.at("q_sym").get<double>()) < 1e-9);
    }
    SECTION("invalid trace exits 2 naming the invariant") {
        std::ostringstream os;
        os << "{\"matrix\": [";
        for (int i = 0; i < 4; ++i) {
            os << (i ? ", [" : "[");
            for (int k = 0; k < 4; ++k)
                os << (k ? ", [" : "[") << (i == k ? "0.225" : "0") << ", 0]";
            os << "]";
        }
        os << "]}";
        const auto path = write_file("bad_trace.json", os.str());
        const auto res = run_cli("measure " + path.string());
        CHECK(res.exit_code == 2);
        CHECK(res.output.find("TraceNotOne") != std::string::npos);
    }
    SECTION("missing file exits 2") {
        const auto res = run_cli("measure /nonexistent/state.json");
        CHECK(res.exit_code == 2);
        CHECK(res.output.find("ParseError") != std::string::npos);
    }
    SECTION("bad grid flag exits 2") {
        const auto path = write_file(
            "w.json", R"({"family": {"name": "werner", "params": {"p": 0.5}}})");
        const auto res = run_cli("measure " + path.string() + " --grid nope");
        CHECK(res.exit_code == 2);
    }
}

TEST_CASE("cli sweep", "[cli]") {
    const auto spec_path = write_file(
        "wsweep.json",
        R"({"family": "werner", "sweep": {"param": "p", "start": 0, "stop": 1, "steps": 5}})");
    const auto out_path = scratch_dir() / "wsweep.csv";
    const auto res =
        run_cli("sweep " + spec_path.string() + " --out " + out_path.string() + " --grid 16,32");
    REQUIRE(res.exit_code == 0);
    const std::string csv = read_file(out_path);
    CHECK(csv.rfind(io::kCsvHeader, 0) == 0);

    const auto res2 =
        run_cli("sweep " + spec_path.string() + " --out " + out_path.string() + " --grid 16,32");
    REQUIRE(res2.exit_code == 0);
    CHECK(read_file(out_path) == csv);

    SECTION("unphysical steps exit 2 but still write rows") {
        const auto bad_path = write_file(
            "bsweep.json",
            R"({"family": "bell_diagonal", "fixed": {"f2": 0, "f3": 0},
                "sweep": {"param": "f1", "start": 0, "stop": 1.5, "steps": 4}})");
        const auto bad_out = scratch_dir() / "bsweep.csv";
        const auto bad =
            run_cli("sweep " + bad_path.string() + " --out " + bad_out.string() + " --grid 16,32");
        CHECK(bad.exit_code == 2);
        CHECK(read_file(bad_out).find("NotPositive") != std::string::npos);
    }
}

TEST_CASE("cli verify quick", "[cli][slow]") {
    const auto res = run_cli("verify --level quick");
    REQUIRE(res.exit_code == 0);
    CHECK(res.output.find("VERIFY PASS") != std::string::npos);
    CHECK(res.output.find("closed-form vs brute-force") != std::string::npos);
}
