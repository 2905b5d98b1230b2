#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "qumi/io.hpp"
#include "qumi/qumi.hpp"
#include "qumi/verify.hpp"

// Command-line front end:
//   qumi measure <state.json> [flags]      -> measure report as JSON on stdout
//   qumi sweep <sweep.json> --out <csv>    -> one CSV row per parameter step
//   qumi verify [--level quick|full]       -> self-verification report
// Exit codes: 0 success, 1 failed verification, 2 input error.

namespace {

struct SearchFlags {
    double bloch_threshold = qumi::states::kDefaultBlochZeroThreshold;
    std::string grid;
    double refine_tol = 1e-10;

    void attach(CLI::App* cmd) {
        cmd->add_option("--bloch-threshold", bloch_threshold,
                        "Bloch-vector norm below which a direction counts as undefined");
        cmd->add_option("--grid", grid, "coarse search grid as N_polar,N_azimuthal");
        cmd->add_option("--refine-tol", refine_tol, "objective-change tolerance for refinement");
    }

    qumi::optimizer::SearchConfig to_config() const {
        qumi::optimizer::SearchConfig cfg;
        cfg.bloch_zero_threshold = bloch_threshold;
        cfg.refine_tolerance = refine_tol;
        if (!grid.empty()) {
            const auto comma = grid.find(',');
            try {
                if (comma == std::string::npos) throw std::invalid_argument("missing comma");
                cfg.grid_polar = std::stoi(grid.substr(0, comma));
                cfg.grid_azimuthal = std::stoi(grid.substr(comma + 1));
            } catch (const std::exception&) {
                throw qumi::Error(qumi::ErrorKind::ParseError,
                                  "--grid expects N_polar,N_azimuthal, got '" + grid + "'");
            }
        }
        cfg.check();
        return cfg;
    }
};

nlohmann::json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw qumi::Error(qumi::ErrorKind::ParseError, "cannot open file '" + path + "'");
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw qumi::Error(qumi::ErrorKind::ParseError,
                          "invalid JSON in '" + path + "': " + e.what());
    }
}

int run_measure(const std::string& path, const SearchFlags& flags) {
    const auto cfg = flags.to_config();
    const auto rho = qumi::io::state_from_json(load_json(path));
    const auto report = qumi::measures::full_report(rho, cfg);
    std::cout << qumi::io::report_to_json_string(report) << "\n";
    return 0;
}

int run_sweep(const std::string& path, const std::string& out_path, const SearchFlags& flags) {
    const auto cfg = flags.to_config();
    const auto spec = qumi::io::sweep_from_json(load_json(path));
    const auto outcome = qumi::io::run_sweep(spec, cfg);
    std::ofstream out(out_path, std::ios::binary);
    if (!out)
        throw qumi::Error(qumi::ErrorKind::ParseError, "cannot write file '" + out_path + "'");
    out << outcome.csv;
    if (outcome.had_errors) {
        std::cerr << "sweep finished with unphysical steps; see error tags in " << out_path
                  << "\n";
        return 2;
    }
    return 0;
}

int run_verify(const std::string& level) {
    const auto options =
        level == "full" ? qumi::verify::full_options() : qumi::verify::quick_options();
    std::printf("verification level: %s (grid %dx%d)\n\n", level.c_str(),
                options.search.grid_polar, options.search.grid_azimuthal);
    std::printf("%-48s %8s %12s %10s  %s\n", "suite", "checks", "worst dev", "tolerance",
                "status");

    const auto results = qumi::verify::run_all(options);
    bool all_pass = true;
    double closed_form_worst = 0.0;
    for (const auto& r : results) {
        std::printf("%-48s %8d %12.3e %10.1e  %s\n", r.name.c_str(), r.checks, r.worst,
                    r.tolerance, r.pass ? "pass" : "FAIL");
        all_pass = all_pass && r.pass;
        if (r.name == "measures/closed-form-vs-brute-force") closed_form_worst = r.worst;
    }
    std::printf("\nclosed-form vs brute-force: max |Delta| = %.3e (tol 1e-04)\n",
                closed_form_worst);
    std::printf("%s (%zu suites)\n", all_pass ? "VERIFY PASS" : "VERIFY FAIL", results.size());
    return all_pass ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quantumness of mutual information for two-qubit states"};
    app.require_subcommand(1);

    std::string state_path, sweep_path, out_path;
    std::string level = "quick";
    SearchFlags measure_flags, sweep_flags;

    auto* measure = app.add_subcommand("measure", "compute all measures for one state");
    measure->add_option("state", state_path, "state JSON file")->required();
    measure_flags.attach(measure);

    auto* sweep = app.add_subcommand("sweep", "sweep one family parameter, writing CSV");
    sweep->add_option("sweep", sweep_path, "sweep JSON file")->required();
    sweep->add_option("--out", out_path, "output CSV path")->required();
    sweep_flags.attach(sweep);

    auto* verify = app.add_subcommand("verify", "run the self-verification suites");
    verify->add_option("--level", level, "quick or full")
        ->check(CLI::IsMember({"quick", "full"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;  // help exits 0, any parse problem is an input error
    }

    try {
        if (measure->parsed()) return run_measure(state_path, measure_flags);
        if (sweep->parsed()) return run_sweep(sweep_path, out_path, sweep_flags);
        return run_verify(level);
    } catch (const qumi::Error& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
}
