#pragma once

#include <cstdio>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "qumi/errors.hpp"
#include "qumi/measures.hpp"
#include "qumi/states.hpp"

// Serialization boundary used by the command-line tool: JSON state files in,
// JSON reports and CSV sweeps out. Numbers are rendered with 12 significant
// digits so that repeated runs are byte-identical.
namespace qumi::io {

using json = nlohmann::json;
using measures::MeasureReport;
using states::DensityMatrix2Q;

inline std::string format_number(double v) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.12g", v);
    return buffer;
}

inline double require_number(const json& j, const std::string& where) {
    if (!j.is_number()) throw Error(ErrorKind::ParseError, where + " must be a number");
    return j.get<double>();
}

/// Family parameters from a name and a flat numeric parameter map. Unknown
/// names, unknown keys and missing keys are rejected.
inline states::StateFamilyParams family_from_params(const std::string& name,
                                                    const std::map<std::string, double>& params) {
    auto take = [&](const char* key) {
        const auto it = params.find(key);
        if (it == params.end())
            throw Error(ErrorKind::ParseError,
                        "family '" + name + "' is missing parameter '" + key + "'");
        return it->second;
    };
    auto reject_unknown = [&](std::initializer_list<const char*> allowed) {
        for (const auto& [key, value] : params) {
            bool known = false;
            for (const char* a : allowed)
                if (key == a) known = true;
            if (!known)
                throw Error(ErrorKind::ParseError,
                            "family '" + name + "' does not take parameter '" + key + "'");
        }
    };

    if (name == "bell_diagonal") {
        reject_unknown({"f1", "f2", "f3"});
        return states::BellDiagonalParams{take("f1"), take("f2"), take("f3")};
    }
    if (name == "x_state") {
        reject_unknown({"c1", "c2", "c3", "r", "s"});
        return states::XStateParams{take("c1"), take("c2"), take("c3"), take("r"), take("s")};
    }
    if (name == "werner") {
        reject_unknown({"p"});
        return states::WernerParams{take("p")};
    }
    if (name == "pure") {
        reject_unknown({"re0", "re1", "re2", "re3", "im0", "im1", "im2", "im3"});
        auto component = [&](const std::string& key) {
            const auto it = params.find(key);
            return it == params.end() ? 0.0 : it->second;
        };
        states::PureParams p{};
        for (int k = 0; k < 4; ++k)
            p.amplitudes[k] = linalg::Complex(component("re" + std::to_string(k)),
                                              component("im" + std::to_string(k)));
        return p;
    }
    throw Error(ErrorKind::ParseError,
                "unknown family '" + name +
                    "' (expected bell_diagonal, x_state, werner or pure)");
}

inline std::map<std::string, double> params_from_json(const json& j, const std::string& where) {
    if (!j.is_object()) throw Error(ErrorKind::ParseError, where + " must be an object");
    std::map<std::string, double> out;
    for (const auto& [key, value] : j.items()) out[key] = require_number(value, where + "." + key);
    return out;
}

/// State from a JSON document holding exactly one of "matrix" (4x4 array of
/// [re, im] pairs) or "family" ({"name", "params"}).
inline DensityMatrix2Q state_from_json(const json& j) {
    if (!j.is_object()) throw Error(ErrorKind::ParseError, "state file must be a JSON object");
    const bool has_matrix = j.contains("matrix");
    const bool has_family = j.contains("family");
    if (has_matrix == has_family)
        throw Error(ErrorKind::ParseError,
                    "state file must contain exactly one of \"matrix\" or \"family\"");

    if (has_matrix) {
        const json& rows = j.at("matrix");
        if (!rows.is_array() || rows.size() != 4)
            throw Error(ErrorKind::ParseError, "\"matrix\" must be an array of 4 rows");
        linalg::Matrix4 m;
        for (int i = 0; i < 4; ++i) {
            const json& row = rows.at(i);
            if (!row.is_array() || row.size() != 4)
                throw Error(ErrorKind::ParseError, "each matrix row must hold 4 entries");
            for (int k = 0; k < 4; ++k) {
                const json& entry = row.at(k);
                if (!entry.is_array() || entry.size() != 2)
                    throw Error(ErrorKind::ParseError,
                                "each matrix entry must be an [re, im] pair");
                m(i, k) = linalg::Complex(require_number(entry.at(0), "matrix entry re"),
                                          require_number(entry.at(1), "matrix entry im"));
            }
        }
        return DensityMatrix2Q::validate(m);
    }

    const json& family = j.at("family");
    if (!family.is_object() || !family.contains("name"))
        throw Error(ErrorKind::ParseError, "\"family\" must be an object with a \"name\"");
    if (!family.at("name").is_string())
        throw Error(ErrorKind::ParseError, "family name must be a string");
    const std::map<std::string, double> params =
        family.contains("params") ? params_from_json(family.at("params"), "family.params")
                                  : std::map<std::string, double>{};
    return states::make_state(family_from_params(family.at("name").get<std::string>(), params));
}

/// Matrix form of a state as a parseable state file.
inline std::string state_to_json_string(const DensityMatrix2Q& rho) {
    std::ostringstream os;
    os << "{\"matrix\": [";
    for (int i = 0; i < 4; ++i) {
        os << (i ? ", [" : "[");
        for (int k = 0; k < 4; ++k) {
            const auto& entry = rho.matrix()(i, k);
            os << (k ? ", [" : "[") << format_number(entry.real()) << ", "
               << format_number(entry.imag()) << "]";
        }
        os << "]";
    }
    os << "]}";
    return os.str();
}

inline std::string direction_json(const std::optional<states::Direction>& d) {
    if (!d) return "null";
    std::ostringstream os;
    os << "[" << format_number(d->x) << ", " << format_number(d->y) << ", " << format_number(d->z)
       << "]";
    return os.str();
}

inline std::string report_to_json_string(const MeasureReport& r) {
    std::ostringstream os;
    os << "{\n";
    os << "  \"i_quantum\": " << format_number(r.i_quantum) << ",\n";
    os << "  \"i_lhv\": " << format_number(r.i_lhv) << ",\n";
    os << "  \"q_lhv\": " << format_number(r.q_lhv) << ",\n";
    os << "  \"case_tag\": \"" << measures::to_string(r.case_tag) << "\",\n";
    os << "  \"optimal_a\": " << direction_json(r.optimal_a) << ",\n";
    os << "  \"optimal_b\": " << direction_json(r.optimal_b) << ",\n";
    os << "  \"q_mid\": " << (r.q_mid ? format_number(*r.q_mid) : "\"NonUnique\"") << ",\n";
    os << "  \"q_discord_a\": " << format_number(r.q_discord_a) << ",\n";
    os << "  \"q_sym\": " << format_number(r.q_sym) << "\n";
    os << "}";
    return os.str();
}

struct SweepSpec {
    std::string family;
    std::map<std::string, double> fixed;
    std::string param;
    double start;
    double stop;
    int steps;
};

inline SweepSpec sweep_from_json(const json& j) {
    if (!j.is_object()) throw Error(ErrorKind::ParseError, "sweep file must be a JSON object");
    for (const char* key : {"family", "sweep"})
        if (!j.contains(key))
            throw Error(ErrorKind::ParseError, std::string("sweep file is missing \"") + key + "\"");
    if (!j.at("family").is_string())
        throw Error(ErrorKind::ParseError, "sweep family must be a string");

    SweepSpec spec;
    spec.family = j.at("family").get<std::string>();
    spec.fixed = j.contains("fixed") ? params_from_json(j.at("fixed"), "fixed")
                                     : std::map<std::string, double>{};

    const json& sweep = j.at("sweep");
    if (!sweep.is_object() || !sweep.contains("param") || !sweep.at("param").is_string())
        throw Error(ErrorKind::ParseError, "\"sweep\" must be an object naming a \"param\"");
    spec.param = sweep.at("param").get<std::string>();
    spec.start = require_number(sweep.at("start"), "sweep.start");
    spec.stop = require_number(sweep.at("stop"), "sweep.stop");
    if (!sweep.contains("steps") || !sweep.at("steps").is_number_integer())
        throw Error(ErrorKind::ParseError, "sweep.steps must be an integer");
    spec.steps = sweep.at("steps").get<int>();

    if (spec.steps < 2) throw Error(ErrorKind::ParamOutOfRange, "sweep needs at least 2 steps");
    if (spec.start > spec.stop)
        throw Error(ErrorKind::ParamOutOfRange, "sweep start must not exceed stop");
    if (spec.fixed.count(spec.param))
        throw Error(ErrorKind::ParseError,
                    "swept parameter '" + spec.param + "' also appears in \"fixed\"");
    return spec;
}

inline constexpr const char* kCsvHeader = "param,i_quantum,i_lhv,q_lhv,case_tag,q_mid,q_discord_a,q_sym";

inline std::string csv_row(double param, const MeasureReport& r) {
    std::ostringstream os;
    os << format_number(param) << ',' << format_number(r.i_quantum) << ','
       << format_number(r.i_lhv) << ',' << format_number(r.q_lhv) << ','
       << measures::to_string(r.case_tag) << ','
       << (r.q_mid ? format_number(*r.q_mid) : "NonUnique") << ','
       << format_number(r.q_discord_a) << ',' << format_number(r.q_sym);
    return os.str();
}

inline std::string csv_error_row(double param, const char* tag) {
    std::ostringstream os;
    os << format_number(param);
    for (int k = 0; k < 7; ++k) os << ',' << tag;
    return os.str();
}

struct SweepOutcome {
    std::string csv;  // complete file contents, header included
    bool had_errors = false;
};

/// Evaluates the sweep row by row; a step whose parameters are unphysical
/// reports its error tag in place of values and flags the outcome.
inline SweepOutcome run_sweep(const SweepSpec& spec, const optimizer::SearchConfig& cfg) {
    SweepOutcome out;
    std::ostringstream os;
    os << kCsvHeader << '\n';
    for (int k = 0; k < spec.steps; ++k) {
        const double value =
            spec.start + (spec.stop - spec.start) * static_cast<double>(k) / (spec.steps - 1);
        std::map<std::string, double> params = spec.fixed;
        params[spec.param] = value;
        try {
            const DensityMatrix2Q rho =
                states::make_state(family_from_params(spec.family, params));
            os << csv_row(value, measures::full_report(rho, cfg)) << '\n';
        } catch (const Error& e) {
            os << csv_error_row(value, to_string(e.kind())) << '\n';
            out.had_errors = true;
        }
    }
    out.csv = os.str();
    return out;
}

} // namespace qumi::io
