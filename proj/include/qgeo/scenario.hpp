#pragma once

#include "qgeo/adiabatic.hpp"
#include "qgeo/operators.hpp"
#include "qgeo/propagate.hpp"
#include "qgeo/schedule.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace qgeo {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Family { two_level_drive, linear_parametric, adiabatic, tabulated, constant };

inline Family family_from_name(const std::string& name) {
    if (name == "two-level-drive") return Family::two_level_drive;
    if (name == "linear-parametric") return Family::linear_parametric;
    if (name == "adiabatic") return Family::adiabatic;
    if (name == "tabulated") return Family::tabulated;
    if (name == "constant") return Family::constant;
    throw ConfigError("unknown family: '" + name + "'");
}

inline std::string family_name(Family family) {
    switch (family) {
        case Family::two_level_drive: return "two-level-drive";
        case Family::linear_parametric: return "linear-parametric";
        case Family::adiabatic: return "adiabatic";
        case Family::tabulated: return "tabulated";
        case Family::constant: return "constant";
    }
    return "?";
}

/// Named scalar-schedule descriptor: linear a+bt, quadratic a+bt+ct^2,
/// sine A sin(wt+p), or a two-column table file.
struct ScalarForm {
    std::string form;
    std::vector<double> coeffs;
    std::string table_path;
};

struct ScenarioConfig {
    std::string name = "scenario";
    Family family = Family::two_level_drive;
    ScalarForm scalar;
    std::optional<Matrix> h0;
    std::optional<Matrix> h_initial;
    std::optional<Matrix> h_final;
    std::optional<Vector> initial;
    std::optional<double> total_time;
    int n_steps = 4096;
    int stride = 1;
    std::string method = "midpoint-exponential";
    double hbar = 1.0;
    std::vector<std::string> checks;  // empty: every applicable check
    std::uint64_t seed = 42;
    std::filesystem::path base_dir = ".";  // resolves relative table paths
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) {
        return {};
    }
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

inline std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> items;
    std::string current;
    for (char c : s) {
        if (c == ',' || c == ' ' || c == '\t') {
            if (!current.empty()) {
                items.push_back(current);
                current.clear();
            }
        } else {
            current += c;
        }
    }
    if (!current.empty()) {
        items.push_back(current);
    }
    return items;
}

inline double parse_double(const std::string& token, const std::string& where) {
    try {
        std::size_t used = 0;
        const double value = std::stod(token, &used);
        if (used != token.size()) {
            throw std::invalid_argument("trailing characters");
        }
        return value;
    } catch (const std::exception&) {
        throw ConfigError(where + ": expected a number, got '" + token + "'");
    }
}

inline long parse_int(const std::string& token, const std::string& where) {
    try {
        std::size_t used = 0;
        const long value = std::stol(token, &used);
        if (used != token.size()) {
            throw std::invalid_argument("trailing characters");
        }
        return value;
    } catch (const std::exception&) {
        throw ConfigError(where + ": expected an integer, got '" + token + "'");
    }
}

inline std::vector<double> parse_double_list(const std::string& value,
                                             const std::string& where) {
    std::vector<double> numbers;
    for (const std::string& token : split_list(value)) {
        numbers.push_back(parse_double(token, where));
    }
    return numbers;
}

inline Vector pairs_to_vector(const std::vector<double>& numbers, const std::string& where) {
    if (numbers.empty() || numbers.size() % 2 != 0) {
        throw ConfigError(where + ": expected an even list of re/im pairs");
    }
    Vector v(static_cast<int>(numbers.size() / 2));
    for (int i = 0; i < v.size(); ++i) {
        v(i) = Complex(numbers[2 * i], numbers[2 * i + 1]);
    }
    return v;
}

}  // namespace detail

/// Line-oriented key = value format with '#' comments and matrix blocks:
///   matrix H0 2
///     0 0   1 0
///     1 0   0 0
///   end
/// Each matrix row lists dim re/im pairs.
inline ScenarioConfig parse_scenario_text(std::istream& in, const std::string& where) {
    ScenarioConfig config;
    bool family_seen = false;
    std::string raw;
    int line_number = 0;

    const auto context = [&](int line) { return where + ":" + std::to_string(line); };

    while (std::getline(in, raw)) {
        ++line_number;
        std::string line = raw;
        const auto hash = line.find('#');
        if (hash != std::string::npos) {
            line.erase(hash);
        }
        line = detail::trim(line);
        if (line.empty()) {
            continue;
        }

        if (line.rfind("matrix", 0) == 0) {
            std::istringstream head(line);
            std::string keyword, name, dim_token;
            head >> keyword >> name >> dim_token;
            if (name.empty() || dim_token.empty()) {
                throw ConfigError(context(line_number) + ": expected 'matrix <name> <dim>'");
            }
            const long dim = detail::parse_int(dim_token, context(line_number));
            if (dim < 1 || dim > 64) {
                throw ConfigError(context(line_number) + ": matrix dimension out of range");
            }
            Matrix m(dim, dim);
            for (long row = 0; row < dim; ++row) {
                if (!std::getline(in, raw)) {
                    throw ConfigError(context(line_number) + ": unexpected end of matrix block");
                }
                ++line_number;
                std::string entry_line = raw;
                const auto row_hash = entry_line.find('#');
                if (row_hash != std::string::npos) {
                    entry_line.erase(row_hash);
                }
                const std::vector<double> numbers =
                    detail::parse_double_list(entry_line, context(line_number));
                if (numbers.size() != static_cast<std::size_t>(2 * dim)) {
                    throw ConfigError(context(line_number) + ": expected " +
                                      std::to_string(2 * dim) + " numbers (re/im pairs)");
                }
                for (long col = 0; col < dim; ++col) {
                    m(row, col) = Complex(numbers[2 * col], numbers[2 * col + 1]);
                }
            }
            if (!std::getline(in, raw) || detail::trim(raw) != "end") {
                throw ConfigError(context(line_number) + ": matrix block must close with 'end'");
            }
            ++line_number;
            if (name == "H0") {
                config.h0 = m;
            } else if (name == "H_I") {
                config.h_initial = m;
            } else if (name == "H_F") {
                config.h_final = m;
            } else {
                throw ConfigError(context(line_number) + ": unknown matrix name '" + name +
                                  "' (expected H0, H_I, or H_F)");
            }
            continue;
        }

        const auto equals = line.find('=');
        if (equals == std::string::npos) {
            throw ConfigError(context(line_number) + ": expected 'key = value'");
        }
        const std::string key = detail::trim(line.substr(0, equals));
        const std::string value = detail::trim(line.substr(equals + 1));
        const std::string ctx = context(line_number) + " (" + key + ")";

        if (key == "family") {
            try {
                config.family = family_from_name(value);
            } catch (const ConfigError& e) {
                throw ConfigError(ctx + ": " + e.what());
            }
            family_seen = true;
        } else if (key == "form") {
            config.scalar.form = value;
        } else if (key == "coeffs") {
            config.scalar.coeffs = detail::parse_double_list(value, ctx);
        } else if (key == "table") {
            config.scalar.table_path = value;
        } else if (key == "T") {
            config.total_time = detail::parse_double(value, ctx);
        } else if (key == "n_steps") {
            config.n_steps = static_cast<int>(detail::parse_int(value, ctx));
        } else if (key == "stride") {
            config.stride = static_cast<int>(detail::parse_int(value, ctx));
        } else if (key == "method") {
            config.method = value;
        } else if (key == "hbar") {
            config.hbar = detail::parse_double(value, ctx);
        } else if (key == "checks") {
            config.checks = detail::split_list(value);
        } else if (key == "initial") {
            config.initial =
                detail::pairs_to_vector(detail::parse_double_list(value, ctx), ctx);
        } else if (key == "seed") {
            config.seed = static_cast<std::uint64_t>(detail::parse_int(value, ctx));
        } else {
            throw ConfigError(ctx + ": unknown key");
        }
    }
    if (!family_seen) {
        throw ConfigError(where + ": missing required key 'family'");
    }
    return config;
}

/// Structured-object form of the same configuration (standard JSON).
inline ScenarioConfig parse_scenario_json(const std::string& content, const std::string& where) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(content);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(where + ": " + e.what());
    }

    const auto matrix_field = [&](const char* key) -> std::optional<Matrix> {
        if (!j.contains(key)) {
            return std::nullopt;
        }
        const auto& block = j.at(key);
        if (!block.contains("dim") || !block.contains("entries")) {
            throw ConfigError(where + ": matrix '" + key + "' needs 'dim' and 'entries'");
        }
        const int dim = block.at("dim").get<int>();
        const auto& entries = block.at("entries");
        if (dim < 1 || entries.size() != static_cast<std::size_t>(dim) * dim) {
            throw ConfigError(where + ": matrix '" + key + "' needs dim^2 re/im pairs");
        }
        Matrix m(dim, dim);
        for (int row = 0; row < dim; ++row) {
            for (int col = 0; col < dim; ++col) {
                const auto& pair = entries.at(row * dim + col);
                if (pair.size() != 2) {
                    throw ConfigError(where + ": matrix '" + key +
                                      "' entries must be [re, im] pairs");
                }
                m(row, col) = Complex(pair.at(0).get<double>(), pair.at(1).get<double>());
            }
        }
        return m;
    };

    try {
        ScenarioConfig config;
        config.family = family_from_name(j.at("family").get<std::string>());
        if (j.contains("form")) config.scalar.form = j.at("form").get<std::string>();
        if (j.contains("coeffs")) config.scalar.coeffs = j.at("coeffs").get<std::vector<double>>();
        if (j.contains("table")) config.scalar.table_path = j.at("table").get<std::string>();
        if (j.contains("T")) config.total_time = j.at("T").get<double>();
        if (j.contains("n_steps")) config.n_steps = j.at("n_steps").get<int>();
        if (j.contains("stride")) config.stride = j.at("stride").get<int>();
        if (j.contains("method")) config.method = j.at("method").get<std::string>();
        if (j.contains("hbar")) config.hbar = j.at("hbar").get<double>();
        if (j.contains("checks")) config.checks = j.at("checks").get<std::vector<std::string>>();
        if (j.contains("seed")) config.seed = j.at("seed").get<std::uint64_t>();
        config.h0 = matrix_field("H0");
        config.h_initial = matrix_field("H_I");
        config.h_final = matrix_field("H_F");
        if (j.contains("initial")) {
            std::vector<double> flat;
            for (const auto& pair : j.at("initial")) {
                if (pair.size() != 2) {
                    throw ConfigError(where + ": 'initial' must be [re, im] pairs");
                }
                flat.push_back(pair.at(0).get<double>());
                flat.push_back(pair.at(1).get<double>());
            }
            config.initial = detail::pairs_to_vector(flat, where + " (initial)");
        }
        return config;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(where + ": " + e.what());
    }
}

inline ScenarioConfig load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file: " + path.string());
    }
    std::string content((std::istreambuf_iterator<char>(in)),
                        std::istreambuf_iterator<char>());
    const auto first = content.find_first_not_of(" \t\r\n");
    ScenarioConfig config;
    if (first != std::string::npos && content[first] == '{') {
        config = parse_scenario_json(content, path.string());
    } else {
        std::istringstream stream(content);
        config = parse_scenario_text(stream, path.string());
    }
    config.name = path.stem().string();
    config.base_dir = path.has_parent_path() ? path.parent_path() : ".";
    return config;
}

/// A scenario ready to run: schedule, initial state, grid, method, units.
struct BuiltScenario {
    HamiltonianSchedule schedule;
    QuantumState initial;
    TimeGrid grid;
    Method method = Method::midpoint_exponential;
    Units units;
};

namespace detail {

inline ScalarSchedule build_scalar(const ScalarForm& form, const ScenarioConfig& config) {
    const auto need = [&](std::size_t n) {
        if (form.coeffs.size() != n) {
            throw ConfigError(config.name + ": form '" + form.form + "' needs " +
                              std::to_string(n) + " coefficients, got " +
                              std::to_string(form.coeffs.size()));
        }
    };
    if (form.form == "linear") {
        need(2);
        return scalar_linear(form.coeffs[0], form.coeffs[1]);
    }
    if (form.form == "quadratic") {
        need(3);
        return scalar_quadratic(form.coeffs[0], form.coeffs[1], form.coeffs[2]);
    }
    if (form.form == "sine") {
        if (form.coeffs.size() != 2 && form.coeffs.size() != 3) {
            throw ConfigError(config.name + ": form 'sine' needs amplitude, omega[, phase]");
        }
        const double phase = form.coeffs.size() == 3 ? form.coeffs[2] : 0.0;
        return scalar_sine(form.coeffs[0], form.coeffs[1], phase);
    }
    if (form.form == "table" || form.form.empty()) {
        if (form.table_path.empty()) {
            throw ConfigError(config.name + ": tabulated form needs 'table = <path>'");
        }
        const std::filesystem::path resolved = config.base_dir / form.table_path;
        try {
            return load_scalar_table(resolved.string());
        } catch (const std::exception& e) {
            throw ConfigError(config.name + ": " + e.what());
        }
    }
    throw ConfigError(config.name + ": unknown scalar form '" + form.form +
                      "' (expected linear, quadratic, sine, or table)");
}

inline HermitianOperator checked_operator(const std::optional<Matrix>& m, const char* key,
                                          const ScenarioConfig& config) {
    if (!m) {
        throw ConfigError(config.name + ": family '" + family_name(config.family) +
                          "' needs matrix " + key);
    }
    try {
        return HermitianOperator(*m);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(config.name + ": matrix " + key + ": " + e.what());
    }
}

}  // namespace detail

inline BuiltScenario build_scenario(const ScenarioConfig& config) {
    if (config.hbar <= 0.0) {
        throw ConfigError(config.name + ": hbar must be positive");
    }
    if (config.n_steps < 1 || config.stride < 1 || config.n_steps % config.stride != 0) {
        throw ConfigError(config.name + ": stride must be positive and divide n_steps");
    }

    Method method = Method::midpoint_exponential;
    try {
        method = method_from_name(config.method);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(config.name + ": " + e.what());
    }

    // tabulated runs default to the table horizon
    std::optional<ScalarSchedule> scalar;
    if (config.family == Family::two_level_drive || config.family == Family::linear_parametric ||
        config.family == Family::tabulated) {
        ScalarForm form = config.scalar;
        if (config.family == Family::tabulated) {
            form.form = "table";
        }
        scalar = detail::build_scalar(form, config);
    }

    double total_time = config.total_time.value_or(0.0);
    if (!config.total_time && config.family == Family::tabulated) {
        // reuse the parsed table to find its last knot
        const std::filesystem::path resolved = config.base_dir / config.scalar.table_path;
        std::ifstream table(resolved);
        double t = 0.0, v = 0.0, last = 0.0;
        std::string line;
        while (std::getline(table, line)) {
            const auto hash = line.find('#');
            if (hash != std::string::npos) {
                line.erase(hash);
            }
            std::istringstream fields(line);
            if (fields >> t >> v) {
                last = t;
            }
        }
        total_time = last;
    }
    if (total_time <= 0.0) {
        throw ConfigError(config.name + ": T must be present and positive");
    }

    const auto schedule = [&]() -> HamiltonianSchedule {
        switch (config.family) {
            case Family::two_level_drive:
                return make_two_level_drive(*scalar, total_time);
            case Family::linear_parametric:
                return make_linear_parametric(
                    *scalar, detail::checked_operator(config.h0, "H0", config), total_time);
            case Family::adiabatic: {
                const HermitianOperator hi =
                    detail::checked_operator(config.h_initial, "H_I", config);
                const HermitianOperator hf =
                    detail::checked_operator(config.h_final, "H_F", config);
                try {
                    return make_adiabatic(hi, hf, total_time);
                } catch (const std::invalid_argument& e) {
                    throw ConfigError(config.name + ": " + e.what());
                }
            }
            case Family::tabulated:
                if (config.h0) {
                    return make_linear_parametric(
                        *scalar, detail::checked_operator(config.h0, "H0", config), total_time);
                }
                return make_two_level_drive(*scalar, total_time);
            case Family::constant:
                return make_constant(detail::checked_operator(config.h0, "H0", config),
                                     total_time);
        }
        throw ConfigError(config.name + ": unreachable family");
    }();

    const auto initial = [&]() -> QuantumState {
        if (config.initial && config.family == Family::adiabatic) {
            throw ConfigError(config.name +
                              ": adiabatic runs start from the ground state of H_I; "
                              "'initial' cannot be overridden");
        }
        if (config.initial) {
            if (config.initial->size() != schedule.dim()) {
                throw ConfigError(config.name + ": 'initial' has dimension " +
                                  std::to_string(config.initial->size()) + ", schedule has " +
                                  std::to_string(schedule.dim()));
            }
            try {
                return QuantumState::normalized(*config.initial);
            } catch (const std::invalid_argument& e) {
                throw ConfigError(config.name + ": initial state: " + e.what());
            }
        }
        if (config.family == Family::adiabatic) {
            try {
                return ground_state(detail::checked_operator(config.h_initial, "H_I", config))
                    .first;
            } catch (const std::runtime_error& e) {
                throw ConfigError(config.name + ": " + e.what());
            }
        }
        if (schedule.dim() == 2 &&
            (config.family == Family::two_level_drive ||
             (config.family == Family::tabulated && !config.h0))) {
            return basis_state(2, 0);
        }
        return QuantumState::normalized(Vector::Ones(schedule.dim()));
    }();

    return BuiltScenario{schedule, initial, TimeGrid(total_time, config.n_steps, config.stride),
                         method, Units{config.hbar}};
}

}  // namespace qgeo
