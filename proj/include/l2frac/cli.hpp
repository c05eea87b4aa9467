#pragma once

// Command-line front end: flag parsing into a RunConfig and dispatch.

#include <cstddef>
#include <fstream>
#include <iostream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "l2frac/analysis.hpp"
#include "l2frac/properties.hpp"

namespace l2frac::cli {

enum class Command { table1, table2, table3, table4, single, properties };
enum class Format { csv, markdown };

struct RunConfig {
    Command command = Command::properties;
    std::vector<double> alpha_list;
    std::optional<SchemeKind> scheme;
    std::string output_path;
    Format format = Format::csv;
    std::optional<std::size_t> N;
    std::optional<std::size_t> M;
    std::optional<std::size_t> depth;
    std::size_t jobs = 1;
};

/// Bad flags or flag values; the message names the flag.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailed = 1;
inline constexpr int kExitConfig = 2;

inline std::vector<double> parse_alpha_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        double value = 0.0;
        try {
            value = std::stod(item, &used);
        } catch (const std::exception&) {
            throw ConfigError("--alpha: '" + item + "' is not a number");
        }
        if (used != item.size()) {
            throw ConfigError("--alpha: '" + item + "' is not a number");
        }
        if (!(value > 0.0 && value < 1.0)) {
            throw ConfigError("--alpha: " + item + " is outside the open interval (0, 1)");
        }
        out.push_back(value);
    }
    if (out.empty() || (!text.empty() && text.back() == ',')) {
        throw ConfigError("--alpha: expected a comma-separated list of values in (0, 1)");
    }
    return out;
}

inline RunConfig parse_args(const std::vector<std::string>& args) {
    CLI::App app{"Time-fractional diffusion: L2 schemes and convergence tables", "l2frac"};
    int table = 0;
    bool properties = false;
    bool single = false;
    std::string alpha_text;
    std::string scheme_text;
    std::string format_text = "csv";
    RunConfig config;
    std::size_t n_value = 0;
    std::size_t m_value = 0;
    std::size_t depth_value = 0;

    auto* table_opt = app.add_option("--table", table, "Reproduce table 1, 2, 3 or 4");
    app.add_flag("--properties", properties, "Run the lemma and property suite");
    app.add_flag("--single", single, "One run on a given (N, M)");
    app.add_option("--alpha", alpha_text, "Comma-separated fractional orders in (0, 1)");
    app.add_option("--scheme", scheme_text, "order2 or compact");
    auto* n_opt = app.add_option("--N", n_value, "Spatial subintervals (with --single)");
    auto* m_opt = app.add_option("--M", m_value, "Time steps (with --single)");
    auto* depth_opt = app.add_option("--depth", depth_value, "Ladder length");
    app.add_option("--out", config.output_path, "Output file (default: standard output)");
    app.add_option("--format", format_text, "csv or md");
    app.add_option("--jobs", config.jobs, "Concurrent solves");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        throw ConfigError(app.help());
    } catch (const CLI::ParseError& e) {
        throw ConfigError(e.what());
    }

    const int modes = static_cast<int>(table_opt->count() > 0) + static_cast<int>(properties) +
                      static_cast<int>(single);
    if (modes != 1) {
        throw ConfigError("--table/--single/--properties: choose exactly one mode");
    }
    if (properties) {
        config.command = Command::properties;
    } else if (single) {
        config.command = Command::single;
    } else {
        if (table < 1 || table > 4) {
            throw ConfigError("--table: expected 1, 2, 3 or 4, got " + std::to_string(table));
        }
        config.command = static_cast<Command>(table - 1);
    }

    if (!alpha_text.empty()) {
        config.alpha_list = parse_alpha_list(alpha_text);
    }
    if (!scheme_text.empty()) {
        if (scheme_text == "order2") {
            config.scheme = SchemeKind::order2;
        } else if (scheme_text == "compact") {
            config.scheme = SchemeKind::compact4;
        } else {
            throw ConfigError("--scheme: expected order2 or compact, got '" + scheme_text + "'");
        }
    }
    if (format_text == "csv") {
        config.format = Format::csv;
    } else if (format_text == "md") {
        config.format = Format::markdown;
    } else {
        throw ConfigError("--format: expected csv or md, got '" + format_text + "'");
    }
    if (config.jobs < 1) {
        throw ConfigError("--jobs: must be at least 1");
    }
    if (depth_opt->count() > 0) {
        if (depth_value < 1) {
            throw ConfigError("--depth: must be at least 1");
        }
        config.depth = depth_value;
    }
    if (n_opt->count() > 0) {
        config.N = n_value;
    }
    if (m_opt->count() > 0) {
        config.M = m_value;
    }

    if (config.command == Command::single) {
        if (!config.N || *config.N < 2) {
            throw ConfigError("--N: --single needs --N >= 2");
        }
        if (!config.M || *config.M < 1) {
            throw ConfigError("--M: --single needs --M >= 1");
        }
        if (config.alpha_list.size() != 1) {
            throw ConfigError("--alpha: --single needs exactly one value");
        }
    } else if (config.N || config.M) {
        throw ConfigError(std::string(config.N ? "--N" : "--M") + ": only valid with --single");
    }
    return config;
}

inline RunConfig parse_args(int argc, const char* const* argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) {
        args.emplace_back(argv[i]);
    }
    return parse_args(args);
}

inline void write_properties(std::ostream& out, const std::vector<PropertyResult>& results) {
    for (const PropertyResult& r : results) {
        out << (r.passed ? "PASS " : "FAIL ") << r.name << " (" << r.checked << " checks, "
            << r.violations << " violations): " << r.detail << '\n';
    }
}

inline void write_single(std::ostream& out, const ErrorReport& rep, Format format) {
    char alpha_buf[32];
    std::snprintf(alpha_buf, sizeof(alpha_buf), "%g", rep.alpha);
    if (format == Format::csv) {
        out << "alpha,N,M,tau,h,err_L2,err_C,err_grad\n"
            << alpha_buf << ',' << rep.grid.N << ',' << rep.grid.M << ',' << format_sci(rep.grid.tau)
            << ',' << format_sci(rep.grid.h) << ',' << format_sci(rep.err_L2) << ','
            << format_sci(rep.err_C) << ',' << format_sci(rep.err_grad) << '\n';
    } else {
        out << "| alpha | tau | h | max ||z||_0 | max |z|_C | max ||z_x||_0 |\n"
            << "|---|---|---|---|---|---|\n"
            << "| " << alpha_buf << " | " << format_step(rep.grid.tau) << " | "
            << format_step(rep.grid.h) << " | " << format_sci(rep.err_L2) << " | "
            << format_sci(rep.err_C) << " | " << format_sci(rep.err_grad) << " |\n";
    }
}

/// Runs a parsed configuration, writing to config.output_path or `out`.
/// Returns 0 on success, 1 when a property check fails, 2 on configuration
/// errors (including invalid combinations discovered while running).
inline int run(const RunConfig& config, std::ostream& out = std::cout,
               std::ostream& err = std::cerr) {
    std::ofstream file;
    if (!config.output_path.empty()) {
        file.open(config.output_path);
        if (!file) {
            err << "--out: cannot open '" << config.output_path << "' for writing\n";
            return kExitConfig;
        }
    }
    std::ostream& sink = config.output_path.empty() ? out : file;

    try {
        if (config.command == Command::properties) {
            const std::vector<PropertyResult> results = run_property_suite();
            write_properties(sink, results);
            for (const PropertyResult& r : results) {
                if (!r.passed) {
                    return kExitFailed;
                }
            }
            return kExitOk;
        }

        const SchemeKind scheme = config.scheme.value_or(SchemeKind::order2);
        const CaseVariant variant =
            scheme == SchemeKind::compact4 ? CaseVariant::time_only : CaseVariant::variable_xt;
        if (config.command == Command::single) {
            write_single(sink, run_single(scheme, config.alpha_list.front(), variant, *config.N, *config.M),
                         config.format);
            return kExitOk;
        }

        const auto table = static_cast<BenchmarkTable>(static_cast<int>(config.command) + 1);
        const std::vector<double> alphas =
            config.alpha_list.empty() ? table_alphas(table) : config.alpha_list;
        std::vector<ConvergenceTable> tables;
        for (double a : alphas) {
            ExperimentSpec spec = table_experiment(table, a, config.depth);
            if (config.scheme) {
                spec.scheme = *config.scheme;
                spec.variant = variant;
            }
            tables.push_back(run_experiment(spec, config.jobs));
        }
        if (config.format == Format::csv) {
            write_csv(sink, tables);
        } else {
            write_markdown(sink, tables);
        }
    } catch (const std::invalid_argument& e) {
        err << "configuration error: " << e.what() << '\n';
        return kExitConfig;
    }
    sink.flush();
    if (!sink) {
        err << "--out: write to '" << config.output_path << "' failed\n";
        return kExitConfig;
    }
    return kExitOk;
}

}  // namespace l2frac::cli
