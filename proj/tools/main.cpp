// contagion: command-line front end for the percolated threshold model.
//
// Every subcommand reads the same JSON config (see docs/config.md); global
// flags override the matching config fields. Results go to --out as CSV, or
// to stdout. With --out, a sidecar <out>.meta.json records the seed, the
// resolved config and the wall time, so the CSV itself stays byte-identical
// between runs.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "contagion/harness.hpp"

using namespace contagion;

namespace {

struct Globals {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string out;
    std::optional<std::size_t> replicas;
    std::optional<std::size_t> n;
    std::optional<std::size_t> threads;
};

ExperimentConfig load(const Globals& g) {
    ExperimentConfig c;
    if (!g.config.empty()) {
        c = config_from_json(read_json_file(g.config));
    }
    if (g.seed) c.seed = *g.seed;
    if (g.replicas) {
        if (*g.replicas == 0) {
            throw FieldError("--replicas", "must be at least 1");
        }
        c.replicas = *g.replicas;
    }
    if (g.n) {
        if (*g.n == 0) {
            throw FieldError("--n", "must be at least 1");
        }
        c.n = *g.n;
    }
    if (g.threads) c.threads = *g.threads;
    if (!g.out.empty()) c.output = g.out;
    return c;
}

void emit(const CsvTable& table, const ExperimentConfig& config, double wall_seconds, const std::string& command) {
    if (config.output.empty() || config.output == "-") {
        table.write(std::cout);
        return;
    }
    table.write_file(config.output);
    json meta = {{"command", command},
                 {"seed", config.seed},
                 {"rng", "splitmix64 counter streams; replica stream = root(seed).split(point * replicas + replica)"},
                 {"wall_seconds", wall_seconds},
                 {"config", to_json(config)}};
    std::ofstream(config.output + ".meta.json") << meta.dump(2) << '\n';
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string opt(const std::optional<double>& v) { return v ? format_number(*v) : "nan"; }

CsvTable pivotal_table(const ExperimentConfig& config) {
    CsvTable t;
    t.header = {config.sweep ? config.sweep->parameter : "point", "condition", "qc", "lambda_i", "lambda_s", "xi",
                "xi_verified", "s", "xibar", "gamma"};
    const auto values = config.points();
    for (std::size_t i = 0; i < values.size(); ++i) {
        const ModelSpec m = config.model_at(values[i]);
        const auto r = pivotal_and_cascade_fractions(m.p, m.t, m.pi);
        t.add_row({config.sweep ? format_number(values[i]) : std::to_string(i), r.condition_holds ? "1" : "0",
                   r.qc ? format_number(r.qc->value) : "nan", opt(r.lambda_i), opt(r.lambda_s), format_number(r.xi),
                   r.xi_verified ? "1" : "0", format_number(r.s_fraction), format_number(r.xibar),
                   format_number(r.gamma_fraction)});
    }
    return t;
}

CsvTable seedsize_table(const ExperimentConfig& config) {
    CsvTable t;
    t.header = {config.sweep ? config.sweep->parameter : "point", "alpha_c", "alpha_c_scan", "z_upper", "z_lower",
                "jump", "final_fraction", "zhat", "verified"};
    const auto values = config.points();
    for (std::size_t i = 0; i < values.size(); ++i) {
        const ModelSpec m = config.model_at(values[i]);
        const auto a = alpha_c(m.p, m.t, m.pi);
        const auto scan = alpha_c_scan(m.p, m.t, m.pi);
        const auto fb = final_buyers(m.params());
        t.add_row({config.sweep ? format_number(values[i]) : std::to_string(i), opt(a.alpha_c), opt(scan),
                   format_number(a.z_upper), format_number(a.z_lower), format_number(a.jump),
                   format_number(fb.fraction), format_number(fb.zhat), fb.verified ? "1" : "0"});
    }
    return t;
}

CsvTable coexist_table(const ExperimentConfig& config) {
    CsvTable t;
    t.header = {config.sweep ? config.sweep->parameter : "point", "condition", "xi", "criterion", "coexists",
                "zeta", "lambda_c"};
    std::optional<double> lambda_c;
    const auto q = config.model.t.proportion();
    if (config.model.p.kind() == DegreeKind::Poisson && q && config.model.pi == 1.0 &&
        (!config.sweep || config.sweep->parameter != "q")) {
        lambda_c = poisson_lambda_c(*q);
    }
    const auto values = config.points();
    for (std::size_t i = 0; i < values.size(); ++i) {
        const ModelSpec m = config.model_at(values[i]);
        const std::string key = config.sweep ? format_number(values[i]) : std::to_string(i);
        if (!cascade_condition(m.p, m.t, m.pi)) {
            t.add_row({key, "0", "nan", "nan", "0", "nan", opt(lambda_c)});
            continue;
        }
        const auto c = coexistence(m.p, m.t, m.pi);
        const auto z = m.pi == 1.0 ? coexistence_zeta(m.p, m.t) : std::nullopt;
        t.add_row({key, "1", format_number(c.xi), format_number(c.criterion), c.coexists ? "1" : "0", opt(z),
                   opt(lambda_c)});
    }
    return t;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Threshold contagion on configuration-model random graphs"};
    app.require_subcommand(1);
    app.fallthrough();

    Globals g;
    app.add_option("--config", g.config, "JSON experiment config");
    app.add_option("--seed", g.seed, "Root RNG seed");
    app.add_option("--out", g.out, "Output CSV path (default stdout)");
    app.add_option("--replicas", g.replicas, "Replicas per sweep point");
    app.add_option("--n", g.n, "Number of vertices");
    app.add_option("--threads", g.threads, "Worker threads (0 = all cores)");

    auto* analytic = app.add_subcommand("analytic", "Limit formulas (zhat, xi, s, gamma) at each sweep point");
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo replicas, one aggregate row per sweep point");
    auto* sweep = app.add_subcommand("sweep", "Analytic and simulated columns side by side");
    auto* pivotal = app.add_subcommand("pivotal", "Cascade condition, qc, window, pivotal and cascade fractions");
    auto* seedsize = app.add_subcommand("seedsize", "Critical seed alpha_c and final buyers");
    auto* coexist = app.add_subcommand("coexist", "Coexistence criterion and lambda_c");
    auto* figure_cmd = app.add_subcommand("figure", "Data behind a named figure");
    auto* compare_cmd = app.add_subcommand("compare", "Deviation report between two CSV files");

    std::string figure_name;
    figure_cmd->add_option("name", figure_name, "cascade_window, qc_curve, coexistence, alpha_c, seed_response, trials")
        ->required();

    std::string file_a;
    std::string file_b;
    CompareOptions copts;
    std::vector<std::string> pairs;
    compare_cmd->add_option("a", file_a, "First CSV (e.g. analytic)")->required();
    compare_cmd->add_option("b", file_b, "Second CSV (e.g. simulated)")->required();
    compare_cmd->add_option("--key", copts.key, "Key column (default: first column)");
    compare_cmd->add_option("--columns", pairs, "Columns to compare, as name or a_name:b_name");
    compare_cmd->add_option("--tolerance", copts.tolerance, "Tolerance when b has no tolerance column");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    const auto t0 = std::chrono::steady_clock::now();
    try {
        if (compare_cmd->parsed()) {
            for (const auto& p : pairs) {
                const auto colon = p.find(':');
                copts.columns.emplace_back(p.substr(0, colon), colon == std::string::npos ? p : p.substr(colon + 1));
            }
            const auto rep = compare(CsvTable::read_file(file_a), CsvTable::read_file(file_b), copts);
            ExperimentConfig c;
            c.output = g.out;
            emit(rep.table(), c, seconds_since(t0), "compare");
            std::cerr << fmt::format("max deviation {} : {}\n", format_number(rep.max_deviation),
                                     rep.pass ? "pass" : "FAIL");
            return rep.pass ? 0 : 1;
        }

        const ExperimentConfig config = load(g);
        if (analytic->parsed()) {
            emit(analytic_table(config), config, seconds_since(t0), "analytic");
        } else if (pivotal->parsed()) {
            emit(pivotal_table(config), config, seconds_since(t0), "pivotal");
        } else if (seedsize->parsed()) {
            emit(seedsize_table(config), config, seconds_since(t0), "seedsize");
        } else if (coexist->parsed()) {
            emit(coexist_table(config), config, seconds_since(t0), "coexist");
        } else if (figure_cmd->parsed()) {
            emit(figure(figure_name, config), config, seconds_since(t0), "figure " + figure_name);
        } else if (simulate->parsed() || sweep->parsed()) {
            const auto result = run_experiment(config);
            for (const auto& p : result.points) {
                for (const auto& r : p.replicas) {
                    if (!r.ok) {
                        std::cerr << fmt::format("replica {} at point {} failed: {}\n", r.replica, r.point, r.error);
                    }
                }
            }
            if (simulate->parsed()) {
                emit(summary_table(config, result), config, result.wall_seconds, "simulate");
                if (config.per_replica) {
                    if (config.output.empty() || config.output == "-") {
                        std::cout << '\n';
                        replica_table(config, result).write(std::cout);
                    } else {
                        replica_table(config, result).write_file(config.output + ".replicas.csv");
                    }
                }
            } else {
                emit(sweep_table(config, result), config, result.wall_seconds, "sweep");
            }
            return result.failed() > 0 ? 1 : 0;
        }
    } catch (const ConfigurationError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const UnknownFigure& e) {
        std::cerr << e.what() << " (known: ";
        for (const auto& n : figure_names()) std::cerr << n << ' ';
        std::cerr << ")\n";
        return 2;
    } catch (const GridMismatch& e) {
        std::cerr << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
