// lrp: sampler, Monte Carlo driver and closed-form evaluator for the
// long-range percolation random-matrix ensemble.
//
// Subcommands: density, stats, scaling, correlation, theory, exponent,
// cumulant-check, selftest. Every run writes a CSV of the results and a JSON
// summary carrying the tool version, the effective configuration and the
// seed, enough to reproduce the run. `--plot` additionally emits a gnuplot
// script next to the CSV.

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <complex>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "common.hpp"
#include "lrp/csv.hpp"
#include "lrp/cumulant.hpp"
#include "lrp/ensemble.hpp"
#include "lrp/montecarlo.hpp"
#include "lrp/profile.hpp"
#include "lrp/theory.hpp"
#include "lrp/version.hpp"

namespace lrp::cli {
namespace {

using nlohmann::json;

json json_complex(std::complex<double> z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

struct OutputSink {
    std::string prefix;
    std::string format;  // csv | json | both
    bool plot = false;
    std::vector<std::string> written;

    void write_csv(const csv::Table& table) {
        if (format == "json") return;
        const std::string path = prefix + ".csv";
        csv::write_file(table, path);
        written.push_back(path);
    }
    void write_json(const json& summary) {
        if (format == "csv") return;
        const std::string path = prefix + ".json";
        std::ofstream out(path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
        out << summary.dump(2) << '\n';
        if (!out) throw std::runtime_error("write failed for '" + path + "'");
        written.push_back(path);
    }
    void write_plot(const std::string& script) {
        if (!plot || script.empty()) return;
        const std::string path = prefix + ".gp";
        std::ofstream out(path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
        out << script;
        written.push_back(path);
    }
};

// Options shared by the ensemble-driven subcommands.
struct EnsembleArgs {
    int n = 500;
    double b = 50.0;
    double v = 1.0;
    std::string dist = "gaussian";
    std::string profile = "gaussian";
    std::optional<double> nu;
    std::optional<double> alpha_check;

    void attach(CLI::App* cmd, bool with_n = true) {
        if (with_n) {
            cmd->add_option("--n", n, "half-size; N = 2n+1")->check(CLI::NonNegativeNumber);
            cmd->add_option("--b", b, "bandwidth parameter (real, >= 1)");
        }
        cmd->add_option("--v", v, "entry standard-deviation scale")->check(CLI::PositiveNumber);
        cmd->add_option("--dist", dist, "entry law: gaussian|rademacher|uniform");
        cmd->add_option("--profile", profile,
                        "connectivity profile: gaussian|exponential|indicator|stable|power_law, "
                        "optionally 'kind:nu=<float>'");
        cmd->add_option("--nu", nu, "shape parameter for stable/power_law profiles");
        cmd->add_option("--alpha-check", alpha_check,
                        "warn when b leaves the n^{1/3} <= b <= n regime");
    }

    Profile make_profile() const {
        if (nu) {
            // `--profile stable --nu 1.5` spelling: --nu overrides any inline
            // parameter, so resolve the kind by name only.
            const std::string kind_name = profile.substr(0, profile.find(':'));
            for (ProfileKind k :
                 {ProfileKind::gaussian, ProfileKind::exponential, ProfileKind::indicator,
                  ProfileKind::stable, ProfileKind::power_law})
                if (kind_name == to_string(k)) return Profile::make(k, nu);
            throw ProfileError("unknown profile kind '" + kind_name + "'");
        }
        return Profile::parse(profile);
    }

    EnsembleSpec make_spec() const {
        EnsembleSpec spec;
        spec.n = n;
        spec.b = b;
        spec.dist = {parse_entry_kind(dist), v};
        spec.profile = make_profile();
        spec.alpha_check = alpha_check;
        spec.validate();
        for (const std::string& warning : spec.regime_warnings())
            std::cerr << "warning: " << warning << '\n';
        return spec;
    }

    void echo(KeyValueMap& config) const {
        config["n"] = std::to_string(n);
        config["b"] = csv::format_double(b);
        config["v"] = csv::format_double(v);
        config["dist"] = dist;
        config["profile"] = make_profile().name();
    }
};

csv::Table stats_table(const McReport& report) {
    csv::Table table;
    table.header = {"statistic", "z1_re", "z1_im", "z2_re", "z2_im",
                    "value_re",  "value_im", "stderr", "R", "N", "b", "seed"};
    for (const StatRow& row : report.rows) {
        table.rows.push_back({row.statistic,
                              csv::format_double(row.z1.real()),
                              csv::format_double(row.z1.imag()),
                              row.has_z2 ? csv::format_double(row.z2.real()) : "",
                              row.has_z2 ? csv::format_double(row.z2.imag()) : "",
                              csv::format_double(row.value.real()),
                              csv::format_double(row.value.imag()),
                              csv::format_double(row.stderr_value),
                              std::to_string(report.R),
                              std::to_string(2 * report.n + 1),
                              csv::format_double(report.b),
                              std::to_string(report.seed)});
    }
    return table;
}

json stats_json(const McReport& report) {
    json rows = json::array();
    for (const StatRow& row : report.rows) {
        json r{{"statistic", row.statistic},
               {"z1", json_complex(row.z1)},
               {"value", json_complex(row.value)},
               {"stderr", row.stderr_value}};
        if (row.has_z2) r["z2"] = json_complex(row.z2);
        rows.push_back(r);
    }
    return rows;
}

std::string errorbar_plot(const std::string& csv_path, const std::string& title) {
    std::ostringstream s;
    s << "# gnuplot script generated by lrp\n"
      << "set datafile separator ','\n"
      << "set key autotitle columnhead\n"
      << "set title '" << title << "'\n"
      << "plot '" << csv_path << "' using 0:6:8 with yerrorbars title 'value_re'\n";
    return s.str();
}

// Extracts --config from args, loads the file (line-oriented `key = value`,
// `#` comments), validates every key against the chosen subcommand's options
// and appends file-sourced tokens for keys not already present on the
// command line, so flags override file values. Multi-valued keys (z) accept
// `;`-separated lists.
void merge_config_file(CLI::App& app, std::vector<std::string>& args) {
    std::string path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config") {
            if (i + 1 >= args.size())
                throw std::invalid_argument("--config requires a file path");
            path = args[i + 1];
            args.erase(args.begin() + static_cast<std::ptrdiff_t>(i),
                       args.begin() + static_cast<std::ptrdiff_t>(i) + 2);
            break;
        }
        if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
            args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
            break;
        }
    }
    if (path.empty()) return;

    CLI::App* sub = nullptr;
    for (const std::string& arg : args)
        if ((sub = app.get_subcommand_no_throw(arg)) != nullptr) break;
    if (sub == nullptr)
        throw std::invalid_argument("--config requires a subcommand to apply the keys to");

    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file '" + path + "'");
    auto trim = [](std::string s) {
        const auto lo = s.find_first_not_of(" \t\r");
        const auto hi = s.find_last_not_of(" \t\r");
        return lo == std::string::npos ? std::string{} : s.substr(lo, hi - lo + 1);
    };
    auto has_cli_key = [&args](const std::string& flag) {
        for (const std::string& arg : args)
            if (arg == flag || arg.rfind(flag + "=", 0) == 0) return true;
        return false;
    };
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(line_no) +
                                        " is not 'key = value': '" + line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw std::invalid_argument("config line " + std::to_string(line_no) + ": empty key");
        const std::string flag = "--" + key;
        if (sub->get_option_no_throw(flag) == nullptr)
            throw std::invalid_argument("unknown key '" + key + "' in config file '" + path + "'");
        if (has_cli_key(flag)) continue;  // command line wins
        std::stringstream parts(value);
        std::string part;
        while (std::getline(parts, part, ';')) args.push_back(flag + "=" + trim(part));
    }
}

int run_with_summary(const std::string& subcommand, OutputSink& sink, KeyValueMap& config,
                     std::uint64_t seed,
                     const std::function<json(csv::Table&, std::string&)>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    csv::Table table;
    std::string plot_script;
    json results = body(table, plot_script);
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    sink.write_csv(table);
    json summary{{"tool", "lrp"},
                 {"version", kVersion},
                 {"subcommand", subcommand},
                 {"config", config},
                 {"seed", seed},
                 {"wall_seconds", wall},
                 {"results", results}};
    sink.write_json(summary);
    sink.write_plot(plot_script);
    for (const std::string& path : sink.written) std::cout << "wrote " << path << '\n';
    return 0;
}

}  // namespace

std::complex<double> parse_complex(const std::string& text) {
    const auto comma = text.find(',');
    if (comma == std::string::npos)
        throw std::invalid_argument("complex value must be 're,im', got '" + text + "'");
    std::size_t used_re = 0, used_im = 0;
    const std::string re_part = text.substr(0, comma);
    const std::string im_part = text.substr(comma + 1);
    double re = 0, im = 0;
    try {
        re = std::stod(re_part, &used_re);
        im = std::stod(im_part, &used_im);
    } catch (const std::exception&) {
        throw std::invalid_argument("malformed complex value '" + text + "'");
    }
    if (used_re != re_part.size() || used_im != im_part.size())
        throw std::invalid_argument("malformed complex value '" + text + "'");
    return {re, im};
}

}  // namespace lrp::cli

int main(int argc, char** argv) {
    using namespace lrp;
    using namespace lrp::cli;
    using nlohmann::json;

    CLI::App app{"long-range percolation random-matrix toolkit"};
    app.require_subcommand(1);
    app.set_version_flag("--version", lrp::kVersion);

    std::string out_prefix;
    std::string format = "both";
    bool plot = false;
    int workers = 0;
    std::uint64_t seed = 1;
    std::string config_path_for_help;

    auto add_common = [&](CLI::App* cmd, const std::string& default_prefix) {
        cmd->add_option("--out", out_prefix, "output path prefix (default " + default_prefix + ")");
        cmd->add_option("--format", format, "csv|json|both")
            ->check(CLI::IsMember({"csv", "json", "both"}))
            ->default_val("both");
        cmd->add_flag("--plot", plot, "emit a gnuplot script referencing the CSV");
        cmd->add_option("--workers", workers,
                        "worker thread cap (0: LRP_WORKERS env or hardware)");
        cmd->add_option("--seed", seed, "master seed");
        cmd->add_option("--config", config_path_for_help,
                        "configuration file (key = value lines, # comments; command-line "
                        "flags override file values)");
    };

    // density
    auto* density_cmd = app.add_subcommand("density", "pooled eigenvalue histogram vs semicircle");
    EnsembleArgs density_args;
    density_args.attach(density_cmd);
    std::uint64_t density_reps = 50;
    int density_bins = 61;
    density_cmd->add_option("--reps", density_reps, "number of realizations");
    density_cmd->add_option("--bins", density_bins, "histogram bins over [-2v-1, 2v+1]");
    add_common(density_cmd, "lrp_density");

    // stats
    auto* stats_cmd = app.add_subcommand("stats", "resolvent-trace statistics at given z");
    EnsembleArgs stats_args;
    stats_args.attach(stats_cmd);
    std::uint64_t stats_reps = 200;
    std::vector<std::string> stats_z{"0,4"};
    stats_cmd->add_option("--reps", stats_reps, "number of realizations");
    stats_cmd->add_option("--z", stats_z, "evaluation points 're,im' (repeatable)");
    add_common(stats_cmd, "lrp_stats");

    // scaling
    auto* scaling_cmd = app.add_subcommand("scaling", "Nb*Var{g(z)} across an (N,b) ladder");
    EnsembleArgs scaling_args;
    scaling_args.attach(scaling_cmd, /*with_n=*/false);
    std::string scaling_rungs = "401:40,801:80,1601:160";
    std::uint64_t scaling_reps = 1000;
    std::string scaling_z = "0,4";
    scaling_cmd->add_option("--rungs", scaling_rungs, "comma list of N:b pairs (N odd)");
    scaling_cmd->add_option("--reps", scaling_reps, "realizations per rung");
    scaling_cmd->add_option("--z", scaling_z, "evaluation point 're,im', must be in Lambda_eta");
    add_common(scaling_cmd, "lrp_scaling");

    // correlation
    auto* corr_cmd = app.add_subcommand("correlation", "Nb*Cov{g(z1),g(z2)} vs the theory term T");
    EnsembleArgs corr_args;
    corr_args.attach(corr_cmd);
    std::uint64_t corr_reps = 2000;
    std::string corr_z1 = "0,4", corr_z2 = "0,-4";
    corr_cmd->add_option("--reps", corr_reps, "number of realizations");
    corr_cmd->add_option("--z1", corr_z1, "first point 're,im'");
    corr_cmd->add_option("--z2", corr_z2, "second point 're,im'");
    add_common(corr_cmd, "lrp_correlation");

    // theory
    auto* theory_cmd = app.add_subcommand("theory", "closed-form w, rho_sc, Delta, Q, T, Xi, B");
    EnsembleArgs theory_args;
    theory_args.attach(theory_cmd, /*with_n=*/false);
    std::string theory_z1 = "0,4", theory_z2 = "0,-4";
    double theory_lambda1 = 0.5, theory_lambda2 = -0.5;
    theory_cmd->add_option("--z1", theory_z1, "first point 're,im'");
    theory_cmd->add_option("--z2", theory_z2, "second point 're,im'");
    theory_cmd->add_option("--lambda1", theory_lambda1, "first bulk point for Xi");
    theory_cmd->add_option("--lambda2", theory_lambda2, "second bulk point for Xi");
    add_common(theory_cmd, "lrp_theory");

    // exponent
    auto* exponent_cmd =
        app.add_subcommand("exponent", "fit the |lambda1-lambda2|^{-(2-1/nu)} scaling exponent");
    EnsembleArgs exponent_args;
    exponent_args.attach(exponent_cmd, /*with_n=*/false);
    double exponent_lambda = 0.0;
    std::string exponent_separations;
    exponent_cmd->add_option("--lambda", exponent_lambda, "bulk center point");
    exponent_cmd->add_option("--separations", exponent_separations,
                             "comma list; default 7 log-spaced over [1e-5, 1e-2]");
    add_common(exponent_cmd, "lrp_exponent");

    // cumulant-check
    auto* cumulant_cmd =
        app.add_subcommand("cumulant-check", "cumulant expansion verifier over (law, F, q)");
    std::string cumulant_law = "all";
    int cumulant_q = 0;  // 0 = all of {1,3,5}
    cumulant_cmd->add_option("--law", cumulant_law, "gaussian|rademacher|uniform|all");
    cumulant_cmd->add_option("--q", cumulant_q, "expansion order (1|3|5; default all)");
    add_common(cumulant_cmd, "lrp_cumulant");

    // selftest
    auto* selftest_cmd = app.add_subcommand("selftest", "fast invariant suite; nonzero on failure");
    bool selftest_quiet = false;
    selftest_cmd->add_flag("--quiet", selftest_quiet, "only print the final verdict");

    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    try {
        merge_config_file(app, args);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    try {
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        OutputSink sink{out_prefix, format, plot, {}};
        KeyValueMap config;
        config["format"] = format;
        config["workers"] = std::to_string(workers);
        McOptions mc{workers};
        auto resolve_prefix = [&](const std::string& fallback) {
            if (sink.prefix.empty()) sink.prefix = fallback;
            config["out"] = sink.prefix;
        };

        if (app.got_subcommand(selftest_cmd)) return run_selftest(!selftest_quiet);

        if (app.got_subcommand(density_cmd)) {
            resolve_prefix("lrp_density");
            const EnsembleSpec spec = density_args.make_spec();
            density_args.echo(config);
            config["reps"] = std::to_string(density_reps);
            config["bins"] = std::to_string(density_bins);
            config["seed"] = std::to_string(seed);
            return run_with_summary("density", sink, config, seed, [&](csv::Table& t,
                                                                       std::string& gp) {
                const DensityReport report =
                    density_experiment(spec, density_reps, density_bins, seed, mc);
                const TheoryContext ctx = TheoryContext::from(spec.dist, spec.profile);
                t.header = {"bin_lo", "bin_hi", "count", "density", "semicircle_avg"};
                for (std::size_t k = 0; k + 1 < report.edges.size(); ++k) {
                    const double width = report.edges[k + 1] - report.edges[k];
                    const double sc = (semicircle_cdf(ctx, report.edges[k + 1]) -
                                       semicircle_cdf(ctx, report.edges[k])) /
                                      width;
                    t.rows.push_back({csv::format_double(report.edges[k]),
                                      csv::format_double(report.edges[k + 1]),
                                      std::to_string(report.counts[k]),
                                      csv::format_double(report.density[k]),
                                      csv::format_double(sc)});
                }
                std::ostringstream s;
                s << "# gnuplot script generated by lrp\n"
                  << "set datafile separator ','\nset key autotitle columnhead\n"
                  << "set style fill solid 0.4\n"
                  << "plot '" << sink.prefix
                  << ".csv' using (($1+$2)/2):4 with boxes title 'empirical', \\\n"
                  << "     '" << sink.prefix
                  << ".csv' using (($1+$2)/2):5 with lines lw 2 title 'semicircle'\n";
                gp = s.str();
                return json{{"l1_distance", report.l1_distance},
                            {"mass_outside", report.mass_outside},
                            {"underflow", report.underflow},
                            {"overflow", report.overflow},
                            {"R", report.R},
                            {"wall_seconds", report.wall_seconds}};
            });
        }

        if (app.got_subcommand(stats_cmd)) {
            resolve_prefix("lrp_stats");
            const EnsembleSpec spec = stats_args.make_spec();
            stats_args.echo(config);
            config["reps"] = std::to_string(stats_reps);
            config["seed"] = std::to_string(seed);
            std::vector<std::complex<double>> zs;
            for (const std::string& z : stats_z) {
                const auto value = parse_complex(z);
                if (value.imag() == 0.0)
                    throw std::invalid_argument("z must be non-real, got '" + z + "'");
                zs.push_back(value);
                config["z"] += (config["z"].empty() ? "" : ";") + z;
            }
            return run_with_summary("stats", sink, config, seed, [&](csv::Table& t,
                                                                     std::string& gp) {
                const McReport report = estimate_resolvent_stats(spec, zs, stats_reps, seed, mc);
                t = stats_table(report);
                gp = errorbar_plot(sink.prefix + ".csv", "resolvent statistics");
                return json{{"rows", stats_json(report)}, {"wall_seconds", report.wall_seconds}};
            });
        }

        if (app.got_subcommand(scaling_cmd)) {
            resolve_prefix("lrp_scaling");
            scaling_args.echo(config);
            config["rungs"] = scaling_rungs;
            config["reps"] = std::to_string(scaling_reps);
            config["z"] = scaling_z;
            config["seed"] = std::to_string(seed);
            const auto z = parse_complex(scaling_z);
            std::vector<EnsembleSpec> ladder;
            std::stringstream rung_stream(scaling_rungs);
            std::string rung;
            while (std::getline(rung_stream, rung, ',')) {
                const auto colon = rung.find(':');
                if (colon == std::string::npos)
                    throw std::invalid_argument("rung must be 'N:b', got '" + rung + "'");
                const int N = std::stoi(rung.substr(0, colon));
                if (N % 2 == 0) throw std::invalid_argument("rung N must be odd (N = 2n+1)");
                EnsembleSpec spec;
                spec.n = (N - 1) / 2;
                spec.b = std::stod(rung.substr(colon + 1));
                spec.dist = {parse_entry_kind(scaling_args.dist), scaling_args.v};
                spec.profile = scaling_args.make_profile();
                spec.alpha_check = scaling_args.alpha_check;
                ladder.push_back(std::move(spec));
            }
            return run_with_summary("scaling", sink, config, seed, [&](csv::Table& t,
                                                                       std::string& gp) {
                const auto rungs = variance_scaling_experiment(ladder, z, scaling_reps, seed, mc);
                t.header = {"N", "b", "nb_var", "stderr", "R", "z_re", "z_im", "seed"};
                json jr = json::array();
                for (const ScalingRung& r : rungs) {
                    t.rows.push_back({std::to_string(r.N), csv::format_double(r.b),
                                      csv::format_double(r.nb_var),
                                      csv::format_double(r.stderr_value),
                                      std::to_string(scaling_reps), csv::format_double(z.real()),
                                      csv::format_double(z.imag()), std::to_string(seed)});
                    jr.push_back({{"N", r.N},
                                  {"b", r.b},
                                  {"nb_var", r.nb_var},
                                  {"stderr", r.stderr_value}});
                }
                std::ostringstream s;
                s << "# gnuplot script generated by lrp\n"
                  << "set datafile separator ','\nset key autotitle columnhead\nset logscale x\n"
                  << "plot '" << sink.prefix
                  << ".csv' using 1:3:4 with yerrorlines title 'Nb Var'\n";
                gp = s.str();
                return json{{"rungs", jr}};
            });
        }

        if (app.got_subcommand(corr_cmd)) {
            resolve_prefix("lrp_correlation");
            const EnsembleSpec spec = corr_args.make_spec();
            corr_args.echo(config);
            config["reps"] = std::to_string(corr_reps);
            config["z1"] = corr_z1;
            config["z2"] = corr_z2;
            config["seed"] = std::to_string(seed);
            const auto z1 = parse_complex(corr_z1), z2 = parse_complex(corr_z2);
            return run_with_summary("correlation", sink, config, seed, [&](csv::Table& t,
                                                                           std::string& gp) {
                const CorrelationComparison cmp =
                    correlation_vs_theory(spec, z1, z2, corr_reps, seed, mc);
                t = stats_table(cmp.stats);
                gp = errorbar_plot(sink.prefix + ".csv", "correlation vs theory");
                return json{{"nb_cov", json_complex(cmp.nb_cov)},
                            {"nb_cov_stderr", cmp.nb_cov_stderr},
                            {"t_theory", json_complex(cmp.t_theory)},
                            {"difference", json_complex(cmp.difference)},
                            {"diff_in_stderr", cmp.diff_in_stderr},
                            {"stderr_target_met", cmp.stderr_target_met},
                            {"wall_seconds", cmp.stats.wall_seconds}};
            });
        }

        if (app.got_subcommand(theory_cmd)) {
            resolve_prefix("lrp_theory");
            theory_args.echo(config);
            config["z1"] = theory_z1;
            config["z2"] = theory_z2;
            config["lambda1"] = csv::format_double(theory_lambda1);
            config["lambda2"] = csv::format_double(theory_lambda2);
            config["seed"] = std::to_string(seed);
            const auto z1 = parse_complex(theory_z1), z2 = parse_complex(theory_z2);
            const Profile profile = theory_args.make_profile();
            const EntryDistribution dist{parse_entry_kind(theory_args.dist), theory_args.v};
            const TheoryContext ctx = TheoryContext::from(dist, profile);
            return run_with_summary("theory", sink, config, seed, [&](csv::Table& t,
                                                                      std::string&) {
                t.header = {"name", "value_re", "value_im"};
                json results;
                auto put = [&](const std::string& name, std::complex<double> value) {
                    t.rows.push_back({name, csv::format_double(value.real()),
                                      csv::format_double(value.imag())});
                    results[name] = json_complex(value);
                };
                put("w1", solve_w(ctx, z1));
                put("w2", solve_w(ctx, z2));
                put("rho_sc_0", semicircle_density(ctx, 0.0));
                put("rho_sc_lambda1", semicircle_density(ctx, theory_lambda1));
                const DeltaPair delta = compute_delta(ctx);
                put("delta", delta.delta);
                put("delta_band", delta.delta_band);
                const TValue tv = compute_T(ctx, z1, z2);
                put("Q", compute_Q(ctx, z1, z2));
                put("T", tv.value);
                put("T_v4_variant", tv.v4_variant);
                results["t_form_discrepancy"] = tv.discrepancy;
                put("Xi", compute_xi(ctx, theory_lambda1, theory_lambda2));
                try {
                    const ExpansionData& exp_data = profile.expansion();
                    put("B", compute_B(exp_data.nu, exp_data.c1));
                    results["expansion"] = {{"nu", exp_data.nu}, {"c1", exp_data.c1}};
                } catch (const ProfileError& e) {
                    results["B_unavailable"] = e.what();
                }
                return results;
            });
        }

        if (app.got_subcommand(exponent_cmd)) {
            resolve_prefix("lrp_exponent");
            exponent_args.echo(config);
            config["lambda"] = csv::format_double(exponent_lambda);
            config["seed"] = std::to_string(seed);
            const Profile profile = exponent_args.make_profile();
            const EntryDistribution dist{parse_entry_kind(exponent_args.dist), exponent_args.v};
            const TheoryContext ctx = TheoryContext::from(dist, profile);
            std::vector<double> separations;
            if (exponent_separations.empty()) {
                for (int k = 0; k < 7; ++k)
                    separations.push_back(std::pow(10.0, -5.0 + 3.0 * k / 6.0));
                config["separations"] = "default:7 log-spaced in [1e-5, 1e-2]";
            } else {
                std::stringstream sep_stream(exponent_separations);
                std::string sep;
                while (std::getline(sep_stream, sep, ',')) separations.push_back(std::stod(sep));
                config["separations"] = exponent_separations;
            }
            return run_with_summary("exponent", sink, config, seed, [&](csv::Table& t,
                                                                        std::string& gp) {
                const ExponentFit fit = fit_scaling_exponent(ctx, exponent_lambda, separations);
                t.header = {"separation", "xi"};
                for (std::size_t i = 0; i < fit.separations.size(); ++i)
                    t.rows.push_back({csv::format_double(fit.separations[i]),
                                      csv::format_double(fit.xi[i])});
                const ExpansionData& exp_data = profile.expansion();
                std::ostringstream s;
                s << "# gnuplot script generated by lrp\n"
                  << "set datafile separator ','\nset key autotitle columnhead\n"
                  << "set logscale xy\n"
                  << "plot '" << sink.prefix << ".csv' using 1:(abs($2)) with points title '|Xi|'\n";
                gp = s.str();
                return json{{"slope", fit.slope},
                            {"slope_stderr", fit.slope_stderr},
                            {"max_abs_residual", fit.max_abs_residual},
                            {"expected_slope", -(2.0 - 1.0 / exp_data.nu)},
                            {"nu", exp_data.nu}};
            });
        }

        if (app.got_subcommand(cumulant_cmd)) {
            resolve_prefix("lrp_cumulant");
            config["law"] = cumulant_law;
            config["q"] = std::to_string(cumulant_q);
            config["seed"] = std::to_string(seed);
            std::vector<SymmetricLaw> laws;
            if (cumulant_law == "all")
                laws = {SymmetricLaw::gaussian, SymmetricLaw::rademacher, SymmetricLaw::uniform};
            else
                laws = {parse_symmetric_law(cumulant_law)};
            const std::vector<int> qs =
                cumulant_q == 0 ? std::vector<int>{1, 3, 5} : std::vector<int>{cumulant_q};
            return run_with_summary(
                "cumulant-check", sink, config, seed, [&](csv::Table& t, std::string&) {
                    t.header = {"law",    "function", "q",   "lhs_re", "lhs_im",
                                "rhs_re", "rhs_im",   "gap", "bound",  "within_bound"};
                    json rows = json::array();
                    for (SymmetricLaw law : laws) {
                        for (const TestFunction& f : standard_test_functions()) {
                            for (int q : qs) {
                                const ExpansionCheck check = expansion_check(law, f, q);
                                t.rows.push_back({to_string(law), f.name(), std::to_string(q),
                                                  csv::format_double(check.lhs.real()),
                                                  csv::format_double(check.lhs.imag()),
                                                  csv::format_double(check.rhs.real()),
                                                  csv::format_double(check.rhs.imag()),
                                                  csv::format_double(check.gap),
                                                  csv::format_double(check.bound),
                                                  check.within_bound ? "1" : "0"});
                                rows.push_back({{"law", to_string(law)},
                                                {"function", f.name()},
                                                {"q", q},
                                                {"gap", check.gap},
                                                {"bound", check.bound},
                                                {"within_bound", check.within_bound}});
                            }
                        }
                    }
                    return json{{"rows", rows}};
                });
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    std::cerr << "error: no subcommand dispatched\n";
    return 1;
}
