// Command-line front end: parse a DPN description and check liveness, size
// the channel buffers, explore the configuration space, mirror capacities
// into reverse channels, or just validate.

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "dpn/analyzer.hpp"
#include "dpn/report.hpp"
#include "dpn/textio.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNotProved = 10;
constexpr int kExitInconclusive = 11;
constexpr int kExitUsage = 2;

struct CliConfig {
    std::string input;
    std::string dims_text;
    long z_uniform = -1;
    std::string method = "branch-ilp";
    std::string blockedness = "from-model";
    bool json = false;
    bool stats = false;
    bool dump_constraints = false;
    bool dump_cuts = false;
    bool dump_witness = false;
    long max_cuts = 10000;
    long max_pivots = 1000000;
    long deadline_ms = 0;
    int parallel = 1;
    long limit_configs = 1000000;
};

long now_ms(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::steady_clock::now() - start)
        .count();
}

int load_network(const CliConfig& config, dpn::Network& network) {
    std::ifstream in(config.input);
    if (!in) {
        std::cerr << "error: cannot open '" << config.input << "'\n";
        return kExitUsage;
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    dpn::ParseResult parsed = dpn::parse(buffer.str());
    if (!parsed.ok()) {
        for (const auto& e : parsed.errors)
            std::cerr << config.input << ":" << dpn::format_error(e) << "\n";
        return kExitUsage;
    }
    network = std::move(*parsed.network);
    return kExitOk;
}

int parse_dims(const CliConfig& config, const dpn::Network& network,
               dpn::Dimensioning& dims) {
    if (config.z_uniform >= 0 && !config.dims_text.empty()) {
        std::cerr << "error: give either --dims or --z-uniform, not both\n";
        return kExitUsage;
    }
    if (config.z_uniform >= 0) {
        dims = dpn::Dimensioning::uniform(network, config.z_uniform);
        return kExitOk;
    }
    if (config.dims_text.empty()) {
        std::cerr << "error: this command needs --dims <ch>=<n>,... or --z-uniform <n>\n";
        return kExitUsage;
    }
    std::stringstream ss(config.dims_text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        size_t eq = item.find('=');
        if (eq == std::string::npos || eq == 0 || eq + 1 >= item.size()) {
            std::cerr << "error: bad dims entry '" << item << "' (want <channel>=<n>)\n";
            return kExitUsage;
        }
        try {
            dims.capacities[item.substr(0, eq)] = std::stol(item.substr(eq + 1));
        } catch (const std::exception&) {
            std::cerr << "error: bad capacity in '" << item << "'\n";
            return kExitUsage;
        }
    }
    return kExitOk;
}

dpn::Method parse_method(const std::string& name) {
    if (name == "big-m-lp") return dpn::Method::BigMLp;
    if (name == "branch-lp") return dpn::Method::BranchLp;
    return dpn::Method::BranchIlp;
}

dpn::BlockOverride parse_blockedness(const std::string& name) {
    if (name == "strong") return dpn::BlockOverride::AllStrong;
    if (name == "weak") return dpn::BlockOverride::AllWeak;
    return dpn::BlockOverride::FromModel;
}

dpn::AnalyzeOptions analyze_options(const CliConfig& config) {
    dpn::AnalyzeOptions options;
    options.cut_config.max_cuts = config.max_cuts;
    options.cut_config.max_pivots = config.max_pivots;
    options.deadline_ms = config.deadline_ms;
    options.parallelism = config.parallel;
    return options;
}

void dump_constraints(const dpn::Network& network, const dpn::DimSpec& dims,
                      dpn::BlockOverride override_mode, dpn::Method method) {
    dpn::StateSystem base = dpn::build_base_system(network, dims);
    dpn::BlockClauseSet clauses = dpn::build_block_clauses(network, override_mode);
    if (method == dpn::Method::BigMLp) {
        std::cerr << "# big-M system\n" << dpn::encode_big_m(base, clauses).big_m.dump();
        return;
    }
    dpn::EncodedProblem problem = dpn::enumerate_branches(base, clauses);
    for (size_t i = 0; i < problem.branches.size(); ++i) {
        std::cerr << "# branch " << i << ": " << problem.descriptors[i].describe() << "\n"
                  << problem.branches[i].dump();
    }
}

void dump_cut_log(const dpn::Network& network, const dpn::Dimensioning* dims,
                  dpn::BlockOverride override_mode, const dpn::AnalyzeOptions& options) {
    // Re-runs the branch ILPs with the cut log attached; diagnostics only.
    dpn::StateSystem base = dims ? dpn::build_base_system(network, *dims)
                                 : dpn::build_base_system(network, dpn::SymbolicZ{});
    dpn::BlockClauseSet clauses = dpn::build_block_clauses(network, override_mode);
    dpn::EncodedProblem problem = dpn::enumerate_branches(base, clauses);
    for (size_t i = 0; i < problem.branches.size(); ++i) {
        std::cerr << "# cuts for branch " << i << "\n";
        if (dims) {
            dpn::integer_feasible(problem.branches[i], options.cut_config, &std::cerr);
        } else {
            dpn::Objective obj{dpn::Objective::Sense::Maximize,
                               {{base.z_var, dpn::Rational(1)}}};
            dpn::solve_ilp(problem.branches[i], obj, options.cut_config, &std::cerr);
        }
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Static liveness and buffer-dimensioning analysis of dataflow process "
                 "networks, with an explicit-state exploration oracle"};
    app.require_subcommand(1);
    CliConfig config;

    auto add_common = [&](CLI::App* cmd, bool with_dims, bool with_method) {
        cmd->add_option("input", config.input, "DPN description file")->required();
        if (with_dims) {
            cmd->add_option("--dims", config.dims_text, "per-channel capacities, f=1,g=2");
            cmd->add_option("--z-uniform", config.z_uniform, "uniform capacity for all channels");
        }
        if (with_method) {
            cmd->add_option("--blockedness", config.blockedness,
                            "from-model|strong|weak (default from-model)");
            cmd->add_option("--max-cuts", config.max_cuts, "cutting-plane safeguard");
            cmd->add_option("--max-pivots", config.max_pivots, "pivot safeguard");
            cmd->add_option("--deadline-ms", config.deadline_ms,
                            "shared deadline for branch solves (0 = none)");
            cmd->add_option("--parallel", config.parallel, "parallel branch solves");
            cmd->add_flag("--dump-constraints", config.dump_constraints,
                          "dump the generated systems to stderr");
            cmd->add_flag("--dump-cuts", config.dump_cuts, "dump the Gomory cut log to stderr");
            cmd->add_flag("--dump-witness", config.dump_witness,
                          "print all witness values in text reports");
        }
        cmd->add_flag("--json", config.json, "JSON report on stdout");
        cmd->add_flag("--stats", config.stats,
                      "include work counters and timing (breaks byte-identical output)");
    };

    CLI::App* check = app.add_subcommand("check", "prove liveness at a given dimensioning");
    add_common(check, true, true);
    check->add_option("--method", config.method, "big-m-lp|branch-lp|branch-ilp");

    CLI::App* dimension =
        app.add_subcommand("dimension", "bound the uniform capacity z and size the buffers");
    add_common(dimension, false, true);
    dimension->add_option("--method", config.method, "branch-lp|branch-ilp");

    CLI::App* explore = app.add_subcommand("explore", "exhaustive configuration search");
    add_common(explore, true, false);
    explore->add_option("--limit-configs", config.limit_configs, "exploration limit");

    CLI::App* mirror =
        app.add_subcommand("mirror", "emit the capacity-to-blocking-read transform");
    add_common(mirror, true, false);

    CLI::App* validate_cmd = app.add_subcommand("validate", "check the model assumptions");
    add_common(validate_cmd, false, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) ? kExitUsage : kExitOk;
    }

    dpn::Network network;
    if (int code = load_network(config, network); code != kExitOk) return code;

    dpn::ReportMeta meta;
    meta.network = network.name;
    meta.format = config.json ? dpn::ReportFormat::Json : dpn::ReportFormat::Text;
    meta.include_stats = config.stats;
    meta.dump_witness = config.dump_witness;
    auto start = std::chrono::steady_clock::now();

    try {
        if (validate_cmd->parsed()) {
            meta.command = "validate";
            // parse() already folds every model violation into errors, so a
            // loaded network is valid; report it as such.
            std::cout << emit_report(dpn::validate(network), meta);
            return kExitOk;
        }

        if (mirror->parsed()) {
            meta.command = "mirror";
            dpn::Dimensioning dims;
            if (int code = parse_dims(config, network, dims); code != kExitOk) return code;
            dpn::Network mirrored = dpn::mirror_transform(network, dims);
            std::cout << emit_mirror_report(mirrored, meta);
            return kExitOk;
        }

        if (explore->parsed()) {
            meta.command = "explore";
            dpn::Dimensioning dims;
            if (int code = parse_dims(config, network, dims); code != kExitOk) return code;
            dpn::ExplorationLimits limits;
            limits.max_configurations = config.limit_configs;
            dpn::ExplorationResult result = dpn::explore(network, dims, limits);
            meta.millis = now_ms(start);
            meta.configs = result.configurations_visited;
            std::cout << emit_report(result, meta);
            if (!result.blocked.empty()) return kExitNotProved;
            return result.truncated ? kExitInconclusive : kExitOk;
        }

        dpn::Method method = parse_method(config.method);
        dpn::BlockOverride override_mode = parse_blockedness(config.blockedness);
        dpn::AnalyzeOptions options = analyze_options(config);

        if (check->parsed()) {
            meta.command = "check";
            dpn::Dimensioning dims;
            if (int code = parse_dims(config, network, dims); code != kExitOk) return code;
            if (config.dump_constraints)
                dump_constraints(network, dims, override_mode, method);
            if (config.dump_cuts && method == dpn::Method::BranchIlp)
                dump_cut_log(network, &dims, override_mode, options);
            dpn::CheckResult result =
                dpn::check_liveness(network, dims, method, override_mode, options);
            meta.millis = now_ms(start);
            std::cout << emit_report(result, meta);
            switch (result.verdict.kind) {
                case dpn::Verdict::Kind::Live: return kExitOk;
                case dpn::Verdict::Kind::Unknown: return kExitNotProved;
                case dpn::Verdict::Kind::Inconclusive: return kExitInconclusive;
            }
        }

        if (dimension->parsed()) {
            meta.command = "dimension";
            if (method == dpn::Method::BigMLp) {
                std::cerr << "error: dimension supports branch-lp and branch-ilp only\n";
                return kExitUsage;
            }
            if (config.dump_constraints)
                dump_constraints(network, dpn::SymbolicZ{}, override_mode, method);
            if (config.dump_cuts && method == dpn::Method::BranchIlp)
                dump_cut_log(network, nullptr, override_mode, options);
            dpn::DimensionOutcome outcome =
                dpn::dimension(network, method, override_mode, options);
            meta.millis = now_ms(start);
            std::cout << emit_report(outcome, meta);
            switch (outcome.kind) {
                case dpn::DimensionOutcome::Kind::BoundedLive:
                case dpn::DimensionOutcome::Kind::LiveForAllValid: return kExitOk;
                case dpn::DimensionOutcome::Kind::Unbounded: return kExitNotProved;
                case dpn::DimensionOutcome::Kind::Inconclusive: return kExitInconclusive;
            }
        }
    } catch (const dpn::InvalidDimensioning& e) {
        std::cerr << "error: invalid dimensioning: " << e.what() << "\n";
        return kExitUsage;
    } catch (const dpn::NoChannels& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
