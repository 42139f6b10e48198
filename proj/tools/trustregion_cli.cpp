// trustregion: config-driven runner for the trust-region solvers.
//
//   trustregion solve  --config cfg.json --out DIR
//   trustregion sweep  --config cfg.json --out DIR --jobs 4
//   trustregion oracle --config game_cfg.json --out DIR
//   trustregion verify --out DIR            (or --config with task verify-tre)
//
// Exit status: 0 success, 1 a certificate check failed, 2 invalid input or
// missing artifacts, 3 solver failure.
#include "trustregion/cli_runner.hpp"

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <cstdlib>
#include <iostream>

namespace tr = trustregion;
namespace cli = trustregion::cli;

namespace {

enum Exit { kOk = 0, kCheckFailed = 1, kInvalid = 2, kSolver = 3 };

bool setup_logging() {
    auto logger = spdlog::stderr_color_mt("trustregion");
    logger->set_pattern("[%l] %v");
    spdlog::set_default_logger(logger);
    const char* env = std::getenv("TRUST_REGION_LOG");
    const std::string level = env ? env : "error";
    if (level == "error") {
        spdlog::set_level(spdlog::level::err);
    } else if (level == "info") {
        spdlog::set_level(spdlog::level::info);
    } else if (level == "debug") {
        spdlog::set_level(spdlog::level::debug);
    } else {
        std::cerr << "error: TRUST_REGION_LOG must be one of error, info, debug (got '" << level
                  << "')\n";
        return false;
    }
    return true;
}

int run_verify(const cli::fs::path& bundle, const cli::RunOptions& opts) {
    const cli::VerifyReport rep = cli::verify_bundle(bundle, opts);
    for (const auto& c : rep.checks) {
        std::cout << cli::format_check(c) << "\n";
    }
    std::cout << (rep.pass ? "verify: all checks pass" : "verify: FAILED") << "\n";
    return rep.pass ? kOk : kCheckFailed;
}

} // namespace

int main(int argc, char** argv) {
    if (!setup_logging()) {
        return kInvalid;
    }
    CLI::App app{"Trust-region solvers for advice from a probabilistically misaligned adviser"};
    app.require_subcommand(1);
    app.footer(std::string("\nConfig: one JSON document with a \"task\" field (binary-trust, binary-action, mva, "
                           "spherical, oracle, sweep, verify-tre).\nNumbers may be given as decimal strings.\n"
                           "Bundles: manifest.json plus the artifacts below, each JSON with schema_version \"") +
               cli::kSchemaVersion + "\".\n" + cli::csv_schema_help() +
               "Exit status: 0 ok, 1 verify failed, 2 invalid input or missing artifacts, 3 solver error.\n"
               "Logging: TRUST_REGION_LOG=error|info|debug (stderr).");

    std::string config;
    cli::RunOptions opts;
    std::string out = "out";
    std::uint64_t seed = 0;
    std::string bundle;

    auto add_common = [&](CLI::App* sub, bool config_required) {
        auto* c = sub->add_option("--config", config, "experiment config (JSON)");
        if (config_required) {
            c->required();
        }
        sub->add_option("--out", out, "output directory")->capture_default_str();
        sub->add_option("--jobs", opts.jobs, "worker threads for sweeps (0 = OpenMP default)")
            ->check(CLI::NonNegativeNumber);
        sub->add_option("--seed", seed, "seed for randomized audits (overrides the config)");
        sub->add_option("--tolerance", opts.tolerance, "solver and certificate tolerance")
            ->capture_default_str()
            ->check(CLI::PositiveNumber);
    };
    CLI::App* solve = app.add_subcommand("solve", "solve the configured task and write a bundle");
    CLI::App* sweep = app.add_subcommand("sweep", "solve along the config's alpha grid");
    CLI::App* oracle = app.add_subcommand("oracle", "solve a finite game exactly (task oracle)");
    CLI::App* verify = app.add_subcommand("verify", "re-run every certificate on an emitted bundle");
    add_common(solve, true);
    add_common(sweep, true);
    add_common(oracle, true);
    add_common(verify, false);
    verify->add_option("--bundle", bundle, "bundle directory (default: --out)");

    CLI11_PARSE(app, argc, argv);

    try {
        opts.out_dir = out;
        for (CLI::App* sub : {solve, sweep, oracle, verify}) {
            if (sub->parsed() && sub->count("--seed") > 0) {
                opts.seed = seed;
            }
        }
        if (verify->parsed()) {
            cli::fs::path dir = bundle.empty() ? cli::fs::path(out) : cli::fs::path(bundle);
            if (!config.empty()) {
                const cli::ExperimentConfig cfg = cli::load_config(config);
                if (cfg.task != cli::Task::verify_tre) {
                    throw cli::ConfigError("task", "verify expects a verify-tre config");
                }
                dir = cfg.base_dir / cfg.doc.at("bundle").get<std::string>();
            }
            return run_verify(dir, opts);
        }
        const cli::ExperimentConfig cfg = cli::load_config(config);
        if (oracle->parsed() && cfg.task != cli::Task::oracle) {
            throw cli::ConfigError("task", "the oracle subcommand expects task 'oracle'");
        }
        if (cfg.task == cli::Task::verify_tre) {
            return run_verify(cfg.base_dir / cfg.doc.at("bundle").get<std::string>(), opts);
        }
        opts.sweep = sweep->parsed();
        const cli::RunReport rep = cli::run_experiment(cfg, opts);
        for (const auto& line : rep.summary) {
            std::cout << line << "\n";
        }
        return kOk;
    } catch (const tr::SolverError& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return kSolver;
    } catch (const cli::MissingArtifact& e) {
        std::cerr << "missing artifact: " << e.what() << "\n";
        return kInvalid;
    } catch (const tr::InputError& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return kInvalid;
    } catch (const cli::json::exception& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return kInvalid;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return kInvalid;
    }
}
