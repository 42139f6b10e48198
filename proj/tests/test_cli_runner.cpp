#include "trustregion/cli_runner.hpp"

#include <doctest.h>
#include <spdlog/spdlog.h>

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>

using namespace trustregion;
using namespace trustregion::cli;

namespace {

const fs::path kConfigs = TR_CONFIG_DIR;

// Per-process scratch root, removed at exit; the runner's info lines are silenced.
struct ScratchRoot {
    fs::path dir = fs::temp_directory_path() / ("trustregion_test_" + std::to_string(std::random_device{}()));
    ScratchRoot() { spdlog::set_level(spdlog::level::err); }
    ~ScratchRoot() {
        std::error_code ec;
        fs::remove_all(dir, ec);
    }
};

fs::path scratch(const std::string& name) {
    static ScratchRoot root;
    fs::path p = root.dir / name;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

RunReport run(const std::string& config, const fs::path& out, bool sweep = false) {
    RunOptions o;
    o.out_dir = out;
    o.sweep = sweep;
    return run_experiment(load_config(kConfigs / config), o);
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string("\"") + TR_CLI_PATH + "\" " + args + " >/dev/null 2>&1";
    const int st = std::system(cmd.c_str());
    return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

} // namespace

TEST_CASE("decimal formatting and outward rounding") {
    CHECK(format_decimal(0.75) == "0.75");
    CHECK(format_decimal(1.0) == "1");
    CHECK(format_decimal(0.0) == "0");
    CHECK(format_decimal(-0.25) == "-0.25");
    CHECK(format_bound(0.3603796, false) == "0.360379");
    CHECK(format_bound(0.6396204, true) == "0.639621");
    CHECK(format_bound(0.5 + 1e-12, false) == "0.5");
    CHECK(format_bound(0.5 - 1e-12, true) == "0.5");
}

TEST_CASE("alpha grids are exact decimals") {
    const auto g = parse_alpha_grid(json{{"from", "0.5"}, {"to", "1.0"}, {"step", "0.1"}}, "alphas");
    REQUIRE(g.size() == 6);
    CHECK(g[3] == 0.8);
    CHECK(g[5] == 1.0);
    const auto h = parse_alpha_grid(json{{"from", 0}, {"to", 1}, {"step", "0.05"}}, "alphas");
    CHECK(h.size() == 21);
    CHECK(h[7] == 0.35);
    CHECK(parse_alpha_grid(json::array({"0.6", 0.9}), "alphas") == std::vector<double>{0.6, 0.9});
    CHECK_THROWS_AS(parse_alpha_grid(json{{"from", "0.5"}, {"to", "1"}, {"step", "0"}}, "alphas"), ConfigError);
    CHECK(parse_real("1e-3", "x") == 0.001);
    CHECK_THROWS_AS(parse_real("0.7x", "x"), ConfigError);
}

TEST_CASE("config errors name the offending field") {
    auto field_of = [](const json& doc) -> std::string {
        try {
            parse_config(doc, ".");
        } catch (const ConfigError& e) {
            return e.field();
        }
        return "";
    };
    CHECK(field_of(json{{"task", "nope"}}) == "task");
    CHECK(field_of(json{{"task", "binary-trust"}, {"utility", {{"kind", "quadratic"}}},
                        {"tau", {{"kind", "uniform"}}}, {"alpha", 1.5}}) == "alpha");
    CHECK(field_of(json{{"task", "binary-trust"}, {"utility", {{"kind", "cubic"}}},
                        {"tau", {{"kind", "uniform"}}}, {"alpha", 0.7}}) == "utility.kind");
    CHECK(field_of(json{{"task", "mva"}}) != "");
    CHECK(field_of(json{{"task", "sweep"}, {"model", "mva"}}) == "model");
    CHECK_THROWS_AS(parse_config(json{{"task", "verify-tre"}, {"bundle", "/nonexistent/bundle"}}, "."),
                    MissingArtifact);
}

TEST_CASE("binary-trust golden row and byte-identical reruns") {
    const fs::path a = scratch("trust_a"), b = scratch("trust_b");
    const RunReport r = run("binary_trust.json", a);
    CHECK_FALSE(r.summary.empty());
    const std::string csv = slurp(a / "trust.csv");
    CHECK(csv == std::string(kTrustCsvHeader) + "\n0.75,0.360379,0.639621,0.5\n");
    run("binary_trust.json", b);
    CHECK(slurp(b / "trust.csv") == csv);
    CHECK(slurp(b / "solution.json") == slurp(a / "solution.json"));

    const VerifyReport v = verify_bundle(a, {});
    CHECK(v.pass);
    CHECK(v.checks.size() >= 5);
}

TEST_CASE("sweep table verifies and the 0.9 row matches the quadratic root") {
    const fs::path d = scratch("sweep");
    run("sweep_binary_trust.json", d);
    const std::string csv = slurp(d / "sweep.csv");
    CHECK(csv.find("0.9,0.238416,0.761584,0.5\n") != std::string::npos);
    CHECK(csv.find("1,0,1,0.5\n") != std::string::npos);
    CHECK(verify_bundle(d, {}).pass);
}

TEST_CASE("artifact JSON round trips") {
    const fs::path d = scratch("roundtrip");
    run("binary_trust.json", d);
    const json doc = json::parse(slurp(d / "solution.json"));
    const TrustArtifact t = trust_artifact_from_json(doc);
    const json again = to_json(t);
    const TrustArtifact t2 = trust_artifact_from_json(again);
    CHECK(std::abs(t2.trust.lo - t.trust.lo) <= 1e-12);
    CHECK(std::abs(t2.trust.hi - t.trust.hi) <= 1e-12);
    for (int i = 0; i <= 100; ++i) {
        CHECK(std::abs(t2.map(i / 100.0) - t.map(i / 100.0)) <= 1e-12);
    }

    const MvaSolution m = solve_mva(Eigen::MatrixXd::Identity(3, 3));
    const MvaSolution m2 = mva_from_json(json::parse(to_json(m).dump()));
    CHECK(std::abs(m2.alpha_star - m.alpha_star) <= 1e-12);
    CHECK((m2.garbling - m.garbling).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(m2.rank.rank == m.rank.rank);

    const auto dist = RelativePayoffDist::atoms({-1.0, 2.0}, {0.5, 0.5});
    const BinaryActionSolution s = solve_binary_action(dist, 0.8);
    const BinaryActionSolution s2 = binary_action_from_json(json::parse(to_json(s).dump()));
    CHECK(s2.regime == s.regime);
    CHECK(std::abs(s2.value - s.value) <= 1e-12);
    CHECK(std::abs(s2.alpha_hat - s.alpha_hat) <= 1e-12);

    OracleArtifact o;
    o.game = binary_quadratic_game({0.0, 0.5, 1.0}, {0.25, 0.5, 0.25}, {0.0, 0.25, 0.5, 0.75, 1.0}, 0.7);
    o.solution = solve_saddle(o.game);
    o.adviser = adviser_value(o.game);
    const OracleArtifact o2 = oracle_from_json(json::parse(to_json(o).dump()));
    CHECK(std::abs(o2.solution.value - o.solution.value) <= 1e-12);
    CHECK((o2.solution.agent_strategy - o.solution.agent_strategy).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(std::abs(o2.adviser.v - o.adviser.v) <= 1e-12);
    CHECK(game_to_json(o2.game) == game_to_json(o.game));
}

TEST_CASE("mva identity bundle") {
    const fs::path d = scratch("mva");
    run("mva_identity.json", d);
    const json doc = json::parse(slurp(d / "mva.json"));
    CHECK(std::abs(doc.at("alpha_star").get<double>() - 1.0 / 3.0) <= 1e-9);
    CHECK(verify_bundle(d, {}).pass);
}

TEST_CASE("other tasks produce verifiable bundles") {
    for (const char* cfg : {"binary_action.json", "spherical.json"}) {
        const fs::path d = scratch(cfg);
        run(cfg, d);
        CHECK(verify_bundle(d, {}).pass);
    }
}

TEST_CASE("tampered and missing bundles are reported") {
    const fs::path d = scratch("tamper");
    run("binary_trust.json", d);
    json doc = json::parse(slurp(d / "solution.json"));
    doc["trust"]["hi"] = doc["trust"]["hi"].get<double>() + 0.05;
    write_text(d / "solution.json", doc.dump(2));
    const VerifyReport v = verify_bundle(d, {});
    CHECK_FALSE(v.pass);
    double worst = 0.0;
    for (const auto& c : v.checks) {
        if (!c.pass) {
            worst = std::max(worst, c.measured);
        }
    }
    CHECK(worst > 0.01);

    CHECK_THROWS_AS(verify_bundle(scratch("empty"), {}), MissingArtifact);
    const fs::path gone = scratch("gone");
    run("binary_trust.json", gone);
    fs::remove(gone / "trust.csv");
    CHECK_THROWS_AS(verify_bundle(gone, {}), MissingArtifact);
}

TEST_CASE("command-line exit codes") {
    const fs::path d = scratch("cli");
    const std::string cfg = (kConfigs / "binary_trust.json").string();
    CHECK(run_cli("solve --config \"" + cfg + "\" --out \"" + d.string() + "\"") == 0);
    CHECK(run_cli("verify --out \"" + d.string() + "\"") == 0);
    json doc = json::parse(slurp(d / "solution.json"));
    doc["trust"]["hi"] = doc["trust"]["hi"].get<double>() + 0.05;
    write_text(d / "solution.json", doc.dump(2));
    CHECK(run_cli("verify --out \"" + d.string() + "\"") == 1);
    CHECK(run_cli("verify --out \"" + scratch("cli_empty").string() + "\"") == 2);
    CHECK(run_cli("solve --config /nonexistent.json") == 2);
    const fs::path bad = scratch("cli_bad") / "bad.json";
    write_text(bad, R"({"task": "binary-trust", "utility": {"kind": "quadratic"}, "tau": {"kind": "uniform"}, "alpha": 1.5})");
    CHECK(run_cli("solve --config \"" + bad.string() + "\"") == 2);
    CHECK(run_cli("solve --config \"" + cfg + "\" --out \"" + scratch("cli_tol").string() +
                  "\" --tolerance 1e-30") == 3);
}
