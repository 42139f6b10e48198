#include "trustregion/cli_runner.hpp"

#include "trustregion/errors.hpp"
#include "trustregion/kernels.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

namespace trustregion::cli {

namespace {

constexpr std::size_t kVerifyCells = 200;
constexpr double kDeviationTol = 1e-6;
// CSV cells carry 6 decimals.
constexpr double kCsvTol = 1e-6;

std::vector<double> reals(const json& node, const std::string& field) {
    std::vector<double> out;
    for (std::size_t i = 0; i < node.size(); ++i) {
        out.push_back(parse_real(node[i], field + "[" + std::to_string(i) + "]"));
    }
    return out;
}

std::string csv_row(const std::vector<std::string>& cells) {
    std::string s;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) {
            s += ',';
        }
        s += cells[i];
    }
    return s + '\n';
}

std::vector<double> alphas_of(const json& doc, bool sweep) {
    if (doc.contains("alphas")) {
        return parse_alpha_grid(doc.at("alphas"), "alphas");
    }
    if (sweep) {
        throw ConfigError("alphas", "the sweep subcommand needs an alpha grid");
    }
    return {parse_real(doc.at("alpha"), "alpha")};
}

// Runs f over the points with the OpenMP map; errors are rethrown after the loop.
template <class T, class F>
std::vector<T> map_points(const std::vector<double>& alphas, const F& f) {
    struct Slot {
        T value{};
        std::string error;
        bool solver_error = false;
    };
    std::vector<Slot> slots;
    parallel_map(
        alphas.size(), slots,
        [&](std::size_t i) {
            Slot s;
            try {
                s.value = f(alphas[i]);
            } catch (const SolverError& e) {
                s.error = e.what();
                s.solver_error = true;
            } catch (const std::exception& e) {
                s.error = e.what();
            }
            return s;
        },
        Exec::parallel);
    std::vector<T> out;
    for (std::size_t i = 0; i < slots.size(); ++i) {
        if (!slots[i].error.empty()) {
            const std::string msg = "alpha = " + format_decimal(alphas[i]) + ": " + slots[i].error;
            if (slots[i].solver_error) {
                throw SolverError(msg);
            }
            throw InputError(msg);
        }
        out.push_back(std::move(slots[i].value));
    }
    return out;
}

struct Bundle {
    fs::path dir;
    json manifest;
    RunReport report;

    void add(const std::string& kind, const std::string& name, const std::string& text) {
        write_text(dir / name, text);
        manifest["artifacts"].push_back({{"kind", kind}, {"path", name}});
        report.artifacts.push_back(dir / name);
        spdlog::debug("wrote {}", (dir / name).string());
    }
    void line(const std::string& s) {
        report.summary.push_back(s);
        spdlog::info("{}", s);
    }
};

// ---------------------------------------------------------------- binary trust

std::string trust_row(const TrustInterval& t) {
    return csv_row({format_decimal(t.alpha), format_bound(t.lo, false), format_bound(t.hi, true),
                    format_decimal(t.cutoff)});
}

std::string trust_line(const TrustInterval& t) {
    std::ostringstream os;
    os << "binary-trust alpha=" << format_decimal(t.alpha) << " lo=" << format_bound(t.lo, false)
       << " hi=" << format_bound(t.hi, true) << " cutoff=" << format_decimal(t.cutoff)
       << " residual=" << std::max(std::abs(t.residuals.first), std::abs(t.residuals.second));
    return os.str();
}

void run_binary_trust(const json& doc, const RunOptions& opts, bool sweep, Bundle& b) {
    const UtilityCurve u = parse_utility(doc.at("utility"), "utility");
    const BeliefDensity tau = parse_density(doc.at("tau"), "tau");
    TrustSolveOptions so;
    so.tolerance = opts.tolerance;
    const std::vector<double> alphas = alphas_of(doc, sweep);
    const auto rows = map_points<TrustInterval>(
        alphas, [&](double a) { return solve_trust_interval(u, tau, a, so); });

    std::string csv = std::string(kTrustCsvHeader) + "\n";
    for (const auto& t : rows) {
        csv += trust_row(t);
        b.line(trust_line(t));
    }
    if (sweep) {
        b.add("trust-table", "sweep.csv", csv);
        return;
    }
    const TrustInterval& t = rows.front();
    TrustArtifact art{doc.at("utility"), doc.at("tau"), t, build_tre_map(u, tau, t.alpha, t, opts.tolerance)};
    b.add("trust-solution", "solution.json", to_json(art).dump(2) + "\n");
    b.add("trust-table", "trust.csv", csv);
}

// ---------------------------------------------------------------- binary action

RelativePayoffDist payoff_dist(const json& doc) {
    const json& p = doc.at("payoffs");
    try {
        return RelativePayoffDist::atoms(reals(p.at("values"), "payoffs.values"),
                                         reals(p.at("probs"), "payoffs.probs"));
    } catch (const ConfigError&) {
        throw;
    } catch (const InputError& e) {
        throw ConfigError("payoffs", e.what());
    }
}

std::string action_row(const BinaryActionSolution& s) {
    return csv_row({format_decimal(s.alpha), format_decimal(s.L), format_decimal(s.G),
                    format_decimal(s.alpha_hat), to_string(s.regime), format_decimal(s.sigma_low),
                    format_decimal(s.sigma_high), format_decimal(s.value),
                    format_decimal(s.no_adviser_value)});
}

json kernels_json(const std::vector<AdversaryKernel>& ks) {
    json out = json::array();
    for (const auto& k : ks) {
        out.push_back({{"tag", to_string(k.tag)},
                       {"gamma", k.gamma},
                       {"margin", k.margin},
                       {"certified", k.certified},
                       {"beta", matrix_to_json(k.beta)}});
    }
    return out;
}

void run_binary_action(const json& doc, bool sweep, Bundle& b) {
    const RelativePayoffDist dist = payoff_dist(doc);
    const std::vector<double> alphas = alphas_of(doc, sweep);
    const auto sols = map_points<BinaryActionSolution>(
        alphas, [&](double a) { return solve_binary_action(dist, a); });
    std::string csv = std::string(kActionCsvHeader) + "\n";
    for (const auto& s : sols) {
        csv += action_row(s);
        b.line("binary-action alpha=" + format_decimal(s.alpha) + " alpha_hat=" +
               format_decimal(s.alpha_hat) + " regime=" + to_string(s.regime) +
               " value=" + format_decimal(s.value));
    }
    if (sweep) {
        b.add("action-table", "sweep.csv", csv);
        return;
    }
    const BinaryActionSolution& s = sols.front();
    json j = {{"schema_version", kSchemaVersion},
              {"kind", "action-solution"},
              {"payoffs", doc.at("payoffs")},
              {"solution", to_json(s)},
              {"kernels", kernels_json(rationalizing_adversary(dist, s.alpha))}};
    b.add("action-solution", "binary_action.json", j.dump(2) + "\n");
    b.add("action-table", "binary_action.csv", csv);
}

// ---------------------------------------------------------------- spherical

SphericalInstance sphere_instance(const json& doc) {
    SphericalInstance inst;
    inst.center = reals(doc.at("center"), "center");
    inst.r0 = parse_real(doc.at("r0"), "r0");
    inst.radial = doc.contains("radial") ? parse_density(doc.at("radial"), "radial", 0.0, inst.r0)
                                         : BeliefDensity::uniform(0.0, inst.r0);
    try {
        check_spherical_instance(inst);
    } catch (const InputError& e) {
        throw ConfigError("center", e.what());
    }
    return inst;
}

bool uniform_radial(const json& doc) {
    return !doc.contains("radial") || doc.at("radial").value("kind", "") == "uniform";
}

void run_spherical(const json& doc, bool sweep, Bundle& b) {
    const SphericalInstance inst = sphere_instance(doc);
    const std::vector<double> alphas = alphas_of(doc, sweep);
    const std::vector<RadiusPoint> pts = radius_sweep(inst, alphas, Exec::parallel);
    std::string csv = std::string(kSphereCsvHeader) + "\n";
    for (const auto& p : pts) {
        csv += csv_row({format_decimal(p.alpha), format_decimal(p.r_star), format_decimal(p.residual)});
        b.line("spherical alpha=" + format_decimal(p.alpha) + " r_star=" + format_decimal(p.r_star));
    }
    if (sweep) {
        b.add("sphere-table", "sweep.csv", csv);
        return;
    }
    const RadiusPoint& p = pts.front();
    json j = {{"schema_version", kSchemaVersion},
              {"kind", "sphere-solution"},
              {"center", inst.center},
              {"r0", inst.r0},
              {"radial", doc.contains("radial") ? doc.at("radial") : json{{"kind", "uniform"}}},
              {"alpha", p.alpha},
              {"r_star", p.r_star},
              {"residual", p.residual}};
    j["closed_form"] = uniform_radial(doc) ? json(uniform_radius_closed_form(p.alpha, inst.r0))
                                           : json(nullptr);
    b.add("sphere-solution", "spherical.json", j.dump(2) + "\n");
    b.add("sphere-table", "spherical.csv", csv);
}

// ---------------------------------------------------------------- mva

SignalMatrix signal_matrix(const ExperimentConfig& cfg, std::uint64_t seed) {
    const json& doc = cfg.doc;
    if (doc.contains("signal_matrix")) {
        return read_matrix_csv(cfg.base_dir / doc.at("signal_matrix").get<std::string>());
    }
    if (doc.contains("random")) {
        const json& r = doc.at("random");
        return random_signal_matrix(r.at("states").get<int>(), r.at("signals").get<int>(), seed);
    }
    const json& c = doc.at("construct");
    return construct_target_mva(c.at("states").get<int>(), c.at("signals").get<int>(),
                                parse_real(c.at("delta"), "construct.delta"));
}

void run_mva(const ExperimentConfig& cfg, std::uint64_t seed, Bundle& b) {
    const SignalMatrix pi = signal_matrix(cfg, seed);
    try {
        check_signal_matrix(pi);
    } catch (const InputError& e) {
        throw ConfigError("signal_matrix", e.what());
    }
    const MvaSolution s = solve_mva(pi);
    json j = to_json(s);
    j["signal_matrix"] = matrix_to_json(pi);
    b.add("mva-solution", "mva.json", j.dump(2) + "\n");
    std::ostringstream os;
    os << "mva alpha_star=" << format_decimal(s.alpha_star) << " rank=" << s.rank.rank
       << " residual=" << s.constraint_residual;
    b.line(os.str());
}

// ---------------------------------------------------------------- oracle

std::optional<BeliefInterval> interval_of(const json& doc) {
    if (!doc.contains("interval")) {
        return std::nullopt;
    }
    const std::vector<double> v = reals(doc.at("interval"), "interval");
    if (v.size() != 2 || !(v[0] <= v[1])) {
        throw ConfigError("interval", "expected [lo, hi] with lo <= hi");
    }
    return BeliefInterval{v[0], v[1]};
}

void run_oracle(const ExperimentConfig& cfg, Bundle& b) {
    OracleArtifact art;
    art.game = load_game(cfg.base_dir / cfg.doc.at("game").get<std::string>());
    if (cfg.doc.contains("alpha")) {
        art.game.alpha = parse_real(cfg.doc.at("alpha"), "alpha");
    }
    art.solution = solve_saddle(art.game);
    art.adviser.u_star = art.solution.value;
    art.adviser.u_0 = no_adviser_value(art.game);
    art.adviser.v = art.adviser.u_star - art.adviser.u_0;
    TrsCheckOptions to;
    to.interval = interval_of(cfg.doc);
    const TrsReport trs = verify_trs_structure(art.game, art.solution, to);
    json j = to_json(art);
    j["trs"] = {{"all_on_path_pass", trs.all_on_path_pass},
                {"worst_margin", trs.worst_margin},
                {"off_path", trs.off_path},
                {"worst_projection_gap", trs.worst_projection_gap}};
    b.add("oracle-solution", "oracle.json", j.dump(2) + "\n");
    std::ostringstream os;
    os << "oracle alpha=" << format_decimal(art.game.alpha) << " value=" << art.solution.value
       << " minimax=" << art.solution.minimax_value << " gap=" << art.solution.duality_gap
       << " v=" << art.adviser.v << " trs=" << (trs.all_on_path_pass ? "pass" : "fail");
    b.line(os.str());
}

} // namespace

RunReport run_experiment(const ExperimentConfig& cfg, const RunOptions& opts) {
    if (opts.jobs > 0) {
        set_parallel_jobs(opts.jobs);
    }
    if (!(opts.tolerance > 0.0)) {
        throw ConfigError("--tolerance", "must be positive");
    }
    const std::uint64_t seed = opts.seed.value_or(cfg.seed);
    Bundle b;
    b.dir = opts.out_dir;
    fs::create_directories(b.dir);
    b.manifest = {{"schema_version", kSchemaVersion},
                  {"task", to_string(cfg.task)},
                  {"seed", seed},
                  {"tolerance", opts.tolerance},
                  {"config", cfg.doc},
                  {"artifacts", json::array()}};

    Task model = cfg.task;
    bool sweep = opts.sweep;
    if (cfg.task == Task::sweep) {
        const std::string m = cfg.doc.at("model").get<std::string>();
        model = m == "binary-trust" ? Task::binary_trust
                : m == "binary-action" ? Task::binary_action
                                       : Task::spherical;
        sweep = true;
    }
    if (sweep && model != Task::binary_trust && model != Task::binary_action &&
        model != Task::spherical) {
        throw ConfigError("task", "task '" + to_string(cfg.task) + "' has no alpha sweep");
    }
    spdlog::debug("task {} (sweep: {}), output {}", to_string(model), sweep, b.dir.string());

    switch (model) {
    case Task::binary_trust: run_binary_trust(cfg.doc, opts, sweep, b); break;
    case Task::binary_action: run_binary_action(cfg.doc, sweep, b); break;
    case Task::spherical: run_spherical(cfg.doc, sweep, b); break;
    case Task::mva: run_mva(cfg, seed, b); break;
    case Task::oracle: run_oracle(cfg, b); break;
    case Task::sweep:
    case Task::verify_tre:
        throw ConfigError("task", "verify-tre configs run through the verify subcommand");
    }
    write_text(b.dir / "manifest.json", b.manifest.dump(2) + "\n");
    b.report.artifacts.push_back(b.dir / "manifest.json");
    return b.report;
}

// ---------------------------------------------------------------- verification

namespace {

json read_json(const fs::path& p) {
    std::ifstream in(p);
    if (!in) {
        throw MissingArtifact("cannot open " + p.string());
    }
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw MissingArtifact(p.string() + ": unreadable JSON (" + e.what() + ")");
    }
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p, const std::string& header) {
    std::ifstream in(p);
    if (!in) {
        throw MissingArtifact("cannot open " + p.string());
    }
    std::string line;
    if (!std::getline(in, line) || line != header) {
        throw MissingArtifact(p.string() + ": header differs from '" + header + "'");
    }
    std::vector<std::vector<std::string>> rows;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string c;
        while (std::getline(ss, c, ',')) {
            cells.push_back(c);
        }
        rows.push_back(std::move(cells));
    }
    return rows;
}

double cell(const std::vector<std::string>& row, std::size_t i, const std::string& where) {
    if (i >= row.size()) {
        throw MissingArtifact(where + ": short row");
    }
    return parse_real(json(row[i]), where);
}

struct Checker {
    VerifyReport rep;
    std::string artifact;

    // Passes when measured <= threshold.
    void at_most(const std::string& inv, double measured, double threshold) {
        const bool ok = std::isfinite(measured) && measured <= threshold;
        rep.checks.push_back({artifact, inv, measured, threshold, ok});
        rep.pass = rep.pass && ok;
    }
};

void verify_trust_solution(const json& doc, const json& manifest, Checker& c, double tol) {
    const TrustArtifact a = trust_artifact_from_json(doc);
    const UtilityCurve u = parse_utility(a.utility, "utility");
    const BeliefDensity tau = parse_density(a.tau, "tau");
    const TrustInterval& t = a.trust;
    const bool high = t.alpha > 0.5;
    if (high) {
        const auto [r1, r2] = psi_residuals(u, tau, t.alpha, t.lo, t.hi);
        c.at_most("balancing residual max|psi|", std::max(std::abs(r1), std::abs(r2)), tol);
        c.at_most("cutoff belief |b - stored|", std::abs(cutoff_belief(u, t.lo, t.hi) - t.cutoff), tol);
    } else {
        c.at_most("degenerate interval |endpoint - prior|",
                  std::max(std::abs(t.lo - tau.mean()), std::abs(t.hi - tau.mean())), tol);
    }
    c.at_most("map endpoints match interval",
              std::max(std::abs(a.map.lo - t.lo), std::abs(a.map.hi - t.hi)), 1e-12);

    const ConsistencyReport cr = verify_posterior_consistency(a.map, tau, t.alpha, t, kVerifyCells);
    c.at_most("posterior consistency max deviation (" + std::to_string(cr.cells_checked) + " cells)",
              cr.max_deviation, kDeviationTol);

    // Adversarial optimality on a grid plus seeded random beliefs.
    std::vector<double> mus;
    for (int i = 0; i <= 1000; ++i) {
        mus.push_back(i / 1000.0);
    }
    std::mt19937_64 rng(manifest.value("seed", std::uint64_t{0}));
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int i = 0; i < 256; ++i) {
        mus.push_back(unif(rng));
    }
    const BeliefInterval trust{t.lo, t.hi};
    double worst = 0.0;
    for (double mu : mus) {
        const double sent = std::clamp(a.map(mu), t.lo, t.hi);
        const double best = bregman_distance(u, mu, worst_case_report(u, trust, mu));
        worst = std::max(worst, best - bregman_distance(u, mu, sent));
    }
    c.at_most("adversarial optimality Bregman shortfall", worst, 1e-9);
}

void verify_trust_table(const fs::path& p, const json& manifest, Checker& c, double tol) {
    const json& cfg = manifest.at("config");
    const UtilityCurve u = parse_utility(cfg.at("utility"), "config.utility");
    const BeliefDensity tau = parse_density(cfg.at("tau"), "config.tau");
    TrustSolveOptions so;
    so.tolerance = tol;
    const auto rows = read_csv(p, kTrustCsvHeader);
    double diff = 0.0, mono = -1.0;
    double prev_lo = 2.0, prev_hi = -1.0, prev_a = -1.0;
    for (const auto& r : rows) {
        const double a = cell(r, 0, p.string());
        const TrustInterval t = solve_trust_interval(u, tau, a, so);
        diff = std::max({diff, std::abs(t.lo - cell(r, 1, p.string())),
                         std::abs(t.hi - cell(r, 2, p.string())),
                         std::abs(t.cutoff - cell(r, 3, p.string()))});
        if (prev_a >= 0.0 && a > prev_a) {
            mono = std::max({mono, cell(r, 1, p.string()) - prev_lo, prev_hi - cell(r, 2, p.string())});
        }
        prev_a = a;
        prev_lo = cell(r, 1, p.string());
        prev_hi = cell(r, 2, p.string());
    }
    c.at_most("rows reproduce (" + std::to_string(rows.size()) + " rows)", diff, kCsvTol);
    if (rows.size() > 1) {
        c.at_most("lo non-increasing and hi non-decreasing in alpha", std::max(mono, 0.0), 0.0);
    }
}

void verify_action_solution(const json& doc, Checker& c) {
    const json& p = doc.at("payoffs");
    const RelativePayoffDist dist =
        RelativePayoffDist::atoms(reals(p.at("values"), "payoffs.values"), reals(p.at("probs"), "payoffs.probs"));
    const BinaryActionSolution stored = binary_action_from_json(doc.at("solution"));
    const BinaryActionSolution s = solve_binary_action(dist, stored.alpha);
    c.at_most("value reproduces", std::abs(s.value - stored.value), 1e-12);
    c.at_most("alpha_hat reproduces", std::abs(s.alpha_hat - stored.alpha_hat), 1e-12);
    c.at_most("regime reproduces", s.regime == stored.regime ? 0.0 : 1.0, 0.0);
    double margin = 0.0;
    for (const auto& k : rationalizing_adversary(dist, stored.alpha)) {
        margin = std::max(margin, -k.margin);
    }
    c.at_most("adversary kernel sign slack (negated)", margin, 1e-12);
}

void verify_action_table(const fs::path& path, const json& manifest, Checker& c) {
    const json& p = manifest.at("config").at("payoffs");
    const RelativePayoffDist dist =
        RelativePayoffDist::atoms(reals(p.at("values"), "payoffs.values"), reals(p.at("probs"), "payoffs.probs"));
    const auto rows = read_csv(path, kActionCsvHeader);
    double diff = 0.0;
    for (const auto& r : rows) {
        const BinaryActionSolution s = solve_binary_action(dist, cell(r, 0, path.string()));
        diff = std::max(diff, std::abs(s.value - cell(r, 7, path.string())));
    }
    c.at_most("rows reproduce (" + std::to_string(rows.size()) + " rows)", diff, kCsvTol);
}

void verify_sphere_solution(const json& doc, Checker& c) {
    json d = doc;
    const SphericalInstance inst = sphere_instance(d);
    const double alpha = parse_real(doc.at("alpha"), "alpha");
    const double stored = parse_real(doc.at("r_star"), "r_star");
    c.at_most("trust radius reproduces", std::abs(solve_radius(inst, alpha) - stored), 1e-9);
    if (!doc.at("closed_form").is_null()) {
        c.at_most("uniform closed form", std::abs(uniform_radius_closed_form(alpha, inst.r0) - stored),
                  1e-8);
    }
}

void verify_sphere_table(const fs::path& path, const json& manifest, Checker& c) {
    const SphericalInstance inst = sphere_instance(manifest.at("config"));
    const auto rows = read_csv(path, kSphereCsvHeader);
    double diff = 0.0;
    for (const auto& r : rows) {
        diff = std::max(diff, std::abs(solve_radius(inst, cell(r, 0, path.string())) -
                                       cell(r, 1, path.string())));
    }
    c.at_most("rows reproduce (" + std::to_string(rows.size()) + " rows)", diff, kCsvTol);
}

void verify_mva(const json& doc, Checker& c) {
    const MvaSolution s = mva_from_json(doc);
    const Eigen::MatrixXd pi = matrix_from_json(doc.at("signal_matrix"), "signal_matrix");
    const Eigen::MatrixXd& G = s.garbling;
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(G.cols());
    c.at_most("garbling rows stochastic", std::max((G * ones - Eigen::VectorXd::Ones(G.rows())).cwiseAbs().maxCoeff(),
                                                   std::max(0.0, -G.minCoeff())), 1e-9);
    c.at_most("diagonal at least alpha_star", std::max(0.0, s.alpha_star - G.diagonal().minCoeff()), 1e-9);
    c.at_most("garbled experiment uninformative |D G|", (row_difference(pi) * G).cwiseAbs().maxCoeff(), 1e-9);
    c.at_most("alpha_star reproduces", std::abs(solve_mva(pi).alpha_star - s.alpha_star), 1e-8);
}

void verify_oracle(const json& doc, const json& manifest, Checker& c, double tol) {
    const OracleArtifact a = oracle_from_json(doc);
    const double ag = agent_guarantee(a.game, a.solution.agent_strategy);
    const double ad = adversary_guarantee(a.game, a.solution.adversary_strategy);
    c.at_most("agent guarantee reproduces", std::abs(ag - a.solution.value), tol);
    c.at_most("adversary guarantee reproduces", std::abs(ad - a.solution.minimax_value), tol);
    c.at_most("duality gap", std::abs(ad - ag), 1e-8);
    TrsCheckOptions to;
    to.interval = interval_of(manifest.at("config"));
    const TrsReport trs = verify_trs_structure(a.game, a.solution, to);
    c.at_most("robust rationalizability worst support margin", trs.worst_margin, to.margin_tol);
}

} // namespace

VerifyReport verify_bundle(const fs::path& dir, const RunOptions& opts) {
    if (!fs::is_directory(dir)) {
        throw MissingArtifact("bundle directory not found: " + dir.string());
    }
    const fs::path mpath = dir / "manifest.json";
    if (!fs::exists(mpath)) {
        throw MissingArtifact("no manifest.json in " + dir.string());
    }
    const json manifest = read_json(mpath);
    if (manifest.value("schema_version", "") != kSchemaVersion || !manifest.contains("artifacts") ||
        manifest.at("artifacts").empty()) {
        throw MissingArtifact(mpath.string() + ": unsupported schema or no artifacts");
    }
    const double tol = opts.tolerance;
    Checker c;
    for (const auto& entry : manifest.at("artifacts")) {
        const std::string kind = entry.at("kind").get<std::string>();
        const fs::path p = dir / entry.at("path").get<std::string>();
        if (!fs::exists(p)) {
            throw MissingArtifact("artifact listed in the manifest is missing: " + p.string());
        }
        c.artifact = entry.at("path").get<std::string>();
        spdlog::debug("verifying {} ({})", p.string(), kind);
        if (kind == "trust-solution") {
            verify_trust_solution(read_json(p), manifest, c, tol);
        } else if (kind == "trust-table") {
            verify_trust_table(p, manifest, c, tol);
        } else if (kind == "action-solution") {
            verify_action_solution(read_json(p), c);
        } else if (kind == "action-table") {
            verify_action_table(p, manifest, c);
        } else if (kind == "sphere-solution") {
            verify_sphere_solution(read_json(p), c);
        } else if (kind == "sphere-table") {
            verify_sphere_table(p, manifest, c);
        } else if (kind == "mva-solution") {
            verify_mva(read_json(p), c);
        } else if (kind == "oracle-solution") {
            verify_oracle(read_json(p), manifest, c, tol);
        } else {
            throw MissingArtifact("unknown artifact kind '" + kind + "' in " + mpath.string());
        }
    }
    return c.rep;
}

std::string format_check(const CheckLine& c) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "measured=%.3e threshold=%.1e", c.measured, c.threshold);
    return std::string(c.pass ? "PASS " : "FAIL ") + c.artifact + "  " + c.invariant + "  " + buf;
}

} // namespace trustregion::cli
