// Config parsing, CSV/JSON readers and artifact serialization for the runner.
#include "trustregion/cli_runner.hpp"

#include "trustregion/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace trustregion::cli {

std::string to_string(Task t) {
    switch (t) {
    case Task::binary_trust: return "binary-trust";
    case Task::binary_action: return "binary-action";
    case Task::mva: return "mva";
    case Task::spherical: return "spherical";
    case Task::oracle: return "oracle";
    case Task::sweep: return "sweep";
    case Task::verify_tre: return "verify-tre";
    }
    return "unknown";
}

namespace {

std::string join(const std::string& field, const std::string& key) {
    return field.empty() ? key : field + "." + key;
}

std::string join(const std::string& field, std::size_t i) {
    return field + "[" + std::to_string(i) + "]";
}

const json& require(const json& node, const std::string& field, const std::string& key) {
    if (!node.is_object()) {
        throw ConfigError(field, "expected an object");
    }
    auto it = node.find(key);
    if (it == node.end() || it->is_null()) {
        throw ConfigError(join(field, key), "required field is missing");
    }
    return *it;
}

std::string require_string(const json& node, const std::string& field, const std::string& key) {
    const json& v = require(node, field, key);
    if (!v.is_string()) {
        throw ConfigError(join(field, key), "expected a string");
    }
    return v.get<std::string>();
}

// Decimal value digits * 10^exp10, parsed without going through binary floating point.
struct Decimal {
    long long digits = 0;
    int exp10 = 0;
};

std::string decimal_text(const json& node, const std::string& field) {
    if (node.is_string()) {
        return node.get<std::string>();
    }
    if (node.is_number()) {
        return node.dump();  // shortest round-trip representation
    }
    throw ConfigError(field, "expected a number or a decimal string");
}

Decimal parse_decimal(const std::string& s, const std::string& field) {
    Decimal d;
    std::size_t i = 0;
    bool neg = false;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
        neg = s[i] == '-';
        ++i;
    }
    bool any = false, point = false;
    for (; i < s.size(); ++i) {
        const char c = s[i];
        if (c >= '0' && c <= '9') {
            if (d.digits > (std::numeric_limits<long long>::max() - 9) / 10) {
                throw ConfigError(field, "too many significant digits in '" + s + "'");
            }
            d.digits = d.digits * 10 + (c - '0');
            if (point) {
                --d.exp10;
            }
            any = true;
        } else if (c == '.' && !point) {
            point = true;
        } else {
            break;
        }
    }
    if (i + 1 < s.size() && (s[i] == 'e' || s[i] == 'E')) {
        int e = 0;
        const auto [p, ec] = std::from_chars(s.data() + i + 1 + (s[i + 1] == '+' ? 1 : 0),
                                             s.data() + s.size(), e);
        if (ec != std::errc() || p != s.data() + s.size()) {
            throw ConfigError(field, "malformed exponent in '" + s + "'");
        }
        d.exp10 += e;
        i = s.size();
    }
    if (!any || i != s.size()) {
        throw ConfigError(field, "not a decimal number: '" + s + "'");
    }
    if (neg) {
        d.digits = -d.digits;
    }
    return d;
}

double decimal_to_double(long long digits, int exp10) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%llde%d", digits, exp10);
    return std::strtod(buf, nullptr);  // correctly rounded
}

long long rescale(const Decimal& d, int exp10, const std::string& field) {
    long long v = d.digits;
    for (int e = d.exp10; e > exp10; --e) {
        if (std::llabs(v) > std::numeric_limits<long long>::max() / 10) {
            throw ConfigError(field, "grid needs too many digits");
        }
        v *= 10;
    }
    return v;
}

std::vector<double> real_array(const json& node, const std::string& field) {
    if (!node.is_array()) {
        throw ConfigError(field, "expected an array");
    }
    std::vector<double> out;
    for (std::size_t i = 0; i < node.size(); ++i) {
        out.push_back(parse_real(node[i], join(field, i)));
    }
    return out;
}

void check_alpha(double a, const std::string& field) {
    if (!(a >= 0.0 && a <= 1.0)) {
        throw ConfigError(field, "alpha must lie in [0, 1], got " + format_decimal(a));
    }
}

std::vector<std::string> names_or_default(const json& node, const std::string& field,
                                          std::size_t n, const std::string& prefix) {
    std::vector<std::string> out;
    if (node.is_number_integer()) {
        const auto k = node.get<long long>();
        if (k <= 0) {
            throw ConfigError(field, "count must be positive");
        }
        for (long long i = 0; i < k; ++i) {
            out.push_back(prefix + std::to_string(i));
        }
        return out;
    }
    if (!node.is_array()) {
        throw ConfigError(field, "expected a list of names or a count");
    }
    for (std::size_t i = 0; i < node.size(); ++i) {
        out.push_back(node[i].is_string() ? node[i].get<std::string>() : node[i].dump());
    }
    if (n != 0 && out.size() != n) {
        throw ConfigError(field, "expected " + std::to_string(n) + " entries");
    }
    return out;
}

} // namespace

double parse_real(const json& node, const std::string& field) {
    if (node.is_number()) {
        return node.get<double>();
    }
    if (!node.is_string()) {
        throw ConfigError(field, "expected a number or a decimal string");
    }
    const std::string s = node.get<std::string>();
    double x = 0.0;
    const char* first = s.data() + (!s.empty() && s[0] == '+' ? 1 : 0);
    const auto [p, ec] = std::from_chars(first, s.data() + s.size(), x);
    if (ec != std::errc() || p != s.data() + s.size() || !std::isfinite(x)) {
        throw ConfigError(field, "not a finite decimal number: '" + s + "'");
    }
    return x;
}

std::vector<double> parse_alpha_grid(const json& node, const std::string& field) {
    std::vector<double> out;
    if (node.is_array()) {
        out = real_array(node, field);
    } else if (node.is_object()) {
        const std::string f_from = join(field, "from"), f_to = join(field, "to"),
                          f_step = join(field, "step");
        const Decimal from = parse_decimal(decimal_text(require(node, field, "from"), f_from), f_from);
        const Decimal to = parse_decimal(decimal_text(require(node, field, "to"), f_to), f_to);
        const Decimal step = parse_decimal(decimal_text(require(node, field, "step"), f_step), f_step);
        const int e = std::min({from.exp10, to.exp10, step.exp10});
        const long long F = rescale(from, e, field), T = rescale(to, e, field),
                        S = rescale(step, e, field);
        if (S <= 0) {
            throw ConfigError(f_step, "step must be positive");
        }
        if (T < F || (T - F) % S != 0) {
            throw ConfigError(field, "step must divide to - from exactly");
        }
        const long long n = (T - F) / S;
        if (n > 1000000) {
            throw ConfigError(field, "grid has more than 10^6 points");
        }
        for (long long i = 0; i <= n; ++i) {
            out.push_back(decimal_to_double(F + i * S, e));
        }
    } else {
        throw ConfigError(field, "expected a list or {from, to, step}");
    }
    if (out.empty()) {
        throw ConfigError(field, "alpha grid is empty");
    }
    for (std::size_t i = 0; i < out.size(); ++i) {
        check_alpha(out[i], join(field, i));
    }
    return out;
}

UtilityCurve parse_utility(const json& node, const std::string& field) {
    const std::string kind = require_string(node, field, "kind");
    if (kind == "quadratic") {
        return UtilityCurve::quadratic();
    }
    if (kind == "log-score") {
        return UtilityCurve::log_score();
    }
    if (kind == "weighted-quadratic") {
        const double g = parse_real(require(node, field, "gamma"), join(field, "gamma"));
        if (!(g > 0.0)) {
            throw ConfigError(join(field, "gamma"), "gamma must be positive");
        }
        return UtilityCurve::weighted_quadratic(g);
    }
    if (kind == "custom-grid") {
        try {
            return UtilityCurve::custom_grid(real_array(require(node, field, "knots"), join(field, "knots")),
                                             real_array(require(node, field, "d2"), join(field, "d2")));
        } catch (const ConfigError&) {
            throw;
        } catch (const InputError& e) {
            throw ConfigError(field, e.what());
        }
    }
    throw ConfigError(join(field, "kind"),
                      "unknown utility '" + kind +
                          "' (quadratic, log-score, weighted-quadratic, custom-grid)");
}

BeliefDensity parse_density(const json& node, const std::string& field, double lower, double upper) {
    const std::string kind = require_string(node, field, "kind");
    try {
        if (kind == "uniform") {
            return BeliefDensity::uniform(lower, upper);
        }
        if (kind == "grid") {
            return BeliefDensity::grid(real_array(require(node, field, "knots"), join(field, "knots")),
                                       real_array(require(node, field, "values"), join(field, "values")));
        }
        if (kind == "beta") {
            const double a = parse_real(require(node, field, "a"), join(field, "a"));
            const double b = parse_real(require(node, field, "b"), join(field, "b"));
            if (!(a >= 1.0 && b >= 1.0)) {
                throw ConfigError(field, "beta shape parameters must be >= 1 (bounded density)");
            }
            std::size_t n = 2049;
            if (node.contains("n")) {
                n = node.at("n").get<std::size_t>();
            }
            const double width = upper - lower;
            return BeliefDensity::from_function(
                [=](double x) {
                    const double t = (x - lower) / width;
                    return std::pow(t, a - 1.0) * std::pow(1.0 - t, b - 1.0);
                },
                n, lower, upper);
        }
        if (kind == "atoms") {
            return BeliefDensity::atoms(real_array(require(node, field, "points"), join(field, "points")),
                                        real_array(require(node, field, "probs"), join(field, "probs")));
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const json::exception& e) {
        throw ConfigError(field, e.what());
    } catch (const InputError& e) {
        throw ConfigError(field, e.what());
    }
    throw ConfigError(join(field, "kind"), "unknown density '" + kind + "' (uniform, grid, beta, atoms)");
}

Eigen::MatrixXd read_matrix_csv(const fs::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw InputError("cannot open matrix file " + path.string());
    }
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty() || line[0] == '#') {
            continue;
        }
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            const auto b = cell.find_first_not_of(" \t");
            const auto e = cell.find_last_not_of(" \t");
            const std::string t = b == std::string::npos ? "" : cell.substr(b, e - b + 1);
            row.push_back(parse_real(json(t), path.filename().string() + ":" + std::to_string(lineno)));
        }
        if (!rows.empty() && row.size() != rows.front().size()) {
            throw InputError(path.string() + ":" + std::to_string(lineno) + ": ragged row");
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) {
        throw InputError("matrix file " + path.string() + " is empty");
    }
    Eigen::MatrixXd m(static_cast<long>(rows.size()), static_cast<long>(rows[0].size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < rows[i].size(); ++j) {
            m(static_cast<long>(i), static_cast<long>(j)) = rows[i][j];
        }
    }
    return m;
}

// ---------------------------------------------------------------- games

FiniteGame game_from_json(const json& doc, const std::string& field) {
    FiniteGame g;
    g.prior = real_array(require(doc, field, "prior"), join(field, "prior"));
    const std::size_t n = g.prior.size();
    g.state_names = doc.contains("states")
                        ? names_or_default(doc.at("states"), join(field, "states"), n, "w")
                        : names_or_default(json(static_cast<long long>(n)), field, n, "w");
    const json& msgs = require(doc, field, "messages");
    if (!msgs.is_array() || msgs.empty()) {
        throw ConfigError(join(field, "messages"), "expected a nonempty array");
    }
    for (std::size_t k = 0; k < msgs.size(); ++k) {
        const std::string f = join(join(field, "messages"), k);
        g.posteriors.push_back(real_array(require(msgs[k], f, "posterior"), join(f, "posterior")));
        g.tau.push_back(parse_real(require(msgs[k], f, "prob"), join(f, "prob")));
    }
    if (doc.contains("type_law")) {
        const json& tl = doc.at("type_law");
        if (!tl.is_array() || tl.size() != n) {
            throw ConfigError(join(field, "type_law"), "expected N rows");
        }
        std::vector<std::vector<double>> rows;
        for (std::size_t w = 0; w < n; ++w) {
            rows.push_back(real_array(tl[w], join(join(field, "type_law"), w)));
        }
        g.type_law.resize(static_cast<long>(n), static_cast<long>(rows[0].size()));
        for (std::size_t w = 0; w < n; ++w) {
            if (rows[w].size() != rows[0].size()) {
                throw ConfigError(join(join(field, "type_law"), w), "ragged row");
            }
            for (std::size_t t = 0; t < rows[w].size(); ++t) {
                g.type_law(static_cast<long>(w), static_cast<long>(t)) = rows[w][t];
            }
        }
    } else {
        g.type_law = Eigen::MatrixXd::Ones(static_cast<long>(n), 1);
    }
    g.type_names = doc.contains("types")
                       ? names_or_default(doc.at("types"), join(field, "types"), g.n_types(), "t")
                       : names_or_default(json(static_cast<long long>(g.n_types())), field, 0, "t");
    g.action_names = names_or_default(require(doc, field, "actions"), join(field, "actions"), 0, "a");
    g.n_actions = g.action_names.size();
    g.payoff = real_array(require(doc, field, "payoff"), join(field, "payoff"));
    g.alpha = parse_real(require(doc, field, "alpha"), join(field, "alpha"));
    check_alpha(g.alpha, join(field, "alpha"));
    try {
        check_game(g);
    } catch (const InputError& e) {
        throw ConfigError(field, e.what());
    }
    return g;
}

json game_to_json(const FiniteGame& g) {
    auto names = [](const std::vector<std::string>& given, std::size_t n, const std::string& prefix) {
        if (given.size() == n) {
            return given;
        }
        std::vector<std::string> out;
        for (std::size_t i = 0; i < n; ++i) {
            out.push_back(prefix + std::to_string(i));
        }
        return out;
    };
    json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["states"] = names(g.state_names, g.n_states(), "w");
    doc["prior"] = g.prior;
    json msgs = json::array();
    for (std::size_t k = 0; k < g.n_messages(); ++k) {
        msgs.push_back({{"posterior", g.posteriors[k]}, {"prob", g.tau[k]}});
    }
    doc["messages"] = msgs;
    doc["types"] = names(g.type_names, g.n_types(), "t");
    doc["type_law"] = matrix_to_json(g.type_law);
    doc["actions"] = names(g.action_names, g.n_actions, "a");
    doc["payoff"] = g.payoff;
    doc["alpha"] = g.alpha;
    return doc;
}

FiniteGame load_game(const fs::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw InputError("cannot open game file " + path.string());
    }
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(path.string(), std::string("malformed JSON: ") + e.what());
    }
    return game_from_json(doc, "game");
}

// ---------------------------------------------------------------- config

ExperimentConfig parse_config(const json& doc, const fs::path& base_dir) {
    if (!doc.is_object()) {
        throw ConfigError("$", "config must be a JSON object");
    }
    ExperimentConfig cfg;
    cfg.doc = doc;
    cfg.base_dir = base_dir;
    const std::string task = require_string(doc, "", "task");
    static const std::vector<Task> all = {Task::binary_trust, Task::binary_action, Task::mva,
                                          Task::spherical,    Task::oracle,        Task::sweep,
                                          Task::verify_tre};
    auto it = std::find_if(all.begin(), all.end(), [&](Task t) { return to_string(t) == task; });
    if (it == all.end()) {
        throw ConfigError("task", "unknown task '" + task +
                                      "' (binary-trust, binary-action, mva, spherical, oracle, sweep, "
                                      "verify-tre)");
    }
    cfg.task = *it;
    if (doc.contains("seed")) {
        if (!doc.at("seed").is_number_unsigned()) {
            throw ConfigError("seed", "expected a nonnegative integer");
        }
        cfg.seed = doc.at("seed").get<std::uint64_t>();
    }

    auto resolve = [&](const std::string& key) {
        const fs::path p = base_dir / require_string(doc, "", key);
        if (!fs::exists(p)) {
            throw ConfigError(key, "file not found: " + p.string());
        }
        return p;
    };
    auto alpha_fields = [&](bool grid_required) {
        if (doc.contains("alphas")) {
            (void)parse_alpha_grid(doc.at("alphas"), "alphas");
        } else if (grid_required) {
            throw ConfigError("alphas", "required field is missing");
        } else {
            check_alpha(parse_real(require(doc, "", "alpha"), "alpha"), "alpha");
        }
    };
    auto model_fields = [&](Task model) {
        switch (model) {
        case Task::binary_trust:
            (void)parse_utility(require(doc, "", "utility"), "utility");
            if (parse_density(require(doc, "", "tau"), "tau").kind() != DensityKind::grid) {
                throw ConfigError("tau", "the binary-state solver needs a density, not atoms");
            }
            break;
        case Task::binary_action: {
            const json& p = require(doc, "", "payoffs");
            (void)real_array(require(p, "payoffs", "values"), "payoffs.values");
            (void)real_array(require(p, "payoffs", "probs"), "payoffs.probs");
            break;
        }
        case Task::spherical: {
            (void)real_array(require(doc, "", "center"), "center");
            const double r0 = parse_real(require(doc, "", "r0"), "r0");
            if (!(r0 > 0.0)) {
                throw ConfigError("r0", "must be positive");
            }
            if (doc.contains("radial")) {
                (void)parse_density(doc.at("radial"), "radial", 0.0, r0);
            }
            break;
        }
        default: break;
        }
    };

    switch (cfg.task) {
    case Task::binary_trust:
    case Task::binary_action:
    case Task::spherical:
        model_fields(cfg.task);
        alpha_fields(false);
        break;
    case Task::sweep: {
        const std::string model = require_string(doc, "", "model");
        if (model == "binary-trust") {
            model_fields(Task::binary_trust);
        } else if (model == "binary-action") {
            model_fields(Task::binary_action);
        } else if (model == "spherical") {
            model_fields(Task::spherical);
        } else {
            throw ConfigError("model", "sweeps run binary-trust, binary-action or spherical, not '" +
                                           model + "'");
        }
        alpha_fields(true);
        break;
    }
    case Task::mva: {
        const int given = static_cast<int>(doc.contains("signal_matrix")) +
                          static_cast<int>(doc.contains("random")) +
                          static_cast<int>(doc.contains("construct"));
        if (given != 1) {
            throw ConfigError("signal_matrix", "give exactly one of signal_matrix, random, construct");
        }
        if (doc.contains("signal_matrix")) {
            (void)resolve("signal_matrix");
        } else if (doc.contains("random")) {
            (void)require(doc.at("random"), "random", "states");
            (void)require(doc.at("random"), "random", "signals");
        } else {
            const json& c = doc.at("construct");
            (void)require(c, "construct", "states");
            (void)require(c, "construct", "signals");
            (void)parse_real(require(c, "construct", "delta"), "construct.delta");
        }
        break;
    }
    case Task::oracle:
        (void)resolve("game");
        if (doc.contains("alpha")) {
            check_alpha(parse_real(doc.at("alpha"), "alpha"), "alpha");
        }
        break;
    case Task::verify_tre:
        if (!fs::is_directory(base_dir / require_string(doc, "", "bundle"))) {
            throw MissingArtifact("bundle: directory not found: " +
                                  (base_dir / doc.at("bundle").get<std::string>()).string());
        }
        break;
    }
    return cfg;
}

ExperimentConfig load_config(const fs::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("--config", "cannot open " + path.string());
    }
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(path.string(), std::string("malformed JSON: ") + e.what());
    }
    return parse_config(doc, path.parent_path());
}

// ---------------------------------------------------------------- output

std::string format_decimal(double x) {
    if (!std::isfinite(x)) {
        return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", x);
    std::string s(buf);
    while (s.back() == '0') {
        s.pop_back();
    }
    if (s.back() == '.') {
        s.pop_back();
    }
    if (s == "-0") {
        s = "0";
    }
    return s;
}

std::string format_bound(double x, bool upper) {
    if (!std::isfinite(x)) {
        return format_decimal(x);
    }
    const double scaled = x * 1e6;
    const double near = std::round(scaled);
    double r = near;
    if (std::abs(scaled - near) > 1e-3) {
        r = upper ? std::ceil(scaled) : std::floor(scaled);
    }
    return format_decimal(r / 1e6);
}

void write_text(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path());
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw InputError("cannot write " + path.string());
    }
    out << text;
    if (!out) {
        throw InputError("write failed for " + path.string());
    }
}

std::string csv_schema_help() {
    std::ostringstream os;
    os << "CSV tables ('.' decimal, ',' separator, LF, 6 decimals with trailing zeros trimmed):\n"
       << "  trust.csv, sweep.csv (binary-trust):  " << kTrustCsvHeader << "\n"
       << "  binary_action.csv, sweep.csv (binary-action):  " << kActionCsvHeader << "\n"
       << "  spherical.csv, sweep.csv (spherical):  " << kSphereCsvHeader << "\n";
    return os.str();
}

// ---------------------------------------------------------------- artifacts

json matrix_to_json(const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (long i = 0; i < m.rows(); ++i) {
        json r = json::array();
        for (long j = 0; j < m.cols(); ++j) {
            r.push_back(m(i, j));
        }
        rows.push_back(r);
    }
    return rows;
}

Eigen::MatrixXd matrix_from_json(const json& node, const std::string& field) {
    if (!node.is_array()) {
        throw ConfigError(field, "expected an array of rows");
    }
    if (node.empty()) {
        return {};
    }
    const std::size_t cols = node[0].size();
    Eigen::MatrixXd m(static_cast<long>(node.size()), static_cast<long>(cols));
    for (std::size_t i = 0; i < node.size(); ++i) {
        const std::vector<double> r = real_array(node[i], join(field, i));
        if (r.size() != cols) {
            throw ConfigError(join(field, i), "ragged row");
        }
        for (std::size_t j = 0; j < cols; ++j) {
            m(static_cast<long>(i), static_cast<long>(j)) = r[j];
        }
    }
    return m;
}

json to_json(const TransportMap& map) {
    json pieces = json::array();
    for (const auto& p : map.pieces) {
        json j;
        j["kind"] = p.kind() == TransportPiece::Kind::quantile ? "quantile" : "constant";
        j["source"] = {p.src_lo(), p.src_hi()};
        j["target"] = {p.tgt_lo(), p.tgt_hi()};
        if (p.kind() == TransportPiece::Kind::quantile) {
            j["anchor"] = p.anchor();
            j["source_weight"] = p.source_weight();
            j["target_weight"] = p.target_weight();
        }
        // Sampled knots of the map on its source interval, for plotting.
        json knots = json::array();
        for (int k = 0; k <= 8; ++k) {
            const double x = p.src_lo() + (p.src_hi() - p.src_lo()) * k / 8.0;
            knots.push_back({x, p(x)});
        }
        j["knots"] = knots;
        pieces.push_back(j);
    }
    return {{"regime", to_string(map.regime)},
            {"alpha", map.alpha},
            {"lo", map.lo},
            {"hi", map.hi},
            {"cutoff", map.cutoff},
            {"prior", map.prior},
            {"thresholds", {map.mu_L, map.mu_H}},
            {"pieces", pieces}};
}

TransportMap transport_map_from_json(const json& node, const BeliefDensity& tau) {
    const std::string f = "map";
    TransportMap map;
    const std::string regime = require_string(node, f, "regime");
    if (regime == to_string(Regime::high_alpha)) {
        map.regime = Regime::high_alpha;
    } else if (regime == to_string(Regime::low_alpha)) {
        map.regime = Regime::low_alpha;
    } else {
        throw ConfigError("map.regime", "unknown regime '" + regime + "'");
    }
    map.alpha = parse_real(require(node, f, "alpha"), "map.alpha");
    map.lo = parse_real(require(node, f, "lo"), "map.lo");
    map.hi = parse_real(require(node, f, "hi"), "map.hi");
    map.cutoff = parse_real(require(node, f, "cutoff"), "map.cutoff");
    map.prior = parse_real(require(node, f, "prior"), "map.prior");
    const std::vector<double> th = real_array(require(node, f, "thresholds"), "map.thresholds");
    if (th.size() != 2) {
        throw ConfigError("map.thresholds", "expected two entries");
    }
    map.mu_L = th[0];
    map.mu_H = th[1];
    const json& pieces = require(node, f, "pieces");
    for (std::size_t i = 0; i < pieces.size(); ++i) {
        const std::string pf = join("map.pieces", i);
        const json& p = pieces[i];
        const std::vector<double> s = real_array(require(p, pf, "source"), join(pf, "source"));
        const std::vector<double> t = real_array(require(p, pf, "target"), join(pf, "target"));
        if (s.size() != 2 || t.size() != 2) {
            throw ConfigError(pf, "source and target must be intervals");
        }
        const std::string kind = require_string(p, pf, "kind");
        if (kind == "constant") {
            map.pieces.push_back(TransportPiece::constant(s[0], s[1], t[0]));
        } else if (kind == "quantile") {
            map.pieces.push_back(TransportPiece::quantile(
                tau, s[0], s[1], t[0], t[1], parse_real(require(p, pf, "anchor"), join(pf, "anchor")),
                parse_real(require(p, pf, "source_weight"), join(pf, "source_weight")),
                parse_real(require(p, pf, "target_weight"), join(pf, "target_weight"))));
        } else {
            throw ConfigError(join(pf, "kind"), "unknown piece kind '" + kind + "'");
        }
    }
    return map;
}

json to_json(const TrustArtifact& a) {
    return {{"schema_version", kSchemaVersion},
            {"kind", "trust-solution"},
            {"utility", a.utility},
            {"tau", a.tau},
            {"alpha", a.trust.alpha},
            {"trust",
             {{"lo", a.trust.lo},
              {"hi", a.trust.hi},
              {"cutoff", a.trust.cutoff},
              {"prior", a.trust.prior},
              {"residuals", {a.trust.residuals.first, a.trust.residuals.second}},
              {"iterations", a.trust.iterations}}},
            {"map", to_json(a.map)}};
}

TrustArtifact trust_artifact_from_json(const json& node) {
    TrustArtifact a;
    a.utility = require(node, "", "utility");
    a.tau = require(node, "", "tau");
    const json& t = require(node, "", "trust");
    a.trust.alpha = parse_real(require(node, "", "alpha"), "alpha");
    a.trust.lo = parse_real(require(t, "trust", "lo"), "trust.lo");
    a.trust.hi = parse_real(require(t, "trust", "hi"), "trust.hi");
    a.trust.cutoff = parse_real(require(t, "trust", "cutoff"), "trust.cutoff");
    a.trust.prior = parse_real(require(t, "trust", "prior"), "trust.prior");
    const std::vector<double> r = real_array(require(t, "trust", "residuals"), "trust.residuals");
    if (r.size() != 2) {
        throw ConfigError("trust.residuals", "expected two entries");
    }
    a.trust.residuals = {r[0], r[1]};
    a.trust.iterations = require(t, "trust", "iterations").get<int>();
    a.map = transport_map_from_json(require(node, "", "map"), parse_density(a.tau, "tau"));
    return a;
}

json to_json(const MvaSolution& s) {
    return {{"schema_version", kSchemaVersion},
            {"kind", "mva-solution"},
            {"alpha_star", s.alpha_star},
            {"garbling", matrix_to_json(s.garbling)},
            {"adversary", matrix_to_json(s.adversary)},
            {"row_difference", matrix_to_json(s.row_difference)},
            {"rank",
             {{"rank", s.rank.rank},
              {"singular_values",
               std::vector<double>(s.rank.singular_values.data(),
                                   s.rank.singular_values.data() + s.rank.singular_values.size())},
              {"near_degenerate", s.rank.near_degenerate}}},
            {"certificates",
             {{"constraint_residual", s.constraint_residual},
              {"uninformative_gap", s.uninformative_gap},
              {"eigen_residual", s.eigen_residual},
              {"adversary_stochastic_gap", s.adversary_stochastic_gap}}},
            {"lp_iterations", s.lp_iterations}};
}

MvaSolution mva_from_json(const json& node) {
    MvaSolution s;
    s.alpha_star = parse_real(require(node, "", "alpha_star"), "alpha_star");
    s.garbling = matrix_from_json(require(node, "", "garbling"), "garbling");
    s.adversary = matrix_from_json(require(node, "", "adversary"), "adversary");
    s.row_difference = matrix_from_json(require(node, "", "row_difference"), "row_difference");
    const json& r = require(node, "", "rank");
    s.rank.rank = require(r, "rank", "rank").get<int>();
    const std::vector<double> sv = real_array(require(r, "rank", "singular_values"), "rank.singular_values");
    s.rank.singular_values = Eigen::Map<const Eigen::VectorXd>(sv.data(), static_cast<long>(sv.size()));
    s.rank.near_degenerate = require(r, "rank", "near_degenerate").get<bool>();
    const json& c = require(node, "", "certificates");
    s.constraint_residual = parse_real(require(c, "certificates", "constraint_residual"), "certificates");
    s.uninformative_gap = parse_real(require(c, "certificates", "uninformative_gap"), "certificates");
    s.eigen_residual = parse_real(require(c, "certificates", "eigen_residual"), "certificates");
    s.adversary_stochastic_gap =
        parse_real(require(c, "certificates", "adversary_stochastic_gap"), "certificates");
    s.lp_iterations = require(node, "", "lp_iterations").get<int>();
    return s;
}

json to_json(const BinaryActionSolution& s) {
    json j = {{"L", s.L},
              {"G", s.G},
              {"alpha", s.alpha},
              {"alpha_hat", s.alpha_hat},
              {"regime", to_string(s.regime)},
              {"sigma_low", s.sigma_low},
              {"sigma_high", s.sigma_high},
              {"value", s.value},
              {"no_adviser_value", s.no_adviser_value}};
    j["alternative"] = s.alternative ? json{s.alternative->first, s.alternative->second} : json(nullptr);
    return j;
}

BinaryActionSolution binary_action_from_json(const json& node) {
    BinaryActionSolution s;
    s.L = parse_real(require(node, "", "L"), "L");
    s.G = parse_real(require(node, "", "G"), "G");
    s.alpha = parse_real(require(node, "", "alpha"), "alpha");
    s.alpha_hat = parse_real(require(node, "", "alpha_hat"), "alpha_hat");
    const std::string r = require_string(node, "", "regime");
    if (r == to_string(ActionRegime::full_trust)) {
        s.regime = ActionRegime::full_trust;
    } else if (r == to_string(ActionRegime::no_trust)) {
        s.regime = ActionRegime::no_trust;
    } else if (r == to_string(ActionRegime::boundary_both)) {
        s.regime = ActionRegime::boundary_both;
    } else {
        throw ConfigError("regime", "unknown regime '" + r + "'");
    }
    s.sigma_low = parse_real(require(node, "", "sigma_low"), "sigma_low");
    s.sigma_high = parse_real(require(node, "", "sigma_high"), "sigma_high");
    s.value = parse_real(require(node, "", "value"), "value");
    s.no_adviser_value = parse_real(require(node, "", "no_adviser_value"), "no_adviser_value");
    if (node.contains("alternative") && !node.at("alternative").is_null()) {
        const std::vector<double> alt = real_array(node.at("alternative"), "alternative");
        s.alternative = std::make_pair(alt.at(0), alt.at(1));
    }
    return s;
}

json to_json(const OracleArtifact& a) {
    const SaddleSolution& s = a.solution;
    std::vector<int> off, reassigned;
    json posts = json::array();
    for (std::size_t j = 0; j < s.off_path.size(); ++j) {
        off.push_back(s.off_path[j] ? 1 : 0);
        reassigned.push_back(s.off_path_reassigned[j] ? 1 : 0);
        posts.push_back(s.induced_posteriors[j]);
    }
    return {{"schema_version", kSchemaVersion},
            {"kind", "oracle-solution"},
            {"game", game_to_json(a.game)},
            {"value", s.value},
            {"minimax_value", s.minimax_value},
            {"duality_gap", s.duality_gap},
            {"exploitability", {s.exploitability.first, s.exploitability.second}},
            {"agent_strategy", matrix_to_json(s.agent_strategy)},
            {"adversary_strategy", matrix_to_json(s.adversary_strategy)},
            {"message_mass", std::vector<double>(s.message_mass.data(),
                                                 s.message_mass.data() + s.message_mass.size())},
            {"induced_posteriors", posts},
            {"off_path", off},
            {"off_path_reassigned", reassigned},
            {"lp_iterations", {s.agent_lp_iterations, s.adversary_lp_iterations}},
            {"adviser_value", {{"u_star", a.adviser.u_star}, {"u_0", a.adviser.u_0}, {"v", a.adviser.v}}}};
}

OracleArtifact oracle_from_json(const json& node) {
    OracleArtifact a;
    a.game = game_from_json(require(node, "", "game"), "game");
    SaddleSolution& s = a.solution;
    s.value = parse_real(require(node, "", "value"), "value");
    s.minimax_value = parse_real(require(node, "", "minimax_value"), "minimax_value");
    s.duality_gap = parse_real(require(node, "", "duality_gap"), "duality_gap");
    const std::vector<double> ex = real_array(require(node, "", "exploitability"), "exploitability");
    s.exploitability = {ex.at(0), ex.at(1)};
    s.agent_strategy = matrix_from_json(require(node, "", "agent_strategy"), "agent_strategy");
    s.adversary_strategy = matrix_from_json(require(node, "", "adversary_strategy"), "adversary_strategy");
    const std::vector<double> mm = real_array(require(node, "", "message_mass"), "message_mass");
    s.message_mass = Eigen::Map<const Eigen::VectorXd>(mm.data(), static_cast<long>(mm.size()));
    const json& posts = require(node, "", "induced_posteriors");
    for (std::size_t j = 0; j < posts.size(); ++j) {
        s.induced_posteriors.push_back(real_array(posts[j], join("induced_posteriors", j)));
    }
    for (const auto& x : require(node, "", "off_path")) {
        s.off_path.push_back(x.get<int>() != 0);
    }
    for (const auto& x : require(node, "", "off_path_reassigned")) {
        s.off_path_reassigned.push_back(x.get<int>() != 0);
    }
    const json& it = require(node, "", "lp_iterations");
    s.agent_lp_iterations = it.at(0).get<int>();
    s.adversary_lp_iterations = it.at(1).get<int>();
    const json& av = require(node, "", "adviser_value");
    a.adviser.u_star = parse_real(require(av, "adviser_value", "u_star"), "adviser_value.u_star");
    a.adviser.u_0 = parse_real(require(av, "adviser_value", "u_0"), "adviser_value.u_0");
    a.adviser.v = parse_real(require(av, "adviser_value", "v"), "adviser_value.v");
    return a;
}

} // namespace trustregion::cli
