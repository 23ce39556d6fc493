#include "contagion/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include <fmt/format.h>

namespace contagion {

namespace {

const std::set<std::string> kSweepParameters = {"lambda", "q", "alpha", "pi"};

void reject_unknown(const json& j, const std::string& path, const std::set<std::string>& allowed) {
    for (const auto& [key, value] : j.items()) {
        if (!allowed.count(key)) {
            throw FieldError(path + "/" + key, "unknown field");
        }
    }
}

double get_number(const json& j, const std::string& path, const std::string& key, double fallback) {
    if (!j.contains(key)) {
        return fallback;
    }
    const auto& v = j.at(key);
    if (!v.is_number() || !std::isfinite(v.get<double>())) {
        throw FieldError(path + "/" + key, "expected a finite number");
    }
    return v.get<double>();
}

std::uint64_t get_count(const json& j, const std::string& path, const std::string& key, std::uint64_t fallback) {
    if (!j.contains(key)) {
        return fallback;
    }
    const auto& v = j.at(key);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
        throw FieldError(path + "/" + key, "expected a non-negative integer");
    }
    return v.get<std::uint64_t>();
}

bool get_bool(const json& j, const std::string& path, const std::string& key, bool fallback) {
    if (!j.contains(key)) {
        return fallback;
    }
    if (!j.at(key).is_boolean()) {
        throw FieldError(path + "/" + key, "expected true or false");
    }
    return j.at(key).get<bool>();
}

const json& get_object(const json& j, const std::string& path, const std::string& key) {
    if (!j.contains(key)) {
        throw FieldError(path + "/" + key, "missing field");
    }
    if (!j.at(key).is_object()) {
        throw FieldError(path + "/" + key, "expected an object");
    }
    return j.at(key);
}

std::string flag(bool b) { return b ? "1" : "0"; }

}  // namespace

std::vector<double> SweepSpec::values() const {
    std::vector<double> out;
    if (steps <= 1) {
        out.push_back(lo);
        return out;
    }
    for (std::size_t i = 0; i < steps; ++i) {
        out.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(steps - 1));
    }
    return out;
}

ModelSpec ModelSpec::with(const std::string& parameter, double value) const {
    ModelSpec m = *this;
    if (parameter == "lambda") {
        if (p.kind() != DegreeKind::Poisson) {
            throw FieldError("/sweep/parameter", "lambda sweeps need a Poisson degree law");
        }
        if (!(value > 0.0)) {
            throw FieldError("/sweep", "lambda must be positive");
        }
        m.p = DegreeDistribution::poisson(value, support_max);
    } else if (parameter == "q") {
        if (!t.proportion()) {
            throw FieldError("/sweep/parameter", "q sweeps need a proportional threshold law");
        }
        if (!(value >= 0.0 && value <= 1.0)) {
            throw FieldError("/sweep", "q must lie in [0, 1]");
        }
        m.t = ThresholdLaw::proportional(value);
    } else if (parameter == "alpha") {
        if (!(value >= 0.0 && value <= 1.0)) {
            throw FieldError("/sweep", "alpha must lie in [0, 1]");
        }
        m.alpha = ActivationLaw::uniform(value);
    } else if (parameter == "pi") {
        if (!(value >= 0.0 && value <= 1.0)) {
            throw FieldError("/sweep", "pi must lie in [0, 1]");
        }
        m.pi = value;
    } else {
        throw FieldError("/sweep/parameter", "unknown parameter '" + parameter + "'");
    }
    return m;
}

ModelParams ModelSpec::params() const {
    ModelParams mp{p, t, alpha.degree_based() ? alpha : ActivationLaw::none(), pi};
    mp.validate();
    return mp;
}

std::vector<double> ExperimentConfig::points() const {
    if (!sweep) {
        return {std::numeric_limits<double>::quiet_NaN()};
    }
    return sweep->values();
}

ModelSpec ExperimentConfig::model_at(double value) const {
    if (!sweep || std::isnan(value)) {
        return model;
    }
    return model.with(sweep->parameter, value);
}

ExperimentConfig config_from_json(const json& j) {
    if (!j.is_object()) {
        throw FieldError("", "config must be a JSON object");
    }
    reject_unknown(j, "", {"model", "n", "replicas", "seed", "sweep", "detector", "dynamics", "simple",
                           "inactive_census", "max_attempts", "output", "threads"});
    ExperimentConfig c;
    const json& m = get_object(j, "", "model");
    reject_unknown(m, "/model", {"degree", "threshold", "activation", "pi"});
    c.model.p = degree_from_json(get_object(m, "/model", "degree"), "/model/degree");
    c.model.support_max = get_count(m.at("degree"), "/model/degree", "support_max", 0);
    c.model.t = m.contains("threshold") ? threshold_from_json(get_object(m, "/model", "threshold"), "/model/threshold")
                                        : ThresholdLaw::zero();
    c.model.alpha = m.contains("activation")
                        ? activation_from_json(get_object(m, "/model", "activation"), "/model/activation")
                        : ActivationLaw::none();
    c.model.pi = get_number(m, "/model", "pi", 1.0);
    if (!(c.model.pi >= 0.0 && c.model.pi <= 1.0)) {
        throw FieldError("/model/pi", "must lie in [0, 1]");
    }
    for (std::size_t s = 0; s <= c.model.p.support_max(); ++s) {
        if (c.model.p.p(s) > 0.0 && !c.model.t.covers(s)) {
            throw FieldError("/model/threshold", "no threshold row for degree " + std::to_string(s));
        }
    }

    c.n = get_count(j, "", "n", c.n);
    if (c.n == 0) {
        throw FieldError("/n", "must be at least 1");
    }
    if (c.n >= std::numeric_limits<Vertex>::max() / 2) {
        throw FieldError("/n", "too large for 32-bit vertex ids");
    }
    c.replicas = get_count(j, "", "replicas", c.replicas);
    if (c.replicas == 0) {
        throw FieldError("/replicas", "must be at least 1");
    }
    c.seed = get_count(j, "", "seed", c.seed);
    c.threads = get_count(j, "", "threads", c.threads);
    c.max_attempts = get_count(j, "", "max_attempts", c.max_attempts);
    c.simple = get_bool(j, "", "simple", c.simple);
    c.inactive_census = get_bool(j, "", "inactive_census", c.inactive_census);

    if (j.contains("sweep")) {
        const json& s = get_object(j, "", "sweep");
        reject_unknown(s, "/sweep", {"parameter", "lo", "hi", "steps"});
        SweepSpec sw;
        if (!s.contains("parameter") || !s.at("parameter").is_string()) {
            throw FieldError("/sweep/parameter", "expected one of lambda, q, alpha, pi");
        }
        sw.parameter = s.at("parameter").get<std::string>();
        if (!kSweepParameters.count(sw.parameter)) {
            throw FieldError("/sweep/parameter", "expected one of lambda, q, alpha, pi, got '" + sw.parameter + "'");
        }
        if (!s.contains("lo") || !s.contains("hi")) {
            throw FieldError("/sweep", "needs lo and hi");
        }
        sw.lo = get_number(s, "/sweep", "lo", 0.0);
        sw.hi = get_number(s, "/sweep", "hi", 0.0);
        sw.steps = get_count(s, "/sweep", "steps", 1);
        if (sw.steps == 0) {
            throw FieldError("/sweep/steps", "must be at least 1");
        }
        // Fail now rather than halfway through a run.
        (void)c.model.with(sw.parameter, sw.lo);
        (void)c.model.with(sw.parameter, sw.hi);
        c.sweep = sw;
    }
    if (j.contains("detector")) {
        const json& d = get_object(j, "", "detector");
        reject_unknown(d, "/detector", {"relative", "seed_multiple"});
        c.detector.relative = get_number(d, "/detector", "relative", c.detector.relative);
        c.detector.seed_multiple = get_number(d, "/detector", "seed_multiple", c.detector.seed_multiple);
    }
    if (j.contains("dynamics")) {
        const auto& d = j.at("dynamics");
        if (!d.is_string() || (d != "monotone" && d != "trials")) {
            throw FieldError("/dynamics", "expected \"monotone\" or \"trials\"");
        }
        c.dynamics = d == "trials" ? Dynamics::Trials : Dynamics::Monotone;
    }
    if (j.contains("output")) {
        const json& o = get_object(j, "", "output");
        reject_unknown(o, "/output", {"path", "per_replica"});
        if (o.contains("path")) {
            if (!o.at("path").is_string()) {
                throw FieldError("/output/path", "expected a string");
            }
            c.output = o.at("path").get<std::string>();
        }
        c.per_replica = get_bool(o, "/output", "per_replica", c.per_replica);
    }
    return c;
}

json to_json(const ExperimentConfig& c) {
    json model = {{"degree", to_json(c.model.p)},
                  {"threshold", to_json(c.model.t)},
                  {"activation", to_json(c.model.alpha)},
                  {"pi", c.model.pi}};
    if (c.model.p.kind() == DegreeKind::Poisson) {
        model["degree"]["support_max"] = c.model.support_max;
    }
    json j = {{"model", model},
              {"n", c.n},
              {"replicas", c.replicas},
              {"seed", c.seed},
              {"detector", {{"relative", c.detector.relative}, {"seed_multiple", c.detector.seed_multiple}}},
              {"dynamics", c.dynamics == Dynamics::Trials ? "trials" : "monotone"},
              {"simple", c.simple},
              {"inactive_census", c.inactive_census},
              {"max_attempts", c.max_attempts},
              {"threads", c.threads},
              {"output", {{"path", c.output}, {"per_replica", c.per_replica}}}};
    if (c.sweep) {
        j["sweep"] = {{"parameter", c.sweep->parameter}, {"lo", c.sweep->lo}, {"hi", c.sweep->hi},
                      {"steps", c.sweep->steps}};
    }
    return j;
}

// ---------------------------------------------------------------------------

Stat summarize(std::span<const double> xs) {
    Stat s;
    s.count = xs.size();
    if (xs.empty()) {
        return s;
    }
    double sum = 0.0;
    for (double x : xs) {
        sum += x;
    }
    s.mean = sum / static_cast<double>(xs.size());
    if (xs.size() > 1) {
        double ss = 0.0;
        for (double x : xs) {
            ss += (x - s.mean) * (x - s.mean);
        }
        const double var = ss / static_cast<double>(xs.size() - 1);
        s.stderr_mean = std::sqrt(var / static_cast<double>(xs.size()));
    }
    return s;
}

std::size_t ExperimentResult::failed() const noexcept {
    std::size_t f = 0;
    for (const auto& p : points) {
        f += p.failed;
    }
    return f;
}

RandomStream replica_stream(const ExperimentConfig& config, std::size_t point, std::size_t replica) {
    return RandomStream(config.seed).split(static_cast<std::uint64_t>(point) * config.replicas + replica);
}

ReplicaResult run_replica(const ExperimentConfig& config, const ModelSpec& model, std::size_t point,
                          std::size_t replica, double s_analytic) {
    ReplicaResult res;
    res.point = point;
    res.replica = replica;
    const auto start = std::chrono::steady_clock::now();
    try {
        const RandomStream root = replica_stream(config, point, replica);
        RandomStream degree_rng = root.split(0);
        RandomStream graph_rng = root.split(1);
        RandomStream simple_rng = root.split(2);
        RandomStream threshold_rng = root.split(3);
        RandomStream dynamics_rng = root.split(4);

        const auto degrees = sample_degree_sequence(model.p, config.n, degree_rng);
        Multigraph g = configuration_model(degrees, graph_rng);
        if (config.simple) {
            g = to_simple(g, SimpleMode::Reject, 1000, simple_rng);
        }
        const auto k = assign_thresholds(g, model.t, threshold_rng);
        const double n = static_cast<double>(g.vertex_count());

        if (config.dynamics == Dynamics::Trials) {
            TrialsOptions opt;
            opt.cascade_fraction = config.detector.cutoff(s_analytic, 2.0 / n);
            opt.max_attempts = config.max_attempts;
            const auto t = trials_to_cascade(g, k, opt, dynamics_rng);
            res.attempts = t.attempts;
            res.censored = t.censored;
            res.cascade = !t.censored;
            if (t.cascade) {
                res.final_fraction = static_cast<double>(t.cascade->final_b) / n;
                res.rounds = t.cascade->rounds;
            }
            res.seed_fraction = 2.0 / n;
        } else {
            RandomStream perc_rng = dynamics_rng.split(0);
            RandomStream seed_rng = dynamics_rng.split(1);
            const Multigraph percolated = bond_percolate(g, model.pi, perc_rng);
            const auto seeds = resolve_seed(g, percolated, model.alpha, k, seed_rng);
            DiffusionOutcome out = run_monotone_on(g, percolated, seeds, k);
            res.final_fraction = out.active_fraction();
            res.seed_fraction = static_cast<double>(out.seed_size) / n;
            res.rounds = out.rounds;
            res.pivotal_fraction = pivotal_set_on(percolated, k).fraction;
            if (config.inactive_census) {
                const auto census = inactive_subgraph_census(out, g);
                res.largest_inactive_fraction = static_cast<double>(census.largest_component) / n;
            }
            res.cascade = res.final_fraction >= config.detector.cutoff(s_analytic, res.seed_fraction);
        }
    } catch (const std::exception& e) {
        res.ok = false;
        res.error = e.what();
    }
    res.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return res;
}

void parallel_for(std::size_t count, std::size_t threads, const std::function<void(std::size_t)>& job) {
    if (threads == 0) {
        threads = std::max(1u, std::thread::hardware_concurrency());
    }
    threads = std::min(threads, std::max<std::size_t>(count, 1));
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) {
            job(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (std::size_t w = 0; w < threads; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) {
                job(i);
            }
        });
    }
    for (auto& t : pool) {
        t.join();
    }
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
    const auto start = std::chrono::steady_clock::now();
    const auto values = config.points();
    ExperimentResult result;
    result.points.resize(values.size());
    std::vector<ModelSpec> models;
    for (std::size_t i = 0; i < values.size(); ++i) {
        models.push_back(config.model_at(values[i]));
        auto& pt = result.points[i];
        pt.value = values[i];
        const auto& m = models.back();
        pt.s_analytic = pivotal_and_cascade_fractions(m.p, m.t, m.pi).s_fraction;
        pt.replicas.resize(config.replicas);
    }
    const std::size_t total = values.size() * config.replicas;
    parallel_for(total, config.threads, [&](std::size_t task) {
        const std::size_t point = task / config.replicas;
        const std::size_t replica = task % config.replicas;
        result.points[point].replicas[replica] =
            run_replica(config, models[point], point, replica, result.points[point].s_analytic);
    });

    for (auto& pt : result.points) {
        std::vector<double> fin;
        std::vector<double> piv;
        std::vector<double> inact;
        std::vector<double> rounds;
        std::vector<double> attempts;
        std::size_t cascades = 0;
        for (const auto& r : pt.replicas) {
            if (!r.ok) {
                ++pt.failed;
                continue;
            }
            fin.push_back(r.final_fraction);
            piv.push_back(r.pivotal_fraction);
            inact.push_back(r.largest_inactive_fraction);
            rounds.push_back(static_cast<double>(r.rounds));
            attempts.push_back(static_cast<double>(r.attempts));
            cascades += r.cascade ? 1 : 0;
            pt.censored += r.censored ? 1 : 0;
        }
        pt.final_fraction = summarize(fin);
        pt.pivotal_fraction = summarize(piv);
        pt.largest_inactive = summarize(inact);
        pt.rounds = summarize(rounds);
        pt.attempts = summarize(attempts);
        pt.cascade_frequency = fin.empty() ? 0.0 : static_cast<double>(cascades) / static_cast<double>(fin.size());
        const double seed_fraction = pt.replicas.empty() ? 0.0 : pt.replicas.front().seed_fraction;
        pt.cutoff = config.detector.cutoff(pt.s_analytic, seed_fraction);
    }
    result.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

// ---------------------------------------------------------------------------

std::string format_number(double x) {
    if (std::isnan(x)) {
        return "nan";
    }
    if (std::isinf(x)) {
        return x > 0 ? "inf" : "-inf";
    }
    if (x == 0.0) {
        return "0";  // also folds -0
    }
    return fmt::format("{:.12g}", x);
}

void CsvTable::add_row(std::vector<std::string> row) {
    if (row.size() != header.size()) {
        throw std::logic_error("CsvTable: row width differs from header");
    }
    rows.push_back(std::move(row));
}

std::optional<std::size_t> CsvTable::column(const std::string& name) const {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) {
        return std::nullopt;
    }
    return static_cast<std::size_t>(it - header.begin());
}

double CsvTable::number(std::size_t row, std::size_t col) const {
    const std::string& s = rows.at(row).at(col);
    if (s == "nan" || s.empty()) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) {
        throw std::invalid_argument("not a number: '" + s + "'");
    }
    return v;
}

void CsvTable::write(std::ostream& os) const {
    auto line = [&os](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) {
                os << ',';
            }
            os << cells[i];
        }
        os << '\n';
    };
    line(header);
    for (const auto& r : rows) {
        line(r);
    }
}

void CsvTable::write_file(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write '" + path + "'");
    }
    write(out);
}

CsvTable CsvTable::parse(std::istream& in) {
    CsvTable t;
    std::string line;
    bool first = true;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            cells.push_back(cell);
        }
        if (line.back() == ',') {
            cells.emplace_back();
        }
        if (first) {
            t.header = std::move(cells);
            first = false;
        } else {
            if (cells.size() != t.header.size()) {
                throw std::runtime_error("CSV line " + std::to_string(lineno) + ": expected " +
                                         std::to_string(t.header.size()) + " fields, got " +
                                         std::to_string(cells.size()));
            }
            t.rows.push_back(std::move(cells));
        }
    }
    return t;
}

CsvTable CsvTable::read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot read '" + path + "'");
    }
    return parse(in);
}

namespace {

std::string key_name(const ExperimentConfig& config) { return config.sweep ? config.sweep->parameter : "point"; }

std::string key_value(const ExperimentConfig& config, std::size_t i, double v) {
    return config.sweep ? format_number(v) : std::to_string(i);
}

}  // namespace

CsvTable summary_table(const ExperimentConfig& config, const ExperimentResult& result) {
    CsvTable t;
    t.header = {key_name(config), "n",           "replicas",      "failed",      "final_mean",   "final_se",
                "final_ci",       "pivotal_mean", "pivotal_se",   "inactive_mean", "inactive_se", "rounds_mean",
                "cascade_freq",   "cutoff",       "attempts_mean", "attempts_se", "censored"};
    for (std::size_t i = 0; i < result.points.size(); ++i) {
        const auto& p = result.points[i];
        t.add_row({key_value(config, i, p.value), std::to_string(config.n), std::to_string(config.replicas),
                   std::to_string(p.failed), format_number(p.final_fraction.mean),
                   format_number(p.final_fraction.stderr_mean), format_number(p.final_fraction.ci_half_width()),
                   format_number(p.pivotal_fraction.mean), format_number(p.pivotal_fraction.stderr_mean),
                   format_number(p.largest_inactive.mean), format_number(p.largest_inactive.stderr_mean),
                   format_number(p.rounds.mean), format_number(p.cascade_frequency), format_number(p.cutoff),
                   format_number(p.attempts.mean), format_number(p.attempts.stderr_mean),
                   std::to_string(p.censored)});
    }
    return t;
}

CsvTable replica_table(const ExperimentConfig& config, const ExperimentResult& result) {
    CsvTable t;
    t.header = {key_name(config), "replica", "ok", "final_fraction", "seed_fraction", "pivotal_fraction",
                "largest_inactive", "rounds", "cascade", "attempts", "censored"};
    for (std::size_t i = 0; i < result.points.size(); ++i) {
        for (const auto& r : result.points[i].replicas) {
            t.add_row({key_value(config, i, result.points[i].value), std::to_string(r.replica), flag(r.ok),
                       format_number(r.final_fraction), format_number(r.seed_fraction),
                       format_number(r.pivotal_fraction), format_number(r.largest_inactive_fraction),
                       std::to_string(r.rounds), flag(r.cascade), std::to_string(r.attempts), flag(r.censored)});
        }
    }
    return t;
}

CsvTable analytic_table(const ExperimentConfig& config) {
    CsvTable t;
    t.header = {key_name(config), "cascade_condition", "zhat", "final_fraction", "zhat_verified", "residual",
                "xi", "s", "xibar", "gamma"};
    const auto values = config.points();
    for (std::size_t i = 0; i < values.size(); ++i) {
        const ModelSpec m = config.model_at(values[i]);
        const auto zhat = solve_zhat(m.params());
        const auto casc = pivotal_and_cascade_fractions(m.p, m.t, m.pi);
        t.add_row({key_value(config, i, values[i]), flag(casc.condition_holds), format_number(zhat.root),
                   format_number(zhat.final_fraction), flag(zhat.verified), format_number(zhat.residual),
                   format_number(casc.xi), format_number(casc.s_fraction), format_number(casc.xibar),
                   format_number(casc.gamma_fraction)});
    }
    return t;
}

CsvTable sweep_table(const ExperimentConfig& config, const ExperimentResult& result) {
    const CsvTable a = analytic_table(config);
    const bool pivotal_seed = std::holds_alternative<PivotalPairActivation>(config.model.alpha.kind());
    CsvTable t;
    t.header = {key_name(config), "analytic_final", "analytic_s", "analytic_gamma", "sim_final_mean",
                "sim_final_se", "sim_pivotal_mean", "sim_pivotal_se", "deviation_final", "deviation_pivotal"};
    for (std::size_t i = 0; i < result.points.size(); ++i) {
        const auto& p = result.points[i];
        // A pivotal-pair seed triggers the cascade of size s; otherwise zhat applies.
        const double expected = pivotal_seed ? a.number(i, *a.column("s")) : a.number(i, *a.column("final_fraction"));
        const double gamma = a.number(i, *a.column("gamma"));
        t.add_row({a.rows[i][0], format_number(expected), a.rows[i][*a.column("s")], a.rows[i][*a.column("gamma")],
                   format_number(p.final_fraction.mean), format_number(p.final_fraction.stderr_mean),
                   format_number(p.pivotal_fraction.mean), format_number(p.pivotal_fraction.stderr_mean),
                   format_number(std::abs(p.final_fraction.mean - expected)),
                   format_number(std::abs(p.pivotal_fraction.mean - gamma))});
    }
    return t;
}

// ---------------------------------------------------------------------------

CsvTable CompareReport::table() const {
    CsvTable t;
    t.header = {"key", "column", "a", "b", "deviation", "tolerance", "pass"};
    for (const auto& r : rows) {
        t.add_row({format_number(r.key), r.column, format_number(r.a), format_number(r.b), format_number(r.deviation),
                   format_number(r.tolerance), flag(r.pass)});
    }
    return t;
}

CompareReport compare(const CsvTable& a, const CsvTable& b, const CompareOptions& options) {
    if (a.header.empty() || b.header.empty()) {
        throw GridMismatch("compare: empty table");
    }
    const std::string key = options.key.empty() ? a.header.front() : options.key;
    const auto ka = a.column(key);
    const auto kb = b.column(key);
    if (!ka || !kb) {
        throw GridMismatch("compare: key column '" + key + "' missing");
    }
    std::vector<std::string> bad;
    const std::size_t rows = std::max(a.rows.size(), b.rows.size());
    for (std::size_t i = 0; i < rows; ++i) {
        if (i >= a.rows.size() || i >= b.rows.size()) {
            bad.push_back("row " + std::to_string(i + 1) + " present in only one file");
            continue;
        }
        const double x = a.number(i, *ka);
        const double y = b.number(i, *kb);
        if (!(std::abs(x - y) <= 1e-9 * std::max(1.0, std::abs(x)))) {
            bad.push_back(key + "=" + a.rows[i][*ka] + " vs " + b.rows[i][*kb]);
        }
    }
    if (!bad.empty()) {
        std::string msg = "compare: grids differ at";
        for (const auto& s : bad) {
            msg += "\n  " + s;
        }
        throw GridMismatch(msg);
    }
    auto pairs = options.columns;
    if (pairs.empty()) {
        for (const auto& name : a.header) {
            if (name != key && b.column(name)) {
                pairs.emplace_back(name, name);
            }
        }
    }
    const auto tol_col = b.column(options.tolerance_column);
    CompareReport rep;
    for (const auto& [ca, cb] : pairs) {
        const auto ia = a.column(ca);
        const auto ib = b.column(cb);
        if (!ia || !ib) {
            throw GridMismatch("compare: column '" + (ia ? cb : ca) + "' missing");
        }
        for (std::size_t i = 0; i < a.rows.size(); ++i) {
            CompareRow r;
            r.key = a.number(i, *ka);
            r.column = ca == cb ? ca : ca + "~" + cb;
            r.a = a.number(i, *ia);
            r.b = b.number(i, *ib);
            r.deviation = (std::isnan(r.a) && std::isnan(r.b)) ? 0.0 : std::abs(r.a - r.b);
            r.tolerance = tol_col ? b.number(i, *tol_col) : options.tolerance;
            r.pass = r.deviation <= r.tolerance;
            rep.max_deviation = std::max(rep.max_deviation, std::isnan(r.deviation) ? INFINITY : r.deviation);
            rep.pass = rep.pass && r.pass;
            rep.rows.push_back(r);
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------

std::vector<std::string> figure_names() {
    return {"cascade_window", "qc_curve", "coexistence", "alpha_c", "seed_response", "trials"};
}

namespace {

std::vector<double> grid_or(const ExperimentConfig& config, const std::string& parameter, double lo, double hi,
                            std::size_t steps) {
    if (config.sweep) {
        if (config.sweep->parameter != parameter) {
            throw FieldError("/sweep/parameter", "this figure sweeps " + parameter);
        }
        return config.sweep->values();
    }
    return SweepSpec{parameter, lo, hi, steps}.values();
}

ModelSpec poisson_model(const ExperimentConfig& config, double lambda) {
    ModelSpec m = config.model;
    m.p = DegreeDistribution::poisson(lambda, config.model.p.kind() == DegreeKind::Poisson ? m.support_max : 0);
    return m;
}

}  // namespace

CsvTable figure(const std::string& name, const ExperimentConfig& config) {
    CsvTable t;
    if (name == "qc_curve") {
        t.header = {"lambda", "qc", "cut", "defined"};
        for (double l : grid_or(config, "lambda", 1.0, 10.0, 901)) {
            const auto p = DegreeDistribution::poisson(l);
            try {
                const auto r = qc(p);
                t.add_row({format_number(l), format_number(r.value), std::to_string(r.cut), "1"});
            } catch (const NoGiantComponent&) {
                t.add_row({format_number(l), "0", "0", "0"});
            }
        }
        return t;
    }
    if (name == "cascade_window") {
        t.header = {"lambda", "gamma", "s", "condition"};
        for (double l : grid_or(config, "lambda", 1.0, 10.0, 901)) {
            const auto m = poisson_model(config, l);
            const auto r = pivotal_and_cascade_fractions(m.p, m.t, m.pi);
            t.add_row({format_number(l), format_number(r.gamma_fraction), format_number(r.s_fraction),
                       flag(r.condition_holds)});
        }
        return t;
    }
    if (name == "coexistence") {
        t.header = {"lambda", "xi", "zeta", "criterion", "coexists", "s"};
        for (double l : grid_or(config, "lambda", 1.0, 5.0, 401)) {
            const auto m = poisson_model(config, l);
            if (!cascade_condition(m.p, m.t, m.pi)) {
                t.add_row({format_number(l), "nan", "nan", "nan", "0", "0"});
                continue;
            }
            const auto c = coexistence(m.p, m.t, m.pi);
            const auto z = m.pi == 1.0 ? coexistence_zeta(m.p, m.t) : std::nullopt;
            const auto s = solve_xi(m.p, m.t, m.pi).final_fraction;
            t.add_row({format_number(l), format_number(c.xi), z ? format_number(*z) : "nan",
                       format_number(c.criterion), flag(c.coexists), format_number(s)});
        }
        return t;
    }
    if (name == "alpha_c") {
        t.header = {"lambda", "alpha_c", "alpha_c_scan", "jump", "discontinuous"};
        for (double l : grid_or(config, "lambda", 1.0, 6.0, 51)) {
            const auto m = poisson_model(config, l);
            const auto r = alpha_c(m.p, m.t, m.pi);
            const auto s = alpha_c_scan(m.p, m.t, m.pi);
            t.add_row({format_number(l), r.alpha_c ? format_number(*r.alpha_c) : "nan",
                       s ? format_number(*s) : "nan", format_number(r.jump), flag(r.alpha_c.has_value())});
        }
        return t;
    }
    if (name == "seed_response") {
        t.header = {"alpha", "zhat", "final_fraction", "verified"};
        for (double a : grid_or(config, "alpha", 0.0, 0.1, 201)) {
            ModelSpec m = config.model;
            m.alpha = ActivationLaw::uniform(a);
            const auto r = solve_zhat(m.params());
            t.add_row({format_number(a), format_number(r.root), format_number(r.final_fraction), flag(r.verified)});
        }
        return t;
    }
    if (name == "trials") {
        ExperimentConfig c = config;
        c.dynamics = Dynamics::Trials;
        if (!c.sweep) {
            c.sweep = SweepSpec{"lambda", 1.5, 6.0, 10};
        }
        if (c.sweep->parameter != "lambda") {
            throw FieldError("/sweep/parameter", "this figure sweeps lambda");
        }
        const auto result = run_experiment(c);
        t.header = {"lambda", "trials_mean", "trials_se", "censored", "gamma"};
        for (const auto& p : result.points) {
            const auto m = c.model_at(p.value);
            const auto r = pivotal_and_cascade_fractions(m.p, m.t, m.pi);
            t.add_row({format_number(p.value), format_number(p.attempts.mean), format_number(p.attempts.stderr_mean),
                       std::to_string(p.censored), format_number(r.gamma_fraction)});
        }
        return t;
    }
    throw UnknownFigure("unknown figure '" + name + "'");
}

}  // namespace contagion
