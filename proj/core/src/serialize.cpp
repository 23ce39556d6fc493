#include "contagion/serialize.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace contagion {

namespace {

std::string join(const std::string& path, const std::string& key) { return path + "/" + key; }

const json& require(const json& j, const std::string& path, const std::string& key) {
    if (!j.is_object()) {
        throw FieldError(path, "expected an object");
    }
    const auto it = j.find(key);
    if (it == j.end()) {
        throw FieldError(join(path, key), "missing field");
    }
    return *it;
}

double number(const json& j, const std::string& path, const std::string& key) {
    const json& v = require(j, path, key);
    if (!v.is_number()) {
        throw FieldError(join(path, key), "expected a number, got " + std::string(v.type_name()));
    }
    const double x = v.get<double>();
    if (!std::isfinite(x)) {
        throw FieldError(join(path, key), "expected a finite number");
    }
    return x;
}

std::uint64_t count(const json& j, const std::string& path, const std::string& key) {
    const json& v = require(j, path, key);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
        throw FieldError(join(path, key), "expected a non-negative integer");
    }
    return v.get<std::uint64_t>();
}

std::string kind_of(const json& j, const std::string& path) {
    const json& v = require(j, path, "kind");
    if (!v.is_string()) {
        throw FieldError(join(path, "kind"), "expected a string");
    }
    return v.get<std::string>();
}

template <typename F>
auto wrap(const std::string& path, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const FieldError&) {
        throw;
    } catch (const std::exception& e) {
        throw FieldError(path, e.what());
    }
}

}  // namespace

json to_json(const DegreeDistribution& p) {
    switch (p.kind()) {
        case DegreeKind::Poisson:
            return {{"kind", "poisson"}, {"lambda", p.parameter()}, {"support_max", p.support_max()}};
        case DegreeKind::PowerLaw:
            return {{"kind", "power_law"}, {"gamma", p.parameter()}, {"support_max", p.support_max()}};
        case DegreeKind::Regular:
            return {{"kind", "regular"}, {"r", static_cast<std::uint64_t>(p.parameter())}};
        case DegreeKind::Explicit:
            break;
    }
    return {{"kind", "explicit"}, {"mass", std::vector<double>(p.mass().begin(), p.mass().end())}};
}

DegreeDistribution degree_from_json(const json& j, const std::string& path) {
    const std::string kind = kind_of(j, path);
    return wrap(path, [&]() -> DegreeDistribution {
        if (kind == "poisson") {
            const double lambda = number(j, path, "lambda");
            if (!(lambda > 0.0)) {
                throw FieldError(join(path, "lambda"), "must be positive");
            }
            const std::size_t r = j.contains("support_max") ? count(j, path, "support_max") : 0;
            return DegreeDistribution::poisson(lambda, r);
        }
        if (kind == "power_law") {
            const double gamma = number(j, path, "gamma");
            if (!(gamma > 1.0)) {
                throw FieldError(join(path, "gamma"), "must exceed 1");
            }
            const std::size_t r = j.contains("support_max") ? count(j, path, "support_max")
                                                            : DegreeDistribution::default_power_law_support;
            return DegreeDistribution::power_law(gamma, r);
        }
        if (kind == "regular") {
            return DegreeDistribution::regular(count(j, path, "r"));
        }
        if (kind == "explicit") {
            const json& m = require(j, path, "mass");
            if (!m.is_array() || m.empty()) {
                throw FieldError(join(path, "mass"), "expected a non-empty array");
            }
            std::vector<double> mass;
            for (std::size_t i = 0; i < m.size(); ++i) {
                if (!m[i].is_number()) {
                    throw FieldError(join(path, "mass/" + std::to_string(i)), "expected a number");
                }
                mass.push_back(m[i].get<double>());
            }
            return DegreeDistribution::explicit_law(std::move(mass));
        }
        throw FieldError(join(path, "kind"), "unknown degree law '" + kind + "'");
    });
}

json to_json(const ThresholdLaw& t) {
    return std::visit(
        [](const auto& law) -> json {
            using T = std::decay_t<decltype(law)>;
            if constexpr (std::is_same_v<T, ProportionalThreshold>) {
                return {{"kind", "proportional"}, {"q", law.q}};
            } else if constexpr (std::is_same_v<T, ConstantThreshold>) {
                return {{"kind", "constant"}, {"k", law.k}};
            } else if constexpr (std::is_same_v<T, ZeroThreshold>) {
                return {{"kind", "zero"}};
            } else {
                return {{"kind", "table"}, {"rows", law.rows}};
            }
        },
        t.kind());
}

ThresholdLaw threshold_from_json(const json& j, const std::string& path) {
    const std::string kind = kind_of(j, path);
    return wrap(path, [&]() -> ThresholdLaw {
        if (kind == "proportional") {
            const double q = number(j, path, "q");
            if (!(q >= 0.0 && q <= 1.0)) {
                throw FieldError(join(path, "q"), "must lie in [0, 1]");
            }
            return ThresholdLaw::proportional(q);
        }
        if (kind == "constant") {
            return ThresholdLaw::constant(static_cast<std::uint32_t>(count(j, path, "k")));
        }
        if (kind == "zero") {
            return ThresholdLaw::zero();
        }
        if (kind == "table") {
            const json& rows = require(j, path, "rows");
            if (!rows.is_array()) {
                throw FieldError(join(path, "rows"), "expected an array of arrays");
            }
            std::vector<std::vector<double>> out;
            for (std::size_t s = 0; s < rows.size(); ++s) {
                const std::string rp = join(path, "rows/" + std::to_string(s));
                if (rows[s].is_null()) {
                    out.emplace_back();
                    continue;
                }
                if (!rows[s].is_array()) {
                    throw FieldError(rp, "expected an array");
                }
                std::vector<double> row;
                for (const auto& x : rows[s]) {
                    if (!x.is_number()) {
                        throw FieldError(rp, "expected numbers");
                    }
                    row.push_back(x.get<double>());
                }
                out.push_back(std::move(row));
            }
            return ThresholdLaw::table(std::move(out));
        }
        throw FieldError(join(path, "kind"), "unknown threshold law '" + kind + "'");
    });
}

json to_json(const ActivationLaw& a) {
    return std::visit(
        [](const auto& law) -> json {
            using T = std::decay_t<decltype(law)>;
            if constexpr (std::is_same_v<T, UniformActivation>) {
                if (law.alpha == 0.0) {
                    return {{"kind", "none"}};
                }
                return {{"kind", "uniform"}, {"alpha", law.alpha}};
            } else if constexpr (std::is_same_v<T, DegreeBasedActivation>) {
                json m = json::object();
                for (const auto& [d, x] : law.alpha) {
                    m[std::to_string(d)] = x;
                }
                return {{"kind", "degree_based"}, {"alpha", m}};
            } else if constexpr (std::is_same_v<T, SingleVertexActivation>) {
                return {{"kind", "single_vertex"}, {"vertex", law.v}};
            } else if constexpr (std::is_same_v<T, VertexSetActivation>) {
                return {{"kind", "vertex_set"}, {"vertices", law.vertices}};
            } else if constexpr (std::is_same_v<T, PivotalPairActivation>) {
                return {{"kind", "pivotal_pair"}};
            } else {
                return {{"kind", "random_count"}, {"count", law.count}};
            }
        },
        a.kind());
}

ActivationLaw activation_from_json(const json& j, const std::string& path) {
    const std::string kind = kind_of(j, path);
    return wrap(path, [&]() -> ActivationLaw {
        if (kind == "none") {
            return ActivationLaw::none();
        }
        if (kind == "uniform") {
            const double a = number(j, path, "alpha");
            if (!(a >= 0.0 && a <= 1.0)) {
                throw FieldError(join(path, "alpha"), "must lie in [0, 1]");
            }
            return ActivationLaw::uniform(a);
        }
        if (kind == "degree_based") {
            const json& m = require(j, path, "alpha");
            if (!m.is_object()) {
                throw FieldError(join(path, "alpha"), "expected an object mapping degree to probability");
            }
            std::map<std::uint32_t, double> alpha;
            for (const auto& [key, value] : m.items()) {
                const std::string fp = join(path, "alpha/" + key);
                std::size_t used = 0;
                unsigned long d = 0;
                try {
                    d = std::stoul(key, &used);
                } catch (const std::exception&) {
                    used = 0;
                }
                if (used != key.size() || key.empty()) {
                    throw FieldError(fp, "degree keys must be non-negative integers");
                }
                if (!value.is_number()) {
                    throw FieldError(fp, "expected a number");
                }
                alpha[static_cast<std::uint32_t>(d)] = value.get<double>();
            }
            return ActivationLaw::degree_based(std::move(alpha));
        }
        if (kind == "single_vertex") {
            return ActivationLaw::single_vertex(static_cast<Vertex>(count(j, path, "vertex")));
        }
        if (kind == "vertex_set") {
            const json& vs = require(j, path, "vertices");
            if (!vs.is_array()) {
                throw FieldError(join(path, "vertices"), "expected an array");
            }
            std::vector<Vertex> out;
            for (const auto& v : vs) {
                if (!v.is_number_unsigned()) {
                    throw FieldError(join(path, "vertices"), "expected non-negative integers");
                }
                out.push_back(v.get<Vertex>());
            }
            return ActivationLaw::vertex_set(std::move(out));
        }
        if (kind == "pivotal_pair") {
            return ActivationLaw::pivotal_pair();
        }
        if (kind == "random_count") {
            return ActivationLaw::random_count(count(j, path, "count"));
        }
        throw FieldError(join(path, "kind"), "unknown activation law '" + kind + "'");
    });
}

json to_json(const DiffusionOutcome& out, bool with_bitmap) {
    json j;
    j["n"] = out.n;
    j["seed_size"] = out.seed_size;
    j["v_H"] = out.v_H;
    j["e_I"] = out.e_I;
    j["rounds"] = out.rounds;
    json vs = json::object();
    for (const auto& [s, c] : out.v_s_H) {
        vs[std::to_string(s)] = c;
    }
    j["v_s_H"] = vs;
    json cells = json::array();
    for (const auto& [cell, c] : out.v_sr_I) {
        cells.push_back({{"s", cell.first}, {"r", cell.second}, {"count", c}});
    }
    j["v_sr_I"] = cells;
    if (out.largest_inactive_component) {
        j["largest_inactive_component"] = *out.largest_inactive_component;
    }
    if (with_bitmap) {
        std::string bits(out.active.size(), '0');
        for (std::size_t i = 0; i < out.active.size(); ++i) {
            if (out.active[i]) {
                bits[i] = '1';
            }
        }
        j["active"] = bits;
    }
    return j;
}

json to_json(const FixedPointReport& rep) {
    const char* kind = rep.kind == RootKind::Zhat ? "zhat" : rep.kind == RootKind::Xi ? "xi" : "xibar";
    return {{"kind", kind},
            {"root", rep.root},
            {"residual", rep.residual},
            {"bracket", {rep.bracket_lo, rep.bracket_hi}},
            {"left_negative", rep.left_negative},
            {"final_fraction", rep.final_fraction},
            {"verified", rep.verified}};
}

json to_json(const CascadeReport& rep) {
    json j = {{"condition_holds", rep.condition_holds}, {"xi", rep.xi},
              {"xibar", rep.xibar},                     {"s_fraction", rep.s_fraction},
              {"gamma_fraction", rep.gamma_fraction},   {"xi_verified", rep.xi_verified}};
    j["qc"] = rep.qc ? json(rep.qc->value) : json(nullptr);
    j["lambda_i"] = rep.lambda_i ? json(*rep.lambda_i) : json(nullptr);
    j["lambda_s"] = rep.lambda_s ? json(*rep.lambda_s) : json(nullptr);
    return j;
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw FieldError("", "cannot open config file '" + path + "'");
    }
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        // e.byte is 1-based; translate it to a line and column.
        std::size_t line = 1;
        std::size_t col = 1;
        for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw FieldError("", path + ":" + std::to_string(line) + ":" + std::to_string(col) + ": JSON syntax error");
    }
}

}  // namespace contagion
