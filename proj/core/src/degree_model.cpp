#include "contagion/degree_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

namespace contagion {

namespace {

double log_choose(std::size_t s, std::size_t r) {
    return std::lgamma(static_cast<double>(s) + 1.0) - std::lgamma(static_cast<double>(r) + 1.0) -
           std::lgamma(static_cast<double>(s - r) + 1.0);
}

void require_probability(double p, const char* what) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw std::domain_error(std::string(what) + " must lie in [0, 1]");
    }
}

Moments compute_moments(std::span<const double> mass) {
    Moments m;
    for (std::size_t r = 0; r < mass.size(); ++r) {
        const double x = static_cast<double>(r);
        m.mean += x * mass[r];
        m.factorial2 += x * (x - 1.0) * mass[r];
        m.third += x * x * x * mass[r];
    }
    return m;
}

}  // namespace

double binomial_pmf(std::size_t s, std::size_t r, double p) {
    if (r > s) {
        throw std::domain_error("binomial_pmf: r exceeds s");
    }
    require_probability(p, "binomial_pmf: p");
    if (p == 0.0) {
        return r == 0 ? 1.0 : 0.0;
    }
    if (p == 1.0) {
        return r == s ? 1.0 : 0.0;
    }
    if (s > 50) {
        const double lp = log_choose(s, r) + static_cast<double>(r) * std::log(p) +
                          static_cast<double>(s - r) * std::log1p(-p);
        return std::exp(lp);
    }
    // C(s, r) is exact in double for s <= 50 when built multiplicatively.
    double c = 1.0;
    const std::size_t k = std::min(r, s - r);
    for (std::size_t i = 1; i <= k; ++i) {
        c = c * static_cast<double>(s - k + i) / static_cast<double>(i);
    }
    return std::round(c) * std::pow(p, static_cast<double>(r)) * std::pow(1.0 - p, static_cast<double>(s - r));
}

void binomial_row(std::size_t s, double p, std::span<double> out) {
    if (out.size() < s + 1) {
        throw std::invalid_argument("binomial_row: output span too small");
    }
    std::fill(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(s + 1), 0.0);
    if (p <= 0.0) {
        out[0] = 1.0;
        return;
    }
    if (p >= 1.0) {
        out[s] = 1.0;
        return;
    }
    if (s == 0) {
        out[0] = 1.0;
        return;
    }
    const double q = 1.0 - p;
    auto mode = static_cast<std::size_t>(std::floor(static_cast<double>(s + 1) * p));
    mode = std::min(mode, s);
    out[mode] = std::exp(log_choose(s, mode) + static_cast<double>(mode) * std::log(p) +
                         static_cast<double>(s - mode) * std::log1p(-p));
    const double up = p / q;
    const double down = q / p;
    for (std::size_t r = mode; r < s; ++r) {
        out[r + 1] = out[r] * static_cast<double>(s - r) / static_cast<double>(r + 1) * up;
        if (out[r + 1] == 0.0) {
            break;
        }
    }
    for (std::size_t r = mode; r > 0; --r) {
        out[r - 1] = out[r] * static_cast<double>(r) / static_cast<double>(s - r + 1) * down;
        if (out[r - 1] == 0.0) {
            break;
        }
    }
}

// ---------------------------------------------------------------------------

DegreeDistribution::DegreeDistribution(DegreeKind kind, double parameter, std::vector<double> mass, double tail)
    : kind_(kind), parameter_(parameter), mass_(std::move(mass)), tail_(tail) {
    // Trim trailing zeros but keep at least one entry.
    while (mass_.size() > 1 && mass_.back() == 0.0) {
        mass_.pop_back();
    }
    moments_ = compute_moments(mass_);
    if (!(moments_.mean > 0.0)) {
        throw ConfigurationError("degree distribution must have positive mean");
    }
}

DegreeDistribution DegreeDistribution::explicit_law(std::vector<double> mass) {
    if (mass.empty()) {
        throw ConfigurationError("explicit degree law needs at least one mass entry");
    }
    double total = 0.0;
    for (double m : mass) {
        if (!std::isfinite(m) || m < 0.0) {
            throw ConfigurationError("explicit degree law has a negative or non-finite mass entry");
        }
        total += m;
    }
    if (!(total > 0.0)) {
        throw ConfigurationError("explicit degree law has zero total mass");
    }
    for (double& m : mass) {
        m /= total;
    }
    return DegreeDistribution(DegreeKind::Explicit, std::numeric_limits<double>::quiet_NaN(), std::move(mass), 0.0);
}

DegreeDistribution DegreeDistribution::poisson(double lambda, std::size_t support_max) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) {
        throw ConfigurationError("Poisson mean must be positive");
    }
    auto log_pmf = [lambda](std::size_t r) {
        return -lambda + static_cast<double>(r) * std::log(lambda) - std::lgamma(static_cast<double>(r) + 1.0);
    };
    // Untruncated tail of r^3 p_r beyond R; terms decay super-geometrically
    // past the mean so summing until they vanish is exact to double precision.
    auto cubic_tail = [&](std::size_t R) {
        double tail = 0.0;
        for (std::size_t r = R + 1;; ++r) {
            const double x = static_cast<double>(r);
            const double term = x * x * x * std::exp(log_pmf(r));
            tail += term;
            if (x > lambda + 1.0 && term < 1e-30 * std::max(tail, 1e-300)) {
                break;
            }
            if (term == 0.0 && x > lambda) {
                break;
            }
        }
        return tail;
    };
    std::size_t R = support_max;
    if (R == 0) {
        R = static_cast<std::size_t>(std::ceil(lambda));
        while (cubic_tail(R) >= tail_tolerance) {
            ++R;
        }
    }
    std::vector<double> mass(R + 1);
    double total = 0.0;
    for (std::size_t r = 0; r <= R; ++r) {
        mass[r] = std::exp(log_pmf(r));
        total += mass[r];
    }
    for (double& m : mass) {
        m /= total;
    }
    return DegreeDistribution(DegreeKind::Poisson, lambda, std::move(mass), cubic_tail(R));
}

DegreeDistribution DegreeDistribution::power_law(double gamma, std::size_t support_max) {
    if (!(gamma > 1.0) || !std::isfinite(gamma)) {
        throw ConfigurationError("power-law exponent must exceed 1");
    }
    if (support_max < 1) {
        throw ConfigurationError("power-law support must include degree 1");
    }
    std::vector<double> mass(support_max + 1, 0.0);
    double total = 0.0;
    for (std::size_t r = 1; r <= support_max; ++r) {
        mass[r] = std::pow(static_cast<double>(r), -gamma);
        total += mass[r];
    }
    // Tail of sum r^(3 - gamma) / zeta(gamma) beyond R, by the integral bound.
    double tail = std::numeric_limits<double>::infinity();
    if (gamma > 4.0) {
        const double R = static_cast<double>(support_max) + 0.5;
        const double raw_tail = std::pow(R, 4.0 - gamma) / (gamma - 4.0);
        const double zeta_tail = std::pow(R, 1.0 - gamma) / (gamma - 1.0);
        tail = raw_tail / (total + zeta_tail);
    }
    for (double& m : mass) {
        m /= total;
    }
    return DegreeDistribution(DegreeKind::PowerLaw, gamma, std::move(mass), tail);
}

DegreeDistribution DegreeDistribution::regular(std::size_t r) {
    if (r == 0) {
        throw ConfigurationError("regular degree must be positive");
    }
    std::vector<double> mass(r + 1, 0.0);
    mass[r] = 1.0;
    return DegreeDistribution(DegreeKind::Regular, static_cast<double>(r), std::move(mass), 0.0);
}

std::string DegreeDistribution::describe() const {
    std::ostringstream os;
    switch (kind_) {
    case DegreeKind::Explicit:
        os << "explicit(R=" << support_max() << ")";
        break;
    case DegreeKind::Poisson:
        os << "poisson(lambda=" << parameter_ << ", R=" << support_max() << ")";
        break;
    case DegreeKind::PowerLaw:
        os << "power_law(gamma=" << parameter_ << ", R=" << support_max() << ")";
        break;
    case DegreeKind::Regular:
        os << "regular(" << support_max() << ")";
        break;
    }
    return os.str();
}

Moments moments(const DegreeDistribution& p) { return p.moments(); }

double thinned_mean(const DegreeDistribution& p, double x) {
    require_probability(x, "thinned_mean: x");
    return x * p.mean();
}

// ---------------------------------------------------------------------------

std::uint64_t DegreeSequence::total() const noexcept {
    return std::accumulate(degrees.begin(), degrees.end(), std::uint64_t{0});
}

DegreeSequence sample_degree_sequence(const DegreeDistribution& p, std::size_t n, RandomStream& rng) {
    if (n == 0) {
        throw std::invalid_argument("sample_degree_sequence: n must be at least 1");
    }
    const auto mass = p.mass();
    DegreeSequence seq;
    seq.degrees.resize(n);

    std::size_t nonzero = 0;
    std::size_t atom = 0;
    for (std::size_t r = 0; r < mass.size(); ++r) {
        if (mass[r] > 0.0) {
            ++nonzero;
            atom = r;
        }
    }
    if (nonzero == 1) {
        std::fill(seq.degrees.begin(), seq.degrees.end(), static_cast<std::uint32_t>(atom));
    } else {
        std::discrete_distribution<std::uint32_t> draw(mass.begin(), mass.end());
        for (auto& d : seq.degrees) {
            d = draw(rng);
        }
    }
    if (seq.total() % 2 == 1) {
        const auto v = static_cast<Vertex>(rng.below(n));
        ++seq.degrees[v];
        seq.parity_bump = v;
    }
    return seq;
}

ConditionReport check_conditions(const DegreeSequence& d) {
    ConditionReport rep;
    const double n = static_cast<double>(std::max<std::size_t>(d.size(), 1));
    double s1 = 0.0;
    double s2 = 0.0;
    double s3 = 0.0;
    double giant = 0.0;
    for (std::uint32_t x : d.degrees) {
        const double r = x;
        s1 += r;
        s2 += r * r;
        s3 += r * r * r;
        giant += r * (r - 2.0);
    }
    rep.even_total = d.total() % 2 == 0;
    rep.mean = s1 / n;
    rep.second_moment = s2 / n;
    rep.third_moment = s3 / n;
    rep.giant_criterion = giant / n;
    rep.supercritical = rep.giant_criterion > 0.0;
    rep.truncation_tail = 0.0;
    rep.third_moment_finite = true;
    return rep;
}

ConditionReport check_conditions(const DegreeDistribution& p) {
    ConditionReport rep;
    const auto& m = p.moments();
    rep.even_total = true;
    rep.mean = m.mean;
    rep.second_moment = m.factorial2 + m.mean;
    rep.third_moment = m.third;
    // sum r (r - 2) p_r = sum r (r - 1) p_r - sum r p_r
    rep.giant_criterion = m.factorial2 - m.mean;
    rep.supercritical = rep.giant_criterion > 0.0;
    rep.truncation_tail = p.truncation_tail();
    rep.third_moment_finite = p.truncation_tail() < DegreeDistribution::tail_tolerance;
    return rep;
}

// ---------------------------------------------------------------------------

std::uint32_t proportional_threshold(double q, std::size_t s) {
    const double x = q * static_cast<double>(s);
    return static_cast<std::uint32_t>(std::floor(x + 1e-9 * std::max(1.0, x)));
}

ThresholdLaw ThresholdLaw::proportional(double q) {
    if (!(q >= 0.0 && q <= 1.0)) {
        throw ConfigurationError("proportional threshold q must lie in [0, 1]");
    }
    return ThresholdLaw(ProportionalThreshold{q});
}

ThresholdLaw ThresholdLaw::constant(std::uint32_t k) { return ThresholdLaw(ConstantThreshold{k}); }

ThresholdLaw ThresholdLaw::zero() { return ThresholdLaw(ZeroThreshold{}); }

ThresholdLaw ThresholdLaw::table(std::vector<std::vector<double>> rows) {
    for (std::size_t s = 0; s < rows.size(); ++s) {
        auto& row = rows[s];
        if (row.empty()) {
            continue;
        }
        if (row.size() > s + 1) {
            throw ConfigurationError("threshold table row " + std::to_string(s) + " has more than s + 1 entries");
        }
        double total = 0.0;
        for (double t : row) {
            if (!std::isfinite(t) || t < 0.0) {
                throw ConfigurationError("threshold table row " + std::to_string(s) + " has a negative entry");
            }
            total += t;
        }
        if (std::abs(total - 1.0) > 1e-12) {
            throw ConfigurationError("threshold table row " + std::to_string(s) + " does not sum to 1");
        }
        row.resize(s + 1, 0.0);
    }
    return ThresholdLaw(TableThreshold{std::move(rows)});
}

bool ThresholdLaw::covers(std::size_t s) const noexcept {
    if (const auto* t = std::get_if<TableThreshold>(&kind_)) {
        return s < t->rows.size() && !t->rows[s].empty();
    }
    return true;
}

std::uint32_t ThresholdLaw::fixed_value(std::size_t s) const {
    return std::visit(
        [s](const auto& law) -> std::uint32_t {
            using T = std::decay_t<decltype(law)>;
            if constexpr (std::is_same_v<T, ProportionalThreshold>) {
                return proportional_threshold(law.q, s);
            } else if constexpr (std::is_same_v<T, ConstantThreshold>) {
                return std::min<std::uint32_t>(law.k, static_cast<std::uint32_t>(s));
            } else if constexpr (std::is_same_v<T, ZeroThreshold>) {
                return 0;
            } else {
                throw std::logic_error("fixed_value called on a random threshold table");
            }
        },
        kind_);
}

double ThresholdLaw::prob(std::size_t s, std::size_t l) const {
    if (l > s) {
        return 0.0;
    }
    if (const auto* t = std::get_if<TableThreshold>(&kind_)) {
        if (!covers(s)) {
            throw ConfigurationError("threshold table has no row for degree " + std::to_string(s));
        }
        return t->rows[s][l];
    }
    return fixed_value(s) == l ? 1.0 : 0.0;
}

std::vector<double> ThresholdLaw::row(std::size_t s) const {
    if (const auto* t = std::get_if<TableThreshold>(&kind_)) {
        if (!covers(s)) {
            throw ConfigurationError("threshold table has no row for degree " + std::to_string(s));
        }
        return t->rows[s];
    }
    std::vector<double> out(s + 1, 0.0);
    out[fixed_value(s)] = 1.0;
    return out;
}

std::uint32_t ThresholdLaw::sample(std::size_t s, RandomStream& rng) const {
    if (const auto* t = std::get_if<TableThreshold>(&kind_)) {
        if (!covers(s)) {
            throw ConfigurationError("threshold table has no row for degree " + std::to_string(s));
        }
        const auto& row = t->rows[s];
        double u = rng.uniform();
        for (std::size_t l = 0; l < row.size(); ++l) {
            if (u < row[l]) {
                return static_cast<std::uint32_t>(l);
            }
            u -= row[l];
        }
        // Round-off left u marginally above the last positive entry.
        for (std::size_t l = row.size(); l-- > 0;) {
            if (row[l] > 0.0) {
                return static_cast<std::uint32_t>(l);
            }
        }
        return static_cast<std::uint32_t>(s);
    }
    return fixed_value(s);
}

std::optional<double> ThresholdLaw::proportion() const noexcept {
    if (const auto* p = std::get_if<ProportionalThreshold>(&kind_)) {
        return p->q;
    }
    return std::nullopt;
}

std::string ThresholdLaw::describe() const {
    return std::visit(
        [](const auto& law) -> std::string {
            using T = std::decay_t<decltype(law)>;
            std::ostringstream os;
            if constexpr (std::is_same_v<T, ProportionalThreshold>) {
                os << "proportional(q=" << law.q << ")";
            } else if constexpr (std::is_same_v<T, ConstantThreshold>) {
                os << "constant(k=" << law.k << ")";
            } else if constexpr (std::is_same_v<T, ZeroThreshold>) {
                os << "zero";
            } else {
                os << "table(" << law.rows.size() << " rows)";
            }
            return os.str();
        },
        kind_);
}

// ---------------------------------------------------------------------------

ActivationLaw ActivationLaw::uniform(double alpha) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
        throw ConfigurationError("activation probability must lie in [0, 1]");
    }
    return ActivationLaw(UniformActivation{alpha});
}

ActivationLaw ActivationLaw::degree_based(std::map<std::uint32_t, double> alpha) {
    for (const auto& [d, a] : alpha) {
        if (!(a >= 0.0 && a <= 1.0)) {
            throw ConfigurationError("activation probability for degree " + std::to_string(d) + " outside [0, 1]");
        }
    }
    return ActivationLaw(DegreeBasedActivation{std::move(alpha)});
}

bool ActivationLaw::degree_based() const noexcept {
    return std::holds_alternative<DegreeBasedActivation>(kind_) || std::holds_alternative<UniformActivation>(kind_);
}

double ActivationLaw::alpha(std::size_t d) const noexcept {
    if (const auto* u = std::get_if<UniformActivation>(&kind_)) {
        return u->alpha;
    }
    if (const auto* db = std::get_if<DegreeBasedActivation>(&kind_)) {
        const auto it = db->alpha.find(static_cast<std::uint32_t>(d));
        return it == db->alpha.end() ? 0.0 : it->second;
    }
    return 0.0;
}

bool ActivationLaw::is_zero() const noexcept {
    if (const auto* u = std::get_if<UniformActivation>(&kind_)) {
        return u->alpha == 0.0;
    }
    if (const auto* db = std::get_if<DegreeBasedActivation>(&kind_)) {
        return std::all_of(db->alpha.begin(), db->alpha.end(), [](const auto& kv) { return kv.second == 0.0; });
    }
    return false;
}

std::string ActivationLaw::describe() const {
    return std::visit(
        [](const auto& law) -> std::string {
            using T = std::decay_t<decltype(law)>;
            std::ostringstream os;
            if constexpr (std::is_same_v<T, UniformActivation>) {
                os << "uniform(alpha=" << law.alpha << ")";
            } else if constexpr (std::is_same_v<T, DegreeBasedActivation>) {
                os << "degree_based(" << law.alpha.size() << " degrees)";
            } else if constexpr (std::is_same_v<T, SingleVertexActivation>) {
                os << "single_vertex(" << law.v << ")";
            } else if constexpr (std::is_same_v<T, VertexSetActivation>) {
                os << "vertex_set(" << law.vertices.size() << ")";
            } else if constexpr (std::is_same_v<T, PivotalPairActivation>) {
                os << "pivotal_pair";
            } else {
                os << "random_count(" << law.count << ")";
            }
            return os.str();
        },
        kind_);
}

}  // namespace contagion
