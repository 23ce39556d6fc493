#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "contagion/random.hpp"

namespace contagion {

using Vertex = std::uint32_t;

/// Raised when a model description is inconsistent (bad table row, missing
/// degree, negative mass, ...).
class ConfigurationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Numeric helpers
// ---------------------------------------------------------------------------

/// P(Bin(s, p) = r). Log-space evaluation for s > 50; exact at p in {0, 1}.
/// Throws std::domain_error when r > s or p is outside [0, 1].
double binomial_pmf(std::size_t s, std::size_t r, double p);

/// Fills out[0..s] with P(Bin(s, p) = r). The row is anchored at the mode and
/// extended by the ratio recurrence, so it neither overflows nor loses the
/// bulk of the mass to underflow. `out` must hold at least s + 1 entries.
void binomial_row(std::size_t s, double p, std::span<double> out);

/// b_{s,j}(x): probability that j of s points survive independent thinning
/// with retention probability x.
inline double thinned_pmf(std::size_t s, std::size_t j, double x) { return binomial_pmf(s, j, x); }

// ---------------------------------------------------------------------------
// Degree distributions
// ---------------------------------------------------------------------------

enum class DegreeKind { Explicit, Poisson, PowerLaw, Regular };

struct Moments {
    double mean = 0.0;        // sum r p_r
    double factorial2 = 0.0;  // sum r (r - 1) p_r
    double third = 0.0;       // sum r^3 p_r
};

/// Asymptotic degree law p = (p_r) on a truncated support [0, R].
///
/// Truncation is chosen so the untruncated third-moment tail
/// sum_{r > R} r^3 p_r stays below 1e-10 where that is possible
/// (Poisson, Regular, Explicit). Power laws with gamma <= 4 have an infinite
/// third moment, so for them the tail is reported as +inf and the
/// conditions check flags it.
class DegreeDistribution {
public:
    static constexpr double tail_tolerance = 1e-10;
    static constexpr std::size_t default_power_law_support = 10000;

    /// Normalizes `mass`. Throws ConfigurationError on negative, non-finite or
    /// all-zero input.
    static DegreeDistribution explicit_law(std::vector<double> mass);
    /// support_max = 0 picks the smallest R meeting the tail tolerance.
    static DegreeDistribution poisson(double lambda, std::size_t support_max = 0);
    /// p_r proportional to r^-gamma on 1 <= r <= support_max (no degree-0 atom).
    static DegreeDistribution power_law(double gamma, std::size_t support_max = default_power_law_support);
    static DegreeDistribution regular(std::size_t r);

    DegreeKind kind() const noexcept { return kind_; }
    /// lambda for Poisson, gamma for PowerLaw, r for Regular, NaN for Explicit.
    double parameter() const noexcept { return parameter_; }
    std::size_t support_max() const noexcept { return mass_.size() - 1; }
    std::span<const double> mass() const noexcept { return mass_; }
    double p(std::size_t r) const noexcept { return r < mass_.size() ? mass_[r] : 0.0; }

    double mean() const noexcept { return moments_.mean; }
    const Moments& moments() const noexcept { return moments_; }
    /// sum_{r > R} r^3 p_r of the untruncated law (may be +inf).
    double truncation_tail() const noexcept { return tail_; }

    std::string describe() const;

private:
    DegreeDistribution(DegreeKind kind, double parameter, std::vector<double> mass, double tail);

    DegreeKind kind_ = DegreeKind::Explicit;
    double parameter_ = 0.0;
    std::vector<double> mass_;
    double tail_ = 0.0;
    Moments moments_;
};

Moments moments(const DegreeDistribution& p);

/// E[D_x] = x * lambda(p).
double thinned_mean(const DegreeDistribution& p, double x);

// ---------------------------------------------------------------------------
// Degree sequences
// ---------------------------------------------------------------------------

struct DegreeSequence {
    std::vector<std::uint32_t> degrees;
    /// Vertex whose degree was bumped to repair an odd total, if any.
    std::optional<Vertex> parity_bump;

    std::size_t size() const noexcept { return degrees.size(); }
    std::uint64_t total() const noexcept;
};

/// i.i.d. draws from p. If the total is odd one uniformly chosen vertex gets
/// one extra half-edge.
DegreeSequence sample_degree_sequence(const DegreeDistribution& p, std::size_t n, RandomStream& rng);

struct ConditionReport {
    bool even_total = true;
    double mean = 0.0;
    double second_moment = 0.0;  // sum d^2 / n  (or sum r^2 p_r)
    double third_moment = 0.0;   // sum d^3 / n  (or sum r^3 p_r)
    double giant_criterion = 0.0;  // sum r (r - 2) p_r
    bool supercritical = false;
    double truncation_tail = 0.0;
    bool third_moment_finite = true;
};

ConditionReport check_conditions(const DegreeSequence& d);
ConditionReport check_conditions(const DegreeDistribution& p);

// ---------------------------------------------------------------------------
// Threshold laws
// ---------------------------------------------------------------------------

/// floor(q s). A relative slack of 1e-9 absorbs decimal round-off so that for
/// instance q = 0.2, s = 5 yields 1 rather than 0.
std::uint32_t proportional_threshold(double q, std::size_t s);

struct ProportionalThreshold {
    double q = 0.0;
};
struct ConstantThreshold {
    std::uint32_t k = 0;
};
struct ZeroThreshold {};
struct TableThreshold {
    /// rows[s][l] = P(K(s) = l). An empty row means "degree s not covered".
    std::vector<std::vector<double>> rows;
};

/// Law of K(d): t_{s,l} = P(K(s) = l), 0 <= l <= s.
///
/// Constant(k) is clamped to min(k, s): a vertex needing more than s active
/// neighbours can never activate, which is the same as needing all s + 1.
class ThresholdLaw {
public:
    using Kind = std::variant<ProportionalThreshold, ConstantThreshold, ZeroThreshold, TableThreshold>;

    static ThresholdLaw proportional(double q);
    static ThresholdLaw constant(std::uint32_t k);
    static ThresholdLaw zero();
    static ThresholdLaw table(std::vector<std::vector<double>> rows);

    const Kind& kind() const noexcept { return kind_; }
    bool deterministic() const noexcept { return !std::holds_alternative<TableThreshold>(kind_); }
    bool covers(std::size_t s) const noexcept;

    /// Threshold of a degree-s vertex for the deterministic kinds.
    std::uint32_t fixed_value(std::size_t s) const;
    /// t_{s,l}. Throws ConfigurationError if degree s is not covered.
    double prob(std::size_t s, std::size_t l) const;
    /// Full row t_{s,0..s}.
    std::vector<double> row(std::size_t s) const;
    std::uint32_t sample(std::size_t s, RandomStream& rng) const;

    /// q for Proportional laws.
    std::optional<double> proportion() const noexcept;

    std::string describe() const;

private:
    explicit ThresholdLaw(Kind kind) : kind_(std::move(kind)) {}
    Kind kind_;
};

// ---------------------------------------------------------------------------
// Activation (seeding) laws
// ---------------------------------------------------------------------------

struct DegreeBasedActivation {
    std::map<std::uint32_t, double> alpha;  // missing degrees have alpha = 0
};
struct UniformActivation {
    double alpha = 0.0;
};
struct SingleVertexActivation {
    Vertex v = 0;
};
struct VertexSetActivation {
    std::vector<Vertex> vertices;
};
/// Two neighbouring pivotal vertices (an edge inside the pivotal component).
struct PivotalPairActivation {};
/// `count` distinct vertices chosen uniformly.
struct RandomCountActivation {
    std::size_t count = 0;
};

class ActivationLaw {
public:
    using Kind = std::variant<DegreeBasedActivation, UniformActivation, SingleVertexActivation, VertexSetActivation,
                              PivotalPairActivation, RandomCountActivation>;

    static ActivationLaw none() { return ActivationLaw(UniformActivation{0.0}); }
    static ActivationLaw uniform(double alpha);
    static ActivationLaw degree_based(std::map<std::uint32_t, double> alpha);
    static ActivationLaw single_vertex(Vertex v) { return ActivationLaw(SingleVertexActivation{v}); }
    static ActivationLaw vertex_set(std::vector<Vertex> vs) { return ActivationLaw(VertexSetActivation{std::move(vs)}); }
    static ActivationLaw pivotal_pair() { return ActivationLaw(PivotalPairActivation{}); }
    static ActivationLaw random_count(std::size_t count) { return ActivationLaw(RandomCountActivation{count}); }

    const Kind& kind() const noexcept { return kind_; }
    /// True for the kinds with a per-degree seeding probability.
    bool degree_based() const noexcept;
    /// alpha_d; zero for the vertex-targeted kinds.
    double alpha(std::size_t d) const noexcept;
    /// True when every alpha_d is zero (and the law is degree based).
    bool is_zero() const noexcept;

    std::string describe() const;

private:
    explicit ActivationLaw(Kind kind) : kind_(std::move(kind)) {}
    Kind kind_;
};

}  // namespace contagion
