#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "contagion/degree_model.hpp"

namespace contagion {

/// Argument tuple (p, t, alpha, pi) of the limit formulas.
struct ModelParams {
    DegreeDistribution p = DegreeDistribution::regular(3);
    ThresholdLaw t = ThresholdLaw::zero();
    ActivationLaw alpha = ActivationLaw::none();
    double pi = 1.0;

    /// Throws ConfigurationError when alpha is not degree based, pi is out of
    /// range, or t misses a degree carried by p.
    void validate() const;
};

class NoGiantComponent : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Precomputed evaluator of h, h1 and g for one parameter tuple.
///
///   y(z)  = 1 - pi + pi z
///   h(z)  = sum_s (1 - a_s) p_s sum_l t_sl sum_{r >= s-l} r b_sr(y)
///   h1(z) = same without the factor r
///   g(z)  = lambda z y - h(z)
class Kernel {
public:
    explicit Kernel(const ModelParams& params);

    double lambda() const noexcept { return lambda_; }
    double pi() const noexcept { return pi_; }
    double h(double z) const;
    double h1(double z) const;
    double g(double z) const { return lambda_ * z * (1.0 - pi_ + pi_ * z) - h(z); }
    /// Evaluates h and h1 together (one binomial row per degree).
    std::pair<double, double> h_and_h1(double z) const;

private:
    struct Row {
        std::uint32_t s = 0;
        double weight = 0.0;  // (1 - a_s) p_s
        // tail[r] = P(K(s) >= s - r): an inactive degree-s vertex may have r
        // of its s potential activators unavailable.
        std::vector<double> tail;
        std::optional<std::uint32_t> fixed_k;
    };

    std::vector<Row> rows_;
    double lambda_ = 0.0;
    double pi_ = 1.0;
    std::size_t max_s_ = 0;
};

/// P(Bin(n, p) >= m).
double binomial_upper_tail(std::size_t n, std::int64_t m, double p);

// ---------------------------------------------------------------------------
// Fixed points
// ---------------------------------------------------------------------------

enum class RootKind { Zhat, Xi, XiBar };

struct SolverOptions {
    std::size_t grid = 10000;
    double tolerance = 1e-13;
    double probe_width = 1e-4;
    std::size_t probe_points = 32;
};

struct FixedPointReport {
    double root = 1.0;
    RootKind kind = RootKind::Zhat;
    double residual = 0.0;
    double bracket_lo = 1.0;
    double bracket_hi = 1.0;
    /// g < 0 on the probe points of (root - width, root).
    bool left_negative = false;
    /// 1 - h1(root), or 1 - h1bar(root) for XiBar.
    double final_fraction = 0.0;
    /// Root conditions verified numerically (left_negative, or root 0).
    bool verified = false;
};

/// Largest root of g in [0, 1].
FixedPointReport solve_zhat(const ModelParams& params, const SolverOptions& options = {});
FixedPointReport solve_zhat(const Kernel& kernel, const SolverOptions& options = {});

/// Largest root of g(.; alpha = 0) in [0, 1). Under a failing cascade
/// condition the root is reported as 1 with verified = false.
FixedPointReport solve_xi(const DegreeDistribution& p, const ThresholdLaw& t, double pi,
                          const SolverOptions& options = {});

/// phi(z) = lambda z - sum s p_s (1 - t_s0) - sum s p_s t_s0 y^(s-1); concave.
double phi_bar(const DegreeDistribution& p, const ThresholdLaw& t, double pi, double z);
/// h1bar(z) = sum p_s t_s0 y^s + sum p_s (1 - t_s0).
double h1_bar(const DegreeDistribution& p, const ThresholdLaw& t, double pi, double z);
/// Largest root of gbar in [0, 1).
FixedPointReport solve_xibar(const DegreeDistribution& p, const ThresholdLaw& t, double pi,
                             const SolverOptions& options = {});

// ---------------------------------------------------------------------------
// Cascades
// ---------------------------------------------------------------------------

/// pi sum r (r - 1) p_r t_r0 and sum r p_r.
std::pair<double, double> cascade_sums(const DegreeDistribution& p, const ThresholdLaw& t, double pi);
bool cascade_condition(const DegreeDistribution& p, const ThresholdLaw& t, double pi);

struct QcReport {
    /// Supremum 1 / cut. Not attained: the defining inequality fails at q = 1/cut.
    double value = 0.0;
    std::uint32_t cut = 0;
    bool attained = false;
};

/// Contagion threshold. Throws NoGiantComponent for a subcritical law.
QcReport qc(const DegreeDistribution& p);

/// psi(lambda) = e^-lambda sum_{2 <= r, floor(q r) = 0} lambda^(r-1) / (r-2)!.
double poisson_psi(double q, double lambda);

struct CascadeWindow {
    double lambda_star = 0.0;
    double psi_star = 0.0;
    std::optional<double> lambda_i;
    std::optional<double> lambda_s;
    bool exists() const noexcept { return lambda_i.has_value(); }
};

/// (lambda_i, lambda_s) for Poisson degrees and Proportional(q) at pi = 1.
CascadeWindow poisson_cascade_window(double q);

using DegreeFamily = std::function<DegreeDistribution(double)>;

/// Parameter values in [lo, hi] where `predicate` changes sign, located by a
/// grid scan and bisection to `tolerance`.
std::vector<double> sign_changes(const std::function<double(double)>& f, double lo, double hi, std::size_t steps,
                                 double tolerance = 1e-10);

/// Sign changes of the cascade condition along a family (any law, any pi).
std::vector<double> cascade_window(const DegreeFamily& family, const ThresholdLaw& t, double pi, double lo,
                                   double hi, std::size_t steps = 400);

struct CascadeReport {
    bool condition_holds = false;
    std::optional<QcReport> qc;
    std::optional<double> lambda_i;
    std::optional<double> lambda_s;
    double xi = 1.0;
    double xibar = 1.0;
    double s_fraction = 0.0;
    double gamma_fraction = 0.0;
    bool xi_verified = false;
};

CascadeReport pivotal_and_cascade_fractions(const DegreeDistribution& p, const ThresholdLaw& t, double pi,
                                            const SolverOptions& options = {});

// ---------------------------------------------------------------------------
// Seeding
// ---------------------------------------------------------------------------

struct FinalBuyers {
    double fraction = 0.0;
    double zhat = 1.0;
    bool verified = false;
};

FinalBuyers final_buyers(const ModelParams& params, const SolverOptions& options = {});

struct AlphaCReport {
    std::optional<double> alpha_c;
    /// Tangential root (upper branch) and the root the solution drops to.
    double z_upper = 1.0;
    double z_lower = 1.0;
    /// Jump of 1 - h1(zhat(alpha)) at alpha_c.
    double jump = 0.0;
};

/// alpha_c for uniform seeding, from the double root g = dg/dz = 0.
///
/// With uniform alpha, g(z; alpha) = lambda z y - (1 - alpha) h0(z), so z is
/// a root exactly when alpha = A(z) = 1 - lambda z y / h0(z). zhat(alpha)
/// jumps where A has a local maximum exceeding A everywhere to its right;
/// the rightmost one is alpha_c.
AlphaCReport alpha_c(const DegreeDistribution& p, const ThresholdLaw& t, double pi, std::size_t grid = 10000);

struct AlphaScanOptions {
    double alpha_max = 1.0;
    std::size_t steps = 1000;
    double tolerance = 1e-5;
    std::size_t zhat_grid = 2000;
    double min_jump = 1e-3;
};

/// Independent check: scan zhat over a uniform alpha grid, bisect the first
/// drop to `tolerance`, and keep it only if the drop survives refinement.
std::optional<double> alpha_c_scan(const DegreeDistribution& p, const ThresholdLaw& t, double pi,
                                   const AlphaScanOptions& options = {});

// ---------------------------------------------------------------------------
// Census limits
// ---------------------------------------------------------------------------

using CellKey = std::pair<std::uint32_t, std::uint32_t>;

struct CensusPrediction {
    double z = 1.0;
    double v_H = 0.0;
    std::map<std::uint32_t, double> v_s_H;
    std::map<CellKey, double> v_sr_I;
    double e_I = 0.0;
    bool verified = false;
};

/// Limits of v(H)/n, v_s(H)/n, v_sr(I)/n and e(I)/n at root z.
CensusPrediction census_at(const ModelParams& params, double z);
/// Census for the seeded model at zhat.
CensusPrediction seeded_census(const ModelParams& params, const SolverOptions& options = {});
/// Census of the cascade triggered by the pivotal set (alpha = 0, root xi).
CensusPrediction pivotal_census(const DegreeDistribution& p, const ThresholdLaw& t, double pi,
                                const SolverOptions& options = {});

// ---------------------------------------------------------------------------
// Coexistence
// ---------------------------------------------------------------------------

struct CoexistenceReport {
    bool coexists = false;
    double xi = 1.0;
    /// sum_r r (r - 2) v_r(xi).
    double criterion = 0.0;
    bool verified = false;
};

CoexistenceReport coexistence(const DegreeDistribution& p, const ThresholdLaw& t, double pi = 1.0,
                              const SolverOptions& options = {});

/// Game setting (pi = 1): largest z < 1 with
/// lambda z^2 = sum_s p_s sum_l t_sl sum_{r >= s-l} r (r-1) b_sr(z).
/// There is a giant inactive component iff zeta < xi.
std::optional<double> coexistence_zeta(const DegreeDistribution& p, const ThresholdLaw& t,
                                       const SolverOptions& options = {});

/// All sign changes of the coexistence criterion along a family on [lo, hi].
std::vector<double> coexistence_sign_changes(const DegreeFamily& family, const ThresholdLaw& t, double pi,
                                             double lo, double hi, std::size_t steps = 200);

/// lambda_c(q) for Poisson degrees, searched inside the cascade window.
std::optional<double> poisson_lambda_c(double q, std::size_t steps = 200);

// ---------------------------------------------------------------------------
// Local mean-field cross-check
// ---------------------------------------------------------------------------

struct LmfReport {
    double x = 0.0;
    double root_activity = 0.0;
};

/// Mean of the Bernoulli RDE solution: smallest x in [0, 1] with
/// 1 - x = sum_s p*_s (1 - a_{s+1}) sum_l t_{s+1,l} P(Bin(s, x pi) <= l),
/// p*_s = (s + 1) p_{s+1} / lambda. Root activity is the probability that
/// the root ends up active.
LmfReport lmf_rde(const ModelParams& params, const SolverOptions& options = {});

}  // namespace contagion
