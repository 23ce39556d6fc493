#include "contagion/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <boost/math/special_functions/beta.hpp>

namespace contagion {

namespace {

// Rows this wide are summed through the incomplete beta function when the
// threshold is deterministic; below it the explicit binomial row is cheaper.
constexpr std::size_t kDirectRowLimit = 64;

double y_of(double pi, double z) { return std::clamp(1.0 - pi + pi * z, 0.0, 1.0); }

ModelParams zero_seed(const DegreeDistribution& p, const ThresholdLaw& t, double pi) {
    ModelParams m{p, t, ActivationLaw::none(), pi};
    m.validate();
    return m;
}

bool probe_left_negative(const std::function<double(double)>& f, double root, const SolverOptions& o) {
    bool any = false;
    for (std::size_t i = 0; i < o.probe_points; ++i) {
        const double z = root - o.probe_width * (static_cast<double>(i) + 0.5) / static_cast<double>(o.probe_points);
        if (z < 0.0) {
            continue;
        }
        any = true;
        if (!(f(z) < 0.0)) {
            return false;
        }
    }
    return any;
}

/// Bisection on a bracket with f(lo) <= 0 < f(hi) (or the mirror image when
/// `rising` is false). Returns the midpoint of the final bracket.
double bisect(const std::function<double(double)>& f, double lo, double hi, double tol, bool rising = true) {
    for (int it = 0; it < 200 && hi - lo > tol; ++it) {
        const double mid = 0.5 * (lo + hi);
        const bool nonpositive = f(mid) <= 0.0;
        if (nonpositive == rising) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double golden_max(const std::function<double(double)>& f, double a, double b, double tol = 1e-12) {
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = f(c);
    double fd = f(d);
    while (b - a > tol) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

/// Largest root of f in [0, upper] by a descending grid scan, given f(upper) > 0.
/// Returns (root, bracket lo, bracket hi).
struct Bracketed {
    double root;
    double lo;
    double hi;
};

Bracketed largest_root_below(const std::function<double(double)>& f, double upper, std::size_t grid, double tol) {
    const double step = 1.0 / static_cast<double>(grid);
    double hi = upper;
    auto j = static_cast<std::int64_t>(std::floor(upper * static_cast<double>(grid)));
    if (static_cast<double>(j) * step >= upper) {
        --j;
    }
    for (; j >= 0; --j) {
        const double z = static_cast<double>(j) * step;
        const double v = f(z);
        if (v == 0.0) {
            return {z, z, z};
        }
        if (v < 0.0) {
            return {bisect(f, z, hi, tol), z, hi};
        }
        hi = z;
    }
    // f > 0 on the whole grid: only the endpoint 0 remains.
    return {0.0, 0.0, 0.0};
}

}  // namespace

void ModelParams::validate() const {
    if (!(pi >= 0.0 && pi <= 1.0)) {
        throw ConfigurationError("retention probability pi must lie in [0, 1]");
    }
    if (!alpha.degree_based()) {
        throw ConfigurationError("analytic formulas need a degree-based activation law, got " + alpha.describe());
    }
    for (std::size_t s = 0; s <= p.support_max(); ++s) {
        if (p.p(s) > 0.0 && !t.covers(s)) {
            throw ConfigurationError("threshold law does not cover degree " + std::to_string(s));
        }
    }
}

double binomial_upper_tail(std::size_t n, std::int64_t m, double p) {
    if (m <= 0) {
        return 1.0;
    }
    if (static_cast<std::size_t>(m) > n) {
        return 0.0;
    }
    if (p <= 0.0) {
        return 0.0;
    }
    if (p >= 1.0) {
        return 1.0;
    }
    // P(Bin(n, p) >= m) = I_p(m, n - m + 1)
    return boost::math::ibeta(static_cast<double>(m), static_cast<double>(n) - static_cast<double>(m) + 1.0, p);
}

// ---------------------------------------------------------------------------

Kernel::Kernel(const ModelParams& params) {
    params.validate();
    lambda_ = params.p.mean();
    pi_ = params.pi;
    for (std::size_t s = 0; s <= params.p.support_max(); ++s) {
        const double ps = params.p.p(s);
        if (ps <= 0.0) {
            continue;
        }
        Row row;
        row.s = static_cast<std::uint32_t>(s);
        row.weight = (1.0 - params.alpha.alpha(s)) * ps;
        if (row.weight <= 0.0) {
            continue;
        }
        row.tail.assign(s + 1, 0.0);
        if (params.t.deterministic()) {
            const std::uint32_t k = params.t.fixed_value(s);
            row.fixed_k = k;
            for (std::size_t r = 0; r <= s; ++r) {
                row.tail[r] = (r + k >= s) ? 1.0 : 0.0;
            }
        } else {
            const auto t = params.t.row(s);
            // tail[r] = sum_{l >= s - r} t_sl
            double acc = 0.0;
            for (std::size_t r = 0; r <= s; ++r) {
                acc += t[s - r];
                row.tail[r] = std::min(acc, 1.0);
            }
        }
        max_s_ = std::max(max_s_, s);
        rows_.push_back(std::move(row));
    }
}

std::pair<double, double> Kernel::h_and_h1(double z) const {
    const double y = y_of(pi_, z);
    thread_local std::vector<double> buf;
    buf.resize(max_s_ + 1);
    double h = 0.0;
    double h1 = 0.0;
    for (const Row& row : rows_) {
        const std::size_t s = row.s;
        if (row.fixed_k && s > kDirectRowLimit) {
            const auto m = static_cast<std::int64_t>(s) - static_cast<std::int64_t>(*row.fixed_k);
            // sum_{r >= m} r b_sr(y) = s y P(Bin(s - 1, y) >= m - 1)
            h += row.weight * static_cast<double>(s) * y * binomial_upper_tail(s - 1, m - 1, y);
            h1 += row.weight * binomial_upper_tail(s, m, y);
            continue;
        }
        binomial_row(s, y, buf);
        const std::size_t first = row.fixed_k ? s - *row.fixed_k : 0;
        double a = 0.0;
        double a1 = 0.0;
        for (std::size_t r = first; r <= s; ++r) {
            const double b = buf[r] * row.tail[r];
            a += static_cast<double>(r) * b;
            a1 += b;
        }
        h += row.weight * a;
        h1 += row.weight * a1;
    }
    return {h, h1};
}

double Kernel::h(double z) const { return h_and_h1(z).first; }
double Kernel::h1(double z) const { return h_and_h1(z).second; }

// ---------------------------------------------------------------------------

namespace {

// Rounding leaves 1 - h1 a few ulps outside [0, 1] at the trivial roots.
double unit_fraction(double x) {
    if (std::abs(x) < 1e-14) {
        return 0.0;
    }
    return std::clamp(x, 0.0, 1.0);
}

}  // namespace

FixedPointReport solve_zhat(const ModelParams& params, const SolverOptions& options) {
    return solve_zhat(Kernel(params), options);
}

FixedPointReport solve_zhat(const Kernel& kernel, const SolverOptions& options) {
    const auto g = [&kernel](double z) { return kernel.g(z); };
    FixedPointReport rep;
    rep.kind = RootKind::Zhat;
    const double g1 = kernel.g(1.0);
    // g(1) = sum_s s a_s p_s: zero when nobody with an edge is seeded.
    if (g1 <= 1e-14 * std::max(1.0, kernel.lambda())) {
        rep.root = 1.0;
        rep.bracket_lo = rep.bracket_hi = 1.0;
    } else {
        const auto b = largest_root_below(g, 1.0, options.grid, options.tolerance);
        rep.root = b.root;
        rep.bracket_lo = b.lo;
        rep.bracket_hi = b.hi;
    }
    rep.residual = kernel.g(rep.root);
    rep.left_negative = probe_left_negative(g, rep.root, options);
    rep.final_fraction = unit_fraction(1.0 - kernel.h1(rep.root));
    rep.verified = rep.left_negative || rep.root == 0.0;
    return rep;
}

FixedPointReport solve_xi(const DegreeDistribution& p, const ThresholdLaw& t, double pi,
                          const SolverOptions& options) {
    const Kernel kernel(zero_seed(p, t, pi));
    const auto g = [&kernel](double z) { return kernel.g(z); };
    FixedPointReport rep;
    rep.kind = RootKind::Xi;
    rep.root = 1.0;
    rep.bracket_lo = rep.bracket_hi = 1.0;
    if (cascade_condition(p, t, pi)) {
        // Under the cascade condition g is positive just below 1.
        double eps = 1e-3;
        while (eps > 1e-12 && !(g(1.0 - eps) > 0.0)) {
            eps *= 0.5;
        }
        if (g(1.0 - eps) > 0.0) {
            const auto b = largest_root_below(g, 1.0 - eps, options.grid, options.tolerance);
            rep.root = b.root;
            rep.bracket_lo = b.lo;
            rep.bracket_hi = b.hi;
        }
    }
    rep.residual = kernel.g(rep.root);
    rep.final_fraction = unit_fraction(1.0 - kernel.h1(rep.root));
    if (rep.root < 1.0) {
        rep.left_negative = probe_left_negative(g, rep.root, options);
        rep.verified = rep.left_negative || rep.root == 0.0;
    }
    return rep;
}

double phi_bar(const DegreeDistribution& p, const ThresholdLaw& t, double pi, double z) {
    const double y = y_of(pi, z);
    double v = p.mean() * z;
    for (std::size_t s = 1; s <= p.support_max(); ++s) {
        const double ps = p.p(s);
        if (ps <= 0.0) {
            continue;
        }
        const double t0 = t.prob(s, 0);
        v -= static_cast<double>(s) * ps * (1.0 - t0);
        v -= static_cast<double>(s) * ps * t0 * std::pow(y, static_cast<double>(s - 1));
    }
    return v;
}

double h1_bar(const DegreeDistribution& p, const ThresholdLaw& t, double pi, double z) {
    const double y = y_of(pi, z);
    double v = 0.0;
    for (std::size_t s = 0; s <= p.support_max(); ++s) {
        const double ps = p.p(s);
        if (ps <= 0.0) {
            continue;
        }
        const double t0 = t.prob(s, 0);
        v += ps * t0 * std::pow(y, static_cast<double>(s)) + ps * (1.0 - t0);
    }
    return v;
}

FixedPointReport solve_xibar(const DegreeDistribution& p, const ThresholdLaw& t, double pi,
                             const SolverOptions& options) {
    const auto phi = [&](double z) { return phi_bar(p, t, pi, z); };
    FixedPointReport rep;
    rep.kind = RootKind::XiBar;
    rep.root = 1.0;
    rep.bracket_lo = rep.bracket_hi = 1.0;
    if (cascade_condition(p, t, pi)) {
        double eps = 1e-3;
        while (eps > 1e-12 && !(phi(1.0 - eps) > 0.0)) {
            eps *= 0.5;
        }
        const double hi = 1.0 - eps;
        if (phi(hi) > 0.0) {
            // phi is concave with phi(1) = 0 and phi' (1) < 0: one root in [0, 1).
            if (phi(0.0) >= 0.0) {
                rep.root = 0.0;
                rep.bracket_lo = rep.bracket_hi = 0.0;
            } else {
                rep.root = bisect(phi, 0.0, hi, options.tolerance);
                rep.bracket_lo = 0.0;
                rep.bracket_hi = hi;
            }
        }
    }
    rep.residual = y_of(pi, rep.root) * phi(rep.root);
    rep.final_fraction = unit_fraction(1.0 - h1_bar(p, t, pi, rep.root));
    if (rep.root < 1.0) {
        rep.left_negative = probe_left_negative(phi, rep.root, options);
        rep.verified = rep.left_negative || rep.root == 0.0;
    }
    return rep;
}

// ---------------------------------------------------------------------------

std::pair<double, double> cascade_sums(const DegreeDistribution& p, const ThresholdLaw& t, double pi) {
    double lhs = 0.0;
    for (std::size_t r = 2; r <= p.support_max(); ++r) {
        const double pr = p.p(r);
        if (pr > 0.0) {
            lhs += static_cast<double>(r) * static_cast<double>(r - 1) * pr * t.prob(r, 0);
        }
    }
    return {pi * lhs, p.mean()};
}

bool cascade_condition(const DegreeDistribution& p, const ThresholdLaw& t, double pi) {
    const auto [lhs, rhs] = cascade_sums(p, t, pi);
    return lhs > rhs;
}

QcReport qc(const DegreeDistribution& p) {
    const auto& m = p.moments();
    if (!(m.factorial2 - m.mean > 0.0)) {
        throw NoGiantComponent("contagion threshold undefined: sum r (r - 2) p_r <= 0");
    }
    // For q in [1/(m+1), 1/m) the vertices with threshold 0 are those of
    // degree <= m, so the condition only changes at reciprocals of integers.
    double partial = 0.0;
    for (std::size_t r = 2; r <= p.support_max(); ++r) {
        partial += static_cast<double>(r) * static_cast<double>(r - 1) * p.p(r);
        if (partial > m.mean) {
            return QcReport{1.0 / static_cast<double>(r), static_cast<std::uint32_t>(r), false};
        }
    }
    throw NoGiantComponent("contagion threshold undefined: condition never met on the support");
}

double poisson_psi(double q, double lambda) {
    if (lambda <= 0.0) {
        return 0.0;
    }
    // j = r - 2 runs over degrees r >= 2 with floor(q r) = 0.
    double term = lambda * std::exp(-lambda);
    double sum = 0.0;
    for (std::size_t r = 2; proportional_threshold(q, r) == 0 && r < 100000; ++r) {
        sum += term;
        term *= lambda / static_cast<double>(r - 1);
    }
    return sum;
}

CascadeWindow poisson_cascade_window(double q) {
    CascadeWindow w;
    const auto psi = [q](double l) { return poisson_psi(q, l); };
    std::size_t top = 2;
    while (proportional_threshold(q, top + 1) == 0 && top < 100000) {
        ++top;
    }
    const double span = 2.0 * static_cast<double>(top) + 10.0;
    double best = 0.0;
    double best_val = -1.0;
    for (double l = 0.01; l < span; l += 0.01) {
        const double v = psi(l);
        if (v > best_val) {
            best_val = v;
            best = l;
        }
    }
    w.lambda_star = golden_max(psi, std::max(1e-9, best - 0.01), best + 0.01, 1e-13);
    w.psi_star = psi(w.lambda_star);
    if (!(w.psi_star > 1.0)) {
        return w;
    }
    const auto f = [&](double l) { return 1.0 - psi(l); };
    // psi < 1 near 0, > 1 at lambda*, < 1 again far right.
    w.lambda_i = bisect(f, 0.0, w.lambda_star, 1e-14, false);
    double hi = w.lambda_star;
    while (psi(hi) >= 1.0) {
        hi *= 2.0;
    }
    w.lambda_s = bisect(f, w.lambda_star, hi, 1e-14, true);
    return w;
}

std::vector<double> sign_changes(const std::function<double(double)>& f, double lo, double hi, std::size_t steps,
                                 double tolerance) {
    std::vector<double> out;
    if (steps == 0) {
        return out;
    }
    double prev_x = lo;
    bool prev_pos = f(lo) > 0.0;
    for (std::size_t i = 1; i <= steps; ++i) {
        const double x = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(steps);
        const bool pos = f(x) > 0.0;
        if (pos != prev_pos) {
            out.push_back(bisect(f, prev_x, x, tolerance, pos));
        }
        prev_x = x;
        prev_pos = pos;
    }
    return out;
}

std::vector<double> cascade_window(const DegreeFamily& family, const ThresholdLaw& t, double pi, double lo,
                                   double hi, std::size_t steps) {
    const auto f = [&](double x) {
        const auto [lhs, rhs] = cascade_sums(family(x), t, pi);
        return lhs - rhs;
    };
    return sign_changes(f, lo, hi, steps, 1e-12);
}

CascadeReport pivotal_and_cascade_fractions(const DegreeDistribution& p, const ThresholdLaw& t, double pi,
                                            const SolverOptions& options) {
    CascadeReport rep;
    rep.condition_holds = cascade_condition(p, t, pi);
    try {
        rep.qc = qc(p);
    } catch (const NoGiantComponent&) {
        rep.qc.reset();
    }
    if (const auto q = t.proportion(); q && p.kind() == DegreeKind::Poisson && pi == 1.0) {
        const auto w = poisson_cascade_window(*q);
        rep.lambda_i = w.lambda_i;
        rep.lambda_s = w.lambda_s;
    }
    const auto xi = solve_xi(p, t, pi, options);
    const auto xibar = solve_xibar(p, t, pi, options);
    rep.xi = xi.root;
    rep.xibar = xibar.root;
    rep.xi_verified = xi.verified;
    if (rep.condition_holds) {
        rep.s_fraction = xi.final_fraction;
        rep.gamma_fraction = xibar.final_fraction;
    }
    return rep;
}

// ---------------------------------------------------------------------------

FinalBuyers final_buyers(const ModelParams& params, const SolverOptions& options) {
    const auto rep = solve_zhat(params, options);
    return FinalBuyers{rep.final_fraction, rep.root, rep.verified};
}

AlphaCReport alpha_c(const DegreeDistribution& p, const ThresholdLaw& t, double pi, std::size_t grid) {
    const Kernel k0(zero_seed(p, t, pi));
    const double lambda = k0.lambda();
    const auto A = [&](double z) {
        if (z >= 1.0) {
            return 0.0;  // h0(1) = lambda exactly
        }
        const double h0 = k0.h(z);
        if (!(h0 > 0.0)) {
            return -std::numeric_limits<double>::infinity();
        }
        return 1.0 - lambda * z * y_of(pi, z) / h0;
    };
    std::vector<double> a(grid + 1);
    for (std::size_t j = 0; j <= grid; ++j) {
        a[j] = A(static_cast<double>(j) / static_cast<double>(grid));
    }
    const double step = 1.0 / static_cast<double>(grid);

    AlphaCReport rep;
    std::optional<std::size_t> peak;
    double running = a[grid];
    if (a[grid - 1] < a[grid]) {
        peak = grid;
    } else {
        for (std::size_t j = grid - 1; j >= 1; --j) {
            if (a[j] >= running) {
                running = a[j];
                // Index 1 only looks like a peak because h0(0) = 0 makes A(0)
                // undefined; A keeps rising towards z = 0 there.
                if (a[j - 1] < a[j] && j >= 2) {
                    peak = j;
                    break;
                }
            }
        }
    }
    if (!peak) {
        return rep;
    }
    double z_star = 1.0;
    double alpha = 0.0;
    if (*peak < grid) {
        const double lo = static_cast<double>(*peak - 1) * step;
        const double hi = static_cast<double>(*peak + 1) * step;
        z_star = golden_max(A, lo, hi, 1e-12);
        alpha = A(z_star);
    }
    // After the jump zhat sits on the largest z < z* where A climbs back to alpha.
    double z_low = 0.0;
    const auto f = [&](double z) { return A(z) - alpha; };
    auto j = static_cast<std::int64_t>(std::floor(z_star / step));
    if (static_cast<double>(j) * step >= z_star) {
        --j;
    }
    // Skip the shoulder of the peak itself.
    while (j >= 0 && a[static_cast<std::size_t>(j)] >= alpha) {
        --j;
    }
    for (; j >= 0; --j) {
        if (a[static_cast<std::size_t>(j)] >= alpha) {
            z_low = bisect(f, static_cast<double>(j) * step, static_cast<double>(j + 1) * step, 1e-13, false);
            break;
        }
    }
    rep.alpha_c = std::max(alpha, 0.0);
    rep.z_upper = z_star;
    rep.z_lower = z_low;
    rep.jump = (1.0 - *rep.alpha_c) * (k0.h1(z_star) - k0.h1(z_low));
    return rep;
}

std::optional<double> alpha_c_scan(const DegreeDistribution& p, const ThresholdLaw& t, double pi,
                                   const AlphaScanOptions& options) {
    SolverOptions so;
    so.grid = options.zhat_grid;
    const auto zhat = [&](double alpha) {
        return solve_zhat(ModelParams{p, t, ActivationLaw::uniform(std::clamp(alpha, 0.0, 1.0)), pi}, so).root;
    };
    double a_prev = 0.0;
    double z_prev = zhat(0.0);
    for (std::size_t i = 1; i <= options.steps; ++i) {
        const double a_next = options.alpha_max * static_cast<double>(i) / static_cast<double>(options.steps);
        const double z_next = zhat(a_next);
        if (z_prev - z_next >= options.min_jump) {
            // A jump keeps its size under refinement; a steep continuous
            // stretch shrinks with the bracket.
            double lo = a_prev;
            double hi = a_next;
            double z_lo = z_prev;
            double z_hi = z_next;
            bool alive = true;
            while (hi - lo > 1e-11) {
                const double mid = 0.5 * (lo + hi);
                const double z_mid = zhat(mid);
                if (z_lo - z_mid >= z_mid - z_hi) {
                    hi = mid;
                    z_hi = z_mid;
                } else {
                    lo = mid;
                    z_lo = z_mid;
                }
                if (z_lo - z_hi < options.min_jump) {
                    alive = false;
                    break;
                }
            }
            if (alive) {
                return 0.5 * (lo + hi);
            }
        }
        a_prev = a_next;
        z_prev = z_next;
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------

CensusPrediction census_at(const ModelParams& params, double z) {
    params.validate();
    const double pi = params.pi;
    const double y = y_of(pi, z);
    CensusPrediction c;
    c.z = z;
    std::vector<double> bz;
    for (std::size_t s = 0; s <= params.p.support_max(); ++s) {
        const double ps = params.p.p(s);
        if (ps <= 0.0) {
            continue;
        }
        const double w = (1.0 - params.alpha.alpha(s)) * ps;
        const auto t = params.t.row(s);
        double inactive = 0.0;
        for (std::size_t l = 0; l <= s; ++l) {
            if (t[l] > 0.0) {
                inactive += t[l] * binomial_upper_tail(s, static_cast<std::int64_t>(s - l), y);
            }
        }
        c.v_s_H[static_cast<std::uint32_t>(s)] = ps - w * inactive;
        c.v_H += ps - w * inactive;
        if (w <= 0.0) {
            continue;
        }
        bz.assign(s + 1, 0.0);
        binomial_row(s, z, bz);
        for (std::size_t r = 0; r <= s; ++r) {
            if (bz[r] <= 0.0) {
                continue;
            }
            // Of the s - r edges to active vertices, at least s - r - l must be deleted.
            double stay = 0.0;
            for (std::size_t l = 0; l <= s; ++l) {
                if (t[l] > 0.0) {
                    const auto need = static_cast<std::int64_t>(s - r) - static_cast<std::int64_t>(l);
                    stay += t[l] * binomial_upper_tail(s - r, need, 1.0 - pi);
                }
            }
            const double v = w * bz[r] * stay;
            if (v > 1e-16) {
                c.v_sr_I[{static_cast<std::uint32_t>(s), static_cast<std::uint32_t>(r)}] = v;
            }
        }
    }
    const Kernel kernel(params);
    const double ratio = pi == 1.0 ? 1.0 : z / y;
    c.e_I = 0.5 * ratio * kernel.h(z);
    return c;
}

CensusPrediction seeded_census(const ModelParams& params, const SolverOptions& options) {
    const auto rep = solve_zhat(params, options);
    auto c = census_at(params, rep.root);
    c.verified = rep.verified;
    return c;
}

CensusPrediction pivotal_census(const DegreeDistribution& p, const ThresholdLaw& t, double pi,
                                const SolverOptions& options) {
    const auto rep = solve_xi(p, t, pi, options);
    auto c = census_at(zero_seed(p, t, pi), rep.root);
    c.verified = rep.verified;
    return c;
}

// ---------------------------------------------------------------------------

CoexistenceReport coexistence(const DegreeDistribution& p, const ThresholdLaw& t, double pi,
                              const SolverOptions& options) {
    CoexistenceReport rep;
    const auto xi = solve_xi(p, t, pi, options);
    rep.xi = xi.root;
    rep.verified = xi.verified;
    const auto census = census_at(zero_seed(p, t, pi), xi.root);
    for (const auto& [cell, v] : census.v_sr_I) {
        const double r = cell.second;
        rep.criterion += r * (r - 2.0) * v;
    }
    rep.coexists = rep.criterion > 0.0;
    return rep;
}

std::optional<double> coexistence_zeta(const DegreeDistribution& p, const ThresholdLaw& t,
                                       const SolverOptions& options) {
    const double lambda = p.mean();
    std::vector<std::vector<double>> trows(p.support_max() + 1);
    for (std::size_t s = 2; s <= p.support_max(); ++s) {
        if (p.p(s) > 0.0) {
            trows[s] = t.row(s);
        }
    }
    std::vector<double> row;
    const auto F = [&](double z) {
        double rhs = 0.0;
        for (std::size_t s = 2; s <= p.support_max(); ++s) {
            const double ps = p.p(s);
            if (ps <= 0.0) {
                continue;
            }
            row.assign(s + 1, 0.0);
            binomial_row(s, z, row);
            // sum_l t_sl sum_{r >= s-l} r (r-1) b_sr(z), via the tail of t
            double tail = 0.0;
            for (std::size_t r = 0; r <= s; ++r) {
                tail += trows[s][s - r];
                rhs += ps * std::min(tail, 1.0) * static_cast<double>(r) * static_cast<double>(r - 1) * row[r];
            }
        }
        return lambda * z * z - rhs;
    };
    const auto roots = sign_changes(F, 0.0, 1.0 - 1e-9, std::max<std::size_t>(options.grid / 10, 100), options.tolerance);
    if (roots.empty()) {
        return std::nullopt;
    }
    return roots.back();
}

std::vector<double> coexistence_sign_changes(const DegreeFamily& family, const ThresholdLaw& t, double pi,
                                             double lo, double hi, std::size_t steps) {
    SolverOptions so;
    so.grid = 4000;
    const auto f = [&](double x) { return coexistence(family(x), t, pi, so).criterion; };
    return sign_changes(f, lo, hi, steps, 1e-9);
}

std::optional<double> poisson_lambda_c(double q, std::size_t steps) {
    const auto w = poisson_cascade_window(q);
    if (!w.exists()) {
        return std::nullopt;
    }
    const double pad = 1e-6 * (*w.lambda_s - *w.lambda_i);
    const auto roots = coexistence_sign_changes([](double l) { return DegreeDistribution::poisson(l); },
                                                ThresholdLaw::proportional(q), 1.0, *w.lambda_i + pad,
                                                *w.lambda_s - pad, steps);
    if (roots.empty()) {
        return std::nullopt;
    }
    return roots.front();
}

// ---------------------------------------------------------------------------

LmfReport lmf_rde(const ModelParams& params, const SolverOptions& options) {
    params.validate();
    const auto& p = params.p;
    const double lambda = p.mean();
    const double pi = params.pi;
    std::vector<double> row;
    // P(Bin(s, x pi) <= l), weighted by the threshold law of degree `deg`.
    const auto below = [&](std::size_t s, std::size_t deg, double x) {
        row.assign(s + 1, 0.0);
        binomial_row(s, std::clamp(x * pi, 0.0, 1.0), row);
        const auto t = params.t.row(deg);
        double acc = 0.0;
        double cdf = 0.0;
        for (std::size_t l = 0; l <= s; ++l) {
            cdf += row[l];
            if (l < t.size()) {
                acc += t[l] * std::min(cdf, 1.0);
            }
        }
        // Thresholds above s can never be reached: the vertex stays inactive.
        for (std::size_t l = s + 1; l < t.size(); ++l) {
            acc += t[l];
        }
        return acc;
    };
    const auto F = [&](double x) {
        double rhs = 0.0;
        for (std::size_t s = 0; s + 1 <= p.support_max(); ++s) {
            const double pstar = static_cast<double>(s + 1) * p.p(s + 1) / lambda;
            if (pstar <= 0.0) {
                continue;
            }
            rhs += pstar * (1.0 - params.alpha.alpha(s + 1)) * below(s, s + 1, x);
        }
        return 1.0 - x - rhs;
    };
    LmfReport rep;
    // Same lattice as the zhat scan, walked from x = 0 (z = 1) upward.
    const std::size_t grid = options.grid;
    double prev_x = 0.0;
    if (F(0.0) <= 1e-14) {
        rep.x = 0.0;
    } else {
        rep.x = 1.0;
        for (std::size_t j = grid; j-- > 0;) {
            const double x = 1.0 - static_cast<double>(j) / static_cast<double>(grid);
            const double v = F(x);
            if (v == 0.0) {
                rep.x = x;
                break;
            }
            if (v < 0.0) {
                rep.x = bisect(F, prev_x, x, options.tolerance, false);
                break;
            }
            prev_x = x;
        }
    }
    double inactive = 0.0;
    for (std::size_t s = 0; s <= p.support_max(); ++s) {
        const double ps = p.p(s);
        if (ps > 0.0) {
            inactive += (1.0 - params.alpha.alpha(s)) * ps * below(s, s, rep.x);
        }
    }
    rep.root_activity = 1.0 - inactive;
    return rep;
}

}  // namespace contagion
