#include "contagion/diffusion.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <type_traits>

namespace contagion {

ThresholdAssignment assign_thresholds(const Multigraph& g, const ThresholdLaw& law, RandomStream& rng) {
    ThresholdAssignment out;
    out.k.resize(g.vertex_count());
    for (Vertex v = 0; v < out.k.size(); ++v) {
        out.k[v] = law.sample(g.original_degree(v), rng);
    }
    return out;
}

ThresholdAssignment proportional_thresholds(const Multigraph& g, double q) {
    ThresholdAssignment out;
    out.k.resize(g.vertex_count());
    for (Vertex v = 0; v < out.k.size(); ++v) {
        out.k[v] = proportional_threshold(q, g.original_degree(v));
    }
    return out;
}

void take_census(const Multigraph& g, DiffusionOutcome& out) {
    const std::size_t n = g.vertex_count();
    out.n = n;
    out.v_H = 0;
    out.v_s_H.clear();
    out.v_sr_I.clear();
    out.e_I = 0;
    for (Vertex v = 0; v < n; ++v) {
        const std::uint32_t s = g.original_degree(v);
        if (out.active[v]) {
            ++out.v_H;
            ++out.v_s_H[s];
            continue;
        }
        std::uint32_t r = 0;
        for (HalfEdge h = g.first_half_edge(v); h < g.end_half_edge(v); ++h) {
            if (!out.active[g.neighbor(h)]) {
                ++r;
            }
        }
        ++out.v_sr_I[{s, r}];
        out.e_I += r;
    }
    // Every inactive-inactive edge was seen from both half-edges.
    out.e_I /= 2;
}

InactiveCensus inactive_subgraph_census(DiffusionOutcome& outcome, const Multigraph& g) {
    if (outcome.n != g.vertex_count()) {
        take_census(g, outcome);
    }
    InactiveCensus c;
    c.v_sr_I = outcome.v_sr_I;
    c.e_I = outcome.e_I;
    const auto labels = components(g, [&](Vertex v) { return outcome.active[v] == 0; });
    c.largest_component = labels.giant_size();
    outcome.largest_inactive_component = c.largest_component;
    return c;
}

// ---------------------------------------------------------------------------

std::size_t Propagator::run(const Multigraph& g, std::span<const std::uint32_t> k, std::span<const Vertex> seeds,
                            std::vector<std::uint8_t>& active, RandomStream* order_rng) {
    const std::size_t n = g.vertex_count();
    if (k.size() != n) {
        throw std::invalid_argument("Propagator: threshold vector has the wrong length");
    }
    credit_.assign(n, 0);
    generation_.assign(n, 0);
    active.assign(n, 0);
    work_.clear();
    for (Vertex s : seeds) {
        if (s >= n) {
            throw std::out_of_range("Propagator: seed vertex " + std::to_string(s) + " out of range");
        }
        if (!active[s]) {
            active[s] = 1;
            work_.push_back(s);
        }
    }
    std::size_t rounds = 0;
    while (!work_.empty()) {
        std::size_t pick = work_.size() - 1;
        if (order_rng != nullptr) {
            pick = order_rng->below(work_.size());
        }
        const Vertex v = work_[pick];
        work_[pick] = work_.back();
        work_.pop_back();
        for (HalfEdge h = g.first_half_edge(v); h < g.end_half_edge(v); ++h) {
            const Vertex u = g.neighbor(h);
            if (u == v || active[u]) {
                continue;
            }
            if (++credit_[u] > k[u]) {
                active[u] = 1;
                generation_[u] = generation_[v] + 1;
                rounds = std::max<std::size_t>(rounds, generation_[u]);
                work_.push_back(u);
            }
        }
    }
    return rounds;
}

namespace {

std::vector<Vertex> sample_distinct(std::size_t n, std::size_t count, RandomStream& rng) {
    count = std::min(count, n);
    // Floyd's algorithm keeps memory proportional to the sample.
    std::vector<Vertex> picked;
    std::unordered_map<Vertex, bool> taken;
    picked.reserve(count);
    for (std::size_t j = n - count; j < n; ++j) {
        const auto t = static_cast<Vertex>(rng.below(j + 1));
        const Vertex choice = taken.count(t) ? static_cast<Vertex>(j) : t;
        taken[choice] = true;
        picked.push_back(choice);
    }
    std::sort(picked.begin(), picked.end());
    return picked;
}

}  // namespace

std::vector<Vertex> resolve_seed(const Multigraph& g, const Multigraph& percolated, const ActivationLaw& law,
                                 const ThresholdAssignment& k, RandomStream& rng) {
    const std::size_t n = g.vertex_count();
    std::vector<Vertex> seeds;
    auto check = [n](Vertex v) {
        if (v >= n) {
            throw std::out_of_range("seed vertex " + std::to_string(v) + " out of range");
        }
        return v;
    };
    std::visit(
        [&](const auto& kind) {
            using T = std::decay_t<decltype(kind)>;
            if constexpr (std::is_same_v<T, DegreeBasedActivation> || std::is_same_v<T, UniformActivation>) {
                if (law.is_zero()) {
                    return;
                }
                for (Vertex v = 0; v < n; ++v) {
                    const double a = law.alpha(g.original_degree(v));
                    if (a >= 1.0 || (a > 0.0 && rng.uniform() < a)) {
                        seeds.push_back(v);
                    }
                }
            } else if constexpr (std::is_same_v<T, SingleVertexActivation>) {
                seeds.push_back(check(kind.v));
            } else if constexpr (std::is_same_v<T, VertexSetActivation>) {
                for (Vertex v : kind.vertices) {
                    seeds.push_back(check(v));
                }
            } else if constexpr (std::is_same_v<T, RandomCountActivation>) {
                seeds = sample_distinct(n, kind.count, rng);
            } else {
                const PivotalSet p = pivotal_set_on(percolated, k);
                if (p.members.empty()) {
                    return;
                }
                std::vector<std::uint8_t> in(n, 0);
                for (Vertex v : p.members) {
                    in[v] = 1;
                }
                std::vector<HalfEdge> inside;
                for (Vertex v : p.members) {
                    for (HalfEdge h = percolated.first_half_edge(v); h < percolated.end_half_edge(v); ++h) {
                        const Vertex u = percolated.neighbor(h);
                        if (u != v && in[u] && h < percolated.mate(h)) {
                            inside.push_back(h);
                        }
                    }
                }
                if (inside.empty()) {
                    return;
                }
                const HalfEdge h = inside[rng.below(inside.size())];
                seeds = {percolated.owner(h), percolated.neighbor(h)};
            }
        },
        law.kind());
    return seeds;
}

DiffusionOutcome run_monotone_on(const Multigraph& g, const Multigraph& percolated, std::span<const Vertex> seeds,
                                 const ThresholdAssignment& k) {
    DiffusionOutcome out;
    Propagator prop;
    out.rounds = prop.run(percolated, k.k, seeds, out.active);
    std::size_t distinct = 0;
    {
        std::vector<Vertex> s(seeds.begin(), seeds.end());
        std::sort(s.begin(), s.end());
        distinct = static_cast<std::size_t>(std::unique(s.begin(), s.end()) - s.begin());
    }
    out.seed_size = distinct;
    take_census(g, out);
    return out;
}

DiffusionOutcome run_monotone(const Multigraph& g, std::span<const Vertex> seeds, const ThresholdAssignment& k,
                              double pi, std::span<const double> edge_uniforms) {
    const Multigraph percolated = bond_percolate(g, pi, edge_uniforms);
    return run_monotone_on(g, percolated, seeds, k);
}

DiffusionOutcome run_monotone(const Multigraph& g, const ActivationLaw& seed, const ThresholdAssignment& k,
                              double pi, RandomStream& rng) {
    RandomStream perc_rng = rng.split(0);
    RandomStream seed_rng = rng.split(1);
    const Multigraph percolated = bond_percolate(g, pi, perc_rng);
    const auto seeds = resolve_seed(g, percolated, seed, k, seed_rng);
    return run_monotone_on(g, percolated, seeds, k);
}

DiffusionOutcome cascade_from(const Multigraph& g, const ThresholdAssignment& k, double pi, Vertex u,
                              RandomStream& rng) {
    return run_monotone(g, ActivationLaw::single_vertex(u), k, pi, rng);
}

PivotalSet pivotal_set_on(const Multigraph& percolated, const ThresholdAssignment& k) {
    PivotalSet out;
    const auto labels = components(percolated, [&](Vertex v) { return k.k[v] == 0; });
    if (labels.giant) {
        out.members = labels.members(*labels.giant);
    }
    const std::size_t n = percolated.vertex_count();
    out.fraction = n ? static_cast<double>(out.members.size()) / static_cast<double>(n) : 0.0;
    return out;
}

PivotalSet pivotal_set(const Multigraph& g, const ThresholdAssignment& k, double pi, RandomStream& rng) {
    RandomStream perc_rng = rng.split(0);
    return pivotal_set_on(bond_percolate(g, pi, perc_rng), k);
}

// ---------------------------------------------------------------------------

void SyncDynamics::touch(Vertex v) {
    if (!touched_[v]) {
        touched_[v] = 1;
        touched_list_.push_back(v);
    }
}

void SyncDynamics::reset() {
    for (Vertex v : touched_list_) {
        state_[v] = 0;
        count_[v] = 0;
        touched_[v] = 0;
    }
    touched_list_.clear();
    flip_log_.clear();
    round_offset_.clear();
    b_history_.clear();
    seen_.clear();
}

std::vector<Vertex> SyncDynamics::b_players() const {
    std::vector<Vertex> out;
    for (Vertex v : touched_list_) {
        if (state_[v]) {
            out.push_back(v);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

SyncReport SyncDynamics::run(const Multigraph& g, std::span<const std::uint32_t> k, std::span<const Vertex> initial,
                             std::size_t max_rounds) {
    const std::size_t n = g.vertex_count();
    if (k.size() != n) {
        throw std::invalid_argument("SyncDynamics: threshold vector has the wrong length");
    }
    if (state_.size() != n) {
        state_.assign(n, 0);
        count_.assign(n, 0);
        touched_.assign(n, 0);
        mark_.assign(n, 0);
        parity_.assign(n, 0);
        touched_list_.clear();
    }
    reset();
    if (max_rounds == 0) {
        max_rounds = 10 * std::max<std::size_t>(n, 1);
    }
    const std::uint64_t salt = 0x8f1bbcdcca62c1d6ULL;
    auto key = [salt](Vertex v) { return mix64(static_cast<std::uint64_t>(v) ^ salt); };

    auto set_b = [&](Vertex v, bool b) {
        touch(v);
        state_[v] = b ? 1 : 0;
        for (HalfEdge h = g.first_half_edge(v); h < g.end_half_edge(v); ++h) {
            const Vertex u = g.neighbor(h);
            if (u == v) {
                continue;
            }
            touch(u);
            if (b) {
                ++count_[u];
            } else {
                --count_[u];
            }
        }
    };

    std::uint64_t hash = 0;
    std::size_t b_count = 0;
    candidates_.clear();
    for (Vertex v : initial) {
        if (v >= n) {
            throw std::out_of_range("SyncDynamics: initial vertex out of range");
        }
        if (!state_[v]) {
            set_b(v, true);
            hash ^= key(v);
            ++b_count;
        }
    }
    // Only B players and their neighbours can change in the first round.
    for (Vertex v : touched_list_) {
        candidates_.push_back(v);
    }

    SyncReport report;
    seen_.emplace(hash, 0);
    round_offset_.push_back(0);
    b_history_.push_back(b_count);

    for (std::size_t round = 1; round <= max_rounds; ++round) {
        flips_.clear();
        for (Vertex v : candidates_) {
            if (mark_[v]) {
                continue;
            }
            mark_[v] = 1;
            const bool next = count_[v] > k[v];
            if (next != static_cast<bool>(state_[v])) {
                flips_.push_back(v);
            }
        }
        for (Vertex v : candidates_) {
            mark_[v] = 0;
        }
        if (flips_.empty()) {
            report.status = SyncStatus::FixedPoint;
            report.rounds = round - 1;
            report.period = 1;
            report.cycle_start = round - 1;
            report.final_b = report.min_b = report.max_b = b_count;
            return report;
        }
        // Flip simultaneously: decisions above used the old counts.
        candidates_.clear();
        for (Vertex v : flips_) {
            const bool to_b = !state_[v];
            set_b(v, to_b);
            hash ^= key(v);
            if (to_b) {
                ++b_count;
            } else {
                --b_count;
            }
            for (HalfEdge h = g.first_half_edge(v); h < g.end_half_edge(v); ++h) {
                candidates_.push_back(g.neighbor(h));
            }
        }
        flip_log_.insert(flip_log_.end(), flips_.begin(), flips_.end());
        round_offset_.push_back(flip_log_.size());
        b_history_.push_back(b_count);

        auto [lo, hi] = seen_.equal_range(hash);
        for (auto it = lo; it != hi; ++it) {
            const std::size_t earlier = it->second;
            // Same state iff every vertex flipped an even number of times since.
            bool same = true;
            for (std::size_t i = round_offset_[earlier]; i < flip_log_.size(); ++i) {
                parity_[flip_log_[i]] ^= 1;
            }
            for (std::size_t i = round_offset_[earlier]; i < flip_log_.size(); ++i) {
                if (parity_[flip_log_[i]]) {
                    same = false;
                }
                parity_[flip_log_[i]] = 0;
            }
            if (same) {
                report.status = SyncStatus::Cycle;
                report.rounds = round;
                report.period = round - earlier;
                report.cycle_start = earlier;
                report.final_b = b_count;
                const auto first = b_history_.begin() + static_cast<std::ptrdiff_t>(earlier);
                report.min_b = *std::min_element(first, b_history_.end());
                report.max_b = *std::max_element(first, b_history_.end());
                return report;
            }
        }
        seen_.emplace(hash, round);
    }
    report.status = SyncStatus::Truncated;
    report.rounds = max_rounds;
    report.period = 0;
    report.final_b = report.min_b = report.max_b = b_count;
    return report;
}

SyncReport run_synchronous(const Multigraph& g, std::span<const Vertex> initial, double q, std::size_t max_rounds) {
    const auto k = proportional_thresholds(g, q);
    SyncDynamics dyn;
    return dyn.run(g, k.k, initial, max_rounds);
}

double CascadeDetector::cutoff(double s_analytic, double seed_fraction) const noexcept {
    return std::max(relative * s_analytic, seed_multiple * seed_fraction);
}

TrialsReport trials_to_cascade(const Multigraph& g, const ThresholdAssignment& k, const TrialsOptions& options,
                               RandomStream& rng) {
    TrialsReport report;
    const std::size_t n = g.vertex_count();
    std::vector<HalfEdge> usable;
    for (HalfEdge h = 0; h < g.half_edge_count(); ++h) {
        if (h < g.mate(h) && g.owner(h) != g.neighbor(h)) {
            usable.push_back(h);
        }
    }
    if (usable.empty()) {
        report.censored = true;
        return report;
    }
    const double need = options.cascade_fraction * static_cast<double>(n);
    SyncDynamics dyn;
    for (std::size_t attempt = 1; attempt <= options.max_attempts; ++attempt) {
        const HalfEdge h = usable[rng.below(usable.size())];
        const Vertex pair[2] = {g.owner(h), g.neighbor(h)};
        const SyncReport r = dyn.run(g, k.k, pair, options.max_rounds);
        report.attempts = attempt;
        if (static_cast<double>(r.min_b) >= need) {
            report.cascade = r;
            return report;
        }
    }
    report.censored = true;
    return report;
}

}  // namespace contagion
