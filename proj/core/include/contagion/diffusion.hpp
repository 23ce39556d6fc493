#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include "contagion/degree_model.hpp"
#include "contagion/graph.hpp"
#include "contagion/random.hpp"

namespace contagion {

struct ThresholdAssignment {
    /// k_i, drawn from the law at the ORIGINAL degree of i. A vertex becomes
    /// active once it has more than k_i active neighbours.
    std::vector<std::uint32_t> k;
};

ThresholdAssignment assign_thresholds(const Multigraph& g, const ThresholdLaw& law, RandomStream& rng);
/// floor(q d_i) per vertex; no randomness involved.
ThresholdAssignment proportional_thresholds(const Multigraph& g, double q);

/// (s, r): original degree, number of incident half-edges whose other end is inactive.
using DegreeCell = std::pair<std::uint32_t, std::uint32_t>;

struct DiffusionOutcome {
    std::vector<std::uint8_t> active;
    std::size_t n = 0;
    std::size_t seed_size = 0;
    std::size_t v_H = 0;
    std::map<std::uint32_t, std::size_t> v_s_H;
    std::map<DegreeCell, std::size_t> v_sr_I;
    /// Edges of G with both ends inactive (loops included).
    std::size_t e_I = 0;
    /// Longest activation chain; seeds are generation 0.
    std::size_t rounds = 0;
    /// Filled by inactive_subgraph_census.
    std::optional<std::size_t> largest_inactive_component;

    double active_fraction() const noexcept { return n ? static_cast<double>(v_H) / static_cast<double>(n) : 0.0; }
};

/// Recomputes v_H, v_s(H), v_sr(I) and e(I) of `out` from its active bitmap.
/// The census is always taken on the unpercolated graph.
void take_census(const Multigraph& g, DiffusionOutcome& out);

struct InactiveCensus {
    std::map<DegreeCell, std::size_t> v_sr_I;
    std::size_t e_I = 0;
    std::size_t largest_component = 0;
};

/// Census of the subgraph of G induced by inactive vertices, including the
/// size of its largest connected component. Also stores that size in `outcome`.
InactiveCensus inactive_subgraph_census(DiffusionOutcome& outcome, const Multigraph& g);

/// Reusable workspace for the monotone worklist dynamics.
///
/// `run` activates the seeds, then repeatedly activates any vertex with more
/// than k_i active neighbours along edges of `g`. Loops give no credit,
/// parallel edges count once each. The final set does not depend on the
/// processing order; passing `order_rng` processes the worklist in random
/// order, which the confluence tests use.
class Propagator {
public:
    /// Returns the number of rounds (largest activation generation).
    std::size_t run(const Multigraph& g, std::span<const std::uint32_t> k, std::span<const Vertex> seeds,
                    std::vector<std::uint8_t>& active, RandomStream* order_rng = nullptr);

private:
    std::vector<std::uint32_t> credit_;
    std::vector<std::uint32_t> generation_;
    std::vector<Vertex> work_;
};

/// Seed set prescribed by an activation law. Degree-based laws use the
/// original degree. PivotalPair picks a uniform edge (not a loop) with both
/// ends pivotal in `percolated`; it yields an empty seed when there is none.
std::vector<Vertex> resolve_seed(const Multigraph& g, const Multigraph& percolated, const ActivationLaw& law,
                                 const ThresholdAssignment& k, RandomStream& rng);

/// Percolated threshold dynamics. Percolation draws come from rng.split(0),
/// seeding from rng.split(1).
DiffusionOutcome run_monotone(const Multigraph& g, const ActivationLaw& seed, const ThresholdAssignment& k,
                              double pi, RandomStream& rng);

/// Coupled form: explicit seed set and one percolation uniform per edge
/// (edge kept iff its uniform is below pi).
DiffusionOutcome run_monotone(const Multigraph& g, std::span<const Vertex> seeds, const ThresholdAssignment& k,
                              double pi, std::span<const double> edge_uniforms);

/// Dynamics on an already percolated graph; census on `g`.
DiffusionOutcome run_monotone_on(const Multigraph& g, const Multigraph& percolated, std::span<const Vertex> seeds,
                                 const ThresholdAssignment& k);

DiffusionOutcome cascade_from(const Multigraph& g, const ThresholdAssignment& k, double pi, Vertex u,
                              RandomStream& rng);

struct PivotalSet {
    std::vector<Vertex> members;
    double fraction = 0.0;
};

/// Largest component of the percolated graph restricted to k_i = 0.
PivotalSet pivotal_set(const Multigraph& g, const ThresholdAssignment& k, double pi, RandomStream& rng);
PivotalSet pivotal_set_on(const Multigraph& percolated, const ThresholdAssignment& k);

// ---------------------------------------------------------------------------
// Synchronous best response
// ---------------------------------------------------------------------------

enum class SyncStatus { FixedPoint, Cycle, Truncated };

struct SyncReport {
    SyncStatus status = SyncStatus::FixedPoint;
    /// Rounds played. For a cycle: round at which the repeat was detected.
    std::size_t rounds = 0;
    /// Cycle length (1 for a fixed point, 0 when truncated).
    std::size_t period = 0;
    std::size_t cycle_start = 0;
    std::size_t final_b = 0;
    /// Smallest and largest number of B players over the cycle (equal to
    /// final_b for a fixed point).
    std::size_t min_b = 0;
    std::size_t max_b = 0;
};

/// Synchronous best-response dynamics: every player, seeds included, plays B
/// next round iff its number of B neighbours exceeds k_i. Cycles are found by
/// Zobrist hashing of the state and confirmed exactly from the flip log.
///
/// The workspace resets only the vertices it touched, so repeated runs on a
/// large graph cost time proportional to the dynamics, not to n.
class SyncDynamics {
public:
    SyncReport run(const Multigraph& g, std::span<const std::uint32_t> k, std::span<const Vertex> initial,
                   std::size_t max_rounds);

    /// State reached by the last run (B = 1); valid until the next run.
    std::span<const std::uint8_t> state() const noexcept { return state_; }
    std::vector<Vertex> b_players() const;

private:
    void reset();
    void touch(Vertex v);

    std::vector<std::uint8_t> state_;
    std::vector<std::uint32_t> count_;
    std::vector<std::uint8_t> touched_;
    std::vector<std::uint8_t> mark_;
    std::vector<std::uint8_t> parity_;
    std::vector<Vertex> touched_list_;
    std::vector<Vertex> candidates_;
    std::vector<Vertex> flips_;
    std::vector<Vertex> flip_log_;
    std::vector<std::size_t> round_offset_;
    std::vector<std::size_t> b_history_;
    std::unordered_multimap<std::uint64_t, std::size_t> seen_;
};

SyncReport run_synchronous(const Multigraph& g, std::span<const Vertex> initial, double q,
                           std::size_t max_rounds = 0);

/// Finite-n stand-in for "a positive fraction of the graph": a run counts as
/// a global cascade iff its final fraction reaches
/// max(relative * s_analytic, seed_multiple * seed_fraction).
struct CascadeDetector {
    double relative = 0.25;
    double seed_multiple = 10.0;

    double cutoff(double s_analytic, double seed_fraction) const noexcept;
};

struct TrialsOptions {
    /// Final B fraction a trial must reach.
    double cascade_fraction = 0.25;
    std::size_t max_attempts = 10000;
    /// 0 means 10 n.
    std::size_t max_rounds = 0;
};

struct TrialsReport {
    std::size_t attempts = 0;
    bool censored = false;
    /// Outcome of the successful attempt, if any.
    std::optional<SyncReport> cascade;
};

/// Switch both ends of a uniform edge to B, run the synchronous dynamics from
/// all-A otherwise, and repeat until a global cascade. A cycling outcome
/// counts only if its smallest B fraction along the cycle passes the cutoff.
TrialsReport trials_to_cascade(const Multigraph& g, const ThresholdAssignment& k, const TrialsOptions& options,
                               RandomStream& rng);

}  // namespace contagion
