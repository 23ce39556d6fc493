#pragma once

#include <concepts>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "contagion/degree_model.hpp"
#include "contagion/random.hpp"

namespace contagion {

using HalfEdge = std::uint32_t;

/// Half-edge multigraph as produced by the configuration model.
///
/// Half-edges of vertex v are the contiguous range [offset(v), offset(v + 1)).
/// `mate` is a fixed-point-free involution pairing half-edges into edges; a
/// self-loop is a pair of half-edges owned by the same vertex and contributes
/// 2 to its degree.
///
/// A graph obtained by bond percolation keeps the degrees of its parent in
/// original_degree(), since thresholds are tied to the unpercolated degree.
class Multigraph {
public:
    Multigraph() = default;

    /// Validates offsets (non-decreasing, starting at 0) and the involution.
    /// An empty `original_degree` means "same as the current degree".
    Multigraph(std::vector<std::uint32_t> offsets, std::vector<HalfEdge> mate,
               std::vector<std::uint32_t> original_degree = {});

    /// Builds a graph from an explicit edge list; loops are written (v, v).
    static Multigraph from_edges(std::size_t n, std::span<const std::pair<Vertex, Vertex>> edges);

    std::size_t vertex_count() const noexcept { return offsets_.empty() ? 0 : offsets_.size() - 1; }
    std::size_t half_edge_count() const noexcept { return mate_.size(); }
    std::size_t edge_count() const noexcept { return mate_.size() / 2; }

    std::uint32_t degree(Vertex v) const noexcept { return offsets_[v + 1] - offsets_[v]; }
    std::uint32_t original_degree(Vertex v) const noexcept {
        return original_degree_.empty() ? degree(v) : original_degree_[v];
    }
    bool percolated() const noexcept { return !original_degree_.empty(); }

    HalfEdge first_half_edge(Vertex v) const noexcept { return offsets_[v]; }
    HalfEdge end_half_edge(Vertex v) const noexcept { return offsets_[v + 1]; }
    Vertex owner(HalfEdge h) const noexcept { return owner_[h]; }
    HalfEdge mate(HalfEdge h) const noexcept { return mate_[h]; }
    /// Vertex at the other end of half-edge h.
    Vertex neighbor(HalfEdge h) const noexcept { return owner_[mate_[h]]; }

    std::span<const std::uint32_t> offsets() const noexcept { return offsets_; }
    std::span<const Vertex> half_edge_owner() const noexcept { return owner_; }
    std::span<const HalfEdge> mates() const noexcept { return mate_; }

    /// Edges in canonical order: one entry per half-edge h with h < mate(h),
    /// ascending in h. Edge-indexed data (percolation draws) uses this order.
    std::vector<std::pair<Vertex, Vertex>> edges() const;
    /// Canonical edge index of every half-edge.
    std::vector<std::uint32_t> edge_index() const;

    std::size_t self_loop_count() const;
    /// Number of surplus parallel edges (an edge of multiplicity m counts m - 1).
    std::size_t multi_edge_count() const;
    bool is_simple() const { return self_loop_count() == 0 && multi_edge_count() == 0; }

    std::vector<std::uint32_t> degrees() const;

    /// One "u v" line per edge, canonical order, loops as "u u".
    void write_edge_list(std::ostream& os) const;

private:
    std::vector<std::uint32_t> offsets_;
    std::vector<Vertex> owner_;
    std::vector<HalfEdge> mate_;
    std::vector<std::uint32_t> original_degree_;
};

/// Uniform random perfect matching of the half-edges of `d`.
/// Throws std::invalid_argument if the degree total is odd.
Multigraph configuration_model(const DegreeSequence& d, RandomStream& rng);
Multigraph configuration_model(std::span<const std::uint32_t> degrees, RandomStream& rng);

enum class SimpleMode {
    Reject,  ///< resample until simple; uniform over simple graphs
    Erase,   ///< drop loops and collapse parallel edges; degrees may drop
};

class SimplificationError : public std::runtime_error {
public:
    SimplificationError(const std::string& what, std::size_t attempts)
        : std::runtime_error(what), attempts_(attempts) {}
    std::size_t attempts() const noexcept { return attempts_; }

private:
    std::size_t attempts_;
};

/// Simple graph with the degree sequence of `g`. Simple input is returned
/// unchanged in both modes. Reject mode throws SimplificationError after
/// `max_attempts` non-simple resamples.
Multigraph to_simple(const Multigraph& g, SimpleMode mode, std::size_t max_attempts, RandomStream& rng);

/// One uniform in [0, 1) per edge, canonical edge order. Edge e is kept at
/// retention probability pi iff u[e] < pi, which couples all pi values.
std::vector<double> draw_edge_uniforms(const Multigraph& g, RandomStream& rng);

/// Keeps each edge independently with probability pi. Vertex set and
/// original degrees are preserved.
Multigraph bond_percolate(const Multigraph& g, double pi, RandomStream& rng);
Multigraph bond_percolate(const Multigraph& g, double pi, std::span<const double> edge_uniforms);

struct ComponentLabeling {
    static constexpr std::uint32_t unlabeled = 0xffffffffu;

    /// Component id per vertex; `unlabeled` for vertices outside the kept set.
    /// Ids are assigned in order of each component's smallest vertex.
    std::vector<std::uint32_t> label;
    std::vector<std::size_t> sizes;
    /// Largest component (smallest id on ties); empty when nothing was kept.
    std::optional<std::uint32_t> giant;

    std::size_t component_count() const noexcept { return sizes.size(); }
    std::size_t giant_size() const noexcept { return giant ? sizes[*giant] : 0; }
    std::vector<Vertex> members(std::uint32_t id) const;
};

/// Connected components of the subgraph induced by vertices with keep[v] != 0.
ComponentLabeling components(const Multigraph& g, std::span<const std::uint8_t> keep);
ComponentLabeling components(const Multigraph& g);

template <std::predicate<Vertex> Keep>
ComponentLabeling components(const Multigraph& g, Keep&& keep) {
    std::vector<std::uint8_t> mask(g.vertex_count());
    for (Vertex v = 0; v < mask.size(); ++v) {
        mask[v] = keep(v) ? 1 : 0;
    }
    return components(g, std::span<const std::uint8_t>(mask));
}

}  // namespace contagion
