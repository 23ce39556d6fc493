#include "contagion/graph.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>
#include <string>

namespace contagion {

Multigraph::Multigraph(std::vector<std::uint32_t> offsets, std::vector<HalfEdge> mate,
                       std::vector<std::uint32_t> original_degree)
    : offsets_(std::move(offsets)), mate_(std::move(mate)), original_degree_(std::move(original_degree)) {
    if (offsets_.empty()) {
        offsets_.push_back(0);
    }
    if (offsets_.front() != 0 || offsets_.back() != mate_.size()) {
        throw std::invalid_argument("Multigraph: offsets do not span the half-edge array");
    }
    const std::size_t n = offsets_.size() - 1;
    owner_.resize(mate_.size());
    for (Vertex v = 0; v < n; ++v) {
        if (offsets_[v + 1] < offsets_[v]) {
            throw std::invalid_argument("Multigraph: offsets must be non-decreasing");
        }
        std::fill(owner_.begin() + offsets_[v], owner_.begin() + offsets_[v + 1], v);
    }
    for (HalfEdge h = 0; h < mate_.size(); ++h) {
        const HalfEdge m = mate_[h];
        if (m >= mate_.size() || m == h || mate_[m] != h) {
            throw std::invalid_argument("Multigraph: mate is not a fixed-point-free involution");
        }
    }
    if (!original_degree_.empty() && original_degree_.size() != n) {
        throw std::invalid_argument("Multigraph: original degree vector has the wrong length");
    }
}

Multigraph Multigraph::from_edges(std::size_t n, std::span<const std::pair<Vertex, Vertex>> edges) {
    std::vector<std::uint32_t> deg(n, 0);
    for (const auto& [u, v] : edges) {
        if (u >= n || v >= n) {
            throw std::invalid_argument("Multigraph::from_edges: vertex out of range");
        }
        ++deg[u];
        ++deg[v];
    }
    std::vector<std::uint32_t> offsets(n + 1, 0);
    for (std::size_t v = 0; v < n; ++v) {
        offsets[v + 1] = offsets[v] + deg[v];
    }
    std::vector<std::uint32_t> cursor(offsets.begin(), offsets.end() - 1);
    std::vector<HalfEdge> mate(offsets.back());
    for (const auto& [u, v] : edges) {
        const HalfEdge a = cursor[u]++;
        const HalfEdge b = cursor[v]++;
        mate[a] = b;
        mate[b] = a;
    }
    return Multigraph(std::move(offsets), std::move(mate));
}

std::vector<std::pair<Vertex, Vertex>> Multigraph::edges() const {
    std::vector<std::pair<Vertex, Vertex>> out;
    out.reserve(edge_count());
    for (HalfEdge h = 0; h < mate_.size(); ++h) {
        if (h < mate_[h]) {
            out.emplace_back(owner_[h], owner_[mate_[h]]);
        }
    }
    return out;
}

std::vector<std::uint32_t> Multigraph::edge_index() const {
    std::vector<std::uint32_t> idx(mate_.size());
    std::uint32_t next = 0;
    for (HalfEdge h = 0; h < mate_.size(); ++h) {
        if (h < mate_[h]) {
            idx[h] = next;
            idx[mate_[h]] = next;
            ++next;
        }
    }
    return idx;
}

std::size_t Multigraph::self_loop_count() const {
    std::size_t loops = 0;
    for (HalfEdge h = 0; h < mate_.size(); ++h) {
        if (h < mate_[h] && owner_[h] == owner_[mate_[h]]) {
            ++loops;
        }
    }
    return loops;
}

std::size_t Multigraph::multi_edge_count() const {
    std::size_t surplus = 0;
    std::vector<Vertex> nbrs;
    for (Vertex v = 0; v < vertex_count(); ++v) {
        nbrs.clear();
        for (HalfEdge h = offsets_[v]; h < offsets_[v + 1]; ++h) {
            const Vertex u = neighbor(h);
            if (u > v) {
                nbrs.push_back(u);
            }
        }
        std::sort(nbrs.begin(), nbrs.end());
        for (std::size_t i = 1; i < nbrs.size(); ++i) {
            if (nbrs[i] == nbrs[i - 1]) {
                ++surplus;
            }
        }
    }
    // Parallel loops: each loop beyond the first at a vertex is surplus.
    std::vector<std::uint32_t> loops(vertex_count(), 0);
    for (HalfEdge h = 0; h < mate_.size(); ++h) {
        if (h < mate_[h] && owner_[h] == owner_[mate_[h]]) {
            ++loops[owner_[h]];
        }
    }
    for (std::uint32_t c : loops) {
        if (c > 1) {
            surplus += c - 1;
        }
    }
    return surplus;
}

std::vector<std::uint32_t> Multigraph::degrees() const {
    std::vector<std::uint32_t> out(vertex_count());
    for (Vertex v = 0; v < out.size(); ++v) {
        out[v] = degree(v);
    }
    return out;
}

void Multigraph::write_edge_list(std::ostream& os) const {
    for (const auto& [u, v] : edges()) {
        os << u << ' ' << v << '\n';
    }
}

// ---------------------------------------------------------------------------

Multigraph configuration_model(std::span<const std::uint32_t> degrees, RandomStream& rng) {
    const std::size_t n = degrees.size();
    std::vector<std::uint32_t> offsets(n + 1, 0);
    for (std::size_t v = 0; v < n; ++v) {
        offsets[v + 1] = offsets[v] + degrees[v];
    }
    const std::uint32_t total = offsets.back();
    if (total % 2 != 0) {
        throw std::invalid_argument("configuration_model: degree total is odd");
    }
    std::vector<HalfEdge> order(total);
    std::iota(order.begin(), order.end(), HalfEdge{0});
    // Fisher-Yates; pairing consecutive entries of a uniform permutation
    // gives a uniform perfect matching.
    for (std::size_t i = total; i > 1; --i) {
        const std::size_t j = rng.below(i);
        std::swap(order[i - 1], order[j]);
    }
    std::vector<HalfEdge> mate(total);
    for (std::size_t i = 0; i < total; i += 2) {
        mate[order[i]] = order[i + 1];
        mate[order[i + 1]] = order[i];
    }
    return Multigraph(std::move(offsets), std::move(mate));
}

Multigraph configuration_model(const DegreeSequence& d, RandomStream& rng) {
    return configuration_model(std::span<const std::uint32_t>(d.degrees), rng);
}

Multigraph to_simple(const Multigraph& g, SimpleMode mode, std::size_t max_attempts, RandomStream& rng) {
    if (g.is_simple()) {
        return g;
    }
    if (mode == SimpleMode::Reject) {
        const auto degrees = g.degrees();
        for (std::size_t attempt = 1; attempt <= max_attempts; ++attempt) {
            Multigraph candidate = configuration_model(degrees, rng);
            if (candidate.is_simple()) {
                return candidate;
            }
        }
        throw SimplificationError("to_simple: no simple graph after " + std::to_string(max_attempts) + " attempts",
                                  max_attempts);
    }
    std::vector<std::pair<Vertex, Vertex>> kept;
    for (auto [u, v] : g.edges()) {
        if (u == v) {
            continue;
        }
        if (u > v) {
            std::swap(u, v);
        }
        kept.emplace_back(u, v);
    }
    std::sort(kept.begin(), kept.end());
    kept.erase(std::unique(kept.begin(), kept.end()), kept.end());
    return Multigraph::from_edges(g.vertex_count(), kept);
}

std::vector<double> draw_edge_uniforms(const Multigraph& g, RandomStream& rng) {
    std::vector<double> u(g.edge_count());
    for (double& x : u) {
        x = rng.uniform();
    }
    return u;
}

Multigraph bond_percolate(const Multigraph& g, double pi, std::span<const double> edge_uniforms) {
    if (!(pi >= 0.0 && pi <= 1.0)) {
        throw std::domain_error("bond_percolate: pi must lie in [0, 1]");
    }
    if (edge_uniforms.size() != g.edge_count()) {
        throw std::invalid_argument("bond_percolate: one uniform per edge required");
    }
    const std::size_t n = g.vertex_count();
    const auto mates = g.mates();
    // Kept flag per half-edge via the canonical edge numbering.
    std::vector<std::uint8_t> keep(g.half_edge_count(), 0);
    std::uint32_t e = 0;
    for (HalfEdge h = 0; h < mates.size(); ++h) {
        if (h < mates[h]) {
            const std::uint8_t k = edge_uniforms[e] < pi ? 1 : 0;
            keep[h] = k;
            keep[mates[h]] = k;
            ++e;
        }
    }
    std::vector<std::uint32_t> offsets(n + 1, 0);
    std::vector<HalfEdge> remap(g.half_edge_count(), 0);
    std::uint32_t next = 0;
    for (Vertex v = 0; v < n; ++v) {
        offsets[v] = next;
        for (HalfEdge h = g.first_half_edge(v); h < g.end_half_edge(v); ++h) {
            if (keep[h]) {
                remap[h] = next++;
            }
        }
    }
    offsets[n] = next;
    std::vector<HalfEdge> mate(next);
    for (HalfEdge h = 0; h < mates.size(); ++h) {
        if (keep[h]) {
            mate[remap[h]] = remap[mates[h]];
        }
    }
    std::vector<std::uint32_t> original(n);
    for (Vertex v = 0; v < n; ++v) {
        original[v] = g.original_degree(v);
    }
    return Multigraph(std::move(offsets), std::move(mate), std::move(original));
}

Multigraph bond_percolate(const Multigraph& g, double pi, RandomStream& rng) {
    const auto u = draw_edge_uniforms(g, rng);
    return bond_percolate(g, pi, u);
}

// ---------------------------------------------------------------------------

std::vector<Vertex> ComponentLabeling::members(std::uint32_t id) const {
    std::vector<Vertex> out;
    out.reserve(id < sizes.size() ? sizes[id] : 0);
    for (Vertex v = 0; v < label.size(); ++v) {
        if (label[v] == id) {
            out.push_back(v);
        }
    }
    return out;
}

ComponentLabeling components(const Multigraph& g, std::span<const std::uint8_t> keep) {
    const std::size_t n = g.vertex_count();
    if (keep.size() != n) {
        throw std::invalid_argument("components: keep mask has the wrong length");
    }
    ComponentLabeling out;
    out.label.assign(n, ComponentLabeling::unlabeled);
    std::vector<Vertex> stack;
    for (Vertex root = 0; root < n; ++root) {
        if (!keep[root] || out.label[root] != ComponentLabeling::unlabeled) {
            continue;
        }
        const auto id = static_cast<std::uint32_t>(out.sizes.size());
        std::size_t size = 0;
        out.label[root] = id;
        stack.push_back(root);
        while (!stack.empty()) {
            const Vertex v = stack.back();
            stack.pop_back();
            ++size;
            for (HalfEdge h = g.first_half_edge(v); h < g.end_half_edge(v); ++h) {
                const Vertex u = g.neighbor(h);
                if (keep[u] && out.label[u] == ComponentLabeling::unlabeled) {
                    out.label[u] = id;
                    stack.push_back(u);
                }
            }
        }
        out.sizes.push_back(size);
        if (!out.giant || size > out.sizes[*out.giant]) {
            out.giant = id;
        }
    }
    return out;
}

ComponentLabeling components(const Multigraph& g) {
    std::vector<std::uint8_t> all(g.vertex_count(), 1);
    return components(g, std::span<const std::uint8_t>(all));
}

}  // namespace contagion
