#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sepval/matrix.hpp"

namespace sepval {

using NodeIndex = std::size_t;
using Edge = std::pair<NodeIndex, NodeIndex>;

/// Distance value for unreachable node pairs.
inline constexpr std::uint32_t kUnreachable = std::numeric_limits<std::uint32_t>::max();

/// Partition of R^n into s contiguous blocks of sizes n_j >= 1.
class BlockStructure {
public:
    explicit BlockStructure(std::vector<std::size_t> dims);

    /// s blocks, every block of the given size.
    static BlockStructure uniform(std::size_t s, std::size_t block_size = 1);

    std::size_t count() const { return dims_.size(); }       // s
    std::size_t total_dim() const { return n_; }             // n
    std::size_t dim(NodeIndex j) const { return dims_[j]; }  // n_j
    std::size_t offset(NodeIndex j) const { return offsets_[j]; }
    const std::vector<std::size_t>& dims() const { return dims_; }

private:
    std::vector<std::size_t> dims_;
    std::vector<std::size_t> offsets_;
    std::size_t n_ = 0;
};

/// Directed interconnection graph on s nodes with the full table of
/// shortest-path lengths, precomputed by BFS from every node. An edge (i,j)
/// reads "node i influences node j"; dist(i,j) is the length of the shortest
/// directed path from i to j (kUnreachable when there is none).
class InterconnectionGraph {
public:
    InterconnectionGraph(std::size_t node_count, std::vector<Edge> edges);

    std::size_t count() const { return s_; }
    const std::vector<Edge>& edges() const { return edges_; }

    std::uint32_t dist(NodeIndex i, NodeIndex j) const { return dist_[i * s_ + j]; }
    bool reachable(NodeIndex i, NodeIndex j) const { return dist(i, j) != kUnreachable; }
    /// Largest finite distance.
    std::uint32_t diameter() const { return diameter_; }
    bool symmetric_edges() const;

    /// Graph with every edge reversed; swaps the roles of "influences" and
    /// "is influenced by" in all distance queries.
    InterconnectionGraph transposed() const;

private:
    std::size_t s_ = 0;
    std::vector<Edge> edges_;
    std::vector<std::uint32_t> dist_; // s*s row-major, dist_[i*s+j] = dist(i -> j)
    std::uint32_t diameter_ = 0;
};

InterconnectionGraph build_graph(std::size_t node_count, const std::vector<Edge>& edges);

/// Named topologies, all with symmetric edge sets.
InterconnectionGraph path_graph(std::size_t s);
InterconnectionGraph cycle_graph(std::size_t s);
InterconnectionGraph grid_graph(std::size_t rows, std::size_t cols);

/// Edge-list text format: one "i j" pair per line, 1-based node indices.
/// Blank lines and lines starting with '#' are ignored.
std::vector<Edge> read_edge_list(std::istream& is);
std::vector<Edge> read_edge_list_file(const std::string& path);
void write_edge_list(std::ostream& os, const InterconnectionGraph& g);

/// The index set B_l(j) of all nodes within graph distance l of node j,
/// together with the dimension of the subspace it selects.
struct Neighborhood {
    NodeIndex center = 0;
    std::uint32_t radius = 0;
    std::vector<NodeIndex> members; // ascending; always contains center
    std::size_t sub_dim = 0;        // sum of member block dims
};

/// Members are the nodes i with dist(i, j) <= l.
Neighborhood neighborhood(const InterconnectionGraph& g, const BlockStructure& blocks,
                          NodeIndex j, std::uint32_t l);
/// Same with unit blocks (sub_dim == member count).
Neighborhood neighborhood(const InterconnectionGraph& g, NodeIndex j, std::uint32_t l);

/// Concatenation of the member blocks of x, ascending node order. This is the
/// forward action of the blockwise selection matrix.
std::vector<double> restrict(const BlockStructure& blocks, const Neighborhood& nb,
                             std::span<const double> x);

/// Scatter x_B back into R^n: member blocks filled, all others zero.
/// restrict(embed(x_B)) == x_B for every x_B.
std::vector<double> embed(const BlockStructure& blocks, const Neighborhood& nb,
                          std::span<const double> x_B);

/// Zero the leading `lead` blocks of x (lead == 0 is the identity, lead == s
/// the zero map). Idempotent.
std::vector<double> project_tail(const BlockStructure& blocks, std::size_t lead,
                                 std::span<const double> x);

/// Dense materializations of the index operations above, for oracle tests
/// only: the library itself never forms these matrices.
Matrix selection_matrix(const BlockStructure& blocks, const Neighborhood& nb); // b x n
Matrix tail_projector(const BlockStructure& blocks, std::size_t lead);         // n x n

} // namespace sepval
