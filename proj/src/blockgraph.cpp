#include "sepval/blockgraph.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace sepval {

BlockStructure::BlockStructure(std::vector<std::size_t> dims) : dims_(std::move(dims)) {
    if (dims_.empty()) throw std::invalid_argument("BlockStructure: need at least one block");
    offsets_.reserve(dims_.size());
    for (std::size_t d : dims_) {
        if (d == 0) throw std::invalid_argument("BlockStructure: block sizes must be >= 1");
        offsets_.push_back(n_);
        n_ += d;
    }
}

BlockStructure BlockStructure::uniform(std::size_t s, std::size_t block_size) {
    return BlockStructure(std::vector<std::size_t>(s, block_size));
}

InterconnectionGraph::InterconnectionGraph(std::size_t node_count, std::vector<Edge> edges)
    : s_(node_count), edges_(std::move(edges)) {
    if (s_ == 0) throw std::invalid_argument("InterconnectionGraph: need at least one node");
    std::vector<std::vector<NodeIndex>> out(s_);
    for (const Edge& e : edges_) {
        if (e.first >= s_ || e.second >= s_) {
            std::ostringstream msg;
            msg << "InterconnectionGraph: edge (" << e.first + 1 << ", " << e.second + 1
                << ") out of range for " << s_ << " nodes";
            throw std::invalid_argument(msg.str());
        }
        if (e.first != e.second) out[e.first].push_back(e.second);
    }

    dist_.assign(s_ * s_, kUnreachable);
    std::deque<NodeIndex> queue;
    for (NodeIndex src = 0; src < s_; ++src) {
        std::uint32_t* row = dist_.data() + src * s_;
        row[src] = 0;
        queue.clear();
        queue.push_back(src);
        while (!queue.empty()) {
            const NodeIndex v = queue.front();
            queue.pop_front();
            for (NodeIndex w : out[v]) {
                if (row[w] == kUnreachable) {
                    row[w] = row[v] + 1;
                    queue.push_back(w);
                }
            }
        }
    }
    for (std::uint32_t d : dist_)
        if (d != kUnreachable) diameter_ = std::max(diameter_, d);
}

bool InterconnectionGraph::symmetric_edges() const {
    for (NodeIndex i = 0; i < s_; ++i)
        for (NodeIndex j = 0; j < s_; ++j)
            if ((dist(i, j) == 1) != (dist(j, i) == 1)) return false;
    return true;
}

InterconnectionGraph InterconnectionGraph::transposed() const {
    std::vector<Edge> rev;
    rev.reserve(edges_.size());
    for (const Edge& e : edges_) rev.emplace_back(e.second, e.first);
    return InterconnectionGraph(s_, std::move(rev));
}

InterconnectionGraph build_graph(std::size_t node_count, const std::vector<Edge>& edges) {
    return InterconnectionGraph(node_count, edges);
}

InterconnectionGraph path_graph(std::size_t s) {
    std::vector<Edge> edges;
    for (NodeIndex i = 0; i + 1 < s; ++i) {
        edges.emplace_back(i, i + 1);
        edges.emplace_back(i + 1, i);
    }
    return InterconnectionGraph(s, std::move(edges));
}

InterconnectionGraph cycle_graph(std::size_t s) {
    std::vector<Edge> edges;
    if (s > 1) {
        for (NodeIndex i = 0; i < s; ++i) {
            const NodeIndex j = (i + 1) % s;
            edges.emplace_back(i, j);
            edges.emplace_back(j, i);
        }
    }
    return InterconnectionGraph(s, std::move(edges));
}

InterconnectionGraph grid_graph(std::size_t rows, std::size_t cols) {
    std::vector<Edge> edges;
    auto id = [cols](std::size_t r, std::size_t c) { return r * cols + c; };
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) {
            if (c + 1 < cols) {
                edges.emplace_back(id(r, c), id(r, c + 1));
                edges.emplace_back(id(r, c + 1), id(r, c));
            }
            if (r + 1 < rows) {
                edges.emplace_back(id(r, c), id(r + 1, c));
                edges.emplace_back(id(r + 1, c), id(r, c));
            }
        }
    return InterconnectionGraph(rows * cols, std::move(edges));
}

std::vector<Edge> read_edge_list(std::istream& is) {
    std::vector<Edge> edges;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::istringstream ls(line);
        long long i = 0, j = 0;
        if (!(ls >> i >> j) || i < 1 || j < 1) {
            throw std::runtime_error("read_edge_list: bad edge on line " + std::to_string(line_no));
        }
        edges.emplace_back(static_cast<NodeIndex>(i - 1), static_cast<NodeIndex>(j - 1));
    }
    return edges;
}

std::vector<Edge> read_edge_list_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("read_edge_list_file: cannot open " + path);
    return read_edge_list(is);
}

void write_edge_list(std::ostream& os, const InterconnectionGraph& g) {
    for (const Edge& e : g.edges()) os << e.first + 1 << ' ' << e.second + 1 << '\n';
}

Neighborhood neighborhood(const InterconnectionGraph& g, const BlockStructure& blocks,
                          NodeIndex j, std::uint32_t l) {
    if (j >= g.count()) throw std::invalid_argument("neighborhood: node index out of range");
    if (blocks.count() != g.count())
        throw std::invalid_argument("neighborhood: block count does not match node count");
    Neighborhood nb;
    nb.center = j;
    nb.radius = l;
    for (NodeIndex i = 0; i < g.count(); ++i) {
        if (g.dist(i, j) <= l) {
            nb.members.push_back(i);
            nb.sub_dim += blocks.dim(i);
        }
    }
    return nb;
}

Neighborhood neighborhood(const InterconnectionGraph& g, NodeIndex j, std::uint32_t l) {
    return neighborhood(g, BlockStructure::uniform(g.count()), j, l);
}

std::vector<double> restrict(const BlockStructure& blocks, const Neighborhood& nb,
                             std::span<const double> x) {
    if (x.size() != blocks.total_dim())
        throw std::invalid_argument("restrict: vector length does not match block structure");
    std::vector<double> out;
    out.reserve(nb.sub_dim);
    for (NodeIndex i : nb.members) {
        const std::size_t off = blocks.offset(i);
        for (std::size_t k = 0; k < blocks.dim(i); ++k) out.push_back(x[off + k]);
    }
    return out;
}

std::vector<double> embed(const BlockStructure& blocks, const Neighborhood& nb,
                          std::span<const double> x_B) {
    if (x_B.size() != nb.sub_dim)
        throw std::invalid_argument("embed: vector length does not match neighborhood dimension");
    std::vector<double> out(blocks.total_dim(), 0.0);
    std::size_t pos = 0;
    for (NodeIndex i : nb.members) {
        const std::size_t off = blocks.offset(i);
        for (std::size_t k = 0; k < blocks.dim(i); ++k) out[off + k] = x_B[pos++];
    }
    return out;
}

std::vector<double> project_tail(const BlockStructure& blocks, std::size_t lead,
                                 std::span<const double> x) {
    if (lead > blocks.count()) throw std::invalid_argument("project_tail: cutoff out of range");
    if (x.size() != blocks.total_dim())
        throw std::invalid_argument("project_tail: vector length does not match block structure");
    std::vector<double> out(x.begin(), x.end());
    const std::size_t zeros = lead == blocks.count()
                                  ? blocks.total_dim()
                                  : blocks.offset(lead);
    std::fill(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(zeros), 0.0);
    return out;
}

Matrix selection_matrix(const BlockStructure& blocks, const Neighborhood& nb) {
    Matrix h(nb.sub_dim, blocks.total_dim());
    std::size_t row = 0;
    for (NodeIndex i : nb.members) {
        const std::size_t off = blocks.offset(i);
        for (std::size_t k = 0; k < blocks.dim(i); ++k) h(row++, off + k) = 1.0;
    }
    return h;
}

Matrix tail_projector(const BlockStructure& blocks, std::size_t lead) {
    if (lead > blocks.count()) throw std::invalid_argument("tail_projector: cutoff out of range");
    const std::size_t n = blocks.total_dim();
    Matrix pi(n, n);
    const std::size_t zeros = lead == blocks.count() ? n : blocks.offset(lead);
    for (std::size_t k = zeros; k < n; ++k) pi(k, k) = 1.0;
    return pi;
}

} // namespace sepval
