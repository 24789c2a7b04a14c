// Copyright 2026 The hexsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <map>
#include <queue>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "hexsim/errors.hpp"

namespace hexsim {

using Edge = std::pair<std::size_t, std::size_t>;

/// Simple undirected graph of qubits. Edges are stored with first < second.
struct Lattice {
    std::size_t num_nodes = 0;
    std::vector<Edge> edges;
    /// Optional 2D layout, one entry per node when present.
    std::vector<std::pair<double, double>> coords;

    std::vector<std::vector<std::size_t>> adjacency() const {
        std::vector<std::vector<std::size_t>> adj(num_nodes);
        for (auto [u, v] : edges) {
            adj[u].push_back(v);
            adj[v].push_back(u);
        }
        for (auto &a : adj) {
            std::sort(a.begin(), a.end());
        }
        return adj;
    }

    std::size_t max_degree() const {
        std::vector<std::size_t> deg(num_nodes, 0);
        for (auto [u, v] : edges) {
            ++deg[u];
            ++deg[v];
        }
        return deg.empty() ? 0 : *std::max_element(deg.begin(), deg.end());
    }

    /// Nodes in breadth-first order from `start`, ties broken by node index.
    std::vector<std::size_t> bfs_order(std::size_t start) const {
        return bfs_order(std::vector<std::size_t>{start});
    }

    /// Multi-source BFS; sources are visited first, in the given order.
    std::vector<std::size_t> bfs_order(const std::vector<std::size_t> &starts) const {
        auto adj = adjacency();
        std::vector<bool> seen(num_nodes, false);
        std::vector<std::size_t> order;
        std::queue<std::size_t> q;
        for (std::size_t s : starts) {
            if (s >= num_nodes) {
                throw ArgumentError("node " + std::to_string(s) + " out of range");
            }
            if (!seen[s]) {
                seen[s] = true;
                q.push(s);
            }
        }
        while (!q.empty()) {
            std::size_t u = q.front();
            q.pop();
            order.push_back(u);
            for (std::size_t v : adj[u]) {
                if (!seen[v]) {
                    seen[v] = true;
                    q.push(v);
                }
            }
        }
        return order;
    }

    /// Nodes of one shortest cycle, in cycle order; empty for a forest.
    std::vector<std::size_t> shortest_cycle() const {
        auto adj = adjacency();
        std::vector<std::size_t> best;
        for (std::size_t root = 0; root < num_nodes; ++root) {
            std::vector<std::size_t> dist(num_nodes, SIZE_MAX);
            std::vector<std::size_t> parent(num_nodes, SIZE_MAX);
            std::queue<std::size_t> q;
            dist[root] = 0;
            q.push(root);
            while (!q.empty()) {
                std::size_t u = q.front();
                q.pop();
                for (std::size_t v : adj[u]) {
                    if (dist[v] == SIZE_MAX) {
                        dist[v] = dist[u] + 1;
                        parent[v] = u;
                        q.push(v);
                    } else if (v != parent[u] && u < v) {
                        std::size_t len = dist[u] + dist[v] + 1;
                        if (best.empty() || len < best.size()) {
                            std::vector<std::size_t> left;
                            std::vector<std::size_t> right;
                            for (std::size_t a = u; a != SIZE_MAX; a = parent[a]) {
                                left.push_back(a);
                            }
                            for (std::size_t b = v; b != SIZE_MAX; b = parent[b]) {
                                right.push_back(b);
                            }
                            // Keep only cycles whose two branches meet at the root.
                            std::set<std::size_t> l(left.begin(), left.end() - 1);
                            bool simple = true;
                            for (std::size_t k = 0; k + 1 < right.size(); ++k) {
                                simple = simple && !l.count(right[k]);
                            }
                            if (simple) {
                                best.assign(left.rbegin(), left.rend());
                                best.insert(best.end(), right.begin(), right.end() - 1);
                            }
                        }
                    }
                }
            }
        }
        return best;
    }

    bool is_connected() const {
        return num_nodes == 0 || bfs_order(0).size() == num_nodes;
    }

    /// Rejects self-loops, duplicates and out-of-range endpoints.
    void validate() const {
        std::set<Edge> seen;
        for (auto [u, v] : edges) {
            if (u == v) {
                throw ArgumentError("self-loop at node " + std::to_string(u));
            }
            if (u > v || u >= num_nodes || v >= num_nodes) {
                throw ArgumentError("edge (" + std::to_string(u) + "," + std::to_string(v) + ") is invalid");
            }
            if (!seen.insert({u, v}).second) {
                throw ArgumentError("duplicate edge (" + std::to_string(u) + "," + std::to_string(v) + ")");
            }
        }
    }
};

/// Heavy-hex lattice with rows x cols hexagonal plaquettes laid out as a brick
/// wall. Every honeycomb edge carries one extra degree-2 node. Nodes are
/// numbered row-major over the doubled brick coordinates, so the long
/// horizontal chains come out as consecutive runs as on IBM devices.
inline Lattice heavy_hex(std::size_t rows, std::size_t cols) {
    if (rows == 0 || cols == 0) {
        throw ArgumentError("heavy_hex needs rows >= 1 and cols >= 1");
    }
    // Honeycomb vertex (line, x) lives at doubled coordinate (2x, 2*line).
    std::set<std::pair<std::size_t, std::size_t>> vertices;
    std::set<std::pair<std::pair<std::size_t, std::size_t>, std::pair<std::size_t, std::size_t>>> hc_edges;
    for (std::size_t r = 0; r < rows; ++r) {
        std::size_t off = r % 2;
        for (std::size_t c = 0; c < cols; ++c) {
            std::size_t x0 = 2 * c + off;
            for (std::size_t line : {r, r + 1}) {
                for (std::size_t x = x0; x <= x0 + 2; ++x) {
                    vertices.insert({line, x});
                }
                hc_edges.insert({{line, x0}, {line, x0 + 1}});
                hc_edges.insert({{line, x0 + 1}, {line, x0 + 2}});
            }
            hc_edges.insert({{r, x0}, {r + 1, x0}});
            hc_edges.insert({{r, x0 + 2}, {r + 1, x0 + 2}});
        }
    }
    // Doubled coordinates (y, x) for every node: honeycomb vertices and edge midpoints.
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> index;
    for (auto [line, x] : vertices) {
        index[{2 * line, 2 * x}] = 0;
    }
    for (auto [a, b] : hc_edges) {
        index[{a.first + b.first, a.second + b.second}] = 0;
    }
    Lattice lat;
    for (auto &[yx, id] : index) {
        id = lat.num_nodes++;
        lat.coords.emplace_back(static_cast<double>(yx.second) / 2.0, static_cast<double>(yx.first) / 2.0);
    }
    for (auto [a, b] : hc_edges) {
        std::size_t va = index.at({2 * a.first, 2 * a.second});
        std::size_t vb = index.at({2 * b.first, 2 * b.second});
        std::size_t mid = index.at({a.first + b.first, a.second + b.second});
        lat.edges.emplace_back(std::min(va, mid), std::max(va, mid));
        lat.edges.emplace_back(std::min(vb, mid), std::max(vb, mid));
    }
    std::sort(lat.edges.begin(), lat.edges.end());
    return lat;
}

/// Parses an edge list: one "u v" pair per line, '#' comments, and an optional
/// "n <count>" header that fixes the node count.
inline Lattice parse_lattice(std::istream &in) {
    Lattice lat;
    std::set<Edge> seen;
    std::size_t max_index = 0;
    bool any = false;
    bool explicit_n = false;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) {
            line.resize(hash);
        }
        std::istringstream ls(line);
        std::string first;
        if (!(ls >> first)) {
            continue;
        }
        if (first == "n") {
            long long count = -1;
            std::string extra;
            if (!(ls >> count) || count < 0 || (ls >> extra)) {
                throw ParseError("malformed node-count header at line " + std::to_string(line_no), line_no);
            }
            lat.num_nodes = static_cast<std::size_t>(count);
            explicit_n = true;
            continue;
        }
        long long u = -1;
        long long v = -1;
        std::string extra;
        std::istringstream pair_stream(line);
        if (!(pair_stream >> u >> v) || (pair_stream >> extra) || u < 0 || v < 0) {
            throw ParseError("malformed edge at line " + std::to_string(line_no), line_no);
        }
        if (u == v) {
            throw ParseError("self-loop at line " + std::to_string(line_no), line_no);
        }
        Edge e{static_cast<std::size_t>(std::min(u, v)), static_cast<std::size_t>(std::max(u, v))};
        if (!seen.insert(e).second) {
            throw ParseError("duplicate edge at line " + std::to_string(line_no), line_no);
        }
        lat.edges.push_back(e);
        max_index = std::max(max_index, e.second);
        any = true;
    }
    if (!explicit_n) {
        lat.num_nodes = any ? max_index + 1 : 0;
    } else if (any && max_index >= lat.num_nodes) {
        throw ParseError("edge endpoint exceeds declared node count", line_no);
    }
    return lat;
}

inline Lattice load_lattice(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw ArgumentError("cannot open lattice file '" + path + "'");
    }
    return parse_lattice(in);
}

/// Induced subgraph on the first `count` nodes reached by BFS from `seeds`,
/// renumbered in ascending order of original index.
inline Lattice fragment(const Lattice &lat, const std::vector<std::size_t> &seeds, std::size_t count) {
    auto order = lat.bfs_order(seeds);
    if (order.size() < count) {
        throw ArgumentError("component of the seed nodes has fewer than " + std::to_string(count) + " nodes");
    }
    order.resize(count);
    std::sort(order.begin(), order.end());
    std::map<std::size_t, std::size_t> remap;
    Lattice out;
    for (std::size_t u : order) {
        remap[u] = out.num_nodes++;
        if (!lat.coords.empty()) {
            out.coords.push_back(lat.coords[u]);
        }
    }
    for (auto [u, v] : lat.edges) {
        auto iu = remap.find(u);
        auto iv = remap.find(v);
        if (iu != remap.end() && iv != remap.end()) {
            out.edges.emplace_back(iu->second, iv->second);
        }
    }
    std::sort(out.edges.begin(), out.edges.end());
    return out;
}

inline Lattice fragment(const Lattice &lat, std::size_t center, std::size_t count) {
    return fragment(lat, std::vector<std::size_t>{center}, count);
}

/// Fragment grown outward from one shortest cycle, so it contains a loop.
inline Lattice loop_fragment(const Lattice &lat, std::size_t count) {
    auto cycle = lat.shortest_cycle();
    if (cycle.empty() || cycle.size() > count) {
        throw ArgumentError("lattice has no cycle of at most " + std::to_string(count) + " nodes");
    }
    return fragment(lat, cycle, count);
}

}  // namespace hexsim
