#pragma once

#include <algorithm>
#include <set>
#include <vector>

#include "sppfix/system.hpp"

namespace sppfix {

// Strongly connected components of the dependence relation
// i -> k  iff  f_i contains X_k, with the condensation bookkeeping the
// decomposed solver needs. Depth of an SCC is the longest condensation path
// from a top SCC (one nothing depends on) down to it; bottom SCCs carry the
// largest depth and are solved first.
struct Decomposition {
  std::vector<int> scc_of;                  // variable index -> SCC id
  std::vector<std::vector<int>> sccs;       // members, ascending
  std::vector<bool> trivial;                // single component, no self-loop
  std::vector<int> depth;                   // per SCC
  std::vector<std::pair<int, int>> edges;   // condensation: (S, T), S depends on T
  int height = 0;                           // max depth
  int width = 0;                            // max #SCCs at one depth
  std::vector<int> processing_order;        // SCC ids, deepest first

  std::vector<int> sccs_at_depth(int t) const {
    std::vector<int> out;
    for (size_t s = 0; s < sccs.size(); ++s)
      if (depth[s] == t) out.push_back(static_cast<int>(s));
    return out;
  }
};

namespace detail {

// Iterative Tarjan; emits SCCs with deterministic ids (by smallest member).
inline std::vector<std::vector<int>> tarjan(const std::vector<std::vector<int>>& adj) {
  int n = static_cast<int>(adj.size());
  std::vector<int> index(n, -1), low(n, 0), stack;
  std::vector<bool> on_stack(n, false);
  std::vector<std::vector<int>> sccs;
  int counter = 0;

  struct Frame {
    int v;
    size_t edge;
  };
  for (int root = 0; root < n; ++root) {
    if (index[root] != -1) continue;
    std::vector<Frame> frames{{root, 0}};
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!frames.empty()) {
      Frame& f = frames.back();
      if (f.edge < adj[f.v].size()) {
        int w = adj[f.v][f.edge++];
        if (index[w] == -1) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          frames.push_back({w, 0});
        } else if (on_stack[w]) {
          low[f.v] = std::min(low[f.v], index[w]);
        }
      } else {
        if (low[f.v] == index[f.v]) {
          std::vector<int> scc;
          while (true) {
            int w = stack.back();
            stack.pop_back();
            on_stack[w] = false;
            scc.push_back(w);
            if (w == f.v) break;
          }
          std::sort(scc.begin(), scc.end());
          sccs.push_back(std::move(scc));
        }
        int v = f.v;
        frames.pop_back();
        if (!frames.empty()) low[frames.back().v] = std::min(low[frames.back().v], low[v]);
      }
    }
  }
  std::sort(sccs.begin(), sccs.end());
  return sccs;
}

}  // namespace detail

inline Decomposition scc_decompose(const SppSystem& sys) {
  int n = static_cast<int>(sys.size());
  std::vector<std::vector<int>> adj(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k)
      if (sys.equations[static_cast<size_t>(i)].contains(k)) adj[static_cast<size_t>(i)].push_back(k);

  Decomposition d;
  d.sccs = detail::tarjan(adj);
  d.scc_of.assign(static_cast<size_t>(n), -1);
  for (size_t s = 0; s < d.sccs.size(); ++s)
    for (int v : d.sccs[s]) d.scc_of[static_cast<size_t>(v)] = static_cast<int>(s);

  d.trivial.resize(d.sccs.size());
  for (size_t s = 0; s < d.sccs.size(); ++s) {
    const auto& members = d.sccs[s];
    d.trivial[s] =
        members.size() == 1 && !sys.equations[static_cast<size_t>(members[0])].contains(members[0]);
  }

  std::set<std::pair<int, int>> edge_set;
  for (int i = 0; i < n; ++i)
    for (int k : adj[static_cast<size_t>(i)]) {
      int s = d.scc_of[static_cast<size_t>(i)], t = d.scc_of[static_cast<size_t>(k)];
      if (s != t) edge_set.insert({s, t});
    }
  d.edges.assign(edge_set.begin(), edge_set.end());

  // depth(T) = 1 + max depth over S that depend directly on T; 0 at the top.
  d.depth.assign(d.sccs.size(), 0);
  bool changed = true;
  while (changed) {  // condensation is acyclic, so this settles in <= #SCC rounds
    changed = false;
    for (auto& [s, t] : d.edges)
      if (d.depth[static_cast<size_t>(t)] < d.depth[static_cast<size_t>(s)] + 1) {
        d.depth[static_cast<size_t>(t)] = d.depth[static_cast<size_t>(s)] + 1;
        changed = true;
      }
  }
  for (int t : d.depth) d.height = std::max(d.height, t);
  for (int t = 0; t <= d.height; ++t)
    d.width = std::max(d.width, static_cast<int>(d.sccs_at_depth(t).size()));

  for (int t = d.height; t >= 0; --t)
    for (int s : d.sccs_at_depth(t)) d.processing_order.push_back(s);
  return d;
}

inline bool is_strongly_connected(const SppSystem& sys) {
  if (sys.size() == 0) return false;
  auto d = scc_decompose(sys);
  return d.sccs.size() == 1 && !d.trivial[0];
}

}  // namespace sppfix
