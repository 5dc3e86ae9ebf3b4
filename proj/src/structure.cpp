#include "qap/structure.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace qap {

void validate(const SigmaConfig& cfg) {
  if (cfg.n < 5) throw std::invalid_argument("sigma config needs n >= 5");
  if (!cfg.base.is_valid() || cfg.base.n() != cfg.n)
    throw std::invalid_argument("sigma config: invalid base permutation");
  std::set<int> ks{cfg.k1, cfg.k2, cfg.k3};
  if (ks.size() != 3) throw std::invalid_argument("sigma config: k1,k2,k3 must be distinct");
  if (cfg.x == cfg.y) throw std::invalid_argument("sigma config: x and y must differ");
  for (int v : {cfg.k1, cfg.k2, cfg.k3, cfg.x, cfg.y})
    if (v < 0 || v >= cfg.n) throw std::invalid_argument("sigma config: index out of range");
  if (ks.count(cfg.x) || ks.count(cfg.y))
    throw std::invalid_argument("sigma config: {x,y} must avoid {k1,k2,k3}");
}

std::vector<std::pair<int, Permutation>> build_sigma_set(const SigmaConfig& cfg) {
  validate(cfg);
  int a = cfg.base(cfg.k1), b = cfg.base(cfg.k2), c = cfg.base(cfg.k3);
  const int arrangements[6][3] = {
      {a, b, c}, {a, c, b}, {b, a, c}, {b, c, a}, {c, a, b}, {c, b, a}};
  std::vector<std::pair<int, Permutation>> out;
  out.reserve(12);
  for (const auto& arr : arrangements) {
    Permutation s = cfg.base;
    s.image[static_cast<std::size_t>(cfg.k1)] = arr[0];
    s.image[static_cast<std::size_t>(cfg.k2)] = arr[1];
    s.image[static_cast<std::size_t>(cfg.k3)] = arr[2];
    out.emplace_back(parity(s), s);
  }
  for (int t = 0; t < 6; ++t) {
    Permutation s = apply_transposition(out[static_cast<std::size_t>(t)].second, cfg.x, cfg.y);
    out.emplace_back(parity(s), s);
  }
  return out;
}

ZeroIdentityResult verify_zero_identity(const SigmaConfig& cfg) {
  auto sigmas = build_sigma_set(cfg);
  std::size_t side = static_cast<std::size_t>(cfg.n) * cfg.n;
  ZeroIdentityResult res;
  res.residual.assign(side * side, 0);
  for (const auto& [sign, sigma] : sigmas) {
    std::vector<int> cells(static_cast<std::size_t>(cfg.n));
    for (int i = 0; i < cfg.n; ++i)
      cells[static_cast<std::size_t>(i)] = cell_index(cfg.n, i, sigma(i));
    for (int i = 0; i < cfg.n; ++i)
      for (int k = 0; k < cfg.n; ++k)
        res.residual[static_cast<std::size_t>(cells[static_cast<std::size_t>(i)]) * side +
                     static_cast<std::size_t>(cells[static_cast<std::size_t>(k)])] += sign;
  }
  res.zero = std::all_of(res.residual.begin(), res.residual.end(),
                         [](int v) { return v == 0; });
  return res;
}

namespace {

bool group_accepts(const ConstraintGroup& g, const Permutation& p) {
  for (auto [pos, img] : g.fixed)
    if (p(pos) != img) return false;
  for (const auto& [pos, bad] : g.forbidden)
    if (std::find(bad.begin(), bad.end(), p(pos)) != bad.end()) return false;
  return true;
}

void validate_group_indices(const TranspositionGraphSpec& spec) {
  for (const auto& g : spec.groups) {
    std::set<int> positions;
    for (auto [pos, img] : g.fixed) {
      if (pos < 0 || pos >= spec.n || img < 0 || img >= spec.n)
        throw std::invalid_argument("graph spec: fixed pin out of range");
      if (!positions.insert(pos).second)
        throw std::invalid_argument("graph spec: position pinned twice");
    }
    std::set<int> fixed_imgs;
    for (auto [pos, img] : g.fixed)
      if (!fixed_imgs.insert(img).second)
        throw std::invalid_argument("graph spec: image pinned twice");
    for (const auto& [pos, bad] : g.forbidden) {
      if (pos < 0 || pos >= spec.n)
        throw std::invalid_argument("graph spec: forbidden position out of range");
      if (!positions.insert(pos).second)
        throw std::invalid_argument("graph spec: position constrained twice");
      for (int v : bad)
        if (v < 0 || v >= spec.n)
          throw std::invalid_argument("graph spec: forbidden image out of range");
    }
  }
}

// Side conditions of the two connectivity lemmas, validated on the single
// constraint group.
void validate_mode(const TranspositionGraphSpec& spec) {
  if (spec.mode == GraphMode::plain) return;
  if (spec.groups.size() != 1)
    throw std::invalid_argument("lemma-mode graph spec needs exactly one constraint group");
  const auto& g = spec.groups.front();
  int a = static_cast<int>(g.fixed.size());
  int b = static_cast<int>(g.forbidden.size());
  std::set<int> fixed_imgs;
  for (auto [pos, img] : g.fixed) fixed_imgs.insert(img);

  if (spec.mode == GraphMode::lemma1) {
    std::set<int> forb_union;
    for (const auto& [pos, bad] : g.forbidden)
      for (int v : bad)
        if (!fixed_imgs.count(v)) forb_union.insert(v);  // pinned-away values are vacuous
    if (static_cast<int>(forb_union.size()) > spec.n - a - b)
      throw std::invalid_argument(
          "lemma1 side condition violated: |union of forbidden sets| > n - a - b");
  } else {
    if (a + b >= spec.n)
      throw std::invalid_argument("lemma2 side condition violated: a + b >= n");
    std::set<int> singles;
    for (const auto& [pos, bad] : g.forbidden) {
      if (bad.size() != 1)
        throw std::invalid_argument("lemma2 expects singleton forbidden sets");
      if (fixed_imgs.count(bad.front()))
        throw std::invalid_argument("lemma2 forbidden value collides with a fixed image");
      if (!singles.insert(bad.front()).second)
        throw std::invalid_argument("lemma2 forbidden values must be distinct");
    }
  }
}

// The lemma1 argument relabels values so the forbidden union sits past the
// first a+b value slots; the relabeled graph is isomorphic to the raw one.
std::vector<int> lemma1_relabel(const TranspositionGraphSpec& spec) {
  const auto& g = spec.groups.front();
  std::set<int> fixed_imgs;
  for (auto [pos, img] : g.fixed) fixed_imgs.insert(img);
  std::set<int> forb_union;
  for (const auto& [pos, bad] : g.forbidden)
    for (int v : bad)
      if (!fixed_imgs.count(v)) forb_union.insert(v);

  std::vector<int> free_vals;
  for (int v = 0; v < spec.n; ++v)
    if (!fixed_imgs.count(v)) free_vals.push_back(v);
  std::vector<int> targets = free_vals;  // ascending slots among free values
  std::vector<int> relabel(static_cast<std::size_t>(spec.n));
  for (int v = 0; v < spec.n; ++v) relabel[static_cast<std::size_t>(v)] = v;

  std::size_t tail = targets.size();
  for (auto it = forb_union.rbegin(); it != forb_union.rend(); ++it)
    relabel[static_cast<std::size_t>(*it)] = targets[--tail];
  std::size_t head = 0;
  for (int v : free_vals) {
    if (forb_union.count(v)) continue;
    relabel[static_cast<std::size_t>(v)] = targets[head++];
  }
  return relabel;
}

}  // namespace

PermGraph build_transposition_graph(const TranspositionGraphSpec& spec) {
  if (spec.n < 1 || spec.n > 8)
    throw std::invalid_argument("transposition graph guarded to 1 <= n <= 8");
  if (spec.groups.empty()) throw std::invalid_argument("graph spec has no constraint groups");
  validate_group_indices(spec);
  validate_mode(spec);

  PermGraph graph;
  graph.n = spec.n;
  graph.value_relabel.resize(static_cast<std::size_t>(spec.n));
  for (int v = 0; v < spec.n; ++v) graph.value_relabel[static_cast<std::size_t>(v)] = v;

  std::vector<ConstraintGroup> groups = spec.groups;
  if (spec.mode == GraphMode::lemma1) {
    graph.value_relabel = lemma1_relabel(spec);
    for (auto& g : groups) {
      for (auto& [pos, img] : g.fixed) img = graph.value_relabel[static_cast<std::size_t>(img)];
      for (auto& [pos, bad] : g.forbidden) {
        for (auto& v : bad) v = graph.value_relabel[static_cast<std::size_t>(v)];
        std::sort(bad.begin(), bad.end());
      }
    }
  }

  for_each_permutation(spec.n, [&](const Permutation& p) {
    for (const auto& g : groups)
      if (group_accepts(g, p)) {
        graph.nodes.push_back(p);
        return;
      }
  });

  std::map<Permutation, int> index;
  for (std::size_t i = 0; i < graph.nodes.size(); ++i)
    index[graph.nodes[i]] = static_cast<int>(i);

  graph.adj.assign(graph.nodes.size(), {});
  for (std::size_t i = 0; i < graph.nodes.size(); ++i) {
    for (int x = 0; x < spec.n; ++x)
      for (int y = x + 1; y < spec.n; ++y) {
        Permutation q = apply_transposition(graph.nodes[i], x, y);
        auto it = index.find(q);
        if (it == index.end()) continue;
        if (it->second > static_cast<int>(i)) {
          graph.adj[i].push_back(it->second);
          graph.adj[static_cast<std::size_t>(it->second)].push_back(static_cast<int>(i));
          ++graph.edge_count;
        }
      }
  }
  return graph;
}

Connectivity is_connected(const PermGraph& g) {
  if (g.nodes.empty()) return Connectivity{true, 0};
  int components = 0;
  std::vector<bool> seen(g.nodes.size(), false);
  std::vector<int> stack;
  for (std::size_t s = 0; s < g.nodes.size(); ++s) {
    if (seen[s]) continue;
    ++components;
    stack.push_back(static_cast<int>(s));
    seen[s] = true;
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      for (int v : g.adj[static_cast<std::size_t>(u)])
        if (!seen[static_cast<std::size_t>(v)]) {
          seen[static_cast<std::size_t>(v)] = true;
          stack.push_back(v);
        }
    }
  }
  return Connectivity{components == 1, components};
}

std::vector<int> bfs_distances(const PermGraph& g, int start) {
  std::vector<int> dist(g.nodes.size(), -1);
  if (start < 0 || static_cast<std::size_t>(start) >= g.nodes.size())
    throw std::invalid_argument("bfs_distances: bad start node");
  std::vector<int> queue{start};
  dist[static_cast<std::size_t>(start)] = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    int u = queue[head];
    for (int v : g.adj[static_cast<std::size_t>(u)])
      if (dist[static_cast<std::size_t>(v)] < 0) {
        dist[static_cast<std::size_t>(v)] = dist[static_cast<std::size_t>(u)] + 1;
        queue.push_back(v);
      }
  }
  return dist;
}

int find_node(const PermGraph& g, const Permutation& p) {
  auto it = std::lower_bound(g.nodes.begin(), g.nodes.end(), p);
  if (it == g.nodes.end() || !(*it == p)) return -1;
  return static_cast<int>(it - g.nodes.begin());
}

}  // namespace qap
