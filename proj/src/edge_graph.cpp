#include "gibbstest/edge_graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gibbstest/errors.hpp"

namespace gibbstest {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

EdgeLayout::EdgeLayout(SubshiftSpec spec, int range)
    : spec_(std::move(spec)), range_(range) {}

std::uint64_t EdgeLayout::encode(std::span<const int> symbols) const {
  std::uint64_t code = 0;
  for (int s : symbols) {
    code = code * static_cast<std::uint64_t>(spec_.alphabet_size()) +
           static_cast<std::uint64_t>(s);
  }
  return code;
}

std::shared_ptr<const EdgeLayout> EdgeLayout::build(const SubshiftSpec& spec,
                                                    int range,
                                                    std::uint64_t budget) {
  if (range < 1) throw ConfigError("potential range must be >= 1");
  const int effective = std::max(range, 2);
  // Guard the base-d word encoding and the context enumeration.
  const double bits = effective * std::log2(double(spec.alphabet_size()));
  if (bits > 62.0) throw ConfigError("range too large for word encoding");
  check_enumeration_budget(spec, effective - 1, budget);

  auto layout =
      std::shared_ptr<EdgeLayout>(new EdgeLayout(spec, effective));
  for_each_cylinder(spec, effective - 2, budget, [&](const Word& w) {
    layout->context_by_code_[layout->encode(w.symbols)] =
        static_cast<int>(layout->contexts_.size());
    layout->contexts_.push_back(w);
  });

  for_each_cylinder(spec, effective - 1, budget, [&](const Word& w) {
    std::span<const int> s(w.symbols);
    const int from = layout->context_index(s.first(effective - 1));
    const int to = layout->context_index(s.last(effective - 1));
    layout->edge_by_code_[layout->encode(s)] =
        static_cast<int>(layout->edges_.size());
    layout->edges_.push_back(Edge{from, to, w.symbols.back()});
  });
  return layout;
}

int EdgeLayout::context_index(std::span<const int> symbols) const {
  if (static_cast<int>(symbols.size()) != context_length()) return -1;
  const auto it = context_by_code_.find(encode(symbols));
  return it == context_by_code_.end() ? -1 : it->second;
}

int EdgeLayout::edge_index(std::span<const int> symbols) const {
  if (static_cast<int>(symbols.size()) != range_) return -1;
  const auto it = edge_by_code_.find(encode(symbols));
  return it == edge_by_code_.end() ? -1 : it->second;
}

Word EdgeLayout::edge_word(int e) const {
  Word w = contexts_[edges_[e].from];
  w.symbols.push_back(edges_[e].last_symbol);
  return w;
}

WeightedEdgeGraph lift_observable(const SubshiftSpec& spec,
                                  const ObservableTable& values,
                                  std::uint64_t budget) {
  if (values.empty()) throw MissingValueError("observable table is empty");
  const int k = values.begin()->first.length();
  for (const auto& [word, value] : values) {
    (void)value;
    if (word.length() != k) {
      throw ConfigError("observable table mixes word lengths");
    }
  }
  auto layout = EdgeLayout::build(spec, k, budget);

  WeightedEdgeGraph graph{layout, Eigen::VectorXd::Zero(layout->edge_count())};
  for (int e = 0; e < layout->edge_count(); ++e) {
    Word w = layout->edge_word(e);
    w.symbols.resize(k);  // a k-range observable reads the first k symbols
    const auto it = values.find(w);
    if (it == values.end()) {
      throw MissingValueError("observable table has no value for admissible "
                              "word " +
                              w.str());
    }
    graph.weights[e] = it->second;
  }
  return graph;
}

bool is_strongly_connected(const EdgeLayout& layout) {
  const int n = layout.context_count();
  if (n == 0) return false;
  std::vector<std::vector<int>> fwd(n), rev(n);
  for (const auto& e : layout.edges()) {
    fwd[e.from].push_back(e.to);
    rev[e.to].push_back(e.from);
  }
  auto reaches_all = [&](const std::vector<std::vector<int>>& adj) {
    std::vector<char> seen(n, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int count = 1;
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      for (int w : adj[v]) {
        if (!seen[w]) {
          seen[w] = 1;
          ++count;
          stack.push_back(w);
        }
      }
    }
    return count == n;
  };
  return reaches_all(fwd) && reaches_all(rev);
}

namespace {

struct CycleSearch {
  const std::vector<std::vector<std::pair<int, int>>>& tight;  // (to, edge)
  std::vector<char> on_path;
  std::vector<int> path;
  int start = 0;
  long steps = 0;
  long budget = 1 << 20;
  std::vector<int> found;

  bool dfs(int v) {
    if (++steps > budget) return false;
    for (const auto& [w, e] : tight[v]) {
      (void)e;
      if (w == start && !path.empty()) {
        found = path;
        return true;
      }
      if (w <= start || on_path[w]) continue;
      on_path[w] = 1;
      path.push_back(w);
      if (dfs(w)) return true;
      path.pop_back();
      on_path[w] = 0;
    }
    return false;
  }
};

/// Karp's DP for the maximum cycle mean, plus witness extraction. The
/// witness is the lexicographically smallest cycle of the tight subgraph
/// of a max-plus potential anchored at a critical vertex found on the
/// Karp back-walk.
MeanCycle karp_max_mean(const EdgeLayout& layout,
                        const Eigen::VectorXd& weights) {
  if (!is_strongly_connected(layout)) {
    throw NotStronglyConnectedError(
        "mean-cycle analysis requires a strongly connected edge graph");
  }
  const int n = layout.context_count();
  const auto& edges = layout.edges();
  const int m = layout.edge_count();

  // D[k][v]: max weight of a k-edge walk 0 -> v; parent edge for backtrace.
  std::vector<std::vector<double>> dist(n + 1,
                                        std::vector<double>(n, kNegInf));
  std::vector<std::vector<int>> parent(n + 1, std::vector<int>(n, -1));
  dist[0][0] = 0.0;
  for (int k = 1; k <= n; ++k) {
    for (int e = 0; e < m; ++e) {
      const auto& edge = edges[e];
      const double base = dist[k - 1][edge.from];
      if (base == kNegInf) continue;
      const double w = base + weights[e];
      if (w > dist[k][edge.to]) {
        dist[k][edge.to] = w;
        parent[k][edge.to] = e;
      }
    }
  }

  double best = kNegInf;
  int best_v = -1;
  for (int v = 0; v < n; ++v) {
    if (dist[n][v] == kNegInf) continue;
    double inner = std::numeric_limits<double>::infinity();
    for (int k = 0; k < n; ++k) {
      if (dist[k][v] == kNegInf) continue;
      inner = std::min(inner, (dist[n][v] - dist[k][v]) / (n - k));
    }
    if (inner > best) {
      best = inner;
      best_v = v;
    }
  }
  const double mu = best;

  // Back-walk the optimal n-edge path ending at best_v; a critical cycle
  // appears among the vertex repeats.
  std::vector<int> walk(n + 1);
  std::vector<int> walk_edges(n);
  walk[n] = best_v;
  for (int k = n; k >= 1; --k) {
    const int e = parent[k][walk[k]];
    walk_edges[k - 1] = e;
    walk[k - 1] = edges[e].from;
  }
  const double tol = 1e-9 * (1.0 + std::abs(mu));
  std::vector<int> critical_cycle;
  {
    std::vector<int> last_seen(n, -1);
    double best_gap = std::numeric_limits<double>::infinity();
    for (int k = 0; k <= n; ++k) {
      const int v = walk[k];
      if (last_seen[v] >= 0) {
        const int i = last_seen[v];
        double total = 0.0;
        for (int j = i; j < k; ++j) total += weights[walk_edges[j]];
        const double gap = std::abs(total / (k - i) - mu);
        if (gap < best_gap) {
          best_gap = gap;
          critical_cycle.assign(walk.begin() + i, walk.begin() + k);
        }
      }
      last_seen[v] = k;
    }
    if (critical_cycle.empty() || best_gap > tol) {
      throw ConvergenceFailureError(
          "failed to extract a critical cycle from the Karp table");
    }
  }

  // Potential h from the critical vertex; cycles made of tight edges have
  // mean exactly mu, so the lexicographic search below stays critical.
  const int anchor =
      *std::min_element(critical_cycle.begin(), critical_cycle.end());
  std::vector<double> h(n, kNegInf);
  h[anchor] = 0.0;
  for (int k = 0; k < n; ++k) {
    bool changed = false;
    for (int e = 0; e < m; ++e) {
      const auto& edge = edges[e];
      if (h[edge.from] == kNegInf) continue;
      const double cand = h[edge.from] + weights[e] - mu;
      if (cand > h[edge.to] + 1e-15) {
        h[edge.to] = cand;
        changed = true;
      }
    }
    if (!changed) break;
  }

  std::vector<std::vector<std::pair<int, int>>> tight(n);
  for (int e = 0; e < m; ++e) {
    const auto& edge = edges[e];
    if (h[edge.from] == kNegInf || h[edge.to] == kNegInf) continue;
    if (h[edge.from] + weights[e] - mu >= h[edge.to] - tol) {
      tight[edge.from].push_back({edge.to, e});
    }
  }
  for (auto& succ : tight) std::sort(succ.begin(), succ.end());

  MeanCycle result;
  result.mean = mu;
  for (int s = 0; s < n; ++s) {
    CycleSearch search{tight, std::vector<char>(n, 0), {}, s, 0, 1 << 20, {}};
    search.path.push_back(s);
    search.on_path[s] = 1;
    if (search.dfs(s)) {
      result.nodes = search.found;
      return result;
    }
    if (search.steps > search.budget) break;  // fall back to the Karp cycle
  }
  // Deterministic fallback: the back-walk cycle rotated to its smallest
  // node.
  const auto min_it =
      std::min_element(critical_cycle.begin(), critical_cycle.end());
  std::rotate(critical_cycle.begin(), min_it, critical_cycle.end());
  result.nodes = critical_cycle;
  return result;
}

}  // namespace

MeanCycle max_mean_cycle(const WeightedEdgeGraph& graph) {
  return karp_max_mean(*graph.layout, graph.weights);
}

MeanCycle min_mean_cycle(const WeightedEdgeGraph& graph) {
  MeanCycle cycle = karp_max_mean(*graph.layout, -graph.weights);
  cycle.mean = -cycle.mean;
  return cycle;
}

}  // namespace gibbstest
