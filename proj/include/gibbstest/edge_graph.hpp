#ifndef GIBBSTEST_EDGE_GRAPH_HPP
#define GIBBSTEST_EDGE_GRAPH_HPP

#include <Eigen/Dense>
#include <map>
#include <memory>
#include <span>
#include <unordered_map>
#include <vector>

#include "gibbstest/subshift.hpp"

namespace gibbstest {

/// Observable given as a table on admissible words of one fixed length.
using ObservableTable = std::map<Word, double>;

/// The recoding of a subshift at range K: nodes are the admissible
/// (K-1)-words ("contexts"), directed edges are the admissible K-words,
/// going from the word's prefix context to its suffix context. Immutable;
/// shared between models, graphs and tilted families built on it.
class EdgeLayout {
 public:
  struct Edge {
    int from;
    int to;
    int last_symbol;  // edge word = contexts[from] followed by last_symbol
  };

  static std::shared_ptr<const EdgeLayout> build(
      const SubshiftSpec& spec, int range,
      std::uint64_t budget = kDefaultEnumerationBudget);

  const SubshiftSpec& spec() const { return spec_; }
  int range() const { return range_; }
  int context_length() const { return range_ - 1; }

  const std::vector<Word>& contexts() const { return contexts_; }
  const std::vector<Edge>& edges() const { return edges_; }
  int context_count() const { return static_cast<int>(contexts_.size()); }
  int edge_count() const { return static_cast<int>(edges_.size()); }

  /// Index of an admissible context word, -1 otherwise.
  int context_index(std::span<const int> symbols) const;
  /// Index of an admissible K-word edge, -1 otherwise.
  int edge_index(std::span<const int> symbols) const;

  Word edge_word(int e) const;

 private:
  EdgeLayout(SubshiftSpec spec, int range);

  std::uint64_t encode(std::span<const int> symbols) const;

  SubshiftSpec spec_;
  int range_;
  std::vector<Word> contexts_;
  std::vector<Edge> edges_;
  std::unordered_map<std::uint64_t, int> context_by_code_;
  std::unordered_map<std::uint64_t, int> edge_by_code_;
};

/// A real weight on every edge of an EdgeLayout. Path sums along admissible
/// words reproduce Birkhoff sums of the lifted observable up to boundary
/// terms.
struct WeightedEdgeGraph {
  std::shared_ptr<const EdgeLayout> layout;
  Eigen::VectorXd weights;  // indexed like layout->edges()
};

/// Recodes a k-range observable onto the edges of the range-max(k,2)
/// layout. Throws MissingValue when an admissible k-word is absent from
/// the table.
WeightedEdgeGraph lift_observable(const SubshiftSpec& spec,
                                  const ObservableTable& values,
                                  std::uint64_t budget =
                                      kDefaultEnumerationBudget);

struct MeanCycle {
  double mean = 0.0;
  std::vector<int> nodes;  // cycle as context indices, starting at the
                           // smallest node; nodes[i] -> nodes[i+1] -> ...
                           // -> nodes[0]
};

/// Maximum cycle mean over all directed cycles (Karp's dynamic program),
/// with a deterministic witness: the lexicographically smallest critical
/// cycle. Throws NotStronglyConnected.
MeanCycle max_mean_cycle(const WeightedEdgeGraph& graph);
MeanCycle min_mean_cycle(const WeightedEdgeGraph& graph);

bool is_strongly_connected(const EdgeLayout& layout);

}  // namespace gibbstest

#endif  // GIBBSTEST_EDGE_GRAPH_HPP
