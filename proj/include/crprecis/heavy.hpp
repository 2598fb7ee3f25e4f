#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "crprecis/dyadic.hpp"
#include "crprecis/sketch.hpp"

namespace crprecis {

/// Items with f >= m/s must be reported; items with f < (1 - epsilon) m/s
/// must not be.
struct FrequentQuery {
  std::uint64_t s = 1;
  double epsilon = 0.5;

  void validate() const;
  /// ceil(s / epsilon): the point-estimator parameter for each level.
  std::uint64_t estimator_parameter() const;
  /// floor(s / (1 - epsilon)): most intervals that can survive at one level.
  std::uint64_t candidate_bound() const;
};

/// Level sketches for frequent_items: levels 0..floor(log2(N/s)), each with
/// height ceil(s/epsilon).
DyadicLevels frequent_levels(std::uint64_t n, const FrequentQuery& q);

struct FrequentResult {
  std::vector<item_t> items;
  unsigned start_level = 0;
  /// survivors[l]: intervals at level l whose estimate reached m/s.
  std::vector<std::size_t> survivors;
  std::size_t intervals_examined = 0;
};

/// Top-down search over the dyadic tree keeping intervals with estimate
/// >= m/s. Returns nothing for an empty stream; throws std::domain_error
/// for negative mass or levels too coarse for (s, epsilon).
FrequentResult frequent_items(const DyadicLevels& dl, const FrequentQuery& q);

/// Misra-Gries summary with a fixed number of counters for insert-only
/// streams. Every item with frequency > m / (counters + 1) stays resident.
class MisraGries {
 public:
  explicit MisraGries(std::size_t counters);

  /// Throws std::invalid_argument for non-positive deltas.
  void update(item_t item, count_t delta);
  std::vector<item_t> candidates() const;

 private:
  std::size_t capacity_;
  std::vector<std::pair<item_t, count_t>> slots_;
};

using node_id = std::uint32_t;

/// Rooted tree whose leaves are exactly the domain items 0..N-1.
class Hierarchy {
 public:
  /// Edges are (child, parent) names. Leaves (nodes without children) must
  /// be named by their domain index and cover [0, N) exactly. Throws
  /// std::invalid_argument otherwise.
  static Hierarchy from_edges(std::span<const std::pair<std::string, std::string>> edges, std::uint64_t n);

  /// One "child parent" edge per line; blank and '#' lines ignored.
  static Hierarchy parse(std::istream& in, std::uint64_t n);

  /// Complete fanout-ary tree over the domain; internal nodes are named
  /// "d<height above the leaves>:<first item covered>".
  static Hierarchy regular(std::uint64_t n, std::uint64_t fanout);

  std::uint64_t domain_size() const { return leaf_of_item_.size(); }
  std::size_t node_count() const { return names_.size(); }
  unsigned height() const { return static_cast<unsigned>(by_depth_.size() - 1); }
  node_id root() const { return root_; }
  node_id leaf(item_t x) const { return leaf_of_item_.at(x); }

  const std::string& name(node_id v) const { return names_.at(v); }
  std::optional<node_id> parent(node_id v) const;
  std::span<const node_id> children(node_id v) const { return children_.at(v); }
  unsigned depth(node_id v) const { return depth_.at(v); }
  std::span<const node_id> nodes_at_depth(unsigned d) const { return by_depth_.at(d); }
  std::size_t index_in_depth(node_id v) const { return index_in_depth_.at(v); }
  bool is_leaf(node_id v) const { return children_.at(v).empty(); }
  /// True when a is a proper ancestor of b.
  bool is_ancestor(node_id a, node_id b) const;

 private:
  Hierarchy() = default;
  void finish(std::uint64_t n);

  std::vector<std::string> names_;
  std::vector<std::optional<node_id>> parent_;
  std::vector<std::vector<node_id>> children_;
  std::vector<unsigned> depth_;
  std::vector<std::vector<node_id>> by_depth_;
  std::vector<std::size_t> index_in_depth_;
  std::vector<node_id> leaf_of_item_;
  node_id root_ = 0;
};

/// One strict CR-precis per hierarchy depth; the depth-d sketch is fed the
/// ancestor of each updated leaf at depth d (leaves shallower than d are not
/// projected onto it).
class HierarchySketch {
 public:
  HierarchySketch(Hierarchy hierarchy, std::uint64_t s_prime);

  /// Height ceil(s^2 h / epsilon) at every depth.
  static HierarchySketch for_hhh(Hierarchy hierarchy, const FrequentQuery& q);

  const Hierarchy& hierarchy() const { return hierarchy_; }
  const CrPrecis& level(unsigned depth) const { return levels_.at(depth); }
  count_t net_mass() const { return levels_.front().net_mass(); }
  std::uint64_t s_prime() const { return s_prime_; }

  void update(const StreamUpdate& u);
  count_t node_estimate(node_id v) const;

 private:
  Hierarchy hierarchy_;
  std::uint64_t s_prime_;
  std::vector<CrPrecis> levels_;
  std::vector<std::vector<std::uint64_t>> paths_;  // per item, index at each depth
};

struct HhhEntry {
  node_id node = 0;
  count_t estimate = 0;
  /// Estimate minus the estimates of the nearest declared descendants.
  count_t discounted = 0;
};

struct HhhReport {
  std::vector<HhhEntry> nodes;
};

/// Bottom-up traversal: a node is declared when its estimate, discounted by
/// the estimates of its nearest declared descendants, reaches m/s.
HhhReport hhh(const HierarchySketch& sketch, const FrequentQuery& q);

}  // namespace crprecis
