#include "crprecis/heavy.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

namespace crprecis {

void FrequentQuery::validate() const {
  if (s < 1) throw std::invalid_argument("frequency parameter s must be >= 1");
  if (!(epsilon > 0.0) || epsilon >= 1.0) throw std::invalid_argument("epsilon must lie in (0, 1)");
}

std::uint64_t FrequentQuery::estimator_parameter() const {
  return static_cast<std::uint64_t>(std::ceil(static_cast<double>(s) / epsilon - 1e-9));
}

std::uint64_t FrequentQuery::candidate_bound() const {
  return static_cast<std::uint64_t>(std::floor(static_cast<double>(s) / (1.0 - epsilon) + 1e-9));
}

namespace {

unsigned start_level(std::uint64_t padded, std::uint64_t s) {
  if (s >= padded) return 0;
  return static_cast<unsigned>(std::bit_width(padded / s) - 1);
}

}  // namespace

DyadicLevels frequent_levels(std::uint64_t n, const FrequentQuery& q) {
  q.validate();
  return DyadicLevels::with_height(n, std::max<std::uint64_t>(q.estimator_parameter(), 2),
                                   static_cast<int>(start_level(padded_domain(n), q.s)));
}

FrequentResult frequent_items(const DyadicLevels& dl, const FrequentQuery& q) {
  q.validate();
  FrequentResult result;
  result.start_level = start_level(dl.padded_size(), q.s);
  result.survivors.assign(result.start_level + 1, 0);
  if (dl.top_level() < result.start_level) {
    throw std::domain_error("frequent_items needs dyadic levels up to " + std::to_string(result.start_level));
  }
  const double allowed = q.epsilon / static_cast<double>(q.s);
  for (unsigned l = 0; l <= result.start_level; ++l) {
    if (dl.level_error_rate(l).value() > allowed) {
      throw std::domain_error("dyadic level " + std::to_string(l) + " is under-provisioned for (s, epsilon)");
    }
  }

  const count_t m = dl.net_mass();
  if (m < 0) throw std::domain_error("frequent_items needs non-negative mass");
  if (m == 0) return result;

  const auto s = static_cast<wide_t>(q.s);
  auto heavy = [&](const DyadicInterval& iv) {
    ++result.intervals_examined;
    return static_cast<wide_t>(dl.interval_estimate(iv)) * s >= m;
  };

  std::vector<DyadicInterval> frontier;
  const std::uint64_t width = dl.padded_size() >> result.start_level;
  for (item_t i = 0; i < width; ++i) {
    DyadicInterval iv{result.start_level, i};
    if (iv.lo() >= dl.domain_size()) break;
    if (heavy(iv)) frontier.push_back(iv);
  }
  result.survivors[result.start_level] = frontier.size();

  for (unsigned level = result.start_level; level > 0; --level) {
    std::vector<DyadicInterval> next;
    for (const auto& iv : frontier) {
      for (item_t child = 2 * iv.index; child <= 2 * iv.index + 1; ++child) {
        DyadicInterval c{level - 1, child};
        if (c.lo() < dl.domain_size() && heavy(c)) next.push_back(c);
      }
    }
    frontier = std::move(next);
    result.survivors[level - 1] = frontier.size();
  }

  for (const auto& iv : frontier) result.items.push_back(iv.index);
  return result;
}

MisraGries::MisraGries(std::size_t counters) : capacity_(counters) {
  if (counters < 1) throw std::invalid_argument("Misra-Gries needs at least one counter");
}

void MisraGries::update(item_t item, count_t delta) {
  if (delta <= 0) throw std::invalid_argument("Misra-Gries accepts insertions only");
  for (auto& [key, count] : slots_) {
    if (key == item) {
      count += delta;
      return;
    }
  }
  if (slots_.size() < capacity_) {
    slots_.emplace_back(item, delta);
    return;
  }
  // Decrement everything (the arrival included) by the smallest count.
  count_t smallest = delta;
  for (const auto& slot : slots_) smallest = std::min(smallest, slot.second);
  for (auto& slot : slots_) slot.second -= smallest;
  std::erase_if(slots_, [](const auto& slot) { return slot.second == 0; });
  if (delta > smallest) slots_.emplace_back(item, delta - smallest);
}

std::vector<item_t> MisraGries::candidates() const {
  std::vector<item_t> out;
  for (const auto& slot : slots_) out.push_back(slot.first);
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

std::optional<item_t> parse_item(const std::string& name) {
  item_t v = 0;
  const char* end = name.data() + name.size();
  auto [ptr, ec] = std::from_chars(name.data(), end, v);
  if (ec != std::errc{} || ptr != end) return std::nullopt;
  return v;
}

}  // namespace

Hierarchy Hierarchy::from_edges(std::span<const std::pair<std::string, std::string>> edges, std::uint64_t n) {
  if (n < 1) throw std::invalid_argument("hierarchy domain must be non-empty");
  Hierarchy h;
  std::map<std::string, node_id> ids;
  auto intern = [&](const std::string& name) {
    auto [it, fresh] = ids.emplace(name, static_cast<node_id>(h.names_.size()));
    if (fresh) {
      h.names_.push_back(name);
      h.parent_.emplace_back();
      h.children_.emplace_back();
    }
    return it->second;
  };
  for (const auto& [child, parent] : edges) {
    if (child == parent) throw std::invalid_argument("self-loop on node '" + child + "'");
    const node_id c = intern(child);
    const node_id p = intern(parent);
    if (h.parent_[c]) throw std::invalid_argument("node '" + child + "' has two parents");
    h.parent_[c] = p;
    h.children_[p].push_back(c);
  }
  // A single-item domain needs no edges.
  if (h.names_.empty() && n == 1) intern("0");
  h.finish(n);
  return h;
}

Hierarchy Hierarchy::parse(std::istream& in, std::uint64_t n) {
  std::vector<std::pair<std::string, std::string>> edges;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream fields(line);
    std::string child;
    if (!(fields >> child) || child.front() == '#') continue;
    std::string parent;
    std::string extra;
    if (!(fields >> parent) || (fields >> extra)) {
      throw std::invalid_argument("hierarchy line " + std::to_string(lineno) + ": expected 'child parent'");
    }
    edges.emplace_back(child, parent);
  }
  return from_edges(edges, n);
}

Hierarchy Hierarchy::regular(std::uint64_t n, std::uint64_t fanout) {
  if (fanout < 2) throw std::invalid_argument("fanout must be >= 2");
  std::vector<std::pair<std::string, std::string>> edges;
  // Each entry is (name, first item covered).
  std::vector<std::pair<std::string, item_t>> layer;
  for (item_t i = 0; i < n; ++i) layer.emplace_back(std::to_string(i), i);
  unsigned depth_from_bottom = 0;
  while (layer.size() > 1) {
    ++depth_from_bottom;
    std::vector<std::pair<std::string, item_t>> up;
    for (std::size_t i = 0; i < layer.size(); i += fanout) {
      std::string name = "d" + std::to_string(depth_from_bottom) + ":" + std::to_string(layer[i].second);
      for (std::size_t j = i; j < std::min<std::size_t>(i + fanout, layer.size()); ++j) {
        edges.emplace_back(layer[j].first, name);
      }
      up.emplace_back(name, layer[i].second);
    }
    layer = std::move(up);
  }
  return from_edges(edges, n);
}

void Hierarchy::finish(std::uint64_t n) {
  std::vector<node_id> roots;
  for (node_id v = 0; v < names_.size(); ++v) {
    if (!parent_[v]) roots.push_back(v);
  }
  if (roots.size() != 1) throw std::invalid_argument("hierarchy must have exactly one root");
  root_ = roots.front();

  depth_.assign(names_.size(), 0);
  std::vector<bool> seen(names_.size(), false);
  std::vector<node_id> order{root_};
  seen[root_] = true;
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (node_id c : children_[order[i]]) {
      if (seen[c]) throw std::invalid_argument("hierarchy contains a cycle");
      seen[c] = true;
      depth_[c] = depth_[order[i]] + 1;
      order.push_back(c);
    }
  }
  if (order.size() != names_.size()) throw std::invalid_argument("hierarchy contains a cycle");

  const unsigned height = *std::max_element(depth_.begin(), depth_.end());
  by_depth_.assign(height + 1, {});
  index_in_depth_.assign(names_.size(), 0);
  for (node_id v : order) {
    index_in_depth_[v] = by_depth_[depth_[v]].size();
    by_depth_[depth_[v]].push_back(v);
  }

  constexpr node_id missing = UINT32_MAX;
  leaf_of_item_.assign(n, missing);
  for (node_id v = 0; v < names_.size(); ++v) {
    const auto item = parse_item(names_[v]);
    if (!children_[v].empty()) {
      if (item && *item < n) throw std::invalid_argument("domain item " + names_[v] + " is an internal node");
      continue;
    }
    if (!item || *item >= n) throw std::invalid_argument("leaf '" + names_[v] + "' is not a domain item");
    leaf_of_item_[*item] = v;
  }
  for (item_t x = 0; x < n; ++x) {
    if (leaf_of_item_[x] == missing) {
      throw std::invalid_argument("hierarchy leaves do not cover item " + std::to_string(x));
    }
  }
}

std::optional<node_id> Hierarchy::parent(node_id v) const { return parent_.at(v); }

bool Hierarchy::is_ancestor(node_id a, node_id b) const {
  auto p = parent_.at(b);
  while (p) {
    if (*p == a) return true;
    p = parent_[*p];
  }
  return false;
}

HierarchySketch::HierarchySketch(Hierarchy hierarchy, std::uint64_t s_prime)
    : hierarchy_(std::move(hierarchy)), s_prime_(std::max<std::uint64_t>(s_prime, 2)) {
  for (unsigned d = 0; d <= hierarchy_.height(); ++d) {
    levels_.emplace_back(height_params(s_prime_, hierarchy_.nodes_at_depth(d).size()), Model::Strict);
  }
  paths_.resize(hierarchy_.domain_size());
  for (item_t x = 0; x < hierarchy_.domain_size(); ++x) {
    node_id v = hierarchy_.leaf(x);
    std::vector<std::uint64_t> path(hierarchy_.depth(v) + 1);
    while (true) {
      path[hierarchy_.depth(v)] = hierarchy_.index_in_depth(v);
      auto p = hierarchy_.parent(v);
      if (!p) break;
      v = *p;
    }
    paths_[x] = std::move(path);
  }
}

HierarchySketch HierarchySketch::for_hhh(Hierarchy hierarchy, const FrequentQuery& q) {
  q.validate();
  const double h = std::max(1u, hierarchy.height());
  const double s = static_cast<double>(q.s);
  const auto s_prime = static_cast<std::uint64_t>(std::ceil(s * s * h / q.epsilon - 1e-9));
  return HierarchySketch(std::move(hierarchy), s_prime);
}

void HierarchySketch::update(const StreamUpdate& u) {
  if (u.item >= paths_.size()) throw std::out_of_range("item " + std::to_string(u.item) + " outside domain");
  const auto& path = paths_[u.item];
  std::size_t applied = 0;
  try {
    for (; applied < path.size(); ++applied) levels_[applied].update(path[applied], u.delta);
  } catch (...) {
    for (std::size_t d = 0; d < applied; ++d) levels_[d].update(path[d], -u.delta);
    throw;
  }
}

count_t HierarchySketch::node_estimate(node_id v) const {
  return levels_.at(hierarchy_.depth(v)).point_estimate_strict(hierarchy_.index_in_depth(v));
}

HhhReport hhh(const HierarchySketch& sketch, const FrequentQuery& q) {
  q.validate();
  const Hierarchy& tree = sketch.hierarchy();
  const double s = static_cast<double>(q.s);
  const double allowed = q.epsilon / (s * s * std::max(1u, tree.height()));
  for (unsigned d = 0; d <= tree.height(); ++d) {
    const SketchParams& p = sketch.level(d).params();
    if (static_cast<double>(p.log_k_n() - 1) / p.t > allowed) {
      throw std::domain_error("hierarchy depth " + std::to_string(d) + " is under-provisioned for (s, epsilon)");
    }
  }

  HhhReport report;
  const count_t m = sketch.net_mass();
  if (m < 0) throw std::domain_error("hhh needs non-negative mass");
  if (m == 0) return report;

  // covered[v]: estimated mass under v already claimed by declared nodes.
  std::vector<count_t> covered(tree.node_count(), 0);
  for (unsigned d = tree.height() + 1; d-- > 0;) {
    for (node_id v : tree.nodes_at_depth(d)) {
      count_t below = 0;
      for (node_id c : tree.children(v)) below += covered[c];
      const count_t est = sketch.node_estimate(v);
      const count_t discounted = est - below;
      if (static_cast<wide_t>(discounted) * static_cast<wide_t>(q.s) >= m) {
        report.nodes.push_back({v, est, discounted});
        covered[v] = est;
      } else {
        covered[v] = below;
      }
    }
  }
  return report;
}

}  // namespace crprecis
