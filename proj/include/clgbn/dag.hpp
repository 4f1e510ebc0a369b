#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "clgbn/error.hpp"
#include "clgbn/variable.hpp"

namespace clgbn {

// One vertex of the DAG: a variable together with its ordered parent list.
struct ParentSet {
  Variable main_var;
  std::vector<Variable> parents;

  bool has_parent(const Variable& v) const {
    return std::find(parents.begin(), parents.end(), v) != parents.end();
  }

  friend bool operator==(const ParentSet&, const ParentSet&) = default;
};

// A DAG stored as a list of self-contained parent sets, one per variable,
// ordered by variable index.
//
// Construction checks the structural invariants (dense indices, unique names,
// no duplicate or self parents). Acyclicity is not enforced here so that a
// cyclic graph can still be built and reported by validate(); use
// is_acyclic() or topological_order() to check it.
class ParentSetDag {
 public:
  ParentSetDag() = default;

  // `parents[i]` lists parent indices of the variable with index i.
  ParentSetDag(std::vector<Variable> variables,
               const std::vector<std::vector<std::size_t>>& parents) {
    std::sort(variables.begin(), variables.end(),
              [](const Variable& a, const Variable& b) { return a.index() < b.index(); });
    for (std::size_t i = 0; i < variables.size(); ++i) {
      if (variables[i].index() != i) {
        throw InvalidArgument("variable indices must be a permutation of 0..n-1");
      }
      if (!by_name_.emplace(variables[i].name(), i).second) {
        throw InvalidArgument("duplicate variable name '" + variables[i].name() + "'");
      }
    }
    if (parents.size() != variables.size()) {
      throw InvalidArgument("need exactly one parent list per variable");
    }
    parent_sets_.reserve(variables.size());
    for (std::size_t i = 0; i < variables.size(); ++i) {
      ParentSet ps{variables[i], {}};
      for (std::size_t p : parents[i]) {
        if (p >= variables.size()) {
          throw InvalidArgument("parent index out of range for '" + variables[i].name() + "'");
        }
        if (p == i) {
          throw InvalidArgument("'" + variables[i].name() + "' cannot be its own parent");
        }
        if (ps.has_parent(variables[p])) {
          throw InvalidArgument("duplicate parent '" + variables[p].name() + "' of '" +
                                variables[i].name() + "'");
        }
        ps.parents.push_back(variables[p]);
      }
      parent_sets_.push_back(std::move(ps));
    }
  }

  // Graph with no edges.
  explicit ParentSetDag(std::vector<Variable> variables)
      : ParentSetDag(variables, std::vector<std::vector<std::size_t>>(variables.size())) {}

  std::size_t size() const noexcept { return parent_sets_.size(); }
  const std::vector<ParentSet>& parent_sets() const noexcept { return parent_sets_; }
  const ParentSet& parent_set(std::size_t index) const { return parent_sets_.at(index); }
  const Variable& variable(std::size_t index) const { return parent_sets_.at(index).main_var; }

  std::vector<Variable> variables() const {
    std::vector<Variable> out;
    out.reserve(size());
    for (const auto& ps : parent_sets_) out.push_back(ps.main_var);
    return out;
  }

  std::optional<Variable> find(std::string_view name) const {
    auto it = by_name_.find(std::string(name));
    if (it == by_name_.end()) return std::nullopt;
    return parent_sets_[it->second].main_var;
  }

  const Variable& at(std::string_view name) const {
    auto it = by_name_.find(std::string(name));
    if (it == by_name_.end()) throw InvalidArgument("unknown variable '" + std::string(name) + "'");
    return parent_sets_[it->second].main_var;
  }

  bool contains(const Variable& v) const {
    return v.index() < size() && parent_sets_[v.index()].main_var == v;
  }

  // Sum of parent-set sizes.
  std::size_t number_of_links() const {
    return std::transform_reduce(parent_sets_.begin(), parent_sets_.end(), std::size_t{0},
                                 std::plus<>{},
                                 [](const ParentSet& ps) { return ps.parents.size(); });
  }

  // Main variables of every parent set that lists `v` as a parent, in index order.
  std::vector<Variable> children_of(const Variable& v) const {
    if (!contains(v)) throw InvalidArgument("variable '" + v.name() + "' is not in this DAG");
    std::vector<Variable> out;
    for (const auto& ps : parent_sets_) {
      if (ps.has_parent(v)) out.push_back(ps.main_var);
    }
    return out;
  }

  // Kahn's algorithm; ties resolved by lowest index so the order is canonical.
  // Returns nullopt when the graph has a cycle.
  std::optional<std::vector<std::size_t>> try_topological_order() const {
    const std::size_t n = size();
    std::vector<std::size_t> pending(n);
    std::vector<std::vector<std::size_t>> children(n);
    for (std::size_t i = 0; i < n; ++i) {
      pending[i] = parent_sets_[i].parents.size();
      for (const auto& p : parent_sets_[i].parents) children[p.index()].push_back(i);
    }
    std::vector<std::size_t> ready;
    for (std::size_t i = n; i-- > 0;) {
      if (pending[i] == 0) ready.push_back(i);
    }
    std::vector<std::size_t> order;
    order.reserve(n);
    while (!ready.empty()) {
      std::size_t v = ready.back();
      ready.pop_back();
      order.push_back(v);
      for (std::size_t c : children[v]) {
        if (--pending[c] == 0) {
          ready.insert(std::upper_bound(ready.begin(), ready.end(), c, std::greater<>{}), c);
        }
      }
    }
    if (order.size() != n) return std::nullopt;
    return order;
  }

  bool is_acyclic() const { return try_topological_order().has_value(); }

  std::vector<std::size_t> topological_order() const {
    auto order = try_topological_order();
    if (!order) throw InvalidArgument("graph contains a directed cycle");
    return *std::move(order);
  }

  friend bool operator==(const ParentSetDag& a, const ParentSetDag& b) {
    return a.parent_sets_ == b.parent_sets_;
  }

 private:
  std::vector<ParentSet> parent_sets_;
  std::unordered_map<std::string, std::size_t> by_name_;
};

inline std::size_t number_of_links(const ParentSetDag& dag) { return dag.number_of_links(); }

inline std::vector<Variable> children_of(const ParentSetDag& dag, const Variable& v) {
  return dag.children_of(v);
}

}  // namespace clgbn
