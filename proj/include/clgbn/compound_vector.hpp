#pragma once

#include <algorithm>
#include <concepts>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "clgbn/error.hpp"
#include "clgbn/exact_sum.hpp"

namespace clgbn {

template <class T>
struct BasicIndexedElement {
  std::size_t index = 0;  // main variable index
  std::vector<T> local;
};

// Global sufficient-statistics vector: one self-contained local block per
// variable, keyed by variable index and sorted ascending.
//
// T is double for ordinary arithmetic or ExactSum for grouping-independent
// accumulation.
template <class T>
class BasicCompoundVector {
 public:
  using Element = BasicIndexedElement<T>;

  BasicCompoundVector() = default;

  explicit BasicCompoundVector(std::vector<Element> elements) : elements_(std::move(elements)) {
    for (std::size_t i = 1; i < elements_.size(); ++i) {
      if (elements_[i - 1].index >= elements_[i].index) {
        throw InvalidArgument("compound vector indices must be unique and ascending");
      }
    }
  }

  // All-zero vector with the given (index, length) skeleton.
  static BasicCompoundVector zeros(const std::vector<std::pair<std::size_t, std::size_t>>& skeleton) {
    std::vector<Element> elements;
    elements.reserve(skeleton.size());
    for (auto [index, length] : skeleton) elements.push_back({index, std::vector<T>(length)});
    return BasicCompoundVector(std::move(elements));
  }

  template <class U>
  static BasicCompoundVector zeros_like(const BasicCompoundVector<U>& other) {
    return zeros(other.skeleton());
  }

  std::vector<std::pair<std::size_t, std::size_t>> skeleton() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    out.reserve(elements_.size());
    for (const auto& e : elements_) out.emplace_back(e.index, e.local.size());
    return out;
  }

  template <class U>
  bool same_skeleton(const BasicCompoundVector<U>& other) const {
    const auto& o = other.elements();
    if (o.size() != elements_.size()) return false;
    for (std::size_t i = 0; i < o.size(); ++i) {
      if (o[i].index != elements_[i].index || o[i].local.size() != elements_[i].local.size()) {
        return false;
      }
    }
    return true;
  }

  const std::vector<Element>& elements() const noexcept { return elements_; }
  std::vector<Element>& elements() noexcept { return elements_; }
  std::size_t size() const noexcept { return elements_.size(); }
  const Element& operator[](std::size_t i) const { return elements_[i]; }
  Element& operator[](std::size_t i) { return elements_[i]; }

  const Element& element_for(std::size_t variable_index) const {
    auto it = std::lower_bound(elements_.begin(), elements_.end(), variable_index,
                               [](const Element& e, std::size_t v) { return e.index < v; });
    if (it == elements_.end() || it->index != variable_index) {
      throw InvalidArgument("no element for variable " + std::to_string(variable_index));
    }
    return *it;
  }

  BasicCompoundVector& operator+=(const BasicCompoundVector& other) {
    require_same_skeleton(other);
    for (std::size_t i = 0; i < elements_.size(); ++i) {
      auto& dst = elements_[i].local;
      const auto& src = other.elements_[i].local;
      for (std::size_t k = 0; k < dst.size(); ++k) dst[k] += src[k];
    }
    return *this;
  }

  friend BasicCompoundVector operator+(BasicCompoundVector a, const BasicCompoundVector& b) {
    a += b;
    return a;
  }

  // All entries concatenated in element order.
  std::vector<T> flatten() const {
    std::vector<T> out;
    for (const auto& e : elements_) out.insert(out.end(), e.local.begin(), e.local.end());
    return out;
  }

  friend bool operator==(const BasicCompoundVector& a, const BasicCompoundVector& b)
    requires std::equality_comparable<T>
  {
    if (a.elements_.size() != b.elements_.size()) return false;
    for (std::size_t i = 0; i < a.elements_.size(); ++i) {
      if (a.elements_[i].index != b.elements_[i].index ||
          a.elements_[i].local != b.elements_[i].local) {
        return false;
      }
    }
    return true;
  }

 private:
  template <class U>
  void require_same_skeleton(const BasicCompoundVector<U>& other) const {
    if (!same_skeleton(other)) throw InvalidArgument("compound vector skeletons differ");
  }

  std::vector<Element> elements_;
};

using IndexedElement = BasicIndexedElement<double>;
using CompoundVector = BasicCompoundVector<double>;
using ExactCompoundVector = BasicCompoundVector<ExactSum>;

inline CompoundVector vector_add(const CompoundVector& a, const CompoundVector& b) { return a + b; }

inline CompoundVector vector_scale(CompoundVector a, double c) {
  for (auto& e : a.elements()) {
    for (double& v : e.local) v *= c;
  }
  return a;
}

// Each exact sum rounded to the nearest double.
inline CompoundVector rounded(const ExactCompoundVector& exact) {
  std::vector<IndexedElement> elements;
  elements.reserve(exact.size());
  for (const auto& e : exact.elements()) {
    IndexedElement out{e.index, std::vector<double>(e.local.size())};
    for (std::size_t k = 0; k < e.local.size(); ++k) out.local[k] = e.local[k].value();
    elements.push_back(std::move(out));
  }
  return CompoundVector(std::move(elements));
}

}  // namespace clgbn
