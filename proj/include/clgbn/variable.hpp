#pragma once

#include <cstddef>
#include <string>
#include <utility>

#include "clgbn/error.hpp"

namespace clgbn {

enum class VariableKind { discrete, continuous };

// A typed random variable with a dense, network-wide index.
class Variable {
 public:
  Variable() = default;

  static Variable discrete(std::string name, std::size_t index, std::size_t arity) {
    if (arity < 2) {
      throw InvalidArgument("variable '" + name + "': arity must be >= 2");
    }
    return Variable(std::move(name), index, VariableKind::discrete, arity);
  }

  static Variable continuous(std::string name, std::size_t index) {
    return Variable(std::move(name), index, VariableKind::continuous, 0);
  }

  const std::string& name() const noexcept { return name_; }
  std::size_t index() const noexcept { return index_; }
  VariableKind kind() const noexcept { return kind_; }
  bool is_discrete() const noexcept { return kind_ == VariableKind::discrete; }
  bool is_continuous() const noexcept { return kind_ == VariableKind::continuous; }

  // Number of states; 0 for continuous variables.
  std::size_t arity() const noexcept { return arity_; }

  friend bool operator==(const Variable&, const Variable&) = default;

 private:
  Variable(std::string name, std::size_t index, VariableKind kind, std::size_t arity)
      : name_(std::move(name)), index_(index), kind_(kind), arity_(arity) {
    if (name_.empty()) throw InvalidArgument("variable names must be non-empty");
  }

  std::string name_;
  std::size_t index_ = 0;
  VariableKind kind_ = VariableKind::continuous;
  std::size_t arity_ = 0;
};

}  // namespace clgbn
