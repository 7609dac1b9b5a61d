#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cremona/errors.hpp"

namespace cremona::algebra {

/// Ordered variable names. The order defines the monomial order of every polynomial built on
/// the table, so it is fixed at construction.
class VarTable {
 public:
  explicit VarTable(std::vector<std::string> names) : names_(std::move(names)) {
    for (std::size_t i = 0; i < names_.size(); ++i) {
      if (names_[i].empty()) throw UsageError("empty variable name");
      for (std::size_t j = 0; j < i; ++j)
        if (names_[i] == names_[j]) throw UsageError("duplicate variable name '" + names_[i] + "'");
    }
  }

  std::size_t size() const noexcept { return names_.size(); }
  const std::string& name(std::size_t i) const { return names_.at(i); }
  const std::vector<std::string>& names() const noexcept { return names_; }

  std::optional<std::size_t> index_of(std::string_view name) const {
    for (std::size_t i = 0; i < names_.size(); ++i)
      if (names_[i] == name) return i;
    return std::nullopt;
  }

  std::size_t require(std::string_view name) const {
    if (auto i = index_of(name)) return *i;
    throw NameError("unknown variable '" + std::string(name) + "'");
  }

  bool operator==(const VarTable& other) const { return names_ == other.names_; }

 private:
  std::vector<std::string> names_;
};

using VarTablePtr = std::shared_ptr<const VarTable>;

inline VarTablePtr make_vartable(std::vector<std::string> names) {
  return std::make_shared<const VarTable>(std::move(names));
}

inline bool same_table(const VarTablePtr& a, const VarTablePtr& b) {
  return a == b || (a && b && *a == *b);
}

inline void require_same_table(const VarTablePtr& a, const VarTablePtr& b) {
  if (!same_table(a, b)) throw UsageError("polynomials live on different variable tables");
}

}  // namespace cremona::algebra
