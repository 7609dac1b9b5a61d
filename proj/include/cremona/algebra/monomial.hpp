#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace cremona::algebra {

/// Exponent vector aligned with a VarTable.
class Monomial {
 public:
  Monomial() = default;
  explicit Monomial(std::size_t nvars) : exps_(nvars, 0) {}
  explicit Monomial(std::vector<std::uint32_t> exps) : exps_(std::move(exps)) {}

  std::size_t size() const noexcept { return exps_.size(); }
  std::uint32_t operator[](std::size_t i) const { return exps_[i]; }
  std::uint32_t& operator[](std::size_t i) { return exps_[i]; }
  const std::vector<std::uint32_t>& exponents() const noexcept { return exps_; }

  std::uint64_t total_degree() const noexcept {
    std::uint64_t d = 0;
    for (auto e : exps_) d += e;
    return d;
  }

  bool is_constant() const noexcept {
    for (auto e : exps_)
      if (e != 0) return false;
    return true;
  }

  bool divides(const Monomial& other) const noexcept {
    for (std::size_t i = 0; i < exps_.size(); ++i)
      if (exps_[i] > other.exps_[i]) return false;
    return true;
  }

  Monomial operator*(const Monomial& other) const {
    Monomial r(*this);
    for (std::size_t i = 0; i < exps_.size(); ++i) r.exps_[i] += other.exps_[i];
    return r;
  }

  /// Precondition: other divides *this.
  Monomial operator/(const Monomial& other) const {
    Monomial r(*this);
    for (std::size_t i = 0; i < exps_.size(); ++i) r.exps_[i] -= other.exps_[i];
    return r;
  }

  bool operator==(const Monomial&) const = default;

 private:
  std::vector<std::uint32_t> exps_;
};

/// Graded lexicographic comparison: total degree first, then the earliest variable of the
/// table is the most significant. Returns -1, 0 or 1.
inline int grlex_compare(const Monomial& a, const Monomial& b) noexcept {
  auto da = a.total_degree();
  auto db = b.total_degree();
  if (da != db) return da < db ? -1 : 1;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
  }
  return 0;
}

/// Strict "a comes before b" in the stored (descending) term order.
struct GrlexDescending {
  bool operator()(const Monomial& a, const Monomial& b) const noexcept { return grlex_compare(a, b) > 0; }
};

}  // namespace cremona::algebra
