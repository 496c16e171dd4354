#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <vector>

namespace sublap {

/// Sparse multivariate polynomial with double coefficients, keyed by the
/// exponent tuple. Frame coefficients, their Jacobians and all iterated
/// Lie brackets are polynomial, so differentiation and bracket algebra
/// stay exact (no finite-difference tolerance anywhere in the frame layer).
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::size_t dim) : dim_(dim) {}

  static Polynomial constant(std::size_t dim, double value);
  static Polynomial variable(std::size_t dim, std::size_t axis);
  static Polynomial monomial(std::size_t dim, std::vector<int> exponents,
                             double coeff);

  std::size_t dim() const { return dim_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t term_count() const { return terms_.size(); }

  double evaluate(std::span<const double> x) const;

  /// Exact partial derivative in the given axis.
  Polynomial derivative(std::size_t axis) const;

  void add_term(std::span<const int> exponents, double coeff);

  Polynomial& operator+=(const Polynomial& rhs);
  Polynomial& operator-=(const Polynomial& rhs);
  Polynomial& operator*=(double scale);

  friend Polynomial operator+(Polynomial lhs, const Polynomial& rhs) {
    lhs += rhs;
    return lhs;
  }
  friend Polynomial operator-(Polynomial lhs, const Polynomial& rhs) {
    lhs -= rhs;
    return lhs;
  }
  friend Polynomial operator*(const Polynomial& lhs, const Polynomial& rhs);
  friend Polynomial operator*(Polynomial lhs, double scale) {
    lhs *= scale;
    return lhs;
  }

  /// Terms in deterministic (lexicographic exponent) order.
  const std::map<std::vector<int>, double>& terms() const { return terms_; }

 private:
  std::size_t dim_ = 0;
  std::map<std::vector<int>, double> terms_;
};

}  // namespace sublap
