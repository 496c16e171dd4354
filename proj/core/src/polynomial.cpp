#include "sublap/polynomial.hpp"

#include <cmath>
#include <stdexcept>

#include "sublap/errors.hpp"

namespace sublap {

Polynomial Polynomial::constant(std::size_t dim, double value) {
  Polynomial p(dim);
  std::vector<int> e(dim, 0);
  p.add_term(e, value);
  return p;
}

Polynomial Polynomial::variable(std::size_t dim, std::size_t axis) {
  if (axis >= dim) throw DimensionError("variable axis out of range");
  Polynomial p(dim);
  std::vector<int> e(dim, 0);
  e[axis] = 1;
  p.add_term(e, 1.0);
  return p;
}

Polynomial Polynomial::monomial(std::size_t dim, std::vector<int> exponents,
                                double coeff) {
  Polynomial p(dim);
  p.add_term(exponents, coeff);
  return p;
}

void Polynomial::add_term(std::span<const int> exponents, double coeff) {
  if (exponents.size() != dim_)
    throw DimensionError("exponent tuple length does not match dimension");
  for (int e : exponents)
    if (e < 0) throw PreconditionError("negative exponent in polynomial term");
  if (coeff == 0.0) return;
  std::vector<int> key(exponents.begin(), exponents.end());
  auto [it, inserted] = terms_.try_emplace(std::move(key), coeff);
  if (!inserted) {
    it->second += coeff;
    if (it->second == 0.0) terms_.erase(it);
  }
}

double Polynomial::evaluate(std::span<const double> x) const {
  if (x.size() != dim_)
    throw DimensionError("evaluation point dimension mismatch");
  double sum = 0.0;
  for (const auto& [e, c] : terms_) {
    double term = c;
    for (std::size_t k = 0; k < dim_; ++k) {
      for (int j = 0; j < e[k]; ++j) term *= x[k];
    }
    sum += term;
  }
  return sum;
}

Polynomial Polynomial::derivative(std::size_t axis) const {
  if (axis >= dim_) throw DimensionError("derivative axis out of range");
  Polynomial out(dim_);
  for (const auto& [e, c] : terms_) {
    if (e[axis] == 0) continue;
    std::vector<int> d = e;
    d[axis] -= 1;
    out.add_term(d, c * static_cast<double>(e[axis]));
  }
  return out;
}

Polynomial& Polynomial::operator+=(const Polynomial& rhs) {
  if (dim_ != rhs.dim_)
    throw DimensionError("polynomial dimension mismatch in +=");
  for (const auto& [e, c] : rhs.terms_) add_term(e, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& rhs) {
  if (dim_ != rhs.dim_)
    throw DimensionError("polynomial dimension mismatch in -=");
  for (const auto& [e, c] : rhs.terms_) add_term(e, -c);
  return *this;
}

Polynomial& Polynomial::operator*=(double scale) {
  if (scale == 0.0) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, c] : terms_) c *= scale;
  return *this;
}

Polynomial operator*(const Polynomial& lhs, const Polynomial& rhs) {
  if (lhs.dim_ != rhs.dim_)
    throw DimensionError("polynomial dimension mismatch in *");
  Polynomial out(lhs.dim_);
  std::vector<int> e(lhs.dim_);
  for (const auto& [ea, ca] : lhs.terms_) {
    for (const auto& [eb, cb] : rhs.terms_) {
      for (std::size_t k = 0; k < lhs.dim_; ++k) e[k] = ea[k] + eb[k];
      out.add_term(e, ca * cb);
    }
  }
  return out;
}

}  // namespace sublap
