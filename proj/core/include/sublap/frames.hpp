#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "sublap/polynomial.hpp"

namespace sublap {

using Point = std::vector<double>;

/// Defaults for the span certification machinery. Polynomial data is exact,
/// so the tolerances only absorb rounding.
inline constexpr double kSpanTol = 1e-10;
inline constexpr double kZeroTol = 1e-12;
inline constexpr int kDefaultMaxStep = 6;

/// A vector field written in coordinates: n polynomial components plus the
/// exact Jacobian obtained by polynomial differentiation. Iterated brackets
/// carry their bracket word and formal degree d(Y) = |word|.
struct VectorField {
  std::vector<Polynomial> components;             // size n
  std::vector<std::vector<Polynomial>> jacobian;  // [k][j] = d comp_k / d x_j
  int degree = 1;
  std::vector<int> word;  // 1-based frame indices, right-nested

  std::size_t dim() const { return components.size(); }
  bool is_zero() const;

  Eigen::VectorXd evaluate(std::span<const double> x) const;
  Eigen::MatrixXd evaluate_jacobian(std::span<const double> x) const;
};

/// Populates the Jacobian from the components by exact differentiation.
void attach_jacobian(VectorField& field);

/// Coordinate bracket [Y, Z]I = J_Z · YI − J_Y · ZI on polynomial data; the
/// result composes further (brackets of brackets) with exact Jacobians.
VectorField lie_bracket(const VectorField& y, const VectorField& z);

/// A frame X_1..X_m of smooth vector fields on R^n, m <= n, with polynomial
/// coefficients b_ik. Built-ins: euclidean, grushin, heisenberg; custom
/// frames load from a polynomial coefficient table file.
struct VectorFieldFrame {
  std::size_t n = 0;
  std::size_t m = 0;
  std::vector<VectorField> fields;  // size m, degree 1
  std::string label;

  static VectorFieldFrame euclidean(std::size_t n);
  static VectorFieldFrame grushin();
  static VectorFieldFrame heisenberg();

  /// Dispatch by built-in name; n_hint is used by the euclidean frame,
  /// ignored by the fixed-dimension ones.
  static VectorFieldFrame builtin(const std::string& name, std::size_t n_hint);

  /// Custom frame file: "n <int>", "m <int>", optional "label <text>", then
  /// one "term i k e_1 ... e_n c" line per monomial of b_ik.
  static VectorFieldFrame from_file(const std::filesystem::path& path);

  /// Row i = X_i I(x). Throws EvaluationError naming the entry if a
  /// coefficient evaluates non-finite.
  Eigen::MatrixXd evaluate(std::span<const double> x) const;
};

/// Commutators selected to span R^n at every sample point, with formal
/// degrees and the certified Hörmander step.
struct SpanningSet {
  std::size_t n = 0;
  std::size_t m = 0;
  std::string frame_label;
  std::vector<VectorField> vectors;  // Y_1..Y_l; the first m are X_1..X_m
  int step = 0;
  std::vector<Point> sample_points;

  std::size_t size() const { return vectors.size(); }
};

/// Iterates bracket length k = 1, 2, ...: greedily appends commutators that
/// raise the pointwise rank at some still-deficient sample (ties broken by
/// shorter word, then lexicographically smaller word) and stops at the
/// smallest step with full span at every sample. Throws StructuralError
/// reporting the worst sample and rank if the span is not certified by
/// s_max.
SpanningSet build_spanning_set(const VectorFieldFrame& frame,
                               std::span<const Point> samples,
                               int s_max = kDefaultMaxStep,
                               double span_tol = kSpanTol);

struct NswTerm {
  int exponent = 0;   // d(I), the degree sum over the subset
  double coeff = 0.0; // |a_I(x)|, absolute determinant
};

/// Terms of the Nagel–Stein–Wainger polynomial Λ(x, r) = Σ_I |a_I(x)| r^{d(I)}
/// over unordered n-subsets I of the spanning set (permutations only change
/// the determinant sign).
struct NswEvaluation {
  Point point;
  std::vector<NswTerm> terms;
};

NswEvaluation nsw_terms(const SpanningSet& ss, std::span<const double> x);

/// Pointwise homogeneous dimension Q(x): the smallest exponent carrying a
/// coefficient above zero_tol (the r→0+ limit of log Λ / log r).
int pointwise_q(const SpanningSet& ss, std::span<const double> x,
                double zero_tol = kZeroTol);

/// Local homogeneous dimension Q = max of Q(x) over the samples.
int local_q(const SpanningSet& ss, std::span<const Point> samples,
            double zero_tol = kZeroTol);

}  // namespace sublap
