#include "sublap/frames.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "sublap/errors.hpp"

namespace sublap {

bool VectorField::is_zero() const {
  return std::all_of(components.begin(), components.end(),
                     [](const Polynomial& p) { return p.is_zero(); });
}

Eigen::VectorXd VectorField::evaluate(std::span<const double> x) const {
  Eigen::VectorXd v(static_cast<Eigen::Index>(components.size()));
  for (std::size_t k = 0; k < components.size(); ++k)
    v[static_cast<Eigen::Index>(k)] = components[k].evaluate(x);
  return v;
}

Eigen::MatrixXd VectorField::evaluate_jacobian(std::span<const double> x) const {
  const auto n = static_cast<Eigen::Index>(components.size());
  Eigen::MatrixXd j(n, n);
  for (Eigen::Index k = 0; k < n; ++k)
    for (Eigen::Index a = 0; a < n; ++a)
      j(k, a) = jacobian[static_cast<std::size_t>(k)][static_cast<std::size_t>(a)]
                    .evaluate(x);
  return j;
}

void attach_jacobian(VectorField& field) {
  const std::size_t n = field.components.size();
  field.jacobian.assign(n, std::vector<Polynomial>());
  for (std::size_t k = 0; k < n; ++k) {
    field.jacobian[k].reserve(n);
    for (std::size_t a = 0; a < n; ++a)
      field.jacobian[k].push_back(field.components[k].derivative(a));
  }
}

VectorField lie_bracket(const VectorField& y, const VectorField& z) {
  if (y.dim() != z.dim())
    throw DimensionError("lie_bracket: fields live in different dimensions");
  const std::size_t n = y.dim();
  VectorField out;
  out.components.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    Polynomial comp(n);
    for (std::size_t j = 0; j < n; ++j) {
      comp += y.components[j] * z.jacobian[k][j];
      comp -= z.components[j] * y.jacobian[k][j];
    }
    out.components.push_back(std::move(comp));
  }
  attach_jacobian(out);
  out.word = y.word;
  out.word.insert(out.word.end(), z.word.begin(), z.word.end());
  out.degree = static_cast<int>(out.word.size());
  return out;
}

VectorFieldFrame VectorFieldFrame::euclidean(std::size_t n) {
  if (n == 0) throw PreconditionError("euclidean frame needs n >= 1");
  VectorFieldFrame f;
  f.n = n;
  f.m = n;
  f.label = "euclidean";
  for (std::size_t i = 0; i < n; ++i) {
    VectorField v;
    for (std::size_t k = 0; k < n; ++k)
      v.components.push_back(Polynomial::constant(n, i == k ? 1.0 : 0.0));
    attach_jacobian(v);
    v.degree = 1;
    v.word = {static_cast<int>(i) + 1};
    f.fields.push_back(std::move(v));
  }
  return f;
}

VectorFieldFrame VectorFieldFrame::grushin() {
  VectorFieldFrame f;
  f.n = 2;
  f.m = 2;
  f.label = "grushin";
  {
    VectorField v;  // X1 = d/dx
    v.components = {Polynomial::constant(2, 1.0), Polynomial(2)};
    attach_jacobian(v);
    v.word = {1};
    f.fields.push_back(std::move(v));
  }
  {
    VectorField v;  // X2 = x d/dy
    v.components = {Polynomial(2), Polynomial::variable(2, 0)};
    attach_jacobian(v);
    v.word = {2};
    f.fields.push_back(std::move(v));
  }
  return f;
}

VectorFieldFrame VectorFieldFrame::heisenberg() {
  VectorFieldFrame f;
  f.n = 3;
  f.m = 2;
  f.label = "heisenberg";
  {
    VectorField v;  // X1 = d/dx - (y/2) d/dt
    v.components = {Polynomial::constant(3, 1.0), Polynomial(3),
                    Polynomial::variable(3, 1) * (-0.5)};
    attach_jacobian(v);
    v.word = {1};
    f.fields.push_back(std::move(v));
  }
  {
    VectorField v;  // X2 = d/dy + (x/2) d/dt
    v.components = {Polynomial(3), Polynomial::constant(3, 1.0),
                    Polynomial::variable(3, 0) * 0.5};
    attach_jacobian(v);
    v.word = {2};
    f.fields.push_back(std::move(v));
  }
  return f;
}

VectorFieldFrame VectorFieldFrame::builtin(const std::string& name,
                                           std::size_t n_hint) {
  if (name == "euclidean") return euclidean(n_hint);
  if (name == "grushin") return grushin();
  if (name == "heisenberg") return heisenberg();
  throw PreconditionError("unknown built-in frame '" + name + "'");
}

VectorFieldFrame VectorFieldFrame::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open frame file " + path.string());

  std::size_t n = 0;
  std::size_t m = 0;
  std::string label = path.stem().string();
  struct TermLine {
    std::size_t i, k;
    std::vector<int> exps;
    double coeff;
  };
  std::vector<TermLine> terms;

  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream is(line);
    std::string kind;
    if (!(is >> kind)) continue;
    if (kind == "n") {
      if (!(is >> n) || n == 0)
        throw ParseError("frame file: invalid dimension", "n", lineno);
    } else if (kind == "m") {
      if (!(is >> m) || m == 0)
        throw ParseError("frame file: invalid field count", "m", lineno);
    } else if (kind == "label") {
      is >> label;
    } else if (kind == "term") {
      if (n == 0 || m == 0)
        throw ParseError("frame file: 'term' before 'n' and 'm'", "term",
                         lineno);
      TermLine t;
      if (!(is >> t.i >> t.k))
        throw ParseError("frame file: malformed term indices", "term", lineno);
      if (t.i < 1 || t.i > m || t.k < 1 || t.k > n)
        throw ParseError("frame file: term indices out of range", "term",
                         lineno);
      t.exps.resize(n);
      for (std::size_t a = 0; a < n; ++a) {
        if (!(is >> t.exps[a]) || t.exps[a] < 0)
          throw ParseError("frame file: malformed exponent tuple", "term",
                           lineno);
      }
      if (!(is >> t.coeff))
        throw ParseError("frame file: missing coefficient", "term", lineno);
      terms.push_back(std::move(t));
    } else {
      throw ParseError("frame file: unknown directive '" + kind + "'", kind,
                       lineno);
    }
  }
  if (n == 0 || m == 0)
    throw ParseError("frame file: missing 'n' or 'm'", "n", 0);
  if (m > n)
    throw ParseError("frame file: m > n is not a Hörmander frame", "m", 0);

  VectorFieldFrame f;
  f.n = n;
  f.m = m;
  f.label = label;
  for (std::size_t i = 0; i < m; ++i) {
    VectorField v;
    for (std::size_t k = 0; k < n; ++k) v.components.emplace_back(n);
    v.word = {static_cast<int>(i) + 1};
    f.fields.push_back(std::move(v));
  }
  for (const auto& t : terms)
    f.fields[t.i - 1].components[t.k - 1].add_term(t.exps, t.coeff);
  for (auto& field : f.fields) attach_jacobian(field);
  return f;
}

Eigen::MatrixXd VectorFieldFrame::evaluate(std::span<const double> x) const {
  if (x.size() != n) throw DimensionError("frame evaluation point dimension");
  for (double c : x)
    if (!std::isfinite(c))
      throw PreconditionError("frame evaluation at a non-finite point");
  Eigen::MatrixXd b(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      const double v = fields[i].components[k].evaluate(x);
      if (!std::isfinite(v))
        throw EvaluationError("non-finite coefficient b_" +
                              std::to_string(i + 1) + std::to_string(k + 1) +
                              " of frame '" + label + "'");
      b(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = v;
    }
  }
  return b;
}

namespace {

int matrix_rank(const Eigen::MatrixXd& rows, double span_tol) {
  if (rows.rows() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(rows);
  int rank = 0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()[i] > span_tol) ++rank;
  return rank;
}

}  // namespace

SpanningSet build_spanning_set(const VectorFieldFrame& frame,
                               std::span<const Point> samples, int s_max,
                               double span_tol) {
  if (samples.empty())
    throw PreconditionError("build_spanning_set: empty sample list");
  if (s_max < 1) throw PreconditionError("build_spanning_set: s_max >= 1");

  const auto n = static_cast<Eigen::Index>(frame.n);
  const std::size_t n_samples = samples.size();

  SpanningSet ss;
  ss.n = frame.n;
  ss.m = frame.m;
  ss.frame_label = frame.label;
  ss.sample_points.assign(samples.begin(), samples.end());

  // Selected vectors evaluated at every sample, one matrix per sample with
  // one row per selected field.
  std::vector<Eigen::MatrixXd> rows(n_samples, Eigen::MatrixXd(0, n));
  std::vector<int> rank(n_samples, 0);

  auto append = [&](const VectorField& v) {
    for (std::size_t s = 0; s < n_samples; ++s) {
      Eigen::MatrixXd grown(rows[s].rows() + 1, n);
      grown.topRows(rows[s].rows()) = rows[s];
      grown.row(rows[s].rows()) = v.evaluate(samples[s]).transpose();
      rows[s] = std::move(grown);
      rank[s] = matrix_rank(rows[s], span_tol);
    }
    ss.vectors.push_back(v);
  };

  auto all_full = [&] {
    return std::all_of(rank.begin(), rank.end(),
                       [&](int r) { return r == static_cast<int>(frame.n); });
  };

  // Degree 1: always X_1..X_m.
  for (const auto& f : frame.fields) append(f);

  std::vector<VectorField> level = frame.fields;  // all of X^(step)
  int step = 1;
  while (!all_full()) {
    if (step >= s_max) {
      auto worst = std::min_element(rank.begin(), rank.end());
      const std::size_t s = static_cast<std::size_t>(worst - rank.begin());
      std::ostringstream os;
      os << "Hörmander condition not certified at step <= " << s_max
         << ": rank " << *worst << " < " << frame.n << " at sample (";
      for (std::size_t k = 0; k < samples[s].size(); ++k) {
        if (k) os << ", ";
        os << samples[s][k];
      }
      os << ")";
      throw StructuralError(os.str());
    }
    ++step;

    // X^(step) = { [X_i, W] : W in X^(step-1) }, identically-zero brackets
    // dropped; candidates considered in word-lexicographic order.
    std::vector<VectorField> next_level;
    for (const auto& w : level) {
      for (std::size_t i = 0; i < frame.m; ++i) {
        VectorField cand = lie_bracket(frame.fields[i], w);
        if (!cand.is_zero()) next_level.push_back(std::move(cand));
      }
    }
    std::sort(next_level.begin(), next_level.end(),
              [](const VectorField& a, const VectorField& b) {
                return a.word < b.word;
              });

    for (const auto& cand : next_level) {
      if (all_full()) break;
      bool helps = false;
      for (std::size_t s = 0; s < n_samples && !helps; ++s) {
        if (rank[s] == static_cast<int>(frame.n)) continue;
        Eigen::MatrixXd grown(rows[s].rows() + 1, n);
        grown.topRows(rows[s].rows()) = rows[s];
        grown.row(rows[s].rows()) = cand.evaluate(samples[s]).transpose();
        helps = matrix_rank(grown, span_tol) > rank[s];
      }
      if (helps) append(cand);
    }
    level = std::move(next_level);
  }
  ss.step = step;
  return ss;
}

NswEvaluation nsw_terms(const SpanningSet& ss, std::span<const double> x) {
  const std::size_t l = ss.size();
  const std::size_t n = ss.n;
  if (l < n)
    throw StructuralError("nsw_terms: fewer spanning vectors than dimensions");

  // All vectors evaluated once; subsets pick rows.
  Eigen::MatrixXd all(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < l; ++i)
    all.row(static_cast<Eigen::Index>(i)) = ss.vectors[i].evaluate(x).transpose();

  NswEvaluation out;
  out.point.assign(x.begin(), x.end());

  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;

  Eigen::MatrixXd sub(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  while (true) {
    int dsum = 0;
    for (std::size_t i = 0; i < n; ++i) {
      dsum += ss.vectors[idx[i]].degree;
      sub.row(static_cast<Eigen::Index>(i)) =
          all.row(static_cast<Eigen::Index>(idx[i]));
    }
    out.terms.push_back({dsum, std::abs(sub.determinant())});

    // next n-combination of {0..l-1}
    std::size_t i = n;
    while (i > 0) {
      --i;
      if (idx[i] != i + l - n) {
        ++idx[i];
        for (std::size_t j = i + 1; j < n; ++j) idx[j] = idx[j - 1] + 1;
        break;
      }
      if (i == 0) return out;
    }
  }
}

int pointwise_q(const SpanningSet& ss, std::span<const double> x,
                double zero_tol) {
  const NswEvaluation ev = nsw_terms(ss, x);
  int q = std::numeric_limits<int>::max();
  for (const auto& t : ev.terms)
    if (t.coeff > zero_tol) q = std::min(q, t.exponent);
  if (q == std::numeric_limits<int>::max()) {
    std::ostringstream os;
    os << "span failure at x = (";
    for (std::size_t k = 0; k < x.size(); ++k) {
      if (k) os << ", ";
      os << x[k];
    }
    os << "): all NSW coefficients below " << zero_tol;
    throw StructuralError(os.str());
  }
  return q;
}

int local_q(const SpanningSet& ss, std::span<const Point> samples,
            double zero_tol) {
  if (samples.empty()) throw PreconditionError("local_q: empty sample list");
  int q = 0;
  for (const auto& p : samples) q = std::max(q, pointwise_q(ss, p, zero_tol));
  return q;
}

}  // namespace sublap
