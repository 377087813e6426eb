#include "hnpoly/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

namespace hnpoly {

namespace {

using MatI = Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic>;

long long checked_mul(long long a, long long b) {
  long long r;
  if (__builtin_mul_overflow(a, b, &r))
    throw std::overflow_error("lattice: integer overflow in basis algebra");
  return r;
}

long long checked_sub(long long a, long long b) {
  long long r;
  if (__builtin_sub_overflow(a, b, &r))
    throw std::overflow_error("lattice: integer overflow in basis algebra");
  return r;
}

// Canonical row-style Hermite form of the row lattice of M: full-row-rank
// staircase, positive pivots, entries above a pivot reduced into [0, pivot).
// Unique for the lattice, so flattening it yields a dedup key.
MatI row_hnf(MatI m) {
  const int rows = static_cast<int>(m.rows());
  const int cols = static_cast<int>(m.cols());
  int top = 0;
  for (int c = 0; c < cols && top < rows; ++c) {
    // Gcd-eliminate below `top` until at most one nonzero remains in col c.
    while (true) {
      int i1 = -1, i2 = -1;
      for (int i = top; i < rows; ++i) {
        if (m(i, c) == 0) continue;
        if (i1 < 0 || std::abs(m(i, c)) < std::abs(m(i1, c))) {
          i2 = i1;
          i1 = i;
        } else if (i2 < 0 || std::abs(m(i, c)) < std::abs(m(i2, c))) {
          i2 = i;
        }
      }
      if (i2 < 0) break;
      long long q = m(i2, c) / m(i1, c);
      for (int j = 0; j < cols; ++j)
        m(i2, j) = checked_sub(m(i2, j), checked_mul(q, m(i1, j)));
      if (m(i2, c) != 0) {  // remainder survived; keep reducing
        continue;
      }
    }
    int piv = -1;
    for (int i = top; i < rows; ++i)
      if (m(i, c) != 0) piv = i;
    if (piv < 0) continue;
    m.row(piv).swap(m.row(top));
    if (m(top, c) < 0) m.row(top) = -m.row(top);
    for (int i = 0; i < top; ++i) {
      long long q = m(i, c) / m(top, c);
      if (m(i, c) % m(top, c) < 0) --q;  // floor division
      if (q != 0)
        for (int j = 0; j < cols; ++j)
          m(i, j) = checked_sub(m(i, j), checked_mul(q, m(top, j)));
    }
    ++top;
  }
  return m.topRows(top);
}

// Basis (as columns) of the integer kernel {x : m x = 0}, via unimodular
// column operations mirrored on an identity matrix.
MatI kernel_basis(const MatI& m_in) {
  MatI m = m_in;
  const int rows = static_cast<int>(m.rows());
  const int cols = static_cast<int>(m.cols());
  MatI u = MatI::Identity(cols, cols);
  int fixed = 0;  // columns < fixed hold settled pivots
  for (int r = 0; r < rows && fixed < cols; ++r) {
    while (true) {
      int c1 = -1, c2 = -1;
      for (int c = fixed; c < cols; ++c) {
        if (m(r, c) == 0) continue;
        if (c1 < 0 || std::abs(m(r, c)) < std::abs(m(r, c1))) {
          c2 = c1;
          c1 = c;
        } else if (c2 < 0 || std::abs(m(r, c)) < std::abs(m(r, c2))) {
          c2 = c;
        }
      }
      if (c2 < 0) break;
      long long q = m(r, c2) / m(r, c1);
      for (int i = 0; i < rows; ++i) m(i, c2) = checked_sub(m(i, c2), checked_mul(q, m(i, c1)));
      for (int i = 0; i < cols; ++i) u(i, c2) = checked_sub(u(i, c2), checked_mul(q, u(i, c1)));
    }
    int piv = -1;
    for (int c = fixed; c < cols; ++c)
      if (m(r, c) != 0) piv = c;
    if (piv >= 0) {
      m.col(piv).swap(m.col(fixed));
      u.col(piv).swap(u.col(fixed));
      ++fixed;
    }
  }
  return u.rightCols(cols - fixed);
}

// Saturation of the row lattice of B inside Z^cols: the integer points of
// its rational row span, returned in canonical Hermite form.  Computed as
// the double orthogonal complement, which avoids any divisibility casework.
MatI saturate_rows(const MatI& b) {
  const int cols = static_cast<int>(b.cols());
  MatI w = kernel_basis(b);  // columns orthogonal to the row span
  if (w.cols() == 0) return row_hnf(MatI::Identity(cols, cols));
  MatI sat_cols = kernel_basis(MatI(w.transpose()));
  return row_hnf(MatI(sat_cols.transpose()));
}

// Membership of v in the rational row span of a Hermite-form basis H.
bool in_row_span(const MatI& h, const std::vector<long long>& v) {
  const int k = static_cast<int>(h.rows());
  const int cols = static_cast<int>(h.cols());
  std::vector<Rational> x(v.begin(), v.end());
  for (int i = 0; i < k; ++i) {
    int p = -1;
    for (int c = 0; c < cols; ++c)
      if (h(i, c) != 0) {
        p = c;
        break;
      }
    if (p < 0) continue;
    Rational coef = x[p] / Rational(h(i, p));
    if (coef.is_zero()) continue;
    for (int c = p; c < cols; ++c) x[c] -= coef * Rational(h(i, c));
  }
  for (const Rational& c : x)
    if (!c.is_zero()) return false;
  return true;
}

double sublattice_degree(const MatI& basis, const Eigen::MatrixXd& gram) {
  Eigen::MatrixXd bd = basis.cast<double>();
  Eigen::MatrixXd sub = bd * gram * bd.transpose();
  Eigen::LLT<Eigen::MatrixXd> llt(sub);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("lattice: degenerate sublattice metric");
  double log_det = 0.0;
  for (int i = 0; i < sub.rows(); ++i) log_det += 2.0 * std::log(llt.matrixL()(i, i));
  return -0.5 * log_det;
}

std::vector<HnVertex> upper_hull(std::vector<HnVertex> pts) {
  std::sort(pts.begin(), pts.end(), [](const HnVertex& a, const HnVertex& b) {
    return a.rank < b.rank || (a.rank == b.rank && a.degree > b.degree);
  });
  // Keep one candidate per rank (the best degree).
  std::vector<HnVertex> uniq;
  for (const HnVertex& p : pts)
    if (uniq.empty() || uniq.back().rank != p.rank) uniq.push_back(p);
  std::vector<HnVertex> hull;
  for (const HnVertex& p : uniq) {
    while (hull.size() >= 2) {
      const HnVertex& a = hull[hull.size() - 2];
      const HnVertex& b = hull.back();
      // Strict upper hull: drop b unless it is a strict concave turn.
      double cross = (b.degree - a.degree) * (p.rank - a.rank) -
                     (p.degree - a.degree) * (b.rank - a.rank);
      if (cross <= 1e-12 * std::max(1.0, std::abs(p.degree - a.degree)))
        hull.pop_back();
      else
        break;
    }
    hull.push_back(p);
  }
  return hull;
}

std::string flatten_key(const MatI& h) {
  std::string key;
  key.reserve(static_cast<std::size_t>(h.size()) * 9 + 4);
  key += std::to_string(h.rows());
  key += ';';
  for (int i = 0; i < h.rows(); ++i)
    for (int j = 0; j < h.cols(); ++j) {
      key += std::to_string(h(i, j));
      key += ',';
    }
  return key;
}

}  // namespace

HermitianLattice::HermitianLattice(Eigen::MatrixXd gram, double log_index)
    : gram_(std::move(gram)), log_index_(log_index) {
  if (gram_.rows() != gram_.cols() || gram_.rows() == 0)
    throw std::invalid_argument("HermitianLattice: gram matrix must be square and nonempty");
  if (!(log_index_ >= 0.0) || !std::isfinite(log_index_))
    throw std::invalid_argument("HermitianLattice: log_index must be finite and >= 0");
  double scale = gram_.cwiseAbs().maxCoeff();
  if (!((gram_ - gram_.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * scale))
    throw std::invalid_argument("HermitianLattice: gram matrix must be symmetric");
  gram_ = ((gram_ + gram_.transpose()) / 2.0).eval();  // make symmetry exact
  Eigen::LLT<Eigen::MatrixXd> llt(gram_);
  if (llt.info() != Eigen::Success)
    throw std::invalid_argument("HermitianLattice: gram matrix must be positive definite");
  log_det_gram_ = 0.0;
  for (int i = 0; i < gram_.rows(); ++i) log_det_gram_ += 2.0 * std::log(llt.matrixL()(i, i));
}

HermitianLattice HermitianLattice::twist_line(double a) {
  Eigen::MatrixXd g(1, 1);
  g(0, 0) = std::exp(-2.0 * a);
  return HermitianLattice(std::move(g));
}

HermitianLattice HermitianLattice::twisted(double a) const {
  return HermitianLattice(gram_ * std::exp(-2.0 * a), log_index_);
}

double h0(const HermitianLattice& e, const EnumBudget& budget) {
  if (e.log_index() != 0.0)
    throw std::invalid_argument("h0: requires a basis presentation (log_index == 0)");
  CountResult res = count_short_vectors(e.gram(), 1.0, budget);
  return std::log(static_cast<double>(res.count));
}

double default_search_bound(const HermitianLattice& e) {
  const int r = e.rank();
  return r * std::exp(e.log_det_gram() / r) * std::ldexp(1.0, r);
}

double HnPolygonResult::mu_max() const {
  const HnVertex& v = vertices.at(1);
  return v.degree / v.rank;
}

double HnPolygonResult::positive_degree() const {
  double best = 0.0;
  for (const HnVertex& v : vertices) best = std::max(best, v.degree);
  return best;
}

AtomicMeasure HnPolygonResult::slope_measure() const {
  const int r = vertices.back().rank;
  std::vector<Atom> atoms;
  for (std::size_t i = 0; i + 1 < vertices.size(); ++i) {
    const HnVertex& a = vertices[i];
    const HnVertex& b = vertices[i + 1];
    atoms.push_back(Atom{(b.degree - a.degree) / (b.rank - a.rank),
                         Rational(b.rank - a.rank, r)});
  }
  return AtomicMeasure::from_atoms(std::move(atoms));
}

Polygon HnPolygonResult::normalized_polygon() const {
  return Polygon::from_measure(slope_measure());
}

HnPolygonResult hn_polygon(const HermitianLattice& e, const SearchOptions& opts) {
  if (e.log_index() != 0.0)
    throw std::invalid_argument("hn_polygon: requires a basis presentation (log_index == 0)");
  const int r = e.rank();
  const double bound = opts.search_bound.value_or(default_search_bound(e));
  if (!(bound > 0.0)) throw std::invalid_argument("hn_polygon: search bound must be positive");

  HnPolygonResult result;
  result.search_bound = bound;

  auto finish = [&](std::map<int, double>& best, bool complete,
                    std::uint64_t explored) {
    std::vector<HnVertex> pts;
    pts.push_back(HnVertex{0, 0.0});
    pts.push_back(HnVertex{r, e.degree()});
    for (const auto& [k, d] : best) pts.push_back(HnVertex{k, d});
    result.vertices = upper_hull(std::move(pts));
    result.flag.assign(result.vertices.begin() + 1, result.vertices.end());
    result.subspaces_explored = explored;
    result.certified =
        complete && r <= 4 && bound >= default_search_bound(e) * (1.0 - 1e-12);
  };

  std::map<int, double> best;  // rank -> max degree among explored submodules
  if (r == 1) {
    finish(best, true, 0);
    return result;
  }

  std::vector<std::vector<long long>> vecs;
  try {
    vecs = enumerate_short_vectors(e.gram(), bound, opts.enum_budget);
  } catch (const BudgetError& err) {
    finish(best, false, 0);
    throw HnBudgetError(std::string("hn_polygon: ") + err.what(), result);
  }

  // Primitive representatives, ordered by norm then lexicographically so the
  // whole construction is reproducible.
  std::set<std::vector<long long>> seen;
  std::vector<std::vector<long long>> prims;
  for (std::vector<long long>& v : vecs) {
    long long g = 0;
    for (long long c : v) g = std::gcd(g, std::llabs(c));
    if (g > 1)
      for (long long& c : v) c /= g;
    if (seen.insert(v).second) prims.push_back(std::move(v));
  }
  Eigen::MatrixXd gd = e.gram();
  auto qform = [&](const std::vector<long long>& v) {
    double q = 0.0;
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < r; ++j) q += gd(i, j) * double(v[i]) * double(v[j]);
    return q;
  };
  std::sort(prims.begin(), prims.end(), [&](const auto& a, const auto& b) {
    double qa = qform(a), qb = qform(b);
    if (qa != qb) return qa < qb;
    return a < b;
  });

  std::uint64_t stored = 0;
  std::set<std::string> keys;
  std::vector<MatI> level;
  for (const auto& p : prims) {
    MatI m(1, r);
    for (int j = 0; j < r; ++j) m(0, j) = p[j];
    MatI h = row_hnf(m);
    if (!keys.insert(flatten_key(h)).second) continue;
    ++stored;
    double d = sublattice_degree(h, e.gram());
    auto it = best.find(1);
    if (it == best.end() || d > it->second) best[1] = d;
    level.push_back(std::move(h));
  }

  for (int k = 1; k <= r - 2; ++k) {
    std::vector<MatI> next;
    for (const MatI& s : level) {
      for (const auto& p : prims) {
        if (in_row_span(s, p)) continue;
        MatI ext(k + 1, r);
        ext.topRows(k) = s;
        for (int j = 0; j < r; ++j) ext(k, j) = p[j];
        MatI h = saturate_rows(ext);
        if (!keys.insert(flatten_key(h)).second) continue;
        if (++stored > opts.max_subspaces) {
          finish(best, false, stored);
          throw HnBudgetError("hn_polygon: subspace budget exceeded (" +
                                  std::to_string(opts.max_subspaces) + ")",
                              result);
        }
        double d = sublattice_degree(h, e.gram());
        auto it = best.find(k + 1);
        if (it == best.end() || d > it->second) best[k + 1] = d;
        next.push_back(std::move(h));
      }
    }
    level = std::move(next);
    if (level.empty()) break;
  }

  finish(best, true, stored);
  return result;
}

double positive_degree(const HermitianLattice& e, const SearchOptions& opts) {
  return hn_polygon(e, opts).positive_degree();
}

H0DegPlusReport h0_vs_degplus(const HermitianLattice& e, const SearchOptions& opts) {
  H0DegPlusReport rep;
  rep.h0 = h0(e, opts.enum_budget);
  rep.deg_plus = positive_degree(e, opts);
  rep.gap = std::abs(rep.h0 - rep.deg_plus);
  return rep;
}

double first_minimum(const HermitianLattice& e, const EnumBudget& budget) {
  if (e.log_index() != 0.0)
    throw std::invalid_argument("first_minimum: requires a basis presentation (log_index == 0)");
  const double bound = e.gram().diagonal().minCoeff();
  CountResult res = count_short_vectors(e.gram(), bound, budget);
  return res.min_nonzero;  // a basis vector attains the bound, so this is finite
}

double map_height(const LatticeMap& phi) {
  if (phi.matrix.rows() != phi.target.rank() || phi.matrix.cols() != phi.source.rank())
    throw std::invalid_argument("map_height: matrix shape does not match the modules");
  long long g = 0;
  for (int i = 0; i < phi.matrix.rows(); ++i)
    for (int j = 0; j < phi.matrix.cols(); ++j) g = std::gcd(g, std::llabs(phi.matrix(i, j)));
  if (g == 0) throw std::invalid_argument("map_height: zero map has no height");

  Eigen::LLT<Eigen::MatrixXd> llt_src(phi.source.gram());
  Eigen::LLT<Eigen::MatrixXd> llt_tgt(phi.target.gram());
  Eigen::MatrixXd md = phi.matrix.cast<double>();
  Eigen::MatrixXd a = llt_tgt.matrixL().transpose() * md;
  // X = A * L_src^{-T}, via L_src Z = A^T.
  Eigen::MatrixXd z = llt_src.matrixL().solve(a.transpose());
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(z.transpose());
  double sigma = svd.singularValues()(0);
  return std::log(sigma) - std::log(static_cast<double>(g));
}

}  // namespace hnpoly
