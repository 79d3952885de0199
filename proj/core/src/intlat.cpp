#include "tropivol/intlat.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace tropivol {

IntMatrix::IntMatrix(int rows, int cols) : rows_(rows), cols_(cols) {
  if (rows < 0 || cols < 0) throw std::invalid_argument("IntMatrix: negative shape");
  e_.assign(static_cast<size_t>(rows) * cols, Int(0));
}

IntMatrix::IntMatrix(int rows, int cols, std::vector<Int> entries)
    : rows_(rows), cols_(cols), e_(std::move(entries)) {
  if (rows < 0 || cols < 0) throw std::invalid_argument("IntMatrix: negative shape");
  if (e_.size() != static_cast<size_t>(rows) * cols)
    throw std::invalid_argument("IntMatrix: entry count does not match shape");
}

IntMatrix IntMatrix::identity(int n) {
  IntMatrix m(n, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

IntMatrix IntMatrix::transposed() const {
  IntMatrix t(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) t.at(j, i) = at(i, j);
  return t;
}

bool IntMatrix::is_identity() const {
  if (!is_square()) return false;
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j)
      if (at(i, j) != (i == j ? 1 : 0)) return false;
  return true;
}

bool IntMatrix::is_zero() const {
  for (const auto& x : e_)
    if (x != 0) return false;
  return true;
}

Int IntMatrix::determinant() const {
  if (!is_square()) throw std::invalid_argument("determinant: matrix not square");
  int n = rows_;
  if (n == 0) return Int(1);
  // Bareiss fraction-free elimination.
  IntMatrix a = *this;
  Int prev(1);
  int sign = 1;
  for (int k = 0; k < n - 1; ++k) {
    if (a.at(k, k) == 0) {
      int p = -1;
      for (int i = k + 1; i < n; ++i)
        if (a.at(i, k) != 0) {
          p = i;
          break;
        }
      if (p < 0) return Int(0);
      for (int j = 0; j < n; ++j) std::swap(a.at(k, j), a.at(p, j));
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i) {
      for (int j = k + 1; j < n; ++j) {
        Int num = a.at(i, j) * a.at(k, k) - a.at(i, k) * a.at(k, j);
        mpz_divexact(a.at(i, j).get_mpz_t(), num.get_mpz_t(), prev.get_mpz_t());
      }
      a.at(i, k) = 0;
    }
    prev = a.at(k, k);
  }
  return sign > 0 ? a.at(n - 1, n - 1) : -a.at(n - 1, n - 1);
}

IntMatrix IntMatrix::inverse_unimodular() const {
  if (!is_square()) throw std::invalid_argument("inverse_unimodular: matrix not square");
  int n = rows_;
  Int det = determinant();
  if (det != 1 && det != -1)
    throw std::invalid_argument("inverse_unimodular: determinant is not ±1");
  // Gauss-Jordan over Q; the result is integral because det = ±1.
  std::vector<std::vector<Rat>> w(n, std::vector<Rat>(2 * n, Rat(0)));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) w[i][j] = Rat(at(i, j));
    w[i][n + i] = 1;
  }
  for (int c = 0; c < n; ++c) {
    int p = -1;
    for (int i = c; i < n; ++i)
      if (w[i][c] != 0) {
        p = i;
        break;
      }
    if (p < 0) throw std::logic_error("inverse_unimodular: singular");
    std::swap(w[c], w[p]);
    Rat inv = 1 / w[c][c];
    for (int j = 0; j < 2 * n; ++j) w[c][j] *= inv;
    for (int i = 0; i < n; ++i) {
      if (i == c || w[i][c] == 0) continue;
      Rat f = w[i][c];
      for (int j = 0; j < 2 * n; ++j) w[i][j] -= f * w[c][j];
    }
  }
  IntMatrix out(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Rat q = w[i][n + j];
      q.canonicalize();
      if (q.get_den() != 1) throw std::logic_error("inverse_unimodular: non-integral inverse");
      out.at(i, j) = q.get_num();
    }
  return out;
}

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("matrix product: shape mismatch");
  IntMatrix c(a.rows(), b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int k = 0; k < a.cols(); ++k) {
      if (a.at(i, k) == 0) continue;
      for (int j = 0; j < b.cols(); ++j) c.at(i, j) += a.at(i, k) * b.at(k, j);
    }
  return c;
}

IntMatrix operator+(const IntMatrix& a, const IntMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("matrix sum: shape mismatch");
  IntMatrix c(a.rows(), a.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) c.at(i, j) = a.at(i, j) + b.at(i, j);
  return c;
}

IntMatrix operator-(const IntMatrix& a, const IntMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("matrix difference: shape mismatch");
  IntMatrix c(a.rows(), a.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) c.at(i, j) = a.at(i, j) - b.at(i, j);
  return c;
}

bool operator==(const IntMatrix& a, const IntMatrix& b) {
  return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.e_ == b.e_;
}

std::vector<Int> IntMatrix::apply(std::span<const Int> x) const {
  if (static_cast<int>(x.size()) != cols_)
    throw std::invalid_argument("IntMatrix::apply: vector length mismatch");
  std::vector<Int> y(rows_, Int(0));
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) y[i] += at(i, j) * x[j];
  return y;
}

std::string IntMatrix::str() const {
  std::ostringstream os;
  os << "(mat";
  for (int i = 0; i < rows_; ++i) {
    os << " (row";
    for (int j = 0; j < cols_; ++j) os << ' ' << at(i, j).get_str();
    os << ')';
  }
  os << ')';
  return os.str();
}

namespace {

struct SnfWork {
  IntMatrix a, u, v;

  void swap_rows(int i, int j) {
    if (i == j) return;
    for (int c = 0; c < a.cols(); ++c) std::swap(a.at(i, c), a.at(j, c));
    for (int c = 0; c < u.cols(); ++c) std::swap(u.at(i, c), u.at(j, c));
  }
  void swap_cols(int i, int j) {
    if (i == j) return;
    for (int r = 0; r < a.rows(); ++r) std::swap(a.at(r, i), a.at(r, j));
    for (int r = 0; r < v.rows(); ++r) std::swap(v.at(r, i), v.at(r, j));
  }
  // row[i] -= q * row[k]
  void row_sub(int i, int k, const Int& q) {
    if (q == 0) return;
    for (int c = 0; c < a.cols(); ++c) a.at(i, c) -= q * a.at(k, c);
    for (int c = 0; c < u.cols(); ++c) u.at(i, c) -= q * u.at(k, c);
  }
  // col[j] -= q * col[k]
  void col_sub(int j, int k, const Int& q) {
    if (q == 0) return;
    for (int r = 0; r < a.rows(); ++r) a.at(r, j) -= q * a.at(r, k);
    for (int r = 0; r < v.rows(); ++r) v.at(r, j) -= q * v.at(r, k);
  }
  void negate_row(int i) {
    for (int c = 0; c < a.cols(); ++c) a.at(i, c) = -a.at(i, c);
    for (int c = 0; c < u.cols(); ++c) u.at(i, c) = -u.at(i, c);
  }
};

// Smallest nonzero |entry| in the trailing submatrix, row-major tie-break.
bool find_pivot(const IntMatrix& a, int t, int& pi, int& pj) {
  bool found = false;
  Int best;
  for (int i = t; i < a.rows(); ++i)
    for (int j = t; j < a.cols(); ++j) {
      const Int& x = a.at(i, j);
      if (x == 0) continue;
      Int ax = abs(x);
      if (!found || ax < best) {
        found = true;
        best = ax;
        pi = i;
        pj = j;
      }
    }
  return found;
}

}  // namespace

SmithResult smith_normal_form(const IntMatrix& m) {
  SnfWork w{m, IntMatrix::identity(m.rows()), IntMatrix::identity(m.cols())};
  int t = 0;
  const int dlen = std::min(m.rows(), m.cols());
  while (t < dlen) {
    int pi, pj;
    if (!find_pivot(w.a, t, pi, pj)) break;
    w.swap_rows(t, pi);
    w.swap_cols(t, pj);
    for (;;) {
      // Clear column t below the pivot; restart with any smaller remainder.
      bool restarted = false;
      for (int i = t + 1; i < w.a.rows(); ++i) {
        if (w.a.at(i, t) == 0) continue;
        Int q, r;
        mpz_tdiv_qr(q.get_mpz_t(), r.get_mpz_t(), w.a.at(i, t).get_mpz_t(),
                    w.a.at(t, t).get_mpz_t());
        w.row_sub(i, t, q);
        if (r != 0) {
          w.swap_rows(t, i);
          restarted = true;
          break;
        }
      }
      if (restarted) continue;
      for (int j = t + 1; j < w.a.cols(); ++j) {
        if (w.a.at(t, j) == 0) continue;
        Int q, r;
        mpz_tdiv_qr(q.get_mpz_t(), r.get_mpz_t(), w.a.at(t, j).get_mpz_t(),
                    w.a.at(t, t).get_mpz_t());
        w.col_sub(j, t, q);
        if (r != 0) {
          w.swap_cols(t, j);
          restarted = true;
          break;
        }
      }
      if (restarted) continue;
      // Pivot now divides its row and column remainders (both cleared).
      // Enforce divisibility of the trailing submatrix.
      bool fixed = false;
      for (int i = t + 1; i < w.a.rows() && !fixed; ++i)
        for (int j = t + 1; j < w.a.cols() && !fixed; ++j)
          if (w.a.at(i, j) % w.a.at(t, t) != 0) {
            w.row_sub(t, i, Int(-1));  // add row i to row t
            fixed = true;
          }
      if (!fixed) break;
    }
    if (w.a.at(t, t) < 0) w.negate_row(t);
    ++t;
  }
  SmithResult res;
  res.diag.reserve(dlen);
  for (int i = 0; i < dlen; ++i) res.diag.push_back(w.a.at(i, i));
  res.u = std::move(w.u);
  res.v = std::move(w.v);
  return res;
}

CokernelInvariants cokernel_invariants(const IntMatrix& m) {
  SmithResult s = smith_normal_form(m);
  CokernelInvariants out;
  int nonzero = 0;
  for (const auto& d : s.diag) {
    if (d == 0) continue;
    ++nonzero;
    if (d > 1) out.torsion.push_back(d);
  }
  out.free_rank = m.rows() - nonzero;
  return out;
}

IntMatrix kernel_basis(const IntMatrix& m) {
  SmithResult s = smith_normal_form(m);
  const int dlen = static_cast<int>(s.diag.size());
  std::vector<int> free_cols;
  for (int j = 0; j < m.cols(); ++j)
    if (j >= dlen || s.diag[j] == 0) free_cols.push_back(j);
  IntMatrix basis(m.cols(), static_cast<int>(free_cols.size()));
  for (int k = 0; k < static_cast<int>(free_cols.size()); ++k)
    for (int i = 0; i < m.cols(); ++i) basis.at(i, k) = s.v.at(i, free_cols[k]);
  return basis;
}

GroupAction::GroupAction(int rank, std::vector<IntMatrix> generators,
                         std::vector<IntMatrix> elements)
    : rank_(rank), generators_(std::move(generators)), elements_(std::move(elements)) {
  if (rank_ <= 0) throw std::invalid_argument("GroupAction: rank must be positive");
  if (elements_.empty()) throw std::invalid_argument("GroupAction: empty element list");
  identity_index_ = -1;
  for (size_t i = 0; i < elements_.size(); ++i) {
    const IntMatrix& g = elements_[i];
    if (g.rows() != rank_ || g.cols() != rank_)
      throw std::invalid_argument("GroupAction: element shape mismatch");
    Int det = g.determinant();
    if (det != 1 && det != -1)
      throw std::invalid_argument("GroupAction: element determinant is not ±1");
    if (identity_index_ < 0 && g.is_identity()) identity_index_ = static_cast<int>(i);
  }
  if (identity_index_ < 0)
    throw std::invalid_argument("GroupAction: element list lacks the identity");
  for (size_t i = 0; i < elements_.size(); ++i)
    for (size_t j = 0; j < elements_.size(); ++j)
      product_index(static_cast<int>(i), static_cast<int>(j));  // throws if not closed
  for (const auto& g : generators_) {
    bool present = false;
    for (const auto& e : elements_)
      if (e == g) present = true;
    if (!present) throw std::invalid_argument("GroupAction: generator not in element list");
  }
}

GroupAction GroupAction::from_generators(int rank, std::vector<IntMatrix> generators,
                                         int max_order) {
  std::vector<IntMatrix> elems;
  elems.push_back(IntMatrix::identity(rank));
  size_t next = 0;
  while (next < elems.size()) {
    IntMatrix cur = elems[next++];
    for (const auto& g : generators) {
      IntMatrix p = cur * g;
      bool seen = false;
      for (const auto& e : elems)
        if (e == p) {
          seen = true;
          break;
        }
      if (!seen) {
        elems.push_back(p);
        if (static_cast<int>(elems.size()) > max_order)
          throw std::invalid_argument("GroupAction: generator closure exceeds cap");
      }
    }
  }
  return GroupAction(rank, std::move(generators), std::move(elems));
}

int GroupAction::product_index(int i, int j) const {
  IntMatrix p = elements_[i] * elements_[j];
  for (size_t k = 0; k < elements_.size(); ++k)
    if (elements_[k] == p) return static_cast<int>(k);
  throw std::invalid_argument("GroupAction: element list not closed under product");
}

bool GroupAction::subset_closed(std::span<const int> subgroup) const {
  for (int i : subgroup)
    if (i < 0 || i >= static_cast<int>(elements_.size())) return false;
  for (int i : subgroup)
    for (int j : subgroup) {
      IntMatrix p = elements_[i] * elements_[j];
      bool found = false;
      for (int k : subgroup)
        if (elements_[k] == p) {
          found = true;
          break;
        }
      if (!found) return false;
    }
  return true;
}

int fixed_space_rank(const GroupAction& action, std::span<const int> subgroup) {
  if (subgroup.empty()) throw std::invalid_argument("fixed_space_rank: empty subgroup");
  const int n = action.rank();
  const int count = static_cast<int>(action.elements().size());
  for (int i : subgroup)
    if (i < 0 || i >= count) throw std::invalid_argument("fixed_space_rank: bad element index");
  if (!action.subset_closed(subgroup))
    throw std::invalid_argument("fixed_space_rank: subgroup not closed under product");

  std::vector<IntMatrix> blocks;
  for (int i : subgroup) {
    IntMatrix d = action.elements()[i] - IntMatrix::identity(n);
    if (!d.is_zero()) blocks.push_back(std::move(d));
  }
  if (blocks.empty()) return n;
  IntMatrix stacked(static_cast<int>(blocks.size()) * n, n);
  for (size_t b = 0; b < blocks.size(); ++b)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) stacked.at(static_cast<int>(b) * n + i, j) = blocks[b].at(i, j);
  return kernel_basis(stacked).cols();
}

}  // namespace tropivol
