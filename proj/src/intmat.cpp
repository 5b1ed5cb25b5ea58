#include "coarsex/intmat.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "coarsex/error.hpp"

namespace coarsex {

DenseMatrix::DenseMatrix(std::initializer_list<std::initializer_list<long>> rows) {
  rows_ = rows.size();
  cols_ = rows_ ? rows.begin()->size() : 0;
  a_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) fail(ErrorKind::Input, "ragged matrix literal");
    for (long v : r) a_.emplace_back(v);
  }
}

DenseMatrix DenseMatrix::identity(size_t n) {
  DenseMatrix m(n, n);
  for (size_t i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

bool DenseMatrix::is_zero() const {
  return std::all_of(a_.begin(), a_.end(), [](const Int& v) { return v == 0; });
}

bool DenseMatrix::is_identity() const {
  if (rows_ != cols_) return false;
  for (size_t i = 0; i < rows_; ++i)
    for (size_t j = 0; j < cols_; ++j)
      if (at(i, j) != (i == j ? 1 : 0)) return false;
  return true;
}

DenseMatrix DenseMatrix::transpose() const {
  DenseMatrix t(cols_, rows_);
  for (size_t i = 0; i < rows_; ++i)
    for (size_t j = 0; j < cols_; ++j) t.at(j, i) = at(i, j);
  return t;
}

DenseMatrix DenseMatrix::column_block(size_t first, size_t count) const {
  DenseMatrix b(rows_, count);
  for (size_t i = 0; i < rows_; ++i)
    for (size_t j = 0; j < count; ++j) b.at(i, j) = at(i, first + j);
  return b;
}

DenseMatrix DenseMatrix::row_block(size_t first, size_t count) const {
  DenseMatrix b(count, cols_);
  for (size_t i = 0; i < count; ++i)
    for (size_t j = 0; j < cols_; ++j) b.at(i, j) = at(first + i, j);
  return b;
}

std::vector<Int> DenseMatrix::column(size_t c) const {
  std::vector<Int> v(rows_);
  for (size_t i = 0; i < rows_; ++i) v[i] = at(i, c);
  return v;
}

void DenseMatrix::swap_rows(size_t i, size_t j) {
  if (i == j) return;
  for (size_t c = 0; c < cols_; ++c) std::swap(at(i, c), at(j, c));
}

void DenseMatrix::swap_cols(size_t i, size_t j) {
  if (i == j) return;
  for (size_t r = 0; r < rows_; ++r) std::swap(at(r, i), at(r, j));
}

void DenseMatrix::add_row_multiple(size_t target, size_t source, const Int& f) {
  if (f == 0) return;
  for (size_t c = 0; c < cols_; ++c)
    if (at(source, c) != 0) at(target, c) += f * at(source, c);
}

void DenseMatrix::add_col_multiple(size_t target, size_t source, const Int& f) {
  if (f == 0) return;
  for (size_t r = 0; r < rows_; ++r)
    if (at(r, source) != 0) at(r, target) += f * at(r, source);
}

void DenseMatrix::negate_row(size_t i) {
  for (size_t c = 0; c < cols_; ++c) at(i, c) = -at(i, c);
}

void DenseMatrix::negate_col(size_t j) {
  for (size_t r = 0; r < rows_; ++r) at(r, j) = -at(r, j);
}

std::string DenseMatrix::str() const {
  std::ostringstream os;
  os << "[";
  for (size_t i = 0; i < rows_; ++i) {
    os << (i ? "; " : "");
    for (size_t j = 0; j < cols_; ++j) os << (j ? " " : "") << at(i, j).get_str();
  }
  os << "]";
  return os.str();
}

DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows()) fail(ErrorKind::Precondition, "matrix product shape mismatch");
  DenseMatrix c(a.rows(), b.cols());
  for (size_t i = 0; i < a.rows(); ++i)
    for (size_t k = 0; k < a.cols(); ++k) {
      const Int& x = a.at(i, k);
      if (x == 0) continue;
      for (size_t j = 0; j < b.cols(); ++j)
        if (b.at(k, j) != 0) c.at(i, j) += x * b.at(k, j);
    }
  return c;
}

DenseMatrix operator+(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) fail(ErrorKind::Precondition, "matrix sum shape mismatch");
  DenseMatrix c(a.rows(), a.cols());
  for (size_t i = 0; i < a.rows(); ++i)
    for (size_t j = 0; j < a.cols(); ++j) c.at(i, j) = a.at(i, j) + b.at(i, j);
  return c;
}

DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) fail(ErrorKind::Precondition, "matrix difference shape mismatch");
  DenseMatrix c(a.rows(), a.cols());
  for (size_t i = 0; i < a.rows(); ++i)
    for (size_t j = 0; j < a.cols(); ++j) c.at(i, j) = a.at(i, j) - b.at(i, j);
  return c;
}

std::vector<Int> operator*(const DenseMatrix& a, const std::vector<Int>& v) {
  if (a.cols() != v.size()) fail(ErrorKind::Precondition, "matrix-vector shape mismatch");
  std::vector<Int> r(a.rows());
  for (size_t i = 0; i < a.rows(); ++i)
    for (size_t j = 0; j < a.cols(); ++j)
      if (v[j] != 0 && a.at(i, j) != 0) r[i] += a.at(i, j) * v[j];
  return r;
}

DenseMatrix hconcat(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows()) fail(ErrorKind::Precondition, "hconcat row mismatch");
  DenseMatrix c(a.rows(), a.cols() + b.cols());
  for (size_t i = 0; i < a.rows(); ++i) {
    for (size_t j = 0; j < a.cols(); ++j) c.at(i, j) = a.at(i, j);
    for (size_t j = 0; j < b.cols(); ++j) c.at(i, a.cols() + j) = b.at(i, j);
  }
  return c;
}

DenseMatrix block_diagonal(const DenseMatrix& a, const DenseMatrix& b) {
  DenseMatrix c(a.rows() + b.rows(), a.cols() + b.cols());
  for (size_t i = 0; i < a.rows(); ++i)
    for (size_t j = 0; j < a.cols(); ++j) c.at(i, j) = a.at(i, j);
  for (size_t i = 0; i < b.rows(); ++i)
    for (size_t j = 0; j < b.cols(); ++j) c.at(a.rows() + i, a.cols() + j) = b.at(i, j);
  return c;
}

Int determinant(const DenseMatrix& m) {
  if (m.rows() != m.cols()) fail(ErrorKind::Precondition, "determinant of non-square matrix");
  size_t n = m.rows();
  if (n == 0) return 1;
  DenseMatrix a = m;
  Int prev = 1;
  int sign = 1;
  for (size_t k = 0; k + 1 < n; ++k) {
    if (a.at(k, k) == 0) {
      size_t p = k + 1;
      while (p < n && a.at(p, k) == 0) ++p;
      if (p == n) return 0;
      a.swap_rows(k, p);
      sign = -sign;
    }
    for (size_t i = k + 1; i < n; ++i)
      for (size_t j = k + 1; j < n; ++j) {
        Int t = a.at(i, j) * a.at(k, k) - a.at(i, k) * a.at(k, j);
        mpz_divexact(t.get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
        a.at(i, j) = t;
      }
    prev = a.at(k, k);
  }
  return sign * a.at(n - 1, n - 1);
}

SparseMatrix SparseMatrix::identity(size_t n) {
  SparseMatrix m(n, n);
  for (size_t i = 0; i < n; ++i) m.cols_data_[i].emplace_back(static_cast<int>(i), Int(1));
  return m;
}

SparseMatrix SparseMatrix::from_dense(const DenseMatrix& d) {
  SparseMatrix m(d.rows(), d.cols());
  for (size_t j = 0; j < d.cols(); ++j)
    for (size_t i = 0; i < d.rows(); ++i)
      if (d.at(i, j) != 0) m.cols_data_[j].emplace_back(static_cast<int>(i), d.at(i, j));
  return m;
}

void SparseMatrix::set_column(size_t c, Column col) {
  std::sort(col.begin(), col.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  Column out;
  for (auto& e : col) {
    if (e.first < 0 || static_cast<size_t>(e.first) >= rows_) fail(ErrorKind::Domain, "sparse row index out of range");
    if (!out.empty() && out.back().first == e.first)
      out.back().second += e.second;
    else
      out.push_back(std::move(e));
  }
  out.erase(std::remove_if(out.begin(), out.end(), [](const auto& e) { return e.second == 0; }), out.end());
  cols_data_[c] = std::move(out);
}

void SparseMatrix::add(size_t r, size_t c, const Int& v) {
  if (r >= rows_ || c >= cols_) fail(ErrorKind::Domain, "sparse index out of range");
  auto& col = cols_data_[c];
  auto it = std::lower_bound(col.begin(), col.end(), static_cast<int>(r),
                             [](const auto& e, int row) { return e.first < row; });
  if (it != col.end() && it->first == static_cast<int>(r)) {
    it->second += v;
    if (it->second == 0) col.erase(it);
  } else if (v != 0) {
    col.insert(it, {static_cast<int>(r), v});
  }
}

Int SparseMatrix::get(size_t r, size_t c) const {
  const auto& col = cols_data_[c];
  auto it = std::lower_bound(col.begin(), col.end(), static_cast<int>(r),
                             [](const auto& e, int row) { return e.first < row; });
  if (it != col.end() && it->first == static_cast<int>(r)) return it->second;
  return 0;
}

size_t SparseMatrix::nonzeros() const {
  size_t n = 0;
  for (const auto& c : cols_data_) n += c.size();
  return n;
}

DenseMatrix SparseMatrix::to_dense() const {
  DenseMatrix d(rows_, cols_);
  for (size_t j = 0; j < cols_; ++j)
    for (const auto& [r, v] : cols_data_[j]) d.at(r, j) = v;
  return d;
}

SparseMatrix SparseMatrix::transpose() const {
  SparseMatrix t(cols_, rows_);
  for (size_t j = 0; j < cols_; ++j)
    for (const auto& [r, v] : cols_data_[j]) t.cols_data_[r].emplace_back(static_cast<int>(j), v);
  return t;
}

std::string SparseMatrix::triplets() const {
  std::ostringstream os;
  for (size_t j = 0; j < cols_; ++j)
    for (const auto& [r, v] : cols_data_[j]) os << r << " " << j << " " << v.get_str() << "\n";
  return os.str();
}

SparseMatrix::Column apply_to(const SparseMatrix& a, const SparseMatrix::Column& v) {
  std::map<int, Int> acc;
  for (const auto& [k, x] : v) {
    if (k < 0 || static_cast<size_t>(k) >= a.cols()) fail(ErrorKind::Domain, "vector index out of range");
    for (const auto& [r, y] : a.column(k)) acc[r] += x * y;
  }
  SparseMatrix::Column out;
  for (auto& [r, val] : acc)
    if (val != 0) out.emplace_back(r, val);
  return out;
}

SparseMatrix operator*(const SparseMatrix& a, const SparseMatrix& b) {
  if (a.cols() != b.rows()) fail(ErrorKind::Precondition, "sparse product shape mismatch");
  SparseMatrix c(a.rows(), b.cols());
  for (size_t j = 0; j < b.cols(); ++j) c.set_column(j, apply_to(a, b.column(j)));
  return c;
}

SparseMatrix operator-(const SparseMatrix& a, const SparseMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) fail(ErrorKind::Precondition, "sparse difference shape mismatch");
  SparseMatrix c(a.rows(), a.cols());
  for (size_t j = 0; j < a.cols(); ++j) {
    SparseMatrix::Column col = a.column(j);
    for (const auto& [r, v] : b.column(j)) col.emplace_back(r, -v);
    c.set_column(j, std::move(col));
  }
  return c;
}

namespace {

struct SmithWork {
  DenseMatrix S, P, Q, Pinv, Qinv;
  bool track;

  void row_add(size_t t, size_t s, const Int& f) {  // row_t += f row_s
    S.add_row_multiple(t, s, f);
    if (track) {
      P.add_row_multiple(t, s, f);
      Pinv.add_col_multiple(s, t, -f);
    }
  }
  void col_add(size_t t, size_t s, const Int& f) {  // col_t += f col_s
    S.add_col_multiple(t, s, f);
    if (track) {
      Q.add_col_multiple(t, s, f);
      Qinv.add_row_multiple(s, t, -f);
    }
  }
  void row_swap(size_t i, size_t j) {
    S.swap_rows(i, j);
    if (track) {
      P.swap_rows(i, j);
      Pinv.swap_cols(i, j);
    }
  }
  void col_swap(size_t i, size_t j) {
    S.swap_cols(i, j);
    if (track) {
      Q.swap_cols(i, j);
      Qinv.swap_rows(i, j);
    }
  }
  void row_negate(size_t i) {
    S.negate_row(i);
    if (track) {
      P.negate_row(i);
      Pinv.negate_col(i);
    }
  }
};

size_t run_smith(SmithWork& w) {
  DenseMatrix& S = w.S;
  size_t m = S.rows(), n = S.cols();
  size_t t = 0;
  while (t < std::min(m, n)) {
    size_t pi = m, pj = n;
    for (size_t i = t; i < m; ++i)
      for (size_t j = t; j < n; ++j)
        if (S.at(i, j) != 0 && (pi == m || abs(S.at(i, j)) < abs(S.at(pi, pj)))) {
          pi = i;
          pj = j;
        }
    if (pi == m) break;
    w.row_swap(t, pi);
    w.col_swap(t, pj);
    for (;;) {
      bool changed = false;
      for (size_t i = t + 1; i < m; ++i) {
        if (S.at(i, t) == 0) continue;
        Int q;
        mpz_tdiv_q(q.get_mpz_t(), S.at(i, t).get_mpz_t(), S.at(t, t).get_mpz_t());
        w.row_add(i, t, -q);
        if (S.at(i, t) != 0) {
          w.row_swap(i, t);
          changed = true;
        }
      }
      for (size_t j = t + 1; j < n; ++j) {
        if (S.at(t, j) == 0) continue;
        Int q;
        mpz_tdiv_q(q.get_mpz_t(), S.at(t, j).get_mpz_t(), S.at(t, t).get_mpz_t());
        w.col_add(j, t, -q);
        if (S.at(t, j) != 0) {
          w.col_swap(j, t);
          changed = true;
        }
      }
      if (changed) continue;
      bool clean = true;
      for (size_t i = t + 1; i < m && clean; ++i)
        if (S.at(i, t) != 0) clean = false;
      for (size_t j = t + 1; j < n && clean; ++j)
        if (S.at(t, j) != 0) clean = false;
      if (!clean) continue;
      size_t bad = m;
      for (size_t i = t + 1; i < m && bad == m; ++i)
        for (size_t j = t + 1; j < n; ++j)
          if (!mpz_divisible_p(S.at(i, j).get_mpz_t(), S.at(t, t).get_mpz_t())) {
            bad = i;
            break;
          }
      if (bad == m) break;
      w.row_add(t, bad, Int(1));
    }
    if (S.at(t, t) < 0) w.row_negate(t);
    ++t;
  }
  return t;
}

// Column echelon form E = M U with U unimodular; returns pivot rows of the leading columns.
std::vector<size_t> column_echelon(DenseMatrix& e, DenseMatrix* u) {
  size_t m = e.rows(), n = e.cols();
  std::vector<size_t> pivots;
  size_t p = 0;
  auto col_add = [&](size_t t, size_t s, const Int& f) {
    e.add_col_multiple(t, s, f);
    if (u) u->add_col_multiple(t, s, f);
  };
  auto col_swap = [&](size_t i, size_t j) {
    e.swap_cols(i, j);
    if (u) u->swap_cols(i, j);
  };
  for (size_t r = 0; r < m && p < n; ++r) {
    for (;;) {
      size_t best = n;
      for (size_t j = p; j < n; ++j)
        if (e.at(r, j) != 0 && (best == n || abs(e.at(r, j)) < abs(e.at(r, best)))) best = j;
      if (best == n) break;
      col_swap(p, best);
      bool others = false;
      for (size_t j = p + 1; j < n; ++j) {
        if (e.at(r, j) == 0) continue;
        Int q;
        mpz_fdiv_q(q.get_mpz_t(), e.at(r, j).get_mpz_t(), e.at(r, p).get_mpz_t());
        col_add(j, p, -q);
        if (e.at(r, j) != 0) others = true;
      }
      if (!others) {
        pivots.push_back(r);
        ++p;
        break;
      }
    }
  }
  return pivots;
}

}  // namespace

SmithResult smith_normal_form(const DenseMatrix& m) {
  SmithWork w{m, DenseMatrix::identity(m.rows()), DenseMatrix::identity(m.cols()),
              DenseMatrix::identity(m.rows()), DenseMatrix::identity(m.cols()), true};
  SmithResult r;
  r.rank = run_smith(w);
  for (size_t i = 0; i < r.rank; ++i) r.diagonal.push_back(w.S.at(i, i));
  r.S = std::move(w.S);
  r.P = std::move(w.P);
  r.Q = std::move(w.Q);
  r.Pinv = std::move(w.Pinv);
  r.Qinv = std::move(w.Qinv);
  return r;
}

std::vector<Int> smith_invariants(const DenseMatrix& m) {
  DenseMatrix reduced = lattice_basis(m);
  SmithWork w{reduced, {}, {}, {}, {}, false};
  size_t rank = run_smith(w);
  std::vector<Int> d;
  for (size_t i = 0; i < rank; ++i) d.push_back(w.S.at(i, i));
  return d;
}

DenseMatrix lattice_basis(const DenseMatrix& m) {
  DenseMatrix e = m;
  auto pivots = column_echelon(e, nullptr);
  return e.column_block(0, pivots.size());
}

DenseMatrix integer_kernel(const DenseMatrix& m) {
  DenseMatrix e = m;
  DenseMatrix u = DenseMatrix::identity(m.cols());
  auto pivots = column_echelon(e, &u);
  return u.column_block(pivots.size(), m.cols() - pivots.size());
}

bool solve_in_lattice(const DenseMatrix& m, const std::vector<Int>& x, std::vector<Int>* coeffs) {
  if (x.size() != m.rows()) fail(ErrorKind::Precondition, "lattice membership shape mismatch");
  DenseMatrix e = m;
  DenseMatrix u = DenseMatrix::identity(m.cols());
  auto pivots = column_echelon(e, &u);
  std::vector<Int> res = x;
  std::vector<Int> c(m.cols());
  for (size_t j = 0; j < pivots.size(); ++j) {
    size_t r = pivots[j];
    if (!mpz_divisible_p(res[r].get_mpz_t(), e.at(r, j).get_mpz_t())) return false;
    Int q;
    mpz_divexact(q.get_mpz_t(), res[r].get_mpz_t(), e.at(r, j).get_mpz_t());
    c[j] = q;
    if (q != 0)
      for (size_t i = 0; i < e.rows(); ++i) res[i] -= q * e.at(i, j);
  }
  for (const auto& v : res)
    if (v != 0) return false;
  if (coeffs) *coeffs = u * c;
  return true;
}

bool lattice_contains(const DenseMatrix& big, const DenseMatrix& small) {
  if (big.rows() != small.rows()) fail(ErrorKind::Precondition, "lattice containment row mismatch");
  DenseMatrix e = big;
  auto pivots = column_echelon(e, nullptr);
  DenseMatrix b = e.column_block(0, pivots.size());
  for (size_t j = 0; j < small.cols(); ++j) {
    std::vector<Int> res = small.column(j);
    for (size_t k = 0; k < pivots.size(); ++k) {
      size_t r = pivots[k];
      if (!mpz_divisible_p(res[r].get_mpz_t(), b.at(r, k).get_mpz_t())) return false;
      Int q;
      mpz_divexact(q.get_mpz_t(), res[r].get_mpz_t(), b.at(r, k).get_mpz_t());
      if (q != 0)
        for (size_t i = 0; i < b.rows(); ++i) res[i] -= q * b.at(i, k);
    }
    for (const auto& v : res)
      if (v != 0) return false;
  }
  return true;
}

}  // namespace coarsex

namespace coarsex {

std::optional<DenseMatrix> unimodular_inverse(const DenseMatrix& m) {
  if (m.rows() != m.cols()) return std::nullopt;
  if (m.rows() == 0) return m;
  SmithResult r = smith_normal_form(m);
  if (!r.S.is_identity()) return std::nullopt;
  return r.Q * r.P;
}

}  // namespace coarsex
