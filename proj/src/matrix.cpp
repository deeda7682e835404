#include "hilb/matrix.hpp"

#include "hilb/error.hpp"

namespace hilb {

Mat::Mat(std::initializer_list<std::initializer_list<Rational>> init) {
  rows_ = init.size();
  cols_ = rows_ ? init.begin()->size() : 0;
  data_.reserve(rows_ * cols_);
  for (const auto& row : init) {
    if (row.size() != cols_) fail(errc::internal, "ragged matrix literal");
    data_.insert(data_.end(), row.begin(), row.end());
  }
}

Mat Mat::identity(std::size_t n) {
  Mat m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

Mat Mat::transposed() const {
  Mat t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t.at(j, i) = at(i, j);
  return t;
}

bool Mat::is_zero() const {
  for (const auto& x : data_)
    if (x != 0) return false;
  return true;
}

bool Mat::is_symmetric() const {
  if (rows_ != cols_) return false;
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = i + 1; j < cols_; ++j)
      if (at(i, j) != at(j, i)) return false;
  return true;
}

void Mat::swap_rows(std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t j = 0; j < cols_; ++j) std::swap(at(a, j), at(b, j));
}

void Mat::swap_cols(std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t i = 0; i < rows_; ++i) std::swap(at(i, a), at(i, b));
}

Mat operator*(const Mat& a, const Mat& b) {
  if (a.cols_ != b.rows_) fail(errc::internal, "matrix shape mismatch in *");
  Mat c(a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const Rational& aik = a.at(i, k);
      if (aik == 0) continue;
      for (std::size_t j = 0; j < b.cols_; ++j) {
        if (b.at(k, j) == 0) continue;
        c.at(i, j) += aik * b.at(k, j);
      }
    }
  return c;
}

Mat operator+(const Mat& a, const Mat& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
    fail(errc::internal, "matrix shape mismatch in +");
  Mat c = a;
  for (std::size_t i = 0; i < c.data_.size(); ++i) c.data_[i] += b.data_[i];
  return c;
}

Mat operator-(const Mat& a, const Mat& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
    fail(errc::internal, "matrix shape mismatch in -");
  Mat c = a;
  for (std::size_t i = 0; i < c.data_.size(); ++i) c.data_[i] -= b.data_[i];
  return c;
}

Mat& Mat::operator*=(const Rational& s) {
  for (auto& x : data_) x *= s;
  return *this;
}

Mat operator*(const Rational& s, Mat m) {
  m *= s;
  return m;
}

std::vector<std::size_t> rref(Mat& m) {
  std::vector<std::size_t> pivot_cols;
  std::size_t row = 0;
  for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
    std::size_t pivot = row;
    while (pivot < m.rows() && m.at(pivot, col) == 0) ++pivot;
    if (pivot == m.rows()) continue;
    m.swap_rows(row, pivot);
    Rational inv = 1 / m.at(row, col);
    for (std::size_t j = col; j < m.cols(); ++j) m.at(row, j) *= inv;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == row || m.at(i, col) == 0) continue;
      Rational f = m.at(i, col);
      for (std::size_t j = col; j < m.cols(); ++j)
        m.at(i, j) -= f * m.at(row, j);
    }
    pivot_cols.push_back(col);
    ++row;
  }
  return pivot_cols;
}

std::size_t rank(Mat m) { return rref(m).size(); }

std::optional<std::vector<Rational>> solve(const Mat& a,
                                           const std::vector<Rational>& b) {
  if (b.size() != a.rows()) fail(errc::internal, "rhs size mismatch in solve");
  Mat aug(a.rows(), a.cols() + 1);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) aug.at(i, j) = a.at(i, j);
    aug.at(i, a.cols()) = b[i];
  }
  auto pivots = rref(aug);
  for (std::size_t p : pivots)
    if (p == a.cols()) return std::nullopt;  // pivot in rhs column
  std::vector<Rational> x(a.cols());
  for (std::size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = aug.at(r, a.cols());
  return x;
}

std::vector<std::vector<Rational>> nullspace(const Mat& a) {
  Mat m = a;
  auto pivots = rref(m);
  std::vector<bool> is_pivot(a.cols(), false);
  for (std::size_t p : pivots) is_pivot[p] = true;
  std::vector<std::vector<Rational>> basis;
  for (std::size_t free = 0; free < a.cols(); ++free) {
    if (is_pivot[free]) continue;
    std::vector<Rational> v(a.cols());
    v[free] = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r)
      v[pivots[r]] = -m.at(r, free);
    basis.push_back(std::move(v));
  }
  return basis;
}

PsdResult check_psd_matrix(const Mat& gram) {
  if (!gram.is_symmetric()) fail(errc::internal, "check_psd on non-symmetric matrix");
  const std::size_t n = gram.rows();
  Mat m = gram;
  Mat t = Mat::identity(n);  // invariant: m = t * gram * t^T

  PsdResult res;
  auto emit_witness = [&](const std::vector<Rational>& u) {
    // Map u back through the congruence: w = t^T u.
    res.witness.assign(n, Rational(0));
    for (std::size_t i = 0; i < n; ++i) {
      if (u[i] == 0) continue;
      for (std::size_t j = 0; j < n; ++j) res.witness[j] += u[i] * t.at(i, j);
    }
    Rational val = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        val += res.witness[i] * res.witness[j] * gram.at(i, j);
    res.witness_value = val;
    if (val >= 0) fail(errc::internal, "psd witness has nonnegative form value");
    res.psd = false;
  };

  for (std::size_t k = 0; k < n; ++k) {
    std::size_t best = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (m.at(i, i) > m.at(best, best)) best = i;

    if (m.at(best, best) > 0) {
      m.swap_rows(k, best);
      m.swap_cols(k, best);
      t.swap_rows(k, best);
      Rational d = m.at(k, k);
      res.pivots.push_back(d);
      for (std::size_t i = k + 1; i < n; ++i) {
        if (m.at(i, k) == 0) continue;
        Rational f = m.at(i, k) / d;
        for (std::size_t j = k; j < n; ++j) m.at(i, j) -= f * m.at(k, j);
        for (std::size_t j = 0; j < n; ++j) t.at(i, j) -= f * t.at(k, j);
      }
      // restore symmetry of the trailing block
      for (std::size_t j = k + 1; j < n; ++j) m.at(k, j) = 0;
      for (std::size_t i = k + 1; i < n; ++i) m.at(i, k) = 0;
      continue;
    }

    // Max remaining diagonal is <= 0.
    for (std::size_t i = k; i < n; ++i) {
      if (m.at(i, i) < 0) {
        std::vector<Rational> u(n);
        u[i] = 1;
        emit_witness(u);
        return res;
      }
    }
    // All remaining diagonals are exactly zero: rows must vanish.
    for (std::size_t i = k; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        if (m.at(i, j) != 0) {
          std::vector<Rational> u(n);
          u[i] = -m.at(i, j);
          u[j] = 1;
          emit_witness(u);
          return res;
        }
      }
    }
    // Trailing block is identically zero.
    for (std::size_t i = k; i < n; ++i) res.pivots.push_back(0);
    break;
  }

  res.psd = true;
  res.rank = 0;
  for (const auto& p : res.pivots)
    if (p > 0) ++res.rank;
  return res;
}

}  // namespace hilb
