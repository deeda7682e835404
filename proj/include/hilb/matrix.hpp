#ifndef HILB_MATRIX_HPP
#define HILB_MATRIX_HPP

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <vector>

#include "hilb/rational.hpp"

namespace hilb {

/// Dense rational matrix. Small and exact; everything the library does with
/// linear algebra (Gram forms, normal equations, commutants) goes through
/// this type.
class Mat {
public:
  Mat() = default;
  Mat(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols) {}
  Mat(std::initializer_list<std::initializer_list<Rational>> init);

  static Mat identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Rational& at(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Rational& at(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  bool operator==(const Mat& other) const = default;

  Mat transposed() const;
  bool is_zero() const;
  bool is_symmetric() const;

  void swap_rows(std::size_t a, std::size_t b);
  void swap_cols(std::size_t a, std::size_t b);

  friend Mat operator*(const Mat& a, const Mat& b);
  friend Mat operator+(const Mat& a, const Mat& b);
  friend Mat operator-(const Mat& a, const Mat& b);
  Mat& operator*=(const Rational& s);

private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<Rational> data_;
};

Mat operator*(const Rational& s, Mat m);

/// Row-reduces `m` in place to reduced row echelon form.
/// Returns the pivot column of each pivot row, in order.
std::vector<std::size_t> rref(Mat& m);

std::size_t rank(Mat m);

/// One exact solution of A x = b with free variables set to zero, or nullopt
/// when the system is inconsistent.
std::optional<std::vector<Rational>> solve(const Mat& a,
                                           const std::vector<Rational>& b);

/// Basis of the right nullspace of `a`, one vector per free column.
std::vector<std::vector<Rational>> nullspace(const Mat& a);

struct PsdResult {
  bool psd = false;
  std::vector<Rational> pivots;        // length n; zeros kept
  std::size_t rank = 0;                // strictly positive pivots
  std::vector<Rational> witness;       // on failure: w with w^T G w < 0
  Rational witness_value;              // w^T G w, exactly
};

/// Decides positive semidefiniteness of a symmetric matrix by exact
/// symmetric elimination with largest-diagonal pivoting. A zero pivot is
/// accepted only when its entire remaining row vanishes; otherwise a witness
/// with strictly negative form value is extracted from the offending 1x1 or
/// 2x2 block and mapped back through the accumulated congruence.
PsdResult check_psd_matrix(const Mat& gram);

}  // namespace hilb

#endif
