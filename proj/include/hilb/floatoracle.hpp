#ifndef HILB_FLOATORACLE_HPP
#define HILB_FLOATORACLE_HPP

#include <vector>

#include "hilb/matrix.hpp"

namespace hilb {

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending.
/// Float-oracle use only: cross-checks and irrational fixtures, never
/// certificates.
std::vector<double> symmetric_eigenvalues(const std::vector<std::vector<double>>& a);

std::vector<double> symmetric_eigenvalues(const Mat& m);

/// Oracle verdict: all eigenvalues >= -tolerance.
bool float_psd_oracle(const Mat& m, double tolerance = 1e-9);

}  // namespace hilb

#endif
