#ifndef HILB_KERNEL_HPP
#define HILB_KERNEL_HPP

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "hilb/matrix.hpp"
#include "hilb/rational.hpp"

namespace hilb {

/// A labelled point of a kernel. Points sharing a bounded_block token are
/// declared mutually bounded (interalgebraic); unbounded_flag marks families
/// understood as infinite in the limit.
struct Point {
  std::string id;
  std::string sort_label = "S";
  std::optional<std::string> bounded_block;
  bool unbounded_flag = false;
};

/// Finite labelled point set with an exact symmetric rational pairing.
/// The attained pairing values are cached in value_set.
class Kernel {
public:
  Kernel() = default;
  Kernel(std::vector<Point> points, Mat pairing);

  std::size_t size() const { return points_.size(); }
  const std::vector<Point>& points() const { return points_; }
  const Point& point(std::size_t i) const { return points_[i]; }
  const Mat& pairing_matrix() const { return pairing_; }
  const std::set<Rational>& value_set() const { return value_set_; }

  std::size_t index_of(const std::string& id) const;  // throws UnknownPoint
  bool has_point(const std::string& id) const;

  const Rational& pairing(std::size_t i, std::size_t j) const {
    return pairing_.at(i, j);
  }

private:
  std::vector<Point> points_;
  Mat pairing_;
  std::set<Rational> value_set_;
  std::map<std::string, std::size_t> index_;
};

/// Finite rational linear combination of kernel points, stored sparsely by
/// point index. Zero coefficients are never stored.
class FormalVector {
public:
  FormalVector() = default;
  static FormalVector unit(std::size_t point_index);

  const std::map<std::size_t, Rational>& coefficients() const { return coeff_; }
  bool is_zero() const { return coeff_.empty(); }

  void set(std::size_t index, const Rational& value);
  Rational get(std::size_t index) const;

  FormalVector& operator+=(const FormalVector& other);
  FormalVector& operator-=(const FormalVector& other);
  FormalVector& operator*=(const Rational& s);
  friend FormalVector operator+(FormalVector a, const FormalVector& b) { return a += b; }
  friend FormalVector operator-(FormalVector a, const FormalVector& b) { return a -= b; }
  friend FormalVector operator*(const Rational& s, FormalVector v) { return v *= s; }
  bool operator==(const FormalVector& other) const = default;

private:
  std::map<std::size_t, Rational> coeff_;
};

enum class PsdVerdict { psd, not_psd };

/// Outcome of exact PSD certification: pivots and rank on success, an exact
/// negative-form witness on failure.
struct PsdCertificate {
  PsdVerdict verdict = PsdVerdict::not_psd;
  std::vector<Rational> pivots;
  std::size_t rank = 0;
  FormalVector witness;
  Rational witness_value;  // <witness, witness>, strictly negative on NotPSD

  bool is_psd() const { return verdict == PsdVerdict::psd; }
};

// ---- kernel_core operations ------------------------------------------------

/// Gram matrix of a subset of points (by id).
Mat gram(const Kernel& kernel, const std::vector<std::string>& subset);

PsdCertificate check_psd(const Kernel& kernel);

Rational inner(const FormalVector& u, const FormalVector& v, const Kernel& kernel);

/// True when u - v has zero self-pairing: Gram-null differences are
/// identified with zero throughout the library.
bool gram_equal(const FormalVector& u, const FormalVector& v, const Kernel& kernel);

/// Orthogonal projection of v onto the span, computed exactly via normal
/// equations. The projection is unique even when the span's Gram is singular.
FormalVector project(const FormalVector& v, const std::vector<FormalVector>& span,
                     const Kernel& kernel);

/// Rank of the Gram matrix. Requires a PSD kernel.
std::size_t kernel_rank(const Kernel& kernel);

/// Extends the kernel by one point with the given pairing profile (absent
/// entries are zero). The extension is PSD-certified before being returned;
/// failure throws ExtensionNotPsd carrying a witness description.
Kernel adjoin_point(const Kernel& kernel, const std::map<std::string, Rational>& profile,
                    const Rational& self_value, const std::string& id,
                    std::optional<std::string> bounded_block = std::nullopt,
                    const std::string& sort_label = "limit");

struct AlternatingResult {
  FormalVector vector;
  std::size_t rounds_used = 0;
  bool stabilized = false;
};

/// Von Neumann alternating projections: one round applies the projection
/// onto spanB and then onto spanA. When an iterate repeats exactly the fixed
/// point is asserted equal to the direct projection onto the span
/// intersection. A non-stabilized result carries the last iterate.
AlternatingResult alternating_projections(const FormalVector& v,
                                          const std::vector<FormalVector>& span_a,
                                          const std::vector<FormalVector>& span_b,
                                          const Kernel& kernel,
                                          std::size_t max_rounds = 64);

/// Exact basis of spanA ∩ spanB modulo Gram-null directions.
std::vector<FormalVector> intersect_spans(const std::vector<FormalVector>& span_a,
                                          const std::vector<FormalVector>& span_b,
                                          const Kernel& kernel);

struct EmbeddingCheck {
  bool ok = true;
  std::string first_failure_x, first_failure_y;  // ids in kernelA on failure
  Rational expected, actual;
};

/// Verifies that a point map A -> vectors(B) preserves all pairings exactly.
EmbeddingCheck verify_embedding(const Kernel& kernel_a, const Kernel& kernel_b,
                                const std::map<std::string, FormalVector>& map);

// Helpers shared across modules.
std::vector<Rational> to_dense(const FormalVector& v, std::size_t n);
FormalVector from_dense(const std::vector<Rational>& dense);
std::string format_vector(const FormalVector& v, const Kernel& kernel);

}  // namespace hilb

#endif
