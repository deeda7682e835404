#include "hilb/kernel.hpp"

#include <algorithm>
#include <sstream>

#include "hilb/error.hpp"

namespace hilb {

Kernel::Kernel(std::vector<Point> points, Mat pairing)
    : points_(std::move(points)), pairing_(std::move(pairing)) {
  if (pairing_.rows() != points_.size() || pairing_.cols() != points_.size())
    fail(errc::internal, "pairing matrix size does not match point count");
  if (!pairing_.is_symmetric())
    fail(errc::parse_error, "kernel pairing is not symmetric");
  for (std::size_t i = 0; i < points_.size(); ++i) {
    auto [it, inserted] = index_.emplace(points_[i].id, i);
    if (!inserted) fail(errc::duplicate_id, "duplicate point id '" + points_[i].id + "'");
  }
  for (std::size_t i = 0; i < points_.size(); ++i)
    for (std::size_t j = i; j < points_.size(); ++j)
      value_set_.insert(pairing_.at(i, j));
}

std::size_t Kernel::index_of(const std::string& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) fail(errc::unknown_point, "unknown point id '" + id + "'");
  return it->second;
}

bool Kernel::has_point(const std::string& id) const { return index_.count(id) > 0; }

FormalVector FormalVector::unit(std::size_t point_index) {
  FormalVector v;
  v.coeff_[point_index] = 1;
  return v;
}

void FormalVector::set(std::size_t index, const Rational& value) {
  if (value == 0)
    coeff_.erase(index);
  else
    coeff_[index] = value;
}

Rational FormalVector::get(std::size_t index) const {
  auto it = coeff_.find(index);
  return it == coeff_.end() ? Rational(0) : it->second;
}

FormalVector& FormalVector::operator+=(const FormalVector& other) {
  for (const auto& [i, c] : other.coeff_) set(i, get(i) + c);
  return *this;
}

FormalVector& FormalVector::operator-=(const FormalVector& other) {
  for (const auto& [i, c] : other.coeff_) set(i, get(i) - c);
  return *this;
}

FormalVector& FormalVector::operator*=(const Rational& s) {
  if (s == 0) {
    coeff_.clear();
    return *this;
  }
  for (auto& [i, c] : coeff_) c *= s;
  return *this;
}

std::vector<Rational> to_dense(const FormalVector& v, std::size_t n) {
  std::vector<Rational> dense(n);
  for (const auto& [i, c] : v.coefficients()) {
    if (i >= n) fail(errc::unknown_point, "vector support outside kernel");
    dense[i] = c;
  }
  return dense;
}

FormalVector from_dense(const std::vector<Rational>& dense) {
  FormalVector v;
  for (std::size_t i = 0; i < dense.size(); ++i) v.set(i, dense[i]);
  return v;
}

std::string format_vector(const FormalVector& v, const Kernel& kernel) {
  if (v.is_zero()) return "0";
  std::ostringstream out;
  bool first = true;
  for (const auto& [i, c] : v.coefficients()) {
    if (!first) out << " + ";
    out << to_string(c) << "*" << kernel.point(i).id;
    first = false;
  }
  return out.str();
}

Mat gram(const Kernel& kernel, const std::vector<std::string>& subset) {
  std::vector<std::size_t> idx;
  idx.reserve(subset.size());
  for (const auto& id : subset) idx.push_back(kernel.index_of(id));
  Mat g(idx.size(), idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i)
    for (std::size_t j = 0; j < idx.size(); ++j)
      g.at(i, j) = kernel.pairing(idx[i], idx[j]);
  return g;
}

PsdCertificate check_psd(const Kernel& kernel) {
  PsdResult r = check_psd_matrix(kernel.pairing_matrix());
  PsdCertificate cert;
  cert.pivots = std::move(r.pivots);
  cert.rank = r.rank;
  if (r.psd) {
    cert.verdict = PsdVerdict::psd;
  } else {
    cert.verdict = PsdVerdict::not_psd;
    cert.witness = from_dense(r.witness);
    cert.witness_value = r.witness_value;
  }
  return cert;
}

Rational inner(const FormalVector& u, const FormalVector& v, const Kernel& kernel) {
  Rational total = 0;
  for (const auto& [i, a] : u.coefficients()) {
    if (i >= kernel.size()) fail(errc::unknown_point, "vector support outside kernel");
    for (const auto& [j, b] : v.coefficients()) {
      if (j >= kernel.size()) fail(errc::unknown_point, "vector support outside kernel");
      total += a * b * kernel.pairing(i, j);
    }
  }
  return total;
}

bool gram_equal(const FormalVector& u, const FormalVector& v, const Kernel& kernel) {
  FormalVector d = u - v;
  return inner(d, d, kernel) == 0;
}

FormalVector project(const FormalVector& v, const std::vector<FormalVector>& span,
                     const Kernel& kernel) {
  if (span.empty()) return FormalVector{};
  const std::size_t k = span.size();
  Mat g(k, k);
  std::vector<Rational> b(k);
  for (std::size_t i = 0; i < k; ++i) {
    b[i] = inner(v, span[i], kernel);
    for (std::size_t j = 0; j < k; ++j) g.at(i, j) = inner(span[i], span[j], kernel);
  }
  auto coeffs = solve(g, b);
  if (!coeffs)
    fail(errc::internal, "normal equations inconsistent (pairing not PSD?)");
  FormalVector result;
  for (std::size_t i = 0; i < k; ++i) {
    if ((*coeffs)[i] == 0) continue;
    FormalVector term = span[i];
    term *= (*coeffs)[i];
    result += term;
  }
  return result;
}

std::size_t kernel_rank(const Kernel& kernel) {
  PsdCertificate cert = check_psd(kernel);
  if (!cert.is_psd())
    fail(errc::not_psd, "rank requires a PSD kernel; witness " +
                            format_vector(cert.witness, kernel) + " has self-pairing " +
                            to_string(cert.witness_value));
  return cert.rank;
}

Kernel adjoin_point(const Kernel& kernel, const std::map<std::string, Rational>& profile,
                    const Rational& self_value, const std::string& id,
                    std::optional<std::string> bounded_block,
                    const std::string& sort_label) {
  if (kernel.has_point(id)) fail(errc::duplicate_id, "point id '" + id + "' already present");
  const std::size_t n = kernel.size();
  Mat extended(n + 1, n + 1);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) extended.at(i, j) = kernel.pairing(i, j);
  for (const auto& [pid, value] : profile) {
    std::size_t i = kernel.index_of(pid);
    extended.at(i, n) = value;
    extended.at(n, i) = value;
  }
  extended.at(n, n) = self_value;

  std::vector<Point> points = kernel.points();
  Point p;
  p.id = id;
  p.sort_label = sort_label;
  p.bounded_block = std::move(bounded_block);
  points.push_back(p);

  Kernel result(std::move(points), std::move(extended));
  PsdCertificate cert = check_psd(result);
  if (!cert.is_psd())
    fail(errc::extension_not_psd,
         "adjoining '" + id + "' breaks positive semidefiniteness; witness " +
             format_vector(cert.witness, result) + " has self-pairing " +
             to_string(cert.witness_value));
  return result;
}

AlternatingResult alternating_projections(const FormalVector& v,
                                          const std::vector<FormalVector>& span_a,
                                          const std::vector<FormalVector>& span_b,
                                          const Kernel& kernel, std::size_t max_rounds) {
  AlternatingResult res;
  FormalVector current = v;
  for (std::size_t round = 1; round <= max_rounds; ++round) {
    FormalVector next = project(project(current, span_b, kernel), span_a, kernel);
    if (gram_equal(next, current, kernel) && round > 1) {
      res.vector = current;
      res.rounds_used = round - 1;
      res.stabilized = true;
      FormalVector direct = project(v, intersect_spans(span_a, span_b, kernel), kernel);
      if (!gram_equal(res.vector, direct, kernel))
        fail(errc::internal, "stabilized iterate disagrees with intersection projection");
      return res;
    }
    if (gram_equal(next, current, kernel)) {
      // v was already a fixed point; count the verifying round.
      res.vector = next;
      res.rounds_used = 1;
      res.stabilized = true;
      FormalVector direct = project(v, intersect_spans(span_a, span_b, kernel), kernel);
      if (!gram_equal(res.vector, direct, kernel))
        fail(errc::internal, "stabilized iterate disagrees with intersection projection");
      return res;
    }
    current = next;
  }
  res.vector = current;
  res.rounds_used = max_rounds;
  res.stabilized = false;
  return res;
}

std::vector<FormalVector> intersect_spans(const std::vector<FormalVector>& span_a,
                                          const std::vector<FormalVector>& span_b,
                                          const Kernel& kernel) {
  const std::size_t n = kernel.size();
  // Gram-null directions belong to every span's closure.
  std::vector<std::vector<Rational>> radical = nullspace(kernel.pairing_matrix());

  std::vector<std::vector<Rational>> cols_a, cols_b;
  for (const auto& v : span_a) cols_a.push_back(to_dense(v, n));
  for (const auto& r : radical) cols_a.push_back(r);
  for (const auto& v : span_b) cols_b.push_back(to_dense(v, n));
  for (const auto& r : radical) cols_b.push_back(r);

  if (cols_a.empty() || cols_b.empty()) return {};

  // w in both spans iff w = A x = B y; solve [A | -B] z = 0.
  Mat stacked(n, cols_a.size() + cols_b.size());
  for (std::size_t j = 0; j < cols_a.size(); ++j)
    for (std::size_t i = 0; i < n; ++i) stacked.at(i, j) = cols_a[j][i];
  for (std::size_t j = 0; j < cols_b.size(); ++j)
    for (std::size_t i = 0; i < n; ++i)
      stacked.at(i, cols_a.size() + j) = -cols_b[j][i];

  std::vector<FormalVector> result;
  // Track independence modulo the radical: rows = accepted vectors + radical.
  std::vector<std::vector<Rational>> accepted = radical;
  std::size_t base_rank = 0;
  {
    Mat m(accepted.size(), n);
    for (std::size_t i = 0; i < accepted.size(); ++i)
      for (std::size_t j = 0; j < n; ++j) m.at(i, j) = accepted[i][j];
    base_rank = rank(std::move(m));
  }

  for (const auto& z : nullspace(stacked)) {
    std::vector<Rational> w(n);
    bool nonzero = false;
    for (std::size_t j = 0; j < cols_a.size(); ++j) {
      if (z[j] == 0) continue;
      for (std::size_t i = 0; i < n; ++i) w[i] += z[j] * cols_a[j][i];
    }
    for (const auto& x : w) nonzero = nonzero || x != 0;
    if (!nonzero) continue;
    // Keep w only if independent of what we already have, modulo the radical.
    Mat m(accepted.size() + 1, n);
    for (std::size_t i = 0; i < accepted.size(); ++i)
      for (std::size_t j = 0; j < n; ++j) m.at(i, j) = accepted[i][j];
    for (std::size_t j = 0; j < n; ++j) m.at(accepted.size(), j) = w[j];
    if (rank(std::move(m)) <= base_rank) continue;
    accepted.push_back(w);
    ++base_rank;
    result.push_back(from_dense(w));
  }
  return result;
}

EmbeddingCheck verify_embedding(const Kernel& kernel_a, const Kernel& kernel_b,
                                const std::map<std::string, FormalVector>& map) {
  EmbeddingCheck check;
  for (std::size_t i = 0; i < kernel_a.size(); ++i) {
    const std::string& xi = kernel_a.point(i).id;
    auto it = map.find(xi);
    if (it == map.end()) fail(errc::unknown_point, "embedding map misses point '" + xi + "'");
    for (std::size_t j = i; j < kernel_a.size(); ++j) {
      const std::string& xj = kernel_a.point(j).id;
      auto jt = map.find(xj);
      if (jt == map.end()) fail(errc::unknown_point, "embedding map misses point '" + xj + "'");
      Rational got = inner(it->second, jt->second, kernel_b);
      if (got != kernel_a.pairing(i, j)) {
        check.ok = false;
        check.first_failure_x = xi;
        check.first_failure_y = xj;
        check.expected = kernel_a.pairing(i, j);
        check.actual = got;
        return check;
      }
    }
  }
  return check;
}

}  // namespace hilb
