#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "hilb/error.hpp"
#include "hilb/floatoracle.hpp"
#include "hilb/kernel.hpp"

using namespace hilb;

namespace {

Kernel make_kernel(std::vector<std::string> ids, Mat pairing) {
  std::vector<Point> pts;
  for (auto& id : ids) {
    Point p;
    p.id = std::move(id);
    pts.push_back(std::move(p));
  }
  return Kernel(std::move(pts), std::move(pairing));
}

Kernel delta_kernel(std::size_t n) {
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < n; ++i) ids.push_back("p" + std::to_string(i));
  Mat g = Mat::identity(n);
  return make_kernel(std::move(ids), std::move(g));
}

Kernel shifted_delta_kernel(const Rational& c, std::size_t n) {
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < n; ++i) ids.push_back("p" + std::to_string(i));
  Mat g(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) g.at(i, j) = (i == j) ? c + 1 : c;
  return make_kernel(std::move(ids), std::move(g));
}

FormalVector unit(const Kernel& k, const std::string& id) {
  return FormalVector::unit(k.index_of(id));
}

}  // namespace

TEST_CASE("gram extracts exact submatrices") {
  Kernel d3 = delta_kernel(3);
  Mat g = gram(d3, {"p0", "p1"});
  CHECK(g == Mat{{1, 0}, {0, 1}});

  Kernel opd = shifted_delta_kernel(1, 3);
  Mat g2 = gram(opd, {"p0", "p1", "p2"});
  CHECK(g2 == Mat{{2, 1, 1}, {1, 2, 1}, {1, 1, 2}});

  // Toeplitz 2^{-|i-j|} on three points.
  Mat t(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) t.at(i, j) = Rational(1, Integer(1) << std::abs(i - j));
  Kernel toep = make_kernel({"t0", "t1", "t2"}, t);
  Mat g3 = gram(toep, {"t0", "t1", "t2"});
  CHECK(g3.at(0, 2) == Rational(1, 4));
  CHECK(g3.at(1, 2) == Rational(1, 2));
  CHECK(g3.at(0, 0) == 1);

  CHECK_THROWS_AS((void)gram(d3, {"nope"}), Error);
}

TEST_CASE("check_psd certifies the spec examples") {
  Kernel d3 = delta_kernel(3);
  PsdCertificate c1 = check_psd(d3);
  REQUIRE(c1.is_psd());
  CHECK(c1.pivots == std::vector<Rational>{1, 1, 1});
  CHECK(c1.rank == 3);

  PsdCertificate c2 = check_psd(shifted_delta_kernel(1, 3));
  REQUIRE(c2.is_psd());
  CHECK(c2.pivots == std::vector<Rational>{2, Rational(3, 2), Rational(4, 3)});
  CHECK(c2.rank == 3);

  // f(x,x)=1, f(x,y)=-1 on 3 points is not PSD; (1,1,1) gives -3.
  Mat bad(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) bad.at(i, j) = (i == j) ? 1 : -1;
  Kernel nk = make_kernel({"a", "b", "c"}, bad);
  PsdCertificate c3 = check_psd(nk);
  REQUIRE(!c3.is_psd());
  CHECK(c3.witness_value < 0);
  CHECK(inner(c3.witness, c3.witness, nk) == c3.witness_value);
  // Direct evaluation of the quadratic form at (1,1,1) for reference.
  FormalVector ones = unit(nk, "a") + unit(nk, "b") + unit(nk, "c");
  CHECK(inner(ones, ones, nk) == -3);
}

TEST_CASE("inner products expand bilinearly") {
  Kernel d3 = delta_kernel(3);
  CHECK(inner(unit(d3, "p0"), unit(d3, "p1"), d3) == 0);
  FormalVector ab = unit(d3, "p0") + unit(d3, "p1");
  CHECK(inner(ab, ab, d3) == 2);

  Kernel opd = shifted_delta_kernel(1, 3);
  FormalVector u = unit(opd, "p0");
  FormalVector v = unit(opd, "p0") + unit(opd, "p1");
  CHECK(inner(u, v, opd) == 3);
}

TEST_CASE("project solves the normal equations exactly") {
  Kernel d3 = delta_kernel(3);
  CHECK(project(unit(d3, "p1"), {unit(d3, "p0")}, d3).is_zero());

  FormalVector sum = unit(d3, "p0") + unit(d3, "p1");
  FormalVector p = project(unit(d3, "p0"), {sum}, d3);
  CHECK(p == Rational(1, 2) * sum);

  // Projection onto a span with singular Gram: duplicate generators.
  FormalVector q = project(unit(d3, "p0"), {sum, sum}, d3);
  CHECK(gram_equal(q, Rational(1, 2) * sum, d3));

  // Adjoined invariant direction w in the (1+delta) closure: <w,w>=1,
  // <w,x>=1 for ground points; the coefficient is <e_a,w>/<w,w> = 1.
  Kernel opd = shifted_delta_kernel(1, 3);
  std::map<std::string, Rational> profile{{"p0", 1}, {"p1", 1}, {"p2", 1}};
  Kernel closed = adjoin_point(opd, profile, 1, "w");
  FormalVector w = unit(closed, "w");
  FormalVector pa = project(unit(closed, "p0"), {w}, closed);
  CHECK(pa == w);
}

TEST_CASE("projection properties hold on a mixed kernel") {
  Kernel opd = shifted_delta_kernel(1, 4);
  std::vector<FormalVector> span{unit(opd, "p0") + unit(opd, "p1"),
                                 unit(opd, "p2")};
  FormalVector v = unit(opd, "p3");
  FormalVector pv = project(v, span, opd);
  CHECK(gram_equal(project(pv, span, opd), pv, opd));  // idempotent
  for (const auto& s : span) CHECK(inner(v - pv, s, opd) == 0);
}

TEST_CASE("rank of PSD kernels") {
  CHECK(kernel_rank(delta_kernel(4)) == 4);

  Mat ones(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) ones.at(i, j) = 1;
  CHECK(kernel_rank(make_kernel({"a", "b", "c", "d"}, ones)) == 1);

  CHECK(kernel_rank(shifted_delta_kernel(1, 5)) == 5);

  Mat bad(2, 2);
  bad.at(0, 0) = 1; bad.at(1, 1) = 1; bad.at(0, 1) = bad.at(1, 0) = -2;
  Kernel nk = make_kernel({"a", "b"}, bad);
  CHECK_THROWS_AS((void)kernel_rank(nk), Error);
}

TEST_CASE("adjoin_point certifies extensions") {
  Kernel opd = shifted_delta_kernel(1, 3);
  std::map<std::string, Rational> all_ones{{"p0", 1}, {"p1", 1}, {"p2", 1}};
  Kernel ext = adjoin_point(opd, all_ones, 1, "w");
  CHECK(ext.size() == 4);
  CHECK(check_psd(ext).is_psd());

  Kernel d3 = delta_kernel(3);
  Kernel zero_ext = adjoin_point(d3, {}, 0, "z");
  CHECK(zero_ext.size() == 4);
  CHECK(kernel_rank(zero_ext) == 3);

  std::map<std::string, Rational> bad{{"p0", 1}, {"p1", 1}, {"p2", 1}};
  CHECK_THROWS_WITH_AS((void)adjoin_point(d3, bad, 0, "w"),
                       doctest::Contains("positive semidefiniteness"), Error);
  CHECK_THROWS_AS((void)adjoin_point(d3, {}, 0, "p0"), Error);  // DuplicateId
}

TEST_CASE("adjoin_point raises rank by at most one") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    std::size_t n = 2 + rng() % 4;
    // Random PSD Gram from B^T B.
    Mat b(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) b.at(i, j) = Rational(int(rng() % 5) - 2);
    Mat g = b.transposed() * b;
    std::vector<std::string> ids;
    for (std::size_t i = 0; i < n; ++i) ids.push_back("p" + std::to_string(i));
    Kernel k = make_kernel(ids, g);
    std::size_t before = kernel_rank(k);
    // Adjoin a copy of an existing point (rank +0) or a fresh orthogonal
    // direction (rank +1).
    if (trial % 2 == 0) {
      std::map<std::string, Rational> prof;
      for (std::size_t i = 0; i < n; ++i) prof["p" + std::to_string(i)] = g.at(0, i);
      Kernel ext = adjoin_point(k, prof, g.at(0, 0), "w");
      std::size_t after = kernel_rank(ext);
      CHECK(after == before);
    } else {
      Kernel ext = adjoin_point(k, {}, 1, "w");
      CHECK(kernel_rank(ext) == before + 1);
    }
  }
}

TEST_CASE("alternating projections stabilize on compatible spans") {
  Kernel d3 = delta_kernel(3);
  std::vector<FormalVector> a{unit(d3, "p0"), unit(d3, "p1")};
  std::vector<FormalVector> b{unit(d3, "p1"), unit(d3, "p2")};
  FormalVector v = unit(d3, "p0") + unit(d3, "p1") + unit(d3, "p2");
  AlternatingResult r = alternating_projections(v, a, b, d3);
  CHECK(r.stabilized);
  CHECK(r.rounds_used == 1);
  CHECK(r.vector == unit(d3, "p1"));

  // A == B: one round reaches P_A v.
  AlternatingResult r2 = alternating_projections(v, a, a, d3);
  CHECK(r2.stabilized);
  CHECK(r2.rounds_used == 1);
  CHECK(gram_equal(r2.vector, project(v, a, d3), d3));
}

TEST_CASE("angled spans contract by exactly 1/2 per round") {
  Kernel d2 = delta_kernel(2);
  std::vector<FormalVector> a{unit(d2, "p0")};
  std::vector<FormalVector> b{unit(d2, "p0") + unit(d2, "p1")};
  FormalVector v = unit(d2, "p1");

  AlternatingResult r = alternating_projections(v, a, b, d2, 6);
  CHECK(!r.stabilized);
  CHECK(r.rounds_used == 6);
  // After k rounds the iterate is e0 / 2^k.
  CHECK(r.vector == Rational(1, 64) * unit(d2, "p0"));
  // The direct intersection projection is 0.
  CHECK(project(v, intersect_spans(a, b, d2), d2).is_zero());

  FormalVector x = v;
  for (int round = 0; round < 4; ++round) {
    FormalVector next = project(project(x, b, d2), a, d2);
    CHECK(inner(next, next, d2) * 4 == inner(x, x, d2) * Rational(4, 2) * Rational(1, 2));
    x = next;
  }
}

TEST_CASE("intersect_spans computes exact bases") {
  Kernel d3 = delta_kernel(3);
  std::vector<FormalVector> a{unit(d3, "p0"), unit(d3, "p1")};
  std::vector<FormalVector> b{unit(d3, "p1"), unit(d3, "p2")};
  auto basis = intersect_spans(a, b, d3);
  REQUIRE(basis.size() == 1);
  CHECK(gram_equal(basis[0], inner(basis[0], unit(d3, "p1"), d3) * unit(d3, "p1"), d3));

  auto self = intersect_spans(a, a, d3);
  CHECK(self.size() == 2);

  CHECK(intersect_spans({unit(d3, "p0")}, {unit(d3, "p1")}, d3).empty());
}

TEST_CASE("verify_embedding checks pairings exactly") {
  Kernel d2 = delta_kernel(2);
  Kernel d3 = delta_kernel(3);
  std::map<std::string, FormalVector> ident{{"p0", unit(d2, "p0")},
                                            {"p1", unit(d2, "p1")}};
  CHECK(verify_embedding(d2, d2, ident).ok);

  std::map<std::string, FormalVector> into{{"p0", unit(d3, "p0")},
                                           {"p1", unit(d3, "p1")}};
  CHECK(verify_embedding(d2, d3, into).ok);

  std::map<std::string, FormalVector> wrong{{"p0", unit(d3, "p0")},
                                            {"p1", unit(d3, "p0")}};
  EmbeddingCheck bad = verify_embedding(d2, d3, wrong);
  CHECK(!bad.ok);
  CHECK(bad.first_failure_x == "p0");
  CHECK(bad.first_failure_y == "p1");
}

TEST_CASE("PSD verdict matches the float eigenvalue oracle on random kernels") {
  std::mt19937 rng(20240811);
  for (int trial = 0; trial < 60; ++trial) {
    std::size_t n = 2 + rng() % 7;
    Mat g(n, n);
    if (trial % 3 == 0) {
      Mat b(n, n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          b.at(i, j) = Rational(int(rng() % 7) - 3, 1 + int(rng() % 3));
      g = b.transposed() * b;
    } else {
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
          g.at(i, j) = Rational(int(rng() % 9) - 4, 1 + int(rng() % 4));
          g.at(j, i) = g.at(i, j);
        }
    }
    std::vector<std::string> ids;
    for (std::size_t i = 0; i < n; ++i) ids.push_back("p" + std::to_string(i));
    Kernel k = make_kernel(ids, g);
    PsdCertificate cert = check_psd(k);
    CHECK(cert.is_psd() == float_psd_oracle(g));
    if (cert.is_psd()) {
      for (const auto& piv : cert.pivots) CHECK(piv >= 0);
      // <v,v> >= 0 for a sample of vectors.
      FormalVector v;
      for (std::size_t i = 0; i < n; ++i) v.set(i, Rational(int(rng() % 5) - 2));
      CHECK(inner(v, v, k) >= 0);
    } else {
      CHECK(inner(cert.witness, cert.witness, k) < 0);
    }
  }
}
