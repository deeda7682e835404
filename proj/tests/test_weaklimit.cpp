#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "hilb/error.hpp"
#include "hilb/weaklimit.hpp"

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
  return make_kernel(std::move(ids), Mat::identity(n));
}

Kernel shifted_delta_kernel(const Rational& c, std::size_t n) {
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < n; ++i) ids.push_back("p" + std::to_string(i));
  Mat g(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) g.at(i, j) = (i == j) ? c + 1 : c;
  return make_kernel(std::move(ids), std::move(g));
}

/// 2 on the diagonal, 1 within the same class, 0 across classes.
Kernel equivalence_kernel(const std::vector<std::size_t>& class_sizes) {
  std::vector<std::string> ids;
  std::vector<std::size_t> cls;
  for (std::size_t c = 0; c < class_sizes.size(); ++c)
    for (std::size_t i = 0; i < class_sizes[c]; ++i) {
      ids.push_back("c" + std::to_string(c) + "e" + std::to_string(i));
      cls.push_back(c);
    }
  Mat g(ids.size(), ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i)
    for (std::size_t j = 0; j < ids.size(); ++j)
      g.at(i, j) = (i == j) ? 2 : (cls[i] == cls[j] ? 1 : 0);
  return make_kernel(std::move(ids), std::move(g));
}

const TypePoint* adjoined_with_self(const WeakClosure& c, const Rational& self) {
  for (const auto& tp : c.adjoined)
    if (tp.self_value == self) return &tp;
  return nullptr;
}

}  // namespace

TEST_CASE("find_chains on the basic kernels") {
  Kernel opd = shifted_delta_kernel(1, 4);
  auto patterns = find_chains(opd, nullptr, opd.index_of("p0"), 3);
  REQUIRE(patterns.size() == 1);
  CHECK(patterns[0].diag == 2);
  CHECK(patterns[0].off == 1);
  CHECK(patterns[0].witnesses.size() == 6);  // ordered pairs of partners

  Kernel d4 = delta_kernel(4);
  auto dp = find_chains(d4, nullptr, 0, 3);
  REQUIRE(dp.size() == 1);
  CHECK(dp[0].diag == 1);
  CHECK(dp[0].off == 0);

  Kernel eq = equivalence_kernel({2, 3});
  auto inside = find_chains(eq, nullptr, eq.index_of("c1e0"), 3);
  REQUIRE(inside.size() == 1);
  CHECK(inside[0].diag == 2);
  CHECK(inside[0].off == 1);
  CHECK(find_chains(eq, nullptr, eq.index_of("c0e0"), 3).empty());  // class too small
}

TEST_CASE("limit_profile realizes the indiscernible-limit identities") {
  Kernel opd = shifted_delta_kernel(1, 4);
  auto patterns = find_chains(opd, nullptr, 0, 3);
  REQUIRE(patterns.size() == 1);
  std::vector<std::size_t> context{opd.index_of("p3")};
  TypePoint tp = limit_profile(patterns[0], context, opd);
  CHECK(tp.self_value == 1);
  CHECK(tp.profile.at(opd.index_of("p3")) == 1);

  // <w,w> = off and <w,v> = off for every chain witness v.
  for (std::size_t v : tp.witness_chain) {
    auto all = limit_profile(patterns[0], {v}, opd);
    CHECK(all.profile.at(v) == patterns[0].off);
  }

  Kernel d4 = delta_kernel(4);
  auto dp = find_chains(d4, nullptr, 0, 3);
  TypePoint zero = limit_profile(dp[0], {3}, d4);
  CHECK(zero.self_value == 0);
  CHECK(zero.profile.at(3) == 0);

  Kernel eq = equivalence_kernel({2, 3});
  auto inside = find_chains(eq, nullptr, eq.index_of("c1e0"), 3);
  TypePoint w = limit_profile(inside[0], {eq.index_of("c0e0")}, eq);
  CHECK(w.self_value == 1);
  CHECK(w.profile.at(eq.index_of("c0e0")) == 0);
}

TEST_CASE("weak closure of delta adds only the zero profile") {
  WeakClosure c = weak_closure(delta_kernel(4), nullptr);
  REQUIRE(c.adjoined.size() == 1);
  CHECK(c.adjoined[0].self_value == 0);
  CHECK(c.kernel.size() == 5);
  CHECK(check_psd(c.kernel).is_psd());
}

TEST_CASE("weak closure of one-plus-delta adds w and the zero point below it") {
  WeakClosure c = weak_closure(shifted_delta_kernel(1, 6), nullptr);
  REQUIRE(c.adjoined.size() == 2);
  const TypePoint* w = adjoined_with_self(c, 1);
  const TypePoint* zero = adjoined_with_self(c, 0);
  REQUIRE(w != nullptr);
  REQUIRE(zero != nullptr);
  for (std::size_t g = 0; g < c.ground_size; ++g)
    CHECK(c.kernel.pairing(w->index, g) == 1);
  CHECK(c.kernel.pairing(w->index, w->index) == 1);

  LimitOrder order = limit_order(c);
  std::size_t wc = order.class_of[w->index];
  std::size_t zc = order.class_of[zero->index];
  std::size_t gc = order.class_of[0];
  CHECK(order.less_equal(wc, gc));
  CHECK(order.less_equal(zc, wc));
  CHECK(!order.less_equal(gc, wc));
  CHECK(!order.less_equal(wc, zc));
}

TEST_CASE("delta limit order has zero below ground and nothing else") {
  WeakClosure c = weak_closure(delta_kernel(4), nullptr);
  LimitOrder order = limit_order(c);
  std::size_t zc = order.class_of[c.adjoined[0].index];
  for (std::size_t g = 0; g < 4; ++g) {
    CHECK(order.less_equal(zc, order.class_of[g]));
    CHECK(!order.less_equal(order.class_of[g], zc));
  }
  // distinct ground points are order-incomparable
  CHECK(!order.less_equal(order.class_of[0], order.class_of[1]));
}

TEST_CASE("FCP equivalence closure depends on class extendability") {
  // one class of each size 1..6; depth 3 admits a chain only in classes of
  // size >= 3
  WeakClosure c = weak_closure(equivalence_kernel({1, 2, 3, 4, 5, 6}), nullptr);
  std::size_t nonzero_limits = 0, zero_limits = 0;
  for (const auto& tp : c.adjoined) {
    if (tp.self_value == 0)
      ++zero_limits;
    else
      ++nonzero_limits;
  }
  CHECK(nonzero_limits == 4);  // classes of sizes 3,4,5,6
  CHECK(zero_limits == 1);
  CHECK(check_psd(c.kernel).is_psd());

  // the chain of class-limits themselves witnesses the zero point
  LimitOrder order = limit_order(c);
  const TypePoint* zero = adjoined_with_self(c, 0);
  REQUIRE(zero != nullptr);
  for (const auto& tp : c.adjoined)
    if (tp.self_value != 0)
      CHECK(order.less_equal(order.class_of[zero->index], order.class_of[tp.index]));
}

TEST_CASE("closure pairing values stay in the attained value set plus zero") {
  for (const Kernel& k :
       {shifted_delta_kernel(1, 5), delta_kernel(4), equivalence_kernel({3, 4})}) {
    WeakClosure c = weak_closure(k, nullptr);
    std::set<Rational> allowed = k.value_set();
    allowed.insert(0);
    for (const auto& v : c.kernel.value_set()) CHECK(allowed.count(v) == 1);
  }
}

TEST_CASE("closure requires strict definability") {
  // Toeplitz attains n distinct values; with a small cap it is rejected.
  Mat t(6, 6);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) t.at(i, j) = Rational(1, Integer(1) << std::abs(i - j));
  Kernel toep = make_kernel({"t0", "t1", "t2", "t3", "t4", "t5"}, t);
  ClosureOptions opts;
  opts.value_set_cap = 4;
  CHECK_THROWS_AS((void)weak_closure(toep, nullptr, opts), Error);

  StrictnessReport rep = strictness_report(toep, 4);
  CHECK(!rep.strictly_definable);
  CHECK(rep.value_set.size() == 6);
}

TEST_CASE("strictness_report on the named kernels") {
  StrictnessReport d = strictness_report(delta_kernel(3));
  CHECK(d.value_set == std::set<Rational>{0, 1});
  CHECK(d.strictly_definable);

  StrictnessReport s = strictness_report(shifted_delta_kernel(1, 3));
  CHECK(s.value_set == std::set<Rational>{1, 2});
}

TEST_CASE("median_type accepts extendable tuples and rejects exhausted classes") {
  Kernel opd = shifted_delta_kernel(1, 9);
  MedianResult r = median_type(opd, {"p0", "p1", "p2"}, 2);
  REQUIRE(r.accepted);
  CHECK(r.self_value == 1);
  for (std::size_t z = 0; z < opd.size(); ++z) CHECK(r.profile.at(z) == 1);
  CHECK(r.extension_tuples.size() == 2);

  Kernel d6 = delta_kernel(9);
  MedianResult rd = median_type(d6, {"p0", "p1", "p2"}, 2);
  REQUIRE(rd.accepted);
  CHECK(rd.self_value == 0);
  CHECK(rd.profile.at(5) == 0);

  Kernel eq = equivalence_kernel({2, 3});
  MedianResult re = median_type(eq, {"c1e0", "c1e1", "c1e2"}, 2);
  CHECK(!re.accepted);
  CHECK(re.reason == MedianRejection::no_extension);

  CHECK_THROWS_AS((void)median_type(opd, {"p0", "p1"}, 1), Error);  // even tuple
}

TEST_CASE("median profile agrees with limit_profile on a chain") {
  Kernel eq = equivalence_kernel({7, 5});
  auto patterns = find_chains(eq, nullptr, eq.index_of("c0e0"), 3);
  REQUIRE(patterns.size() == 1);
  std::vector<std::size_t> context;
  for (std::size_t i = 0; i < eq.size(); ++i) context.push_back(i);
  TypePoint tp = limit_profile(patterns[0], context, eq);

  const auto& chain = patterns[0].witnesses.front();
  std::vector<std::string> ids;
  for (std::size_t v : chain) ids.push_back(eq.point(v).id);
  MedianResult med = median_type(eq, ids, 1);
  REQUIRE(med.accepted);
  CHECK(med.self_value == tp.self_value);
  for (std::size_t z = 0; z < eq.size(); ++z) CHECK(med.profile.at(z) == tp.profile.at(z));
}

TEST_CASE("group-collapsed witness lists") {
  Kernel opd = shifted_delta_kernel(1, 4);
  std::vector<Permutation> gens{Permutation::from_cycles("(1 2)", 4),
                                Permutation::from_cycles("(1 2 3 4)", 4)};
  PermGroup s4(4, gens);
  auto patterns = find_chains(opd, &s4, 0, 3);
  REQUIRE(patterns.size() == 1);
  CHECK(patterns[0].witnesses.size() == 1);  // all chains are symmetric images
}
