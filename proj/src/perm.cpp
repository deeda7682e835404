#include "hilb/perm.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "hilb/error.hpp"
#include "hilb/kernel.hpp"

namespace hilb {

Permutation::Permutation(std::vector<std::uint32_t> images) : images_(std::move(images)) {
  std::vector<bool> seen(images_.size(), false);
  for (auto i : images_) {
    if (i >= images_.size() || seen[i])
      fail(errc::parse_error, "mapping is not a bijection on the point set");
    seen[i] = true;
  }
}

Permutation Permutation::identity(std::size_t degree) {
  std::vector<std::uint32_t> img(degree);
  for (std::size_t i = 0; i < degree; ++i) img[i] = static_cast<std::uint32_t>(i);
  return Permutation(std::move(img));
}

Permutation Permutation::from_cycles(const std::string& cycles, std::size_t degree) {
  std::vector<std::uint32_t> img(degree);
  for (std::size_t i = 0; i < degree; ++i) img[i] = static_cast<std::uint32_t>(i);
  std::size_t pos = 0;
  auto skip_ws = [&] { while (pos < cycles.size() && std::isspace(static_cast<unsigned char>(cycles[pos]))) ++pos; };
  skip_ws();
  std::vector<bool> moved(degree, false);
  while (pos < cycles.size()) {
    if (cycles[pos] != '(')
      fail(errc::parse_error, "expected '(' in cycle notation: " + cycles);
    ++pos;
    std::vector<std::uint32_t> cycle;
    skip_ws();
    while (pos < cycles.size() && cycles[pos] != ')') {
      std::size_t start = pos;
      while (pos < cycles.size() && std::isdigit(static_cast<unsigned char>(cycles[pos]))) ++pos;
      if (start == pos) fail(errc::parse_error, "expected position in cycle notation: " + cycles);
      unsigned long v = std::stoul(cycles.substr(start, pos - start));
      if (v == 0 || v > degree)
        fail(errc::parse_error, "cycle position " + std::to_string(v) +
                                    " out of range 1.." + std::to_string(degree));
      cycle.push_back(static_cast<std::uint32_t>(v - 1));
      skip_ws();
    }
    if (pos == cycles.size()) fail(errc::parse_error, "unterminated cycle: " + cycles);
    ++pos;  // ')'
    for (std::size_t i = 0; i < cycle.size(); ++i) {
      std::uint32_t from = cycle[i];
      std::uint32_t to = cycle[(i + 1) % cycle.size()];
      if (moved[from]) fail(errc::parse_error, "position repeated in cycles: " + cycles);
      moved[from] = true;
      img[from] = to;
    }
    skip_ws();
  }
  return Permutation(std::move(img));
}

Permutation Permutation::compose(const Permutation& then) const {
  if (degree() != then.degree()) fail(errc::internal, "composing permutations of different degree");
  std::vector<std::uint32_t> img(degree());
  for (std::size_t i = 0; i < degree(); ++i) img[i] = then.images_[images_[i]];
  return Permutation(std::move(img));
}

Permutation Permutation::inverse() const {
  std::vector<std::uint32_t> img(degree());
  for (std::size_t i = 0; i < degree(); ++i) img[images_[i]] = static_cast<std::uint32_t>(i);
  return Permutation(std::move(img));
}

bool Permutation::is_identity() const {
  for (std::size_t i = 0; i < degree(); ++i)
    if (images_[i] != i) return false;
  return true;
}

std::string Permutation::cycle_string() const {
  std::ostringstream out;
  std::vector<bool> seen(degree(), false);
  bool any = false;
  for (std::size_t i = 0; i < degree(); ++i) {
    if (seen[i] || images_[i] == i) continue;
    out << '(';
    std::size_t j = i;
    bool first = true;
    while (!seen[j]) {
      seen[j] = true;
      if (!first) out << ' ';
      out << (j + 1);
      first = false;
      j = images_[j];
    }
    out << ')';
    any = true;
  }
  return any ? out.str() : "()";
}

PermGroup::PermGroup(std::size_t degree, std::vector<Permutation> generators,
                     std::size_t order_cap)
    : degree_(degree), generators_(std::move(generators)), order_cap_(order_cap) {
  for (const auto& g : generators_)
    if (g.degree() != degree_) fail(errc::internal, "generator degree mismatch");
}

const std::vector<Permutation>& PermGroup::enumerate() const {
  if (!elements_.empty()) return elements_;
  std::set<Permutation> seen;
  std::vector<Permutation> queue;
  Permutation id = Permutation::identity(degree_);
  seen.insert(id);
  queue.push_back(id);
  for (std::size_t head = 0; head < queue.size(); ++head) {
    Permutation current = queue[head];
    for (const auto& g : generators_) {
      Permutation next = current.compose(g);
      if (seen.insert(next).second) {
        if (seen.size() > order_cap_)
          fail(errc::order_cap_exceeded,
               "group order exceeds cap " + std::to_string(order_cap_) +
                   " (at least " + std::to_string(seen.size()) + " elements)");
        queue.push_back(std::move(next));
      }
    }
  }
  elements_ = std::move(queue);
  return elements_;
}

bool PermGroup::contains(const Permutation& p) const {
  const auto& elems = enumerate();
  return std::find(elems.begin(), elems.end(), p) != elems.end();
}

std::vector<std::uint32_t> PermGroup::orbit(std::uint32_t point) const {
  std::vector<bool> seen(degree_, false);
  std::vector<std::uint32_t> queue{point};
  seen[point] = true;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    for (const auto& g : generators_) {
      std::uint32_t next = g(queue[head]);
      if (!seen[next]) {
        seen[next] = true;
        queue.push_back(next);
      }
    }
  }
  std::sort(queue.begin(), queue.end());
  return queue;
}

std::vector<std::vector<std::uint32_t>> PermGroup::orbits() const {
  std::vector<bool> done(degree_, false);
  std::vector<std::vector<std::uint32_t>> result;
  for (std::uint32_t i = 0; i < degree_; ++i) {
    if (done[i]) continue;
    auto orb = orbit(i);
    for (auto p : orb) done[p] = true;
    result.push_back(std::move(orb));
  }
  return result;
}

PermGroup PermGroup::stabilizer(std::uint32_t point) const {
  std::vector<Permutation> elems;
  for (const auto& g : enumerate())
    if (g(point) == point) elems.push_back(g);
  return PermGroup(degree_, std::move(elems), order_cap_);
}

PermGroup PermGroup::setwise_stabilizer(const std::vector<std::uint32_t>& block) const {
  std::set<std::uint32_t> target(block.begin(), block.end());
  std::vector<Permutation> elems;
  for (const auto& g : enumerate()) {
    bool keeps = true;
    for (auto p : block)
      if (!target.count(g(p))) {
        keeps = false;
        break;
      }
    if (keeps) elems.push_back(g);
  }
  return PermGroup(degree_, std::move(elems), order_cap_);
}

std::vector<Permutation> PermGroup::cosets(const PermGroup& subgroup) const {
  const auto& all = enumerate();
  const auto& sub = subgroup.enumerate();
  if (subgroup.degree() != degree_) fail(errc::not_a_subgroup, "subgroup degree mismatch");
  std::set<Permutation> group_set(all.begin(), all.end());
  for (const auto& h : sub)
    if (!group_set.count(h))
      fail(errc::not_a_subgroup, "element " + h.cycle_string() + " not in the group");
  std::set<Permutation> covered;
  std::vector<Permutation> reps;
  // BFS order of the enumeration keeps this deterministic; identity first.
  for (const auto& g : all) {
    if (covered.count(g)) continue;
    reps.push_back(g);
    for (const auto& h : sub) covered.insert(h.compose(g));  // g h, left coset gH
  }
  return reps;
}

std::vector<std::vector<Permutation>> PermGroup::conjugacy_classes() const {
  const auto& all = enumerate();
  std::set<Permutation> done;
  std::vector<std::vector<Permutation>> classes;
  for (const auto& g : all) {
    if (done.count(g)) continue;
    std::set<Permutation> cls;
    for (const auto& h : all) cls.insert(h.inverse().compose(g).compose(h));
    classes./*keep first-seen order*/ emplace_back(cls.begin(), cls.end());
    done.insert(cls.begin(), cls.end());
  }
  return classes;
}

std::vector<Permutation> PermGroup::double_cosets(const PermGroup& k) const {
  const auto& all = enumerate();
  const auto& sub = k.enumerate();
  std::set<Permutation> covered;
  std::vector<Permutation> reps;
  for (const auto& g : all) {
    if (covered.count(g)) continue;
    reps.push_back(g);
    for (const auto& a : sub)
      for (const auto& b : sub) covered.insert(a.compose(g).compose(b));
  }
  return reps;
}

InvarianceCheck is_invariant(const Kernel& kernel, const PermGroup& group) {
  InvarianceCheck check;
  if (group.degree() != kernel.size())
    fail(errc::parse_error, "group degree does not match kernel point count");
  for (const auto& g : group.generators()) {
    for (std::size_t i = 0; i < kernel.size(); ++i) {
      for (std::size_t j = i; j < kernel.size(); ++j) {
        if (kernel.pairing(g(static_cast<std::uint32_t>(i)), g(static_cast<std::uint32_t>(j))) !=
            kernel.pairing(i, j)) {
          check.ok = false;
          check.generator = g.cycle_string();
          check.point_x = kernel.point(i).id;
          check.point_y = kernel.point(j).id;
          return check;
        }
      }
    }
  }
  return check;
}

std::vector<PermGroup> all_subgroups(const PermGroup& group) {
  const auto& elems = group.enumerate();
  std::set<Permutation> group_set(elems.begin(), elems.end());

  auto close = [&](std::set<Permutation> seed) {
    std::vector<Permutation> queue(seed.begin(), seed.end());
    for (std::size_t head = 0; head < queue.size(); ++head)
      for (std::size_t i = 0; i < queue.size(); ++i) {
        Permutation p = queue[head].compose(queue[i]);
        if (seed.insert(p).second) queue.push_back(p);
        p = queue[i].compose(queue[head]);
        if (seed.insert(p).second) queue.push_back(p);
      }
    return seed;
  };

  std::set<std::set<Permutation>> found;
  found.insert({Permutation::identity(group.degree())});
  // Grow subgroups one adjoined element at a time until closure stabilizes.
  bool grew = true;
  while (grew) {
    grew = false;
    std::vector<std::set<Permutation>> snapshot(found.begin(), found.end());
    for (const auto& sub : snapshot) {
      for (const auto& g : elems) {
        if (sub.count(g)) continue;
        std::set<Permutation> seed = sub;
        seed.insert(g);
        auto closed = close(std::move(seed));
        if (found.insert(closed).second) grew = true;
      }
    }
  }
  std::vector<PermGroup> result;
  for (const auto& sub : found)
    result.emplace_back(group.degree(), std::vector<Permutation>(sub.begin(), sub.end()),
                        group.order_cap());
  std::sort(result.begin(), result.end(),
            [](const PermGroup& a, const PermGroup& b) { return a.order() < b.order(); });
  return result;
}

}  // namespace hilb
