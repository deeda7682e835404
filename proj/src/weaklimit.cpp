#include "hilb/weaklimit.hpp"

#include <algorithm>
#include <sstream>

#include "hilb/error.hpp"

namespace hilb {

namespace {

/// Strict-majority value of the pairings between chain members and y,
/// or nullopt when no value is attained by more than half the chain.
std::optional<Rational> majority_value(const Kernel& kernel,
                                       const std::vector<std::size_t>& chain,
                                       std::size_t y) {
  std::map<Rational, std::size_t> counts;
  for (std::size_t v : chain) counts[kernel.pairing(v, y)]++;
  for (const auto& [value, count] : counts)
    if (2 * count > chain.size()) return value;
  return std::nullopt;
}

std::map<std::size_t, Rational> stabilized_profile(const Kernel& kernel,
                                                   const std::vector<std::size_t>& chain) {
  std::map<std::size_t, Rational> profile;
  for (std::size_t y = 0; y < kernel.size(); ++y)
    if (auto v = majority_value(kernel, chain, y)) profile.emplace(y, *v);
  return profile;
}

std::size_t group_degree_or_zero(const PermGroup* group) {
  return group ? group->degree() : 0;
}

std::vector<std::size_t> canonical_witness(const std::vector<std::size_t>& chain,
                                           const PermGroup* group) {
  if (!group) return chain;
  std::vector<std::size_t> best = chain;
  for (const auto& g : group->enumerate()) {
    if (g(static_cast<std::uint32_t>(chain.front())) != chain.front()) continue;
    std::vector<std::size_t> image;
    image.reserve(chain.size());
    for (std::size_t v : chain) image.push_back(g(static_cast<std::uint32_t>(v)));
    if (image < best) best = image;
  }
  return best;
}

}  // namespace

std::vector<IndiscerniblePattern> find_chains(const Kernel& kernel, const PermGroup* group,
                                              std::size_t start, std::size_t k,
                                              const ChainSearchOptions& opts) {
  if (k < 2) fail(errc::parameter_out_of_range, "chain length must be at least 2");
  if (start >= kernel.size()) fail(errc::unknown_point, "chain start outside kernel");

  const Rational diag = kernel.pairing(start, start);
  std::vector<std::vector<std::size_t>> chains;
  std::vector<std::size_t> current{start};
  std::size_t visited = 0;

  // Depth-first over extensions keeping the Gram pattern constant.
  auto extend = [&](auto&& self, std::optional<Rational> off) -> void {
    if (++visited > opts.node_budget)
      fail(errc::search_budget_exceeded,
           "chain search exceeded node budget " + std::to_string(opts.node_budget));
    if (current.size() == k) {
      chains.push_back(current);
      return;
    }
    for (std::size_t cand = 0; cand < kernel.size(); ++cand) {
      if (std::find(current.begin(), current.end(), cand) != current.end()) continue;
      if (kernel.pairing(cand, cand) != diag) continue;
      std::optional<Rational> next_off = off;
      bool ok = true;
      for (std::size_t v : current) {
        const Rational& p = kernel.pairing(v, cand);
        if (!next_off)
          next_off = p;
        else if (*next_off != p) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      current.push_back(cand);
      self(self, next_off);
      current.pop_back();
    }
  };
  extend(extend, std::nullopt);

  // Group chains into patterns by (off, stabilized profile).
  std::map<std::pair<Rational, std::map<std::size_t, Rational>>, IndiscerniblePattern> buckets;
  for (const auto& chain : chains) {
    Rational off = kernel.pairing(chain[0], chain[1]);
    auto profile = stabilized_profile(kernel, chain);
    auto key = std::make_pair(off, profile);
    auto [it, inserted] = buckets.try_emplace(key);
    if (inserted) {
      it->second.diag = diag;
      it->second.off = off;
      it->second.context_profile = std::move(profile);
    }
    it->second.witnesses.push_back(chain);
  }

  std::vector<IndiscerniblePattern> result;
  for (auto& [key, pattern] : buckets) {
    if (group) {
      std::set<std::vector<std::size_t>> canon;
      for (const auto& w : pattern.witnesses) canon.insert(canonical_witness(w, group));
      pattern.witnesses.assign(canon.begin(), canon.end());
    }
    result.push_back(std::move(pattern));
  }
  return result;
}

TypePoint limit_profile(const IndiscerniblePattern& pattern,
                        const std::vector<std::size_t>& context, const Kernel& kernel,
                        std::size_t declared_depth) {
  if (pattern.witnesses.empty()) fail(errc::internal, "pattern without witnesses");
  const auto& chain = pattern.witnesses.front();
  if (chain.size() < 3 && chain.size() < declared_depth)
    fail(errc::parameter_out_of_range,
         "chain too short for a stabilized limit (need length >= 3 or >= declared depth)");

  TypePoint tp;
  tp.self_value = pattern.off;
  tp.source_diag = pattern.diag;
  tp.source_off = pattern.off;
  tp.witness_chain = chain;
  for (std::size_t y : context) {
    auto v = majority_value(kernel, chain, y);
    if (!v) {
      std::ostringstream msg;
      msg << "no value is attained by more than half the chain for context point '"
          << kernel.point(y).id << "'; values:";
      for (std::size_t m : chain) msg << ' ' << to_string(kernel.pairing(m, y));
      fail(errc::ambiguous_eventual_value, msg.str());
    }
    tp.profile.emplace(y, *v);
  }
  return tp;
}

WeakClosure weak_closure(const Kernel& kernel, const PermGroup* group,
                         const ClosureOptions& opts) {
  if (kernel.value_set().size() > opts.value_set_cap)
    fail(errc::not_strictly_definable,
         "kernel attains " + std::to_string(kernel.value_set().size()) +
             " pairing values, above the strictness cap " +
             std::to_string(opts.value_set_cap));

  WeakClosure closure;
  closure.kernel = kernel;
  closure.ground_size = kernel.size();
  closure.depth = opts.depth;

  std::size_t next_id = 0;
  auto fresh_id = [&] {
    std::string id;
    do {
      id = "w" + std::to_string(next_id++);
    } while (closure.kernel.has_point(id));
    return id;
  };

  auto add_edge = [&](std::size_t child, std::size_t parent) {
    if (child != parent) closure.order_edges.emplace(child, parent);
  };

  // Returns the index of a point Gram-equal to the candidate, if any.
  auto find_existing = [&](const std::map<std::size_t, Rational>& profile,
                           const Rational& self) -> std::optional<std::size_t> {
    const Kernel& k = closure.kernel;
    for (std::size_t p = 0; p < k.size(); ++p) {
      // |candidate - p|^2 = self - 2 profile(p) + <p,p>
      auto it = profile.find(p);
      Rational prof_p = it == profile.end() ? Rational(0) : it->second;
      if (self - 2 * prof_p + k.pairing(p, p) != 0) continue;
      bool match = true;
      for (std::size_t y = 0; y < k.size() && match; ++y) {
        auto jt = profile.find(y);
        Rational want = jt == profile.end() ? Rational(0) : jt->second;
        match = k.pairing(p, y) == want;
      }
      if (match) return p;
    }
    return std::nullopt;
  };

  // Adjoins (or finds) a limit point; returns its index or nullopt if the
  // extension is a spurious non-PSD artifact.
  auto materialize = [&](const TypePoint& candidate) -> std::optional<std::size_t> {
    if (auto existing = find_existing(candidate.profile, candidate.self_value))
      return existing;
    if (closure.adjoined.size() >= opts.max_adjoined)
      fail(errc::search_budget_exceeded,
           "closure exceeded the cap of " + std::to_string(opts.max_adjoined) +
               " adjoined points");
    std::map<std::string, Rational> by_id;
    for (const auto& [idx, value] : candidate.profile)
      if (value != 0) by_id.emplace(closure.kernel.point(idx).id, value);
    std::string id = fresh_id();
    try {
      closure.kernel = adjoin_point(closure.kernel, by_id, candidate.self_value, id);
    } catch (const Error& e) {
      if (e.code() == errc::extension_not_psd) {
        ++closure.skipped_not_psd;
        return std::nullopt;
      }
      throw;
    }
    TypePoint tp = candidate;
    tp.index = closure.kernel.size() - 1;
    tp.id = id;
    closure.adjoined.push_back(tp);
    return tp.index;
  };

  for (std::size_t round = 0; round < opts.max_rounds; ++round) {
    bool changed = false;
    const std::size_t size_at_round = closure.kernel.size();
    for (std::size_t start = 0; start < size_at_round; ++start) {
      std::vector<IndiscerniblePattern> patterns;
      // The supplied group acts on ground points only; witness collapsing
      // is skipped once adjoined points participate.
      const PermGroup* g = (closure.kernel.size() == group_degree_or_zero(group)) ? group : nullptr;
      patterns = find_chains(closure.kernel, g, start, opts.depth, opts.chains);
      for (const auto& pattern : patterns) {
        std::vector<std::size_t> context(closure.kernel.size());
        for (std::size_t i = 0; i < context.size(); ++i) context[i] = i;
        TypePoint candidate;
        bool ambiguous = false;
        try {
          candidate = limit_profile(pattern, context, closure.kernel, opts.depth);
        } catch (const Error& e) {
          if (e.code() == errc::ambiguous_eventual_value) {
            ++closure.skipped_ambiguous;
            ambiguous = true;
          } else {
            throw;
          }
        }
        if (ambiguous) continue;
        std::size_t before = closure.kernel.size();
        auto limit_idx = materialize(candidate);
        if (!limit_idx) continue;
        changed = changed || closure.kernel.size() > before;
        std::size_t edges_before = closure.order_edges.size();
        add_edge(*limit_idx, start);
        // An escaping pattern (diag > off) also has the residual family
        // (v_i - w), an orthogonal family whose own weak limit is zero.
        if (pattern.diag > pattern.off) {
          TypePoint zero;
          zero.self_value = 0;
          zero.source_diag = pattern.diag - pattern.off;
          zero.source_off = 0;
          zero.witness_chain = pattern.witnesses.front();
          std::size_t zbefore = closure.kernel.size();
          if (auto zero_idx = materialize(zero)) {
            changed = changed || closure.kernel.size() > zbefore;
            add_edge(*zero_idx, *limit_idx);
          }
        }
        changed = changed || closure.order_edges.size() > edges_before;
      }
    }
    if (!changed) break;
  }
  return closure;
}

LimitOrder limit_order(const WeakClosure& closure) {
  const Kernel& k = closure.kernel;
  LimitOrder order;
  order.class_of.assign(k.size(), 0);

  // Gram-classes: points whose difference has zero self-pairing.
  for (std::size_t p = 0; p < k.size(); ++p) {
    bool placed = false;
    for (std::size_t c = 0; c < order.classes.size() && !placed; ++c) {
      std::size_t q = order.classes[c].front();
      FormalVector d = FormalVector::unit(p) - FormalVector::unit(q);
      if (inner(d, d, k) == 0) {
        order.classes[c].push_back(p);
        order.class_of[p] = c;
        placed = true;
      }
    }
    if (!placed) {
      order.classes.push_back({p});
      order.class_of[p] = order.classes.size() - 1;
    }
  }

  // Reflexive edges plus transported provenance edges, then transitive
  // closure by iteration.
  for (std::size_t c = 0; c < order.classes.size(); ++c) order.leq.emplace(c, c);
  for (const auto& [child, parent] : closure.order_edges)
    order.leq.emplace(order.class_of[child], order.class_of[parent]);
  bool grew = true;
  while (grew) {
    grew = false;
    std::vector<std::pair<std::size_t, std::size_t>> to_add;
    for (const auto& [a, b] : order.leq)
      for (const auto& [c, d] : order.leq)
        if (b == c && !order.leq.count({a, d})) to_add.emplace_back(a, d);
    for (const auto& e : to_add) grew = order.leq.insert(e).second || grew;
  }

  for (const auto& [a, b] : order.leq)
    if (a != b && order.leq.count({b, a}))
      fail(errc::cycle_detected,
           "limit order contains a cycle between Gram-distinct classes " +
               std::to_string(a) + " and " + std::to_string(b) +
               " (contradicts well-foundedness)");
  return order;
}

PermGroup extend_to_closure(const WeakClosure& closure, const PermGroup& group) {
  if (group.degree() != closure.ground_size)
    fail(errc::not_invariant, "group degree does not match the ground point count");
  const Kernel& k = closure.kernel;
  std::vector<Permutation> extended;
  for (const auto& g : group.generators()) {
    std::vector<std::uint32_t> img(k.size());
    for (std::size_t i = 0; i < closure.ground_size; ++i)
      img[i] = g(static_cast<std::uint32_t>(i));
    // Adjunction order guarantees each profile only mentions earlier points,
    // whose images are already known.
    for (const auto& tp : closure.adjoined) {
      std::optional<std::size_t> image;
      for (std::size_t q = 0; q < k.size() && !image; ++q) {
        if (k.pairing(q, q) != tp.self_value) continue;
        bool match = true;
        for (std::size_t y = 0; y < tp.index && match; ++y)
          match = k.pairing(q, img[y]) == k.pairing(tp.index, y);
        if (match) image = q;
      }
      if (!image)
        fail(errc::not_invariant,
             "no closure point realizes the transported profile of '" + tp.id + "'");
      img[tp.index] = static_cast<std::uint32_t>(*image);
    }
    extended.emplace_back(std::move(img));
  }
  return PermGroup(k.size(), std::move(extended), group.order_cap());
}

MedianResult median_type(const Kernel& kernel, const std::vector<std::string>& tuple,
                         std::size_t extendability, std::size_t node_budget) {
  const std::size_t n = tuple.size();
  if (n < 3 || n % 2 == 0)
    fail(errc::parameter_out_of_range, "median tuple size must be odd and at least 3");

  std::vector<std::size_t> xs;
  for (const auto& id : tuple) xs.push_back(kernel.index_of(id));

  MedianResult res;
  const Rational diag = kernel.pairing(xs[0], xs[0]);
  std::optional<Rational> lambda;
  for (std::size_t i = 0; i < n; ++i) {
    if (kernel.pairing(xs[i], xs[i]) != diag) {
      res.reason = MedianRejection::inconsistent_pattern;
      return res;
    }
    for (std::size_t j = i + 1; j < n; ++j) {
      const Rational& p = kernel.pairing(xs[i], xs[j]);
      if (!lambda)
        lambda = p;
      else if (*lambda != p) {
        res.reason = MedianRejection::inconsistent_pattern;
        return res;
      }
    }
  }

  // The F-lambda conditions make the union of all tuples one lambda-clique
  // of points with the same self value. Extend it by extendability * n
  // fresh points by backtracking.
  std::vector<std::size_t> clique = xs;
  std::vector<std::size_t> found;
  std::size_t visited = 0;
  auto search = [&](auto&& self, std::size_t needed, std::size_t from) -> bool {
    if (needed == 0) return true;
    if (++visited > node_budget)
      fail(errc::search_budget_exceeded, "median extension search exceeded budget");
    for (std::size_t cand = from; cand < kernel.size(); ++cand) {
      if (std::find(clique.begin(), clique.end(), cand) != clique.end()) continue;
      if (kernel.pairing(cand, cand) != diag) continue;
      bool ok = true;
      for (std::size_t v : clique)
        if (kernel.pairing(v, cand) != *lambda) {
          ok = false;
          break;
        }
      if (!ok) continue;
      clique.push_back(cand);
      found.push_back(cand);
      if (self(self, needed - 1, cand + 1)) return true;
      clique.pop_back();
      found.pop_back();
    }
    return false;
  };

  if (!search(search, extendability * n, 0)) {
    res.reason = MedianRejection::no_extension;
    return res;
  }

  res.accepted = true;
  res.self_value = *lambda;
  for (std::size_t t = 0; t < extendability; ++t)
    res.extension_tuples.emplace_back(found.begin() + t * n, found.begin() + (t + 1) * n);

  for (std::size_t z = 0; z < kernel.size(); ++z) {
    std::vector<Rational> values;
    for (std::size_t x : xs) values.push_back(kernel.pairing(x, z));
    std::sort(values.begin(), values.end());
    res.profile.emplace(z, values[n / 2]);
  }
  return res;
}

StrictnessReport strictness_report(const Kernel& kernel, std::size_t cap) {
  StrictnessReport rep;
  rep.cap = cap;
  rep.value_set = kernel.value_set();
  rep.strictly_definable = rep.value_set.size() <= cap;
  for (std::size_t i = 0; i < kernel.size(); ++i)
    for (std::size_t j = i; j < kernel.size(); ++j) {
      auto key = std::minmax(kernel.point(i).sort_label, kernel.point(j).sort_label);
      rep.per_sort_values[{key.first, key.second}].insert(kernel.pairing(i, j));
    }
  return rep;
}

}  // namespace hilb
