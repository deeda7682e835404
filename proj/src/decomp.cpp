#include "hilb/decomp.hpp"

#include <algorithm>
#include <map>

#include "hilb/error.hpp"

namespace hilb {

namespace {

bool is_gram_null(const Kernel& k, std::size_t p) { return k.pairing(p, p) == 0; }

/// Gram-profile classes by iterated colour refinement: start from the
/// self-value, then refine by the multiset of (pairing, colour) pairs.
std::vector<std::vector<std::size_t>> profile_classes(const Kernel& k,
                                                      const std::vector<std::size_t>& pts) {
  std::map<std::size_t, std::size_t> colour;
  std::map<Rational, std::size_t> by_self;
  for (std::size_t p : pts) {
    auto [it, inserted] = by_self.try_emplace(k.pairing(p, p), by_self.size());
    colour[p] = it->second;
  }
  std::size_t colour_count = by_self.size();
  for (;;) {
    std::map<std::vector<std::pair<Rational, std::size_t>>, std::size_t> next_ids;
    std::map<std::size_t, std::size_t> next;
    for (std::size_t p : pts) {
      std::vector<std::pair<Rational, std::size_t>> signature;
      signature.emplace_back(k.pairing(p, p), colour[p]);
      std::vector<std::pair<Rational, std::size_t>> sorted;
      for (std::size_t q : pts)
        if (q != p) sorted.emplace_back(k.pairing(p, q), colour[q]);
      std::sort(sorted.begin(), sorted.end());
      signature.insert(signature.end(), sorted.begin(), sorted.end());
      auto [it, inserted] = next_ids.try_emplace(signature, next_ids.size());
      next[p] = it->second;
    }
    bool refined = next_ids.size() > colour_count;
    colour_count = next_ids.size();
    colour = std::move(next);
    if (!refined) break;
  }
  std::map<std::size_t, std::vector<std::size_t>> grouped;
  for (std::size_t p : pts) grouped[colour[p]].push_back(p);
  std::vector<std::vector<std::size_t>> result;
  for (auto& [c, members] : grouped) result.push_back(std::move(members));
  return result;
}

}  // namespace

std::vector<TypeClass> enumerate_type_classes(const WeakClosure& closure,
                                              const PermGroup* group) {
  const Kernel& k = closure.kernel;
  std::vector<std::size_t> pts;
  for (std::size_t p = 0; p < k.size(); ++p)
    if (!is_gram_null(k, p)) pts.push_back(p);

  std::vector<std::vector<std::size_t>> raw;
  if (group) {
    PermGroup extended =
        group->degree() == k.size() ? *group : extend_to_closure(closure, *group);
    for (auto& orbit : extended.orbits()) {
      std::vector<std::size_t> members;
      for (auto p : orbit)
        if (!is_gram_null(k, p)) members.push_back(p);
      if (!members.empty()) raw.push_back(std::move(members));
    }
  } else {
    raw = profile_classes(k, pts);
  }

  std::vector<TypeClass> classes;
  for (auto& members : raw) {
    TypeClass c;
    std::sort(members.begin(), members.end());
    c.self_value = k.pairing(members.front(), members.front());
    c.members = std::move(members);
    classes.push_back(std::move(c));
  }

  // Topological order along the limit order: strictly-below classes first.
  LimitOrder order = limit_order(closure);
  auto strictly_below = [&](const TypeClass& a, const TypeClass& b) {
    for (std::size_t x : a.members)
      for (std::size_t y : b.members) {
        std::size_t cx = order.class_of[x], cy = order.class_of[y];
        if (cx != cy && order.less_equal(cx, cy)) return true;
      }
    return false;
  };

  const std::size_t n = classes.size();
  std::vector<std::vector<std::size_t>> below(n);
  std::vector<std::size_t> indegree(n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      if (strictly_below(classes[i], classes[j])) {
        below[i].push_back(j);
        ++indegree[j];
      }
    }

  auto tie_break = [&](std::size_t a, std::size_t b) {
    if (classes[a].self_value != classes[b].self_value)
      return classes[a].self_value < classes[b].self_value;
    return k.point(classes[a].members.front()).id < k.point(classes[b].members.front()).id;
  };

  std::vector<TypeClass> ordered;
  std::vector<bool> done(n, false);
  for (std::size_t step = 0; step < n; ++step) {
    std::optional<std::size_t> pick;
    for (std::size_t i = 0; i < n; ++i) {
      if (done[i] || indegree[i] != 0) continue;
      if (!pick || tie_break(i, *pick)) pick = i;
    }
    if (!pick)
      fail(errc::cycle_detected, "class order contains a cycle; decomposition aborted");
    done[*pick] = true;
    for (std::size_t j : below[*pick]) --indegree[j];
    ordered.push_back(classes[*pick]);
  }
  return ordered;
}

DecompositionReport orthogonalize_types(
    const Kernel& kernel, const std::vector<TypeClass>& ordered_classes,
    const std::vector<std::vector<FormalVector>>& extra_generating_sets) {
  struct ClassInput {
    TypeClass cls;
    std::vector<FormalVector> vectors;
    std::vector<std::optional<std::string>> labels;
  };
  std::vector<ClassInput> inputs;
  for (const auto& cls : ordered_classes) {
    ClassInput in;
    in.cls = cls;
    for (std::size_t p : cls.members) {
      in.vectors.push_back(FormalVector::unit(p));
      in.labels.push_back(kernel.point(p).bounded_block);
    }
    inputs.push_back(std::move(in));
  }
  for (const auto& extra : extra_generating_sets) {
    ClassInput in;
    in.vectors = extra;
    in.labels.assign(extra.size(), std::nullopt);
    for (const auto& v : extra)
      if (!v.is_zero()) {
        in.cls.self_value = inner(v, v, kernel);
        break;
      }
    inputs.push_back(std::move(in));
  }

  DecompositionReport report;
  std::vector<FormalVector> prefix_span;
  for (const auto& in : inputs) {
    Component comp;
    comp.index = report.components.size();
    comp.source_class = in.cls;
    for (std::size_t i = 0; i < in.vectors.size(); ++i) {
      FormalVector residual = in.vectors[i] - project(in.vectors[i], prefix_span, kernel);
      if (inner(residual, residual, kernel) == 0) continue;  // Gram-null: dropped
      bool duplicate = false;
      for (const auto& g : comp.generators)
        if (gram_equal(g, residual, kernel)) {
          duplicate = true;
          break;
        }
      if (duplicate) continue;
      comp.generators.push_back(std::move(residual));
      comp.generator_blocks.push_back(in.labels[i]);
    }
    for (const auto& v : in.vectors) prefix_span.push_back(v);
    if (comp.generators.empty()) continue;

    const std::size_t m = comp.generators.size();
    comp.gram_block = Mat(m, m);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j)
        comp.gram_block.at(i, j) = inner(comp.generators[i], comp.generators[j], kernel);

    FreedomReport fr = component_freedom(comp, kernel);
    comp.free_blocks = fr.blocks;
    comp.free = fr.is_free();
    report.components.push_back(std::move(comp));
  }

  report.cross_orthogonal = true;
  for (std::size_t a = 0; a < report.components.size() && report.cross_orthogonal; ++a)
    for (std::size_t b = a + 1; b < report.components.size() && report.cross_orthogonal; ++b)
      for (const auto& u : report.components[a].generators) {
        for (const auto& v : report.components[b].generators)
          if (inner(u, v, kernel) != 0) {
            report.cross_orthogonal = false;
            break;
          }
        if (!report.cross_orthogonal) break;
      }

  report.total_rank = 0;
  for (const auto& comp : report.components) report.total_rank += rank(comp.gram_block);
  report.closure_rank = rank(kernel.pairing_matrix());
  report.complete = report.total_rank == report.closure_rank;
  return report;
}

DecompositionReport decompose(const Kernel& kernel, const PermGroup* group,
                              const ClosureOptions& opts) {
  WeakClosure closure = weak_closure(kernel, group, opts);
  auto classes = enumerate_type_classes(closure, group);
  return orthogonalize_types(closure.kernel, classes);
}

namespace {

FreedomReport freedom_from_graph(const std::vector<std::vector<bool>>& adjacent,
                                 const std::vector<std::optional<std::string>>& labels) {
  const std::size_t n = adjacent.size();
  FreedomReport rep;
  std::vector<bool> seen(n, false);
  for (std::size_t start = 0; start < n; ++start) {
    if (seen[start]) continue;
    std::vector<std::size_t> block{start};
    seen[start] = true;
    for (std::size_t head = 0; head < block.size(); ++head)
      for (std::size_t j = 0; j < n; ++j)
        if (!seen[j] && adjacent[block[head]][j]) {
          seen[j] = true;
          block.push_back(j);
        }
    std::sort(block.begin(), block.end());
    rep.blocks.push_back(std::move(block));
  }
  bool free = true;
  for (const auto& block : rep.blocks) {
    rep.max_block_size = std::max(rep.max_block_size, block.size());
    if (block.size() == 1) continue;
    const auto& label = labels[block.front()];
    bool covered = label.has_value();
    for (std::size_t m : block) covered = covered && labels[m] == label;
    free = free && covered;
  }
  rep.verdict = free ? FreedomVerdict::free_kernel : FreedomVerdict::report_only;
  return rep;
}

}  // namespace

FreedomReport check_asymptotic_freedom(const Kernel& kernel) {
  const std::size_t n = kernel.size();
  std::vector<std::vector<bool>> adjacent(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      adjacent[i][j] = i != j && kernel.pairing(i, j) != 0;
  std::vector<std::optional<std::string>> labels;
  for (const auto& p : kernel.points()) labels.push_back(p.bounded_block);
  return freedom_from_graph(adjacent, labels);
}

FreedomReport component_freedom(const Component& component, const Kernel&) {
  const std::size_t n = component.generators.size();
  std::vector<std::vector<bool>> adjacent(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      adjacent[i][j] = i != j && component.gram_block.at(i, j) != 0;
  return freedom_from_graph(adjacent, component.generator_blocks);
}

bool check_independence(const FormalVector& a, const std::vector<FormalVector>& span_b,
                        const std::vector<FormalVector>& span_c, const Kernel& kernel) {
  for (const auto& b : span_b) {
    FormalVector r = b - project(b, span_c, kernel);
    if (inner(r, r, kernel) != 0)
      fail(errc::not_nested, "spanB is not contained in spanC");
  }
  FormalVector pc = project(a, span_c, kernel);
  FormalVector pb = project(a, span_b, kernel);
  return gram_equal(pc, pb, kernel);
}

CommutationResult commutation_check(const std::vector<FormalVector>& span_a,
                                    const std::vector<FormalVector>& span_b,
                                    const std::vector<FormalVector>& test_vectors,
                                    const Kernel& kernel) {
  CommutationResult res;
  auto meet_basis = intersect_spans(span_a, span_b, kernel);
  for (const auto& v : test_vectors) {
    FormalVector ab = project(project(v, span_b, kernel), span_a, kernel);
    FormalVector ba = project(project(v, span_a, kernel), span_b, kernel);
    FormalVector meet = project(v, meet_basis, kernel);
    if (!gram_equal(ab, ba, kernel) || !gram_equal(ab, meet, kernel)) {
      res.ok = false;
      res.witness = v;
      res.ab = ab;
      res.ba = ba;
      res.meet = meet;
      return res;
    }
  }
  return res;
}

}  // namespace hilb
