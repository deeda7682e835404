#ifndef HILB_WEAKLIMIT_HPP
#define HILB_WEAKLIMIT_HPP

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "hilb/kernel.hpp"
#include "hilb/perm.hpp"

namespace hilb {

/// A family of Gram-constant chains sharing one limit behaviour: constant
/// self-pairing `diag`, constant cross-pairing `off`, and a common
/// stabilized (strict-majority) pairing value against each context point.
/// Context points without a strict majority are absent from the profile.
struct IndiscerniblePattern {
  Rational diag;
  Rational off;
  std::vector<std::vector<std::size_t>> witnesses;   // chains of point indices
  std::map<std::size_t, Rational> context_profile;   // stabilized values only
};

/// A symbolically adjoined weak-limit point, defined by its inner-product
/// profile. self_value always equals the source pattern's off value.
struct TypePoint {
  std::size_t index = 0;  // position in the closed kernel
  std::string id;
  std::map<std::size_t, Rational> profile;  // over points present at adjunction
  Rational self_value;
  Rational source_diag, source_off;
  std::vector<std::size_t> witness_chain;
};

struct ChainSearchOptions {
  std::size_t node_budget = 2000000;
};

/// All Gram-constant chains of length k starting at `start`, grouped into
/// patterns by (diag, off, stabilized profile). The search is exhaustive;
/// a supplied group only collapses the witness lists up to symmetry.
std::vector<IndiscerniblePattern> find_chains(const Kernel& kernel,
                                              const PermGroup* group,
                                              std::size_t start, std::size_t k,
                                              const ChainSearchOptions& opts = {});

/// Weak-limit profile of a pattern: self value = off, context value = the
/// strict-majority pairing along the chain. Throws AmbiguousEventualValue
/// when some requested context point has no majority value.
TypePoint limit_profile(const IndiscerniblePattern& pattern,
                        const std::vector<std::size_t>& context,
                        const Kernel& kernel, std::size_t declared_depth = 3);

struct WeakClosure {
  Kernel kernel;                 // ground kernel extended by the limit points
  std::size_t ground_size = 0;
  std::vector<TypePoint> adjoined;
  /// provenance edges (child index <= parent index) from chain limits,
  /// including the zero point below each escaping-pattern limit
  std::set<std::pair<std::size_t, std::size_t>> order_edges;
  std::size_t depth = 3;
  std::size_t skipped_not_psd = 0;    // spurious finite patterns, rejected
  std::size_t skipped_ambiguous = 0;  // no stabilized profile at this depth
};

struct ClosureOptions {
  std::size_t depth = 3;
  std::size_t value_set_cap = 12;   // strict definability guard
  std::size_t max_adjoined = 64;
  std::size_t max_rounds = 10;
  ChainSearchOptions chains;
};

/// Iterates chain search and limit adjunction (including chains through
/// previously adjoined points) until no new Gram-distinct profile appears.
/// Candidate limits whose bordered Gram fails PSD certification are desk
/// artifacts of the finite truncation and are skipped, not errors.
WeakClosure weak_closure(const Kernel& kernel, const PermGroup* group,
                         const ClosureOptions& opts = {});

/// Partial order on Gram-classes of the closure. classes[i] lists point
/// indices; leq holds the reflexive-transitive closure of the provenance
/// edges. Acyclicity across distinct classes is asserted.
struct LimitOrder {
  std::vector<std::vector<std::size_t>> classes;
  std::vector<std::size_t> class_of;  // point index -> class index
  std::set<std::pair<std::size_t, std::size_t>> leq;  // (lower, higher) class pairs

  bool less_equal(std::size_t class_a, std::size_t class_b) const {
    return leq.count({class_a, class_b}) > 0;
  }
};

LimitOrder limit_order(const WeakClosure& closure);

/// Extends a group acting on the ground points to the full closure by
/// profile transport: the image of an adjoined limit point is the unique
/// closure point whose pairings are the transported profile. Throws
/// NotInvariant when no such point exists.
PermGroup extend_to_closure(const WeakClosure& closure, const PermGroup& group);

enum class MedianRejection { no_extension, inconsistent_pattern };

struct MedianResult {
  bool accepted = false;
  MedianRejection reason = MedianRejection::no_extension;
  std::map<std::size_t, Rational> profile;  // median profile on acceptance
  Rational self_value;
  std::vector<std::vector<std::size_t>> extension_tuples;
};

/// NFCP median construction: accepts iff the N-tuple extends to m further
/// pairwise-related tuples inside the kernel, and then returns the median
/// profile z -> Med_i <x_i, z>.
MedianResult median_type(const Kernel& kernel, const std::vector<std::string>& tuple,
                         std::size_t extendability,
                         std::size_t node_budget = 2000000);

struct StrictnessReport {
  std::set<Rational> value_set;
  bool strictly_definable = false;    // within the configured cap
  std::size_t cap = 12;
  /// attained values per unordered sort pair
  std::map<std::pair<std::string, std::string>, std::set<Rational>> per_sort_values;
};

StrictnessReport strictness_report(const Kernel& kernel, std::size_t cap = 12);

}  // namespace hilb

#endif
