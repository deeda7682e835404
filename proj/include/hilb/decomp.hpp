#ifndef HILB_DECOMP_HPP
#define HILB_DECOMP_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "hilb/kernel.hpp"
#include "hilb/weaklimit.hpp"

namespace hilb {

/// One symmetry/profile class of the closure's points, in decomposition
/// order. Gram-null classes are dropped before ordering.
struct TypeClass {
  std::vector<std::size_t> members;  // point indices, ascending
  Rational self_value;
};

/// Classes of the closure's points: orbits of the (extended) group when one
/// is supplied, otherwise Gram-profile classes from iterated refinement.
/// Ordered topologically along the limit order, strictly-below classes
/// first; ties broken by ascending self-value, then least member id.
std::vector<TypeClass> enumerate_type_classes(const WeakClosure& closure,
                                              const PermGroup* group = nullptr);

/// An orthogonal component of the decomposition: the projections of one
/// class past the span of all earlier classes.
struct Component {
  std::size_t index = 0;
  std::vector<FormalVector> generators;
  Mat gram_block;
  std::vector<std::vector<std::size_t>> free_blocks;  // generator indices
  std::vector<std::optional<std::string>> generator_blocks;  // inherited labels
  TypeClass source_class;
  bool free = false;  // every ~-block inside one bounded_block or singleton
};

struct DecompositionReport {
  std::vector<Component> components;
  bool cross_orthogonal = false;  // all cross-component pairings exactly zero
  std::size_t total_rank = 0;     // sum of component Gram ranks
  std::size_t closure_rank = 0;
  bool complete = false;          // total_rank == closure_rank
};

/// Successive orthogonalization of the ordered classes (Gram-null
/// projections dropped, Gram-equal duplicates merged), with exact
/// cross-orthogonality and rank-completeness certification. Extra
/// generating sets are appended as trailing classes in input order.
DecompositionReport orthogonalize_types(
    const Kernel& kernel, const std::vector<TypeClass>& ordered_classes,
    const std::vector<std::vector<FormalVector>>& extra_generating_sets = {});

DecompositionReport decompose(const Kernel& kernel, const PermGroup* group = nullptr,
                              const ClosureOptions& opts = {});

enum class FreedomVerdict { free_kernel, report_only };

struct FreedomReport {
  FreedomVerdict verdict = FreedomVerdict::report_only;
  std::vector<std::vector<std::size_t>> blocks;  // nonzero-pairing components
  std::size_t max_block_size = 0;
  bool is_free() const { return verdict == FreedomVerdict::free_kernel; }
};

/// Connected components of the nonzero-pairing graph. Free iff every block
/// is a singleton or lies inside one declared bounded_block.
FreedomReport check_asymptotic_freedom(const Kernel& kernel);

/// Same verdict for a component's generators under the inherited labels.
FreedomReport component_freedom(const Component& component, const Kernel& kernel);

/// True iff the projections of `a` onto the nested spans agree exactly.
/// Requires spanB contained in spanC (modulo Gram-null); otherwise NotNested.
bool check_independence(const FormalVector& a, const std::vector<FormalVector>& span_b,
                        const std::vector<FormalVector>& span_c, const Kernel& kernel);

struct CommutationResult {
  bool ok = true;
  FormalVector witness;      // first test vector violating the identities
  FormalVector ab, ba, meet; // P_A P_B v, P_B P_A v, P_{A∩B} v for the witness
};

/// Checks P_B P_A v = P_A P_B v = P_{A∩B} v exactly on each test vector.
CommutationResult commutation_check(const std::vector<FormalVector>& span_a,
                                    const std::vector<FormalVector>& span_b,
                                    const std::vector<FormalVector>& test_vectors,
                                    const Kernel& kernel);

}  // namespace hilb

#endif
