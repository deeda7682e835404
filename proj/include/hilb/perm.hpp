#ifndef HILB_PERM_HPP
#define HILB_PERM_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace hilb {

class Kernel;

/// Bijection on {0, ..., degree-1}, stored as an image array.
/// Serialized in disjoint-cycle notation over 1-based positions, e.g.
/// "(1 2)(3 4 5)"; the identity is "()".
class Permutation {
public:
  Permutation() = default;
  explicit Permutation(std::vector<std::uint32_t> images);  // validates bijectivity
  static Permutation identity(std::size_t degree);
  static Permutation from_cycles(const std::string& cycles, std::size_t degree);

  std::size_t degree() const { return images_.size(); }
  std::uint32_t operator()(std::uint32_t i) const { return images_[i]; }
  const std::vector<std::uint32_t>& images() const { return images_; }

  Permutation compose(const Permutation& then) const;  // applies *this first
  Permutation inverse() const;
  bool is_identity() const;
  std::string cycle_string() const;

  auto operator<=>(const Permutation& other) const = default;

private:
  std::vector<std::uint32_t> images_;
};

/// Finite permutation group given by generators, enumerated on demand by
/// breadth-first closure. The cap bounds the enumeration; exceeding it
/// raises OrderCapExceeded with a lower bound on the order.
class PermGroup {
public:
  PermGroup() = default;
  PermGroup(std::size_t degree, std::vector<Permutation> generators,
            std::size_t order_cap = 1000000);

  std::size_t degree() const { return degree_; }
  const std::vector<Permutation>& generators() const { return generators_; }
  std::size_t order_cap() const { return order_cap_; }

  /// Full element list; cached after the first call. Identity comes first
  /// and the order is the deterministic BFS order.
  const std::vector<Permutation>& enumerate() const;
  std::size_t order() const { return enumerate().size(); }
  bool contains(const Permutation& p) const;

  std::vector<std::uint32_t> orbit(std::uint32_t point) const;
  std::vector<std::vector<std::uint32_t>> orbits() const;

  PermGroup stabilizer(std::uint32_t point) const;
  PermGroup setwise_stabilizer(const std::vector<std::uint32_t>& block) const;

  /// Left-coset representatives of a subgroup; the first is the identity.
  std::vector<Permutation> cosets(const PermGroup& subgroup) const;

  std::vector<std::vector<Permutation>> conjugacy_classes() const;

  /// Representatives of the double cosets K g K for a subgroup K.
  std::vector<Permutation> double_cosets(const PermGroup& k) const;

private:
  std::size_t degree_ = 0;
  std::vector<Permutation> generators_;
  std::size_t order_cap_ = 1000000;
  mutable std::vector<Permutation> elements_;
};

struct InvarianceCheck {
  bool ok = true;
  std::string generator;                 // failing generator, cycle notation
  std::string point_x, point_y;          // failing pair
};

/// True iff every generator preserves the kernel pairing exactly.
InvarianceCheck is_invariant(const Kernel& kernel, const PermGroup& group);

/// All subgroups, enumerated by closing subsets under products.
/// Intended for small groups (order <= ~48).
std::vector<PermGroup> all_subgroups(const PermGroup& group);

}  // namespace hilb

#endif
