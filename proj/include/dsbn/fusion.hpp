#pragma once

// Unnormalized conjunctive combination on product frames. Used to compute
// exact joint masses of a network's conditional tables, which may come out
// negative.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "dsbn/subset.hpp"
#include "dsbn/tables.hpp"

namespace dsbn {

class Network;

/// One subset per scope variable.
using ProductFocal = std::vector<Subset>;

/// Mass function over a product of frames. Focal elements are packed one
/// byte lane per variable; lanes beyond the scope hold 0xff.
class JointMass {
 public:
  static constexpr std::size_t kMaxScope = 8;

  explicit JointMass(std::vector<Frame> scope);

  const std::vector<Frame>& scope() const noexcept { return scope_; }
  std::vector<std::string> variables() const;

  void add(std::span<const Subset> focal, double mass);
  /// 0 for focals that are not present.
  double at(std::span<const Subset> focal) const;
  double empty_mass() const noexcept { return empty_mass_; }
  /// Sum over nonempty focals, excluding the empty-intersection mass.
  double focal_total() const;
  std::size_t focal_count() const noexcept { return entries_.size(); }

  /// Entries in packed-key order.
  std::vector<std::pair<ProductFocal, double>> entries() const;

  std::uint64_t pack(std::span<const Subset> focal) const;
  ProductFocal unpack(std::uint64_t key) const;

  const std::map<std::uint64_t, double>& packed() const noexcept { return entries_; }

 private:
  friend JointMass conjunctive_combine(const JointMass& p, const JointMass& q);

  std::vector<Frame> scope_;
  std::map<std::uint64_t, double> entries_;
  double empty_mass_ = 0.0;
};

/// Vacuous extension: each (cfg, child) becomes the product focal with those
/// coordinates and the full set on every other scope variable.
JointMass cylindrical_extension(const CondMassTable& table, const std::vector<Frame>& scope);

/// Pairwise intersection with multiplied masses; intersections with an empty
/// coordinate accrue to empty_mass(). No renormalization.
JointMass conjunctive_combine(const JointMass& p, const JointMass& q);

struct NegativeEntry {
  ProductFocal focal;
  double mass;
};

struct NetworkJoint {
  JointMass joint;
  std::vector<NegativeEntry> negatives;  ///< entries below -1e-12
};

/// Left fold of conjunctive_combine over every node table extended to the
/// full scope, in topological order. K tables are inverted to masses first.
NetworkJoint network_joint(const Network& net);

/// CSV: one column per variable, then `mass`; rows sorted by their
/// canonical subset literals.
void write_joint_csv(const JointMass& joint, std::ostream& os);

}  // namespace dsbn
