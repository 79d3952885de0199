#pragma once

#include <string>
#include <vector>

#include "tropivol/intlat.hpp"

namespace tropivol {

/// A Galois lattice with ramification data: a finite group acting on Z^rank
/// together with a descending chain of subgroups G0 ⊇ G1 ⊇ ... ⊇ {1},
/// given as index lists into the action's element list. G0 is the whole
/// group and the chain ends at the trivial group; the extension is treated
/// as totally ramified, so e(K'/K) = |G0|.
class RamifiedGaloisModule {
 public:
  RamifiedGaloisModule(GroupAction action, std::vector<std::vector<int>> filtration);

  /// Tame module: filtration (G0, {1}).
  static RamifiedGaloisModule tame(GroupAction action);

  int rank() const { return action_.rank(); }
  const GroupAction& action() const { return action_; }
  const std::vector<std::vector<int>>& filtration() const { return filtration_; }
  long ramification_index() const { return static_cast<long>(action_.elements().size()); }

 private:
  GroupAction action_;
  std::vector<std::vector<int>> filtration_;
};

/// A base-change conductor: an exact rational >= 0 whose denominator divides
/// the ramification index.
struct ConductorValue {
  Rat value;
};

/// Lower-numbering Artin conductor of the rational representation carried by
/// the lattice: Σ_i (|G_i| / |G_0|) · (rank − dim V^{G_i}).
Rat artin_conductor(const RamifiedGaloisModule& v);

/// Base-change conductor of the torus with the given cocharacter module:
/// half the Artin conductor.
ConductorValue torus_conductor(const RamifiedGaloisModule& cochar);

struct TraceDecomposition {
  IntMatrix b_part_basis;          // columns span ker(tr), the anisotropic part
  int split_rank = 0;              // rank of X / ker(tr)
  std::vector<Int> split_torsion;  // always empty: ker(tr) is saturated
  IntMatrix split_generators;      // columns span im(tr) (split-part characters)
  std::vector<Int> isogeny_cokernel;  // invariant factors of X / (ker(tr) + X^Γ)
};

/// Splits a character module along the trace map tr = Σ_σ σ: the kernel is
/// the character module of the anisotropic part, the quotient that of the
/// maximal split subtorus, and the cokernel of ker(tr) + X^Γ inside X is the
/// kernel of the comparison isogeny.
TraceDecomposition trace_decomposition(const RamifiedGaloisModule& x);

/// c(T) + c(A) + gamma, rejecting negative totals.
ConductorValue chai_combine(const ConductorValue& c_t, const ConductorValue& c_a, long gamma);

/// An exact sequence of Galois lattices 0 → sub → mid → quot → 0, presented
/// by the injection matrix; the quotient and its induced action are derived.
/// Element indices of the two actions must refer to the same group elements.
struct ExactSequence {
  RamifiedGaloisModule sub;
  RamifiedGaloisModule mid;
  IntMatrix injection;  // mid.rank x sub.rank, Γ-equivariant, saturated image
};

struct AdditivityResult {
  Rat c_sub, c_mid, c_quot;
  bool equal;  // c_mid == c_sub + c_quot
};

/// Conductor additivity along an exact sequence of cocharacter lattices.
/// Validates equivariance and exactness (the quotient must be free); for
/// tori the equality always holds.
AdditivityResult additivity_check(const ExactSequence& seq);

}  // namespace tropivol
