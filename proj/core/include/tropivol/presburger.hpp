#pragma once

#include <map>
#include <optional>
#include <span>
#include <vector>

#include "tropivol/zbar.hpp"

namespace tropivol {

/// coeffs · x >= bound
struct Inequality {
  std::vector<Int> coeffs;
  Int bound;
};

/// coeffs · x ≡ residue (mod modulus), modulus >= 2, residue in [0, modulus)
struct Congruence {
  std::vector<Int> coeffs;
  Int residue;
  Int modulus;
};

/// A conjunctive cell in Z^dim: linear inequalities plus congruences.
class PresburgerCell {
 public:
  PresburgerCell(int dim, std::vector<Inequality> ineqs, std::vector<Congruence> congs);
  explicit PresburgerCell(int dim) : PresburgerCell(dim, {}, {}) {}

  int dim() const { return dim_; }
  const std::vector<Inequality>& inequalities() const { return ineqs_; }
  const std::vector<Congruence>& congruences() const { return congs_; }

  PresburgerCell with_inequality(Inequality extra) const;
  PresburgerCell with_congruence(Congruence extra) const;

  bool contains(std::span<const Int> point) const;

 private:
  int dim_;
  std::vector<Inequality> ineqs_;
  std::vector<Congruence> congs_;
};

/// A finite union of cells of equal dimension. Unions need not be disjoint:
/// every downstream quantity is max-plus, and max over an overlapping cover
/// equals max over any disjoint refinement.
class PresburgerSet {
 public:
  explicit PresburgerSet(int dim) : dim_(dim) {}
  PresburgerSet(int dim, std::vector<PresburgerCell> cells);
  static PresburgerSet whole(int dim) { return PresburgerSet(dim, {PresburgerCell(dim)}); }

  int dim() const { return dim_; }
  const std::vector<PresburgerCell>& cells() const { return cells_; }
  void add_cell(PresburgerCell c);

  bool contains(std::span<const Int> point) const;

 private:
  int dim_;
  std::vector<PresburgerCell> cells_;
};

/// coeffs · x + offset, valued in Zbar. A ±inf offset makes the form
/// constant; the coefficients are then ignored.
struct AffineForm {
  std::vector<Int> coeffs;
  ZBar offset;

  static AffineForm constant(int dim, ZBar value) {
    return AffineForm{std::vector<Int>(dim, Int(0)), std::move(value)};
  }
  ZBar eval(std::span<const Int> point) const;
};

/// Pointwise sum of two finite-or-infinite affine forms over the same dim;
/// offsets combine by ⊙.
AffineForm add_forms(const AffineForm& a, const AffineForm& b);

/// True iff no integer point satisfies any cell. Exact.
bool is_empty(const PresburgerSet& s);

/// Integer point of a single cell, if any. Complete decision procedure
/// (Fourier–Motzkin windows, congruence elimination through Smith normal
/// form, and dark-shadow/splinter elimination for the residual cases).
std::optional<std::vector<Int>> find_point(const PresburgerCell& c);

struct SupResult {
  ZBar value;
  /// An attaining point when value is finite.
  std::optional<std::vector<Int>> arg;
};

/// sup of f over the integer points of s, in Zbar: -inf on the empty set,
/// +inf when unbounded above, otherwise the exact attained maximum.
SupResult sup_affine_witness(const PresburgerSet& s, const AffineForm& f);
ZBar sup_affine(const PresburgerSet& s, const AffineForm& f);

/// Substitutes the assigned variables and returns a set in the remaining
/// ones (original order preserved).
PresburgerSet slice(const PresburgerSet& s, const std::map<int, Int>& assignments);

/// Cartesian product; points are concatenations.
PresburgerSet product(const PresburgerSet& a, const PresburgerSet& b);

/// Image of s under x ↦ x + delta.
PresburgerSet translate(const PresburgerSet& s, std::span<const Int> delta);

/// Image of s under coordinate permutation: new coordinate i is old perm[i].
PresburgerSet permute(const PresburgerSet& s, std::span<const int> perm);

/// Rational (relaxation) bounds of one variable over a cell, by exact
/// Fourier–Motzkin elimination of the others. Congruences are ignored.
struct RationalWindow {
  bool feasible = false;  // rational relaxation nonempty
  bool lo_finite = false, hi_finite = false;
  Rat lo, hi;
};
RationalWindow rational_window(const PresburgerCell& c, int var);

}  // namespace tropivol
