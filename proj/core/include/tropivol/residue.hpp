#pragma once

#include <optional>
#include <span>
#include <vector>

#include "tropivol/zbar.hpp"

namespace tropivol {

enum class CoordKind { Free, FreeNonzero, Fixed };

struct ResidueCoord {
  CoordKind kind = CoordKind::Free;
  Rat fixed_value;  // meaningful only for Fixed

  static ResidueCoord free() { return {CoordKind::Free, Rat(0)}; }
  static ResidueCoord free_nonzero() { return {CoordKind::FreeNonzero, Rat(0)}; }
  static ResidueCoord fixed(Rat v) { return {CoordKind::Fixed, std::move(v)}; }
};

/// A constructible cell in a product of residue rings, identified digitwise
/// with affine space over the residue field. Coordinates are Free,
/// FreeNonzero (a free coordinate with the origin removed; same dimension)
/// or Fixed. An opaque cell carries a declared dimension instead of
/// coordinates, for user-supplied constructibles such as a special fiber.
class ResidueCell {
 public:
  explicit ResidueCell(std::vector<ResidueCoord> coords) : coords_(std::move(coords)) {}
  static ResidueCell opaque(int dim);

  bool is_opaque() const { return opaque_dim_.has_value(); }
  const std::vector<ResidueCoord>& coords() const { return coords_; }
  int dimension() const;

 private:
  ResidueCell() = default;
  std::vector<ResidueCoord> coords_;
  std::optional<int> opaque_dim_;
};

/// Finite union of residue cells. The empty union is the empty set.
class ResidueSet {
 public:
  ResidueSet() = default;
  explicit ResidueSet(std::vector<ResidueCell> cells) : cells_(std::move(cells)) {}
  /// The one-point set with no coordinates (dimension 0).
  static ResidueSet point() { return ResidueSet({ResidueCell(std::vector<ResidueCoord>{})}); }

  const std::vector<ResidueCell>& cells() const { return cells_; }
  bool empty() const { return cells_.empty(); }
  void add_cell(ResidueCell c) { cells_.push_back(std::move(c)); }

 private:
  std::vector<ResidueCell> cells_;
};

/// -inf for the empty set, otherwise the max of the cell dimensions.
ZBar dimension(const ResidueSet& s);

/// Integral of the piecewise-constant function given by one value per cell:
/// ⊕ over cells of dim(cell) ⊙ value.
ZBar integrate_residue(const ResidueSet& s, std::span<const ZBar> values);

/// Cartesian product; cell dimensions add. A product with an opaque factor
/// is opaque.
ResidueSet product(const ResidueSet& a, const ResidueSet& b);

struct ResidueFubiniResult {
  ZBar iterated, joint;
  bool equal;
};

/// Both sides of the residue-ring Tonelli–Fubini identity for a function
/// that is constant on each product cell: phi[i][j] is the value on
/// (cell i of x) × (cell j of y).
ResidueFubiniResult residue_fubini_check(const ResidueSet& x, const ResidueSet& y,
                                         const std::vector<std::vector<ZBar>>& phi);

}  // namespace tropivol
