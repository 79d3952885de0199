#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tropivol/padic.hpp"
#include "tropivol/presburger.hpp"
#include "tropivol/residue.hpp"

namespace tropivol {

enum class AcKind { FixedDigits, FreeUnit };

/// Angular-component constraint at a fixed depth: either a fixed digit
/// vector with nonzero leading digit, or the full unit group.
struct AcConstraint {
  AcKind kind = AcKind::FreeUnit;
  std::vector<Rat> digits;  // length = depth when FixedDigits

  static AcConstraint free_unit() { return AcConstraint{}; }
  static AcConstraint fixed(std::vector<Rat> digits);
};

/// A valued-field cell in normal form. A point (y, t, z) with y in K^n,
/// t in the residue factor and z in Z^r lies in the cell iff, writing
/// gamma_i = ord(y_i - c_i),
///   - ac at depth l_i of (y_i - c_i) satisfies the i-th constraint,
///   - (gamma_1, ..., gamma_n, z) lies in ord_set, and
///   - t lies in the residue factor.
/// Centers are constants; gamma_i ranges over Z, so y_i = c_i never lies in
/// a cell (point masses are not representable, only arbitrarily small balls).
class VFCell {
 public:
  VFCell(int n, std::vector<PadicConstant> centers, std::vector<int> ac_depth,
         std::vector<AcConstraint> ac, PresburgerSet ord_set, ResidueSet residue);

  int n() const { return n_; }
  int extra_params() const { return ord_set_.dim() - n_; }
  const std::vector<PadicConstant>& centers() const { return centers_; }
  const std::vector<int>& ac_depth() const { return ac_depth_; }
  const std::vector<AcConstraint>& ac() const { return ac_; }
  const PresburgerSet& ord_set() const { return ord_set_; }
  const ResidueSet& residue() const { return residue_; }

  /// Digit credit of coordinate i in the volume density: depth for FreeUnit
  /// (the constrained digits still move freely), 0 for FixedDigits.
  int depth_credit(int i) const {
    return ac_[i].kind == AcKind::FreeUnit ? ac_depth_[i] : 0;
  }

  /// Membership for a point with trivial residue factor.
  bool contains_point(std::span<const PadicConstant> y, std::span<const Int> z) const;

 private:
  int n_;
  std::vector<PadicConstant> centers_;
  std::vector<int> ac_depth_;
  std::vector<AcConstraint> ac_;
  PresburgerSet ord_set_;
  ResidueSet residue_;
};

/// Finite union of cells over a common (n, r) profile.
class DefinableSet {
 public:
  DefinableSet(int n, int r) : n_(n), r_(r) {}
  explicit DefinableSet(VFCell cell) : n_(cell.n()), r_(cell.extra_params()) {
    cells_.push_back(std::move(cell));
  }

  int n() const { return n_; }
  int extra_params() const { return r_; }
  const std::vector<VFCell>& cells() const { return cells_; }
  void add_cell(VFCell cell);

 private:
  int n_, r_;
  std::vector<VFCell> cells_;
};

/// Piecewise dimensional function: each piece is a cell together with an
/// affine form in the cell's n + r integer coordinates. The value at a point
/// is the ⊕ over the pieces containing it, so overlapping pieces resolve by
/// max and a union of piece lists is the pointwise ⊕ of the functions.
/// ±inf values are admitted as constant piece values only.
class DimFunction {
 public:
  DimFunction() = default;
  void add_piece(VFCell cell, AffineForm form);

  struct Piece {
    VFCell cell;
    AffineForm form;
  };
  const std::vector<Piece>& pieces() const { return pieces_; }

 private:
  std::vector<Piece> pieces_;
};

/// The image of a subset of R^n in the level-ell residue rings, as a residue
/// set with n*ell digit coordinates followed by the residue-factor profile.
/// Digits below gamma_i copy the center, the next min(l_i, ell - gamma_i)
/// follow the ac constraint, the rest are free.
/// Precondition: every cell lies in h^{<=0} (orders >= 0 and centers in R);
/// violations raise a domain error naming the offending cell.
ResidueSet truncate(const DefinableSet& a, int ell);

/// Closed-form dimensional volume: per cell,
/// sup over ord_set of sum_i(-gamma_i - l_i + d_i) ⊙ dim(residue factor),
/// then ⊕ over cells. Agrees with the truncation-limit definition; +inf
/// arises exactly when some gamma is unbounded below.
ZBar vol(const DefinableSet& a);

/// A^{|i}: intersect with h^{<=i} and rescale by ϖ^i into R^n.
/// Cells whose center order lies below -i are not representable after the
/// rescale (digit cancellation against the center) and raise a domain error.
DefinableSet scale_into_ring(const DefinableSet& a, int i);

struct OracleResult {
  ZBar value;
  bool stabilized;
};

/// Literal truncation-limit volume: evaluates n*i + (dim truncate(A^{|i}, l)
/// - l*n) over i <= i_max, l <= ell_max and reports the stabilized value
/// together with whether both monotone sequences settled in range.
OracleResult vol_truncation_oracle(const DefinableSet& a, int i_max, int ell_max);

/// Dimensional integral of phi over a: per piece,
/// sup over the piece's ord_set of (volume density + form) ⊙ residue dim,
/// combined by ⊕. The pieces are the integration domain; a fixes the
/// profile. ±inf piece values follow the ⊙ conventions.
ZBar integrate(const DefinableSet& a, const DimFunction& phi);

/// The threshold form of the integral:
/// sup over alpha in Z of alpha ⊙ Vol(phi^{-1}({i >= alpha})).
/// Must equal integrate(a, phi); evaluated exactly through per-level volume
/// queries at candidate thresholds (unbounded branches certify ±inf through
/// the combined reduction).
ZBar integrate_threshold(const DefinableSet& a, const DimFunction& phi);

/// Product set over the concatenated profile; ord_set variables are ordered
/// (gamma_x, gamma_y, z_x, z_y).
DefinableSet vf_product(const DefinableSet& ax, const DefinableSet& ay);

struct FubiniResult {
  ZBar iterated, joint;
  bool equal;
};

/// Tonelli–Fubini instance check on a product: the inner integral is
/// computed fiberwise by slicing each piece's ord_set at concrete
/// (gamma_x, z_x) tuples; fibers beyond the probe window are covered by
/// per-direction tail bounds.
FubiniResult fubini_check(const DefinableSet& ax, const DefinableSet& ay,
                          const DimFunction& phi);

/// Projection formula check, fiberwise over a finite probe set of x-fibers:
/// integral over y of (psi(x) ⊙ phi(x, y)) against psi(x) ⊙ integral of phi.
bool projection_check(const DefinableSet& ax, const DefinableSet& ay, const DimFunction& psi,
                      const DimFunction& phi);

/// Coordinatewise affine map y_i ↦ scale_i * y_i + offset_i.
struct AffineMap {
  std::vector<PadicConstant> scale;   // nonzero
  std::vector<PadicConstant> offset;
};

struct AffineImage {
  DefinableSet image;
  long ord_jac;  // sum of ord(scale_i), the constant order of the Jacobian
};

/// Exact image of a cell set under an affine map: centers move with the map,
/// order sets translate by ord(scale_i), fixed ac digits multiply by the
/// scale's angular component. A zero scale raises a singular-map error.
AffineImage apply_affine_map(const DefinableSet& a, const AffineMap& map);

struct CovResult {
  ZBar lhs, rhs;
  bool equal;
};

/// Change-of-variables instance check:
/// lhs = integral over a of (phi ∘ F ⊙ (-ord Jac F)), rhs = integral of phi
/// over the image of a under F.
CovResult cov_check(const DefinableSet& a, const AffineMap& map, const DimFunction& phi);

}  // namespace tropivol
