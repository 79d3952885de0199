#pragma once

#include <string>
#include <vector>

#include "tropivol/vfcells.hpp"
#include "tropivol/zbar.hpp"

namespace tropivol {

/// A Laurent polynomial in one indeterminate T with integer coefficients,
/// realizing a motivic class under the Poincaré morphism; the class of the
/// affine line is T^2. Canonical form strips zero coefficients.
class PoincareElement {
 public:
  PoincareElement() = default;  // zero
  static PoincareElement from_terms(std::vector<std::pair<long, Int>> terms);
  static PoincareElement monomial(long exp, Int coeff = Int(1));
  static PoincareElement one() { return monomial(0); }

  bool is_zero() const { return terms_.empty(); }
  /// Terms in increasing exponent order.
  const std::vector<std::pair<long, Int>>& terms() const { return terms_; }
  long degree() const;  // only valid for nonzero
  const Int& leading_coeff() const;

  friend PoincareElement operator+(const PoincareElement& a, const PoincareElement& b);
  friend PoincareElement operator*(const PoincareElement& a, const PoincareElement& b);
  friend bool operator==(const PoincareElement& a, const PoincareElement& b) {
    return a.terms_ == b.terms_;
  }

  /// Canonical text form, descending exponents: "T^2 - 1", "2*T^-4 + 3".
  std::string str() const;

 private:
  std::vector<std::pair<long, Int>> terms_;
};

/// A virtual dimension: an element of (1/2)Z ∪ {-inf}, carried exactly as a
/// doubled ZBar. Renders half-integers as "p/2".
struct VirtualDim {
  ZBar doubled;

  static VirtualDim neg_inf() { return {ZBar::neg_inf()}; }
  static VirtualDim of_int(Int v) { return {ZBar::fin(2 * v)}; }
  bool equals_int(const ZBar& z) const;
  std::string str() const;
  friend bool operator==(const VirtualDim& a, const VirtualDim& b) {
    return a.doubled == b.doubled;
  }
};

/// Half the degree; -inf for the zero polynomial.
VirtualDim virtual_dim(const PoincareElement& p);

/// One connected component of the special fiber of a weak Néron model:
/// its Poincaré polynomial, its dimension, and the order of the gauge form
/// along it.
struct WeakNeronComponent {
  PoincareElement poincare;
  int dim = 0;
  long ord_omega = 0;
};

class WeakNeronData {
 public:
  WeakNeronData(int dim_x, std::vector<WeakNeronComponent> components);

  int dim_x() const { return dim_x_; }
  const std::vector<WeakNeronComponent>& components() const { return components_; }

 private:
  int dim_x_;
  std::vector<WeakNeronComponent> components_;
};

/// T^{-2 dim X} Σ_C poincare(C) · T^{-2 ord_C ω}.
PoincareElement motivic_integral(const WeakNeronData& w);

struct HaarResult {
  PoincareElement integral;
  ZBar dim;  // always the integer -gamma
};

/// The Haar-measure special case: T^{-2(gamma+g)} · gk for a smooth group
/// special fiber gk of pure dimension g; its virtual dimension is -gamma.
/// gk must have degree 2g and positive leading coefficient.
HaarResult haar_integral(const PoincareElement& gk, int g, long gamma);

struct CompareResult {
  VirtualDim lhs;
  ZBar rhs;
  bool equal;
};

/// Dimension comparison between the motivic-integral side (from weak Néron
/// data) and the cell-calculus side (a cell presentation with its density).
/// The correspondence between the two presentations is the caller's
/// assertion; this checks the equality of the numbers.
CompareResult compare_check(const WeakNeronData& w, const DefinableSet& a,
                            const DimFunction& phi);

}  // namespace tropivol
