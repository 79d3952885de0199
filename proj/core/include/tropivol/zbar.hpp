#pragma once

#include <compare>
#include <span>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace tropivol {

using Int = mpz_class;
using Rat = mpq_class;

/// An element of the max-plus semiring Zbar = {-inf} ∪ Z ∪ {+inf}.
///
/// Addition is oplus(a, b) = max(a, b) with -inf as neutral element;
/// multiplication is odot(a, b) = a + b with fin(0) as neutral element.
/// -inf is absorbing for odot against everything, including +inf.
/// Finite values are arbitrary-precision integers.
class ZBar {
 public:
  ZBar() : kind_(Kind::Fin), fin_(0) {}

  static ZBar neg_inf() { return ZBar(Kind::NegInf); }
  static ZBar pos_inf() { return ZBar(Kind::PosInf); }
  static ZBar fin(Int v) {
    ZBar z(Kind::Fin);
    z.fin_ = std::move(v);
    return z;
  }
  static ZBar fin(long v) { return fin(Int(v)); }

  bool is_neg_inf() const { return kind_ == Kind::NegInf; }
  bool is_pos_inf() const { return kind_ == Kind::PosInf; }
  bool is_fin() const { return kind_ == Kind::Fin; }

  /// Finite value; only valid when is_fin().
  const Int& fin_value() const;

  friend bool operator==(const ZBar& a, const ZBar& b) {
    if (a.kind_ != b.kind_) return false;
    return a.kind_ != Kind::Fin || a.fin_ == b.fin_;
  }
  friend std::strong_ordering operator<=>(const ZBar& a, const ZBar& b);

  /// "-inf", "+inf", or the decimal integer.
  std::string str() const;

 private:
  enum class Kind { NegInf, Fin, PosInf };
  explicit ZBar(Kind k) : kind_(k), fin_(0) {}
  Kind kind_;
  Int fin_;
};

/// a ⊕ b = max(a, b).
ZBar oplus(const ZBar& a, const ZBar& b);

/// a ⊙ b = a + b, with -inf ⊙ x = -inf for every x and
/// +inf ⊙ c = +inf for every c != -inf.
ZBar odot(const ZBar& a, const ZBar& b);

/// ⊕-fold of a sequence; the empty fold is -inf.
ZBar sup(std::span<const ZBar> values);

}  // namespace tropivol
