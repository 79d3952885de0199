#pragma once

#include <string>
#include <utility>
#include <vector>

#include "tropivol/zbar.hpp"

namespace tropivol {

/// A valued-field constant given by a finite uniformizer expansion
/// Σ d_i ϖ^{e_i} with nonzero rational digits d_i at strictly increasing
/// integer exponents e_i; the empty expansion is 0. Digits live in the
/// residue field, which is algebraically closed of characteristic zero;
/// rational digits keep every comparison exact.
class PadicConstant {
 public:
  PadicConstant() = default;  // zero
  static PadicConstant from_terms(std::vector<std::pair<long, Rat>> terms);
  static PadicConstant uniformizer_power(long e) { return from_terms({{e, Rat(1)}}); }
  static PadicConstant constant(Rat digit) { return from_terms({{0, std::move(digit)}}); }

  bool is_zero() const { return terms_.empty(); }
  const std::vector<std::pair<long, Rat>>& terms() const { return terms_; }

  /// Least exponent; only valid for nonzero constants.
  long ord() const;

  /// Coefficient at exponent e (0 when absent).
  Rat digit_at(long e) const;

  /// The n digits at exponents ord(), ord()+1, ..., ord()+n-1.
  /// For zero, n zeros.
  std::vector<Rat> ac_digits(int n) const;

  /// First n digits of the inverse of the unit part ϖ^{-ord} · c.
  /// Only valid for nonzero constants.
  std::vector<Rat> unit_inverse_digits(int n) const;

  friend PadicConstant operator+(const PadicConstant& a, const PadicConstant& b);
  friend PadicConstant operator-(const PadicConstant& a, const PadicConstant& b);
  friend PadicConstant operator-(const PadicConstant& a);
  friend PadicConstant operator*(const PadicConstant& a, const PadicConstant& b);
  friend bool operator==(const PadicConstant& a, const PadicConstant& b) {
    return a.terms_ == b.terms_;
  }

  std::string str() const;

 private:
  std::vector<std::pair<long, Rat>> terms_;
};

/// Digitwise product of two truncated digit expansions (unit convolution up
/// to length n); used for composing angular-component constraints.
std::vector<Rat> convolve_digits(std::span<const Rat> a, std::span<const Rat> b, int n);

}  // namespace tropivol
