#include "tropivol/padic.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

namespace tropivol {

PadicConstant PadicConstant::from_terms(std::vector<std::pair<long, Rat>> terms) {
  std::map<long, Rat> acc;
  for (auto& [e, d] : terms) {
    d.canonicalize();
    acc[e] += d;
  }
  PadicConstant c;
  for (auto& [e, d] : acc) {
    d.canonicalize();
    if (d != 0) c.terms_.emplace_back(e, d);
  }
  return c;
}

long PadicConstant::ord() const {
  if (is_zero()) throw std::domain_error("PadicConstant::ord: zero has no finite order");
  return terms_.front().first;
}

Rat PadicConstant::digit_at(long e) const {
  for (const auto& [ee, d] : terms_)
    if (ee == e) return d;
  return Rat(0);
}

std::vector<Rat> PadicConstant::ac_digits(int n) const {
  std::vector<Rat> out(static_cast<size_t>(n), Rat(0));
  if (is_zero()) return out;
  long o = ord();
  for (int i = 0; i < n; ++i) out[i] = digit_at(o + i);
  return out;
}

std::vector<Rat> PadicConstant::unit_inverse_digits(int n) const {
  if (is_zero()) throw std::domain_error("PadicConstant: zero has no unit inverse");
  std::vector<Rat> u = ac_digits(n);
  std::vector<Rat> inv(static_cast<size_t>(n), Rat(0));
  inv[0] = 1 / u[0];
  for (int k = 1; k < n; ++k) {
    Rat s(0);
    for (int j = 1; j <= k; ++j) s += u[j] * inv[k - j];
    inv[k] = -s / u[0];
    inv[k].canonicalize();
  }
  return inv;
}

PadicConstant operator+(const PadicConstant& a, const PadicConstant& b) {
  std::vector<std::pair<long, Rat>> terms = a.terms_;
  terms.insert(terms.end(), b.terms_.begin(), b.terms_.end());
  return PadicConstant::from_terms(std::move(terms));
}

PadicConstant operator-(const PadicConstant& a) {
  std::vector<std::pair<long, Rat>> terms;
  for (const auto& [e, d] : a.terms_) terms.emplace_back(e, -d);
  return PadicConstant::from_terms(std::move(terms));
}

PadicConstant operator-(const PadicConstant& a, const PadicConstant& b) { return a + (-b); }

PadicConstant operator*(const PadicConstant& a, const PadicConstant& b) {
  std::vector<std::pair<long, Rat>> terms;
  for (const auto& [ea, da] : a.terms_)
    for (const auto& [eb, db] : b.terms_) terms.emplace_back(ea + eb, da * db);
  return PadicConstant::from_terms(std::move(terms));
}

std::string PadicConstant::str() const {
  std::ostringstream os;
  os << '(';
  bool first = true;
  for (const auto& [e, d] : terms_) {
    if (!first) os << ' ';
    first = false;
    os << '(' << e << ' ' << d.get_str() << ')';
  }
  os << ')';
  return os.str();
}

std::vector<Rat> convolve_digits(std::span<const Rat> a, std::span<const Rat> b, int n) {
  std::vector<Rat> out(static_cast<size_t>(n), Rat(0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; i + j < n; ++j) {
      if (i >= static_cast<int>(a.size()) || j >= static_cast<int>(b.size())) continue;
      out[i + j] += a[i] * b[j];
    }
  for (auto& d : out) d.canonicalize();
  return out;
}

}  // namespace tropivol
