#include "tropivol/motivic.hpp"

#include <map>
#include <sstream>
#include <stdexcept>

namespace tropivol {

PoincareElement PoincareElement::from_terms(std::vector<std::pair<long, Int>> terms) {
  std::map<long, Int> acc;
  for (auto& [e, c] : terms) acc[e] += c;
  PoincareElement p;
  for (auto& [e, c] : acc)
    if (c != 0) p.terms_.emplace_back(e, c);
  return p;
}

PoincareElement PoincareElement::monomial(long exp, Int coeff) {
  return from_terms({{exp, std::move(coeff)}});
}

long PoincareElement::degree() const {
  if (is_zero()) throw std::domain_error("PoincareElement: zero polynomial has no degree");
  return terms_.back().first;
}

const Int& PoincareElement::leading_coeff() const {
  if (is_zero()) throw std::domain_error("PoincareElement: zero polynomial has no leading term");
  return terms_.back().second;
}

PoincareElement operator+(const PoincareElement& a, const PoincareElement& b) {
  std::vector<std::pair<long, Int>> terms = a.terms_;
  terms.insert(terms.end(), b.terms_.begin(), b.terms_.end());
  return PoincareElement::from_terms(std::move(terms));
}

PoincareElement operator*(const PoincareElement& a, const PoincareElement& b) {
  std::vector<std::pair<long, Int>> terms;
  for (const auto& [ea, ca] : a.terms_)
    for (const auto& [eb, cb] : b.terms_) terms.emplace_back(ea + eb, ca * cb);
  return PoincareElement::from_terms(std::move(terms));
}

std::string PoincareElement::str() const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [e, c] = *it;
    Int a = abs(c);
    if (first) {
      if (c < 0) os << '-';
      first = false;
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    if (e == 0) {
      os << a.get_str();
    } else {
      if (a != 1) os << a.get_str() << '*';
      os << "T";
      if (e != 1) os << '^' << e;
    }
  }
  return os.str();
}

bool VirtualDim::equals_int(const ZBar& z) const {
  if (!z.is_fin()) return doubled == z;
  return doubled == ZBar::fin(2 * z.fin_value());
}

std::string VirtualDim::str() const {
  if (!doubled.is_fin()) return doubled.str();
  const Int& d = doubled.fin_value();
  if (d % 2 == 0) return Int(d / 2).get_str();
  return d.get_str() + "/2";
}

VirtualDim virtual_dim(const PoincareElement& p) {
  if (p.is_zero()) return VirtualDim::neg_inf();
  return VirtualDim{ZBar::fin(p.degree())};
}

WeakNeronData::WeakNeronData(int dim_x, std::vector<WeakNeronComponent> components)
    : dim_x_(dim_x), components_(std::move(components)) {
  if (dim_x_ < 0) throw std::invalid_argument("WeakNeronData: negative dimension");
  for (const auto& c : components_) {
    if (c.poincare.is_zero() || c.poincare.degree() != 2L * c.dim ||
        c.poincare.leading_coeff() <= 0)
      throw std::invalid_argument(
          "WeakNeronData: component polynomial must have degree 2*dim and positive leading "
          "coefficient");
    if (c.dim > dim_x_)
      throw std::invalid_argument("WeakNeronData: component dimension exceeds dim X");
  }
}

PoincareElement motivic_integral(const WeakNeronData& w) {
  PoincareElement acc;
  for (const auto& c : w.components())
    acc = acc + c.poincare * PoincareElement::monomial(-2L * c.ord_omega);
  return acc * PoincareElement::monomial(-2L * w.dim_x());
}

HaarResult haar_integral(const PoincareElement& gk, int g, long gamma) {
  if (gk.is_zero() || gk.degree() != 2L * g || gk.leading_coeff() <= 0)
    throw std::invalid_argument(
        "haar_integral: invalid special fiber (degree must be 2g with positive leading "
        "coefficient)");
  PoincareElement result = gk * PoincareElement::monomial(-2L * (gamma + g));
  VirtualDim d = virtual_dim(result);
  ZBar expected = ZBar::fin(-gamma);
  if (!d.equals_int(expected))
    throw std::logic_error("haar_integral: virtual dimension is not -gamma");
  return HaarResult{std::move(result), expected};
}

CompareResult compare_check(const WeakNeronData& w, const DefinableSet& a,
                            const DimFunction& phi) {
  VirtualDim lhs = virtual_dim(motivic_integral(w));
  ZBar rhs = integrate(a, phi);
  return CompareResult{lhs, rhs, lhs.equals_int(rhs)};
}

}  // namespace tropivol
