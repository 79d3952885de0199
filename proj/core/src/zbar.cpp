#include "tropivol/zbar.hpp"

#include <stdexcept>

namespace tropivol {

const Int& ZBar::fin_value() const {
  if (kind_ != Kind::Fin) throw std::domain_error("ZBar: value is not finite");
  return fin_;
}

std::strong_ordering operator<=>(const ZBar& a, const ZBar& b) {
  auto rank = [](const ZBar& z) { return z.is_neg_inf() ? 0 : z.is_fin() ? 1 : 2; };
  if (rank(a) != rank(b)) return rank(a) <=> rank(b);
  if (!a.is_fin()) return std::strong_ordering::equal;
  int c = cmp(a.fin_, b.fin_);
  return c < 0   ? std::strong_ordering::less
         : c > 0 ? std::strong_ordering::greater
                 : std::strong_ordering::equal;
}

std::string ZBar::str() const {
  if (is_neg_inf()) return "-inf";
  if (is_pos_inf()) return "+inf";
  return fin_.get_str();
}

ZBar oplus(const ZBar& a, const ZBar& b) { return a < b ? b : a; }

ZBar odot(const ZBar& a, const ZBar& b) {
  if (a.is_neg_inf() || b.is_neg_inf()) return ZBar::neg_inf();
  if (a.is_pos_inf() || b.is_pos_inf()) return ZBar::pos_inf();
  return ZBar::fin(a.fin_value() + b.fin_value());
}

ZBar sup(std::span<const ZBar> values) {
  ZBar acc = ZBar::neg_inf();
  for (const auto& v : values) acc = oplus(acc, v);
  return acc;
}

}  // namespace tropivol
