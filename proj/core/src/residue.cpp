#include "tropivol/residue.hpp"

#include <stdexcept>

namespace tropivol {

ResidueCell ResidueCell::opaque(int dim) {
  if (dim < 0) throw std::invalid_argument("ResidueCell: opaque dimension must be >= 0");
  ResidueCell c;
  c.opaque_dim_ = dim;
  return c;
}

int ResidueCell::dimension() const {
  if (opaque_dim_) return *opaque_dim_;
  int d = 0;
  for (const auto& c : coords_)
    if (c.kind != CoordKind::Fixed) ++d;
  return d;
}

ZBar dimension(const ResidueSet& s) {
  ZBar d = ZBar::neg_inf();
  for (const auto& c : s.cells()) d = oplus(d, ZBar::fin(c.dimension()));
  return d;
}

ZBar integrate_residue(const ResidueSet& s, std::span<const ZBar> values) {
  if (values.size() != s.cells().size())
    throw std::invalid_argument("integrate_residue: one value per cell required");
  ZBar acc = ZBar::neg_inf();
  for (size_t i = 0; i < values.size(); ++i)
    acc = oplus(acc, odot(ZBar::fin(s.cells()[i].dimension()), values[i]));
  return acc;
}

ResidueSet product(const ResidueSet& a, const ResidueSet& b) {
  ResidueSet out;
  for (const auto& ca : a.cells())
    for (const auto& cb : b.cells()) {
      if (ca.is_opaque() || cb.is_opaque()) {
        out.add_cell(ResidueCell::opaque(ca.dimension() + cb.dimension()));
      } else {
        std::vector<ResidueCoord> coords = ca.coords();
        coords.insert(coords.end(), cb.coords().begin(), cb.coords().end());
        out.add_cell(ResidueCell(std::move(coords)));
      }
    }
  return out;
}

ResidueFubiniResult residue_fubini_check(const ResidueSet& x, const ResidueSet& y,
                                         const std::vector<std::vector<ZBar>>& phi) {
  if (phi.size() != x.cells().size())
    throw std::invalid_argument("residue_fubini_check: phi row count mismatch");
  for (const auto& row : phi)
    if (row.size() != y.cells().size())
      throw std::invalid_argument("residue_fubini_check: phi column count mismatch");

  // Iterated: integrate over y first, then over x.
  std::vector<ZBar> inner;
  inner.reserve(x.cells().size());
  for (size_t i = 0; i < x.cells().size(); ++i) inner.push_back(integrate_residue(y, phi[i]));
  ZBar iterated = integrate_residue(x, inner);

  // Joint: integrate over the product in one pass.
  ResidueSet xy = product(x, y);
  std::vector<ZBar> flat;
  flat.reserve(x.cells().size() * y.cells().size());
  for (size_t i = 0; i < x.cells().size(); ++i)
    for (size_t j = 0; j < y.cells().size(); ++j) flat.push_back(phi[i][j]);
  ZBar joint = integrate_residue(xy, flat);

  return ResidueFubiniResult{iterated, joint, iterated == joint};
}

}  // namespace tropivol
