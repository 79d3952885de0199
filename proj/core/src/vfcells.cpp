#include "tropivol/vfcells.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <string>

namespace tropivol {

namespace {

std::string cell_label(size_t idx) { return "cell #" + std::to_string(idx); }

PresburgerSet add_inequality_all(const PresburgerSet& s, const Inequality& q) {
  PresburgerSet out(s.dim());
  for (const auto& c : s.cells()) out.add_cell(c.with_inequality(q));
  return out;
}

Inequality var_ge(int dim, int var, Int bound) {
  Inequality q;
  q.coeffs.assign(dim, Int(0));
  q.coeffs[var] = 1;
  q.bound = std::move(bound);
  return q;
}

Inequality var_le(int dim, int var, Int bound) {
  Inequality q;
  q.coeffs.assign(dim, Int(0));
  q.coeffs[var] = -1;
  q.bound = -bound;
  return q;
}

}  // namespace

AcConstraint AcConstraint::fixed(std::vector<Rat> digits) {
  if (digits.empty()) throw std::invalid_argument("AcConstraint: empty digit vector");
  if (digits.front() == 0)
    throw std::invalid_argument("AcConstraint: leading digit must be nonzero");
  AcConstraint c;
  c.kind = AcKind::FixedDigits;
  c.digits = std::move(digits);
  return c;
}

VFCell::VFCell(int n, std::vector<PadicConstant> centers, std::vector<int> ac_depth,
               std::vector<AcConstraint> ac, PresburgerSet ord_set, ResidueSet residue)
    : n_(n),
      centers_(std::move(centers)),
      ac_depth_(std::move(ac_depth)),
      ac_(std::move(ac)),
      ord_set_(std::move(ord_set)),
      residue_(std::move(residue)) {
  if (n_ < 0) throw std::invalid_argument("VFCell: negative coordinate count");
  if (static_cast<int>(centers_.size()) != n_ || static_cast<int>(ac_depth_.size()) != n_ ||
      static_cast<int>(ac_.size()) != n_)
    throw std::invalid_argument("VFCell: per-coordinate data must have length n");
  if (ord_set_.dim() < n_)
    throw std::invalid_argument("VFCell: ord_set dimension below coordinate count");
  for (int i = 0; i < n_; ++i) {
    if (ac_depth_[i] < 1) throw std::invalid_argument("VFCell: ac depth must be positive");
    if (ac_[i].kind == AcKind::FixedDigits &&
        static_cast<int>(ac_[i].digits.size()) != ac_depth_[i])
      throw std::invalid_argument("VFCell: fixed ac digit count must equal the depth");
  }
}

bool VFCell::contains_point(std::span<const PadicConstant> y, std::span<const Int> z) const {
  if (static_cast<int>(y.size()) != n_ || static_cast<int>(z.size()) != extra_params())
    return false;
  std::vector<Int> gz;
  gz.reserve(ord_set_.dim());
  for (int i = 0; i < n_; ++i) {
    PadicConstant u = y[i] - centers_[i];
    if (u.is_zero()) return false;
    if (ac_[i].kind == AcKind::FixedDigits && u.ac_digits(ac_depth_[i]) != ac_[i].digits)
      return false;
    gz.emplace_back(u.ord());
  }
  for (const auto& v : z) gz.push_back(v);
  return ord_set_.contains(gz);
}

void DefinableSet::add_cell(VFCell cell) {
  if (cell.n() != n_ || cell.extra_params() != r_)
    throw std::invalid_argument("DefinableSet: cell profile mismatch");
  cells_.push_back(std::move(cell));
}

void DimFunction::add_piece(VFCell cell, AffineForm form) {
  const int arity = cell.n() + cell.extra_params();
  if (form.offset.is_fin() && static_cast<int>(form.coeffs.size()) != arity)
    throw std::invalid_argument("DimFunction: form arity must match the cell's n + r");
  if (!form.offset.is_fin()) form.coeffs.assign(arity, Int(0));
  pieces_.push_back(Piece{std::move(cell), std::move(form)});
}

// ---------------------------------------------------------------------------
// Truncation
// ---------------------------------------------------------------------------

namespace {

void check_integral_cell(const VFCell& c, size_t idx) {
  const int dim = c.ord_set().dim();
  for (int i = 0; i < c.n(); ++i) {
    // Any point with gamma_i <= -1 would leave R.
    PresburgerSet below = add_inequality_all(c.ord_set(), var_le(dim, i, Int(-1)));
    if (!is_empty(below))
      throw std::domain_error("truncate: " + cell_label(idx) +
                              " is not contained in R^n (order can be negative)");
    if (!c.centers()[i].is_zero() && c.centers()[i].ord() < 0)
      throw std::domain_error("truncate: " + cell_label(idx) + " has a center outside R");
  }
}

// Digit markers of valued-field coordinate i for a concrete gamma (or
// "gamma >= ell" when capped).
std::vector<ResidueCoord> digit_coords(const VFCell& c, int i, long gamma, bool capped,
                                       int ell) {
  std::vector<ResidueCoord> out;
  out.reserve(static_cast<size_t>(ell));
  const PadicConstant& center = c.centers()[i];
  for (int p = 0; p < ell; ++p) {
    if (capped || p < gamma) {
      out.push_back(ResidueCoord::fixed(center.digit_at(p)));
      continue;
    }
    long off = p - gamma;
    if (off < c.ac_depth()[i]) {
      if (c.ac()[i].kind == AcKind::FixedDigits)
        out.push_back(ResidueCoord::fixed(c.ac()[i].digits[static_cast<size_t>(off)]));
      else
        out.push_back(off == 0 ? ResidueCoord::free_nonzero() : ResidueCoord::free());
    } else {
      out.push_back(ResidueCoord::free());
    }
  }
  return out;
}

}  // namespace

ResidueSet truncate(const DefinableSet& a, int ell) {
  if (ell < 1) throw std::invalid_argument("truncate: level must be positive");
  ResidueSet out;
  for (size_t ci = 0; ci < a.cells().size(); ++ci) {
    const VFCell& c = a.cells()[ci];
    check_integral_cell(c, ci);
    const int dim = c.ord_set().dim();
    // Enumerate gamma tuples with each coordinate in {0, ..., ell-1, >=ell}.
    std::vector<long> tuple(static_cast<size_t>(c.n()), 0);
    std::vector<bool> capped(static_cast<size_t>(c.n()), false);
    auto recurse = [&](auto&& self, int i) -> void {
      if (i == c.n()) {
        PresburgerSet constrained = c.ord_set();
        std::map<int, Int> assign;
        for (int j = 0; j < c.n(); ++j) {
          if (capped[j])
            constrained = add_inequality_all(constrained, var_ge(dim, j, Int(ell)));
          else
            assign.emplace(j, Int(tuple[j]));
        }
        if (is_empty(slice(constrained, assign))) return;
        std::vector<ResidueCoord> digits;
        for (int j = 0; j < c.n(); ++j) {
          auto d = digit_coords(c, j, tuple[j], capped[j], ell);
          digits.insert(digits.end(), d.begin(), d.end());
        }
        ResidueSet slab({ResidueCell(std::move(digits))});
        ResidueSet crossed = product(slab, c.residue());
        for (const auto& cell : crossed.cells()) out.add_cell(cell);
        return;
      }
      for (long g = 0; g < ell; ++g) {
        tuple[static_cast<size_t>(i)] = g;
        capped[static_cast<size_t>(i)] = false;
        self(self, i + 1);
      }
      capped[static_cast<size_t>(i)] = true;
      self(self, i + 1);
    };
    recurse(recurse, 0);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Volume
// ---------------------------------------------------------------------------

namespace {

// Density of the truncated slab at a fixed gamma tuple: each coordinate
// contributes -gamma_i - l_i + d_i free digits relative to level growth.
AffineForm vol_density(const VFCell& c) {
  AffineForm f;
  f.coeffs.assign(static_cast<size_t>(c.ord_set().dim()), Int(0));
  Int off(0);
  for (int i = 0; i < c.n(); ++i) {
    f.coeffs[static_cast<size_t>(i)] = -1;
    off += c.depth_credit(i) - c.ac_depth()[i];
  }
  f.offset = ZBar::fin(off);
  return f;
}

ZBar vol_cell(const VFCell& c) {
  ZBar rdim = dimension(c.residue());
  if (rdim.is_neg_inf()) return ZBar::neg_inf();
  return odot(sup_affine(c.ord_set(), vol_density(c)), rdim);
}

// Integral of a single piece: sup over the ord_set of (density + form),
// times the residue dimension, with ±inf piece values short-circuited.
ZBar piece_integral_on(const PresburgerSet& ord_set, const VFCell& c, const AffineForm& form) {
  ZBar rdim = dimension(c.residue());
  if (rdim.is_neg_inf()) return ZBar::neg_inf();
  if (form.offset.is_neg_inf()) return ZBar::neg_inf();
  if (form.offset.is_pos_inf())
    return odot(odot(sup_affine(ord_set, vol_density(c)), rdim), ZBar::pos_inf());
  return odot(sup_affine(ord_set, add_forms(vol_density(c), form)), rdim);
}

ZBar piece_integral(const DimFunction::Piece& p) {
  return piece_integral_on(p.cell.ord_set(), p.cell, p.form);
}

}  // namespace

ZBar vol(const DefinableSet& a) {
  ZBar acc = ZBar::neg_inf();
  for (const auto& c : a.cells()) acc = oplus(acc, vol_cell(c));
  return acc;
}

DefinableSet scale_into_ring(const DefinableSet& a, int i) {
  if (i < 0) throw std::invalid_argument("scale_into_ring: negative shift");
  DefinableSet out(a.n(), a.extra_params());
  PadicConstant pw = PadicConstant::uniformizer_power(i);
  for (size_t ci = 0; ci < a.cells().size(); ++ci) {
    const VFCell& c = a.cells()[ci];
    const int dim = c.ord_set().dim();
    std::vector<PadicConstant> centers;
    for (int j = 0; j < c.n(); ++j) {
      const PadicConstant& ctr = c.centers()[j];
      if (!ctr.is_zero() && ctr.ord() < -i)
        throw std::domain_error("scale_into_ring: " + cell_label(ci) +
                                " has center order below the shift depth");
      centers.push_back(ctr * pw);
    }
    PresburgerSet ord = c.ord_set();
    std::vector<Int> delta(static_cast<size_t>(dim), Int(0));
    for (int j = 0; j < c.n(); ++j) {
      ord = add_inequality_all(ord, var_ge(dim, j, Int(-i)));
      delta[static_cast<size_t>(j)] = i;
    }
    ord = translate(ord, delta);
    out.add_cell(VFCell(c.n(), std::move(centers), c.ac_depth(), c.ac(), std::move(ord),
                        c.residue()));
  }
  return out;
}

OracleResult vol_truncation_oracle(const DefinableSet& a, int i_max, int ell_max) {
  if (i_max < 0 || ell_max < 1)
    throw std::invalid_argument("vol_truncation_oracle: bad truncation bounds");
  const int n = a.n();
  std::vector<ZBar> outer;
  bool inner_ok = true;
  for (int i = 0; i <= i_max; ++i) {
    DefinableSet ai = scale_into_ring(a, i);
    std::vector<ZBar> seq;
    for (int ell = 1; ell <= ell_max; ++ell)
      seq.push_back(odot(dimension(truncate(ai, ell)), ZBar::fin(-static_cast<long>(ell) * n)));
    bool stab = seq.size() >= 3 && seq[seq.size() - 1] == seq[seq.size() - 2] &&
                seq[seq.size() - 2] == seq[seq.size() - 3];
    if (seq.size() < 3) stab = seq.size() == 1 || seq.front() == seq.back();
    inner_ok = inner_ok && stab;
    outer.push_back(odot(ZBar::fin(static_cast<long>(n) * i), seq.back()));
  }
  bool outer_ok;
  if (outer.size() >= 3)
    outer_ok = outer[outer.size() - 1] == outer[outer.size() - 2] &&
               outer[outer.size() - 2] == outer[outer.size() - 3];
  else
    outer_ok = outer.front() == outer.back();
  return OracleResult{outer.back(), inner_ok && outer_ok};
}

// ---------------------------------------------------------------------------
// Integration
// ---------------------------------------------------------------------------

namespace {

void check_profile(const DefinableSet& a, const DimFunction& phi, const char* who) {
  for (const auto& p : phi.pieces())
    if (p.cell.n() != a.n() || p.cell.extra_params() != a.extra_params())
      throw std::invalid_argument(std::string(who) + ": piece profile mismatch");
}

}  // namespace

ZBar integrate(const DefinableSet& a, const DimFunction& phi) {
  check_profile(a, phi, "integrate");
  ZBar acc = ZBar::neg_inf();
  for (const auto& p : phi.pieces()) acc = oplus(acc, piece_integral(p));
  return acc;
}

ZBar integrate_threshold(const DefinableSet& a, const DimFunction& phi) {
  check_profile(a, phi, "integrate_threshold");
  const ZBar combined = integrate(a, phi);

  // Volume of phi^{-1}({value >= alpha}) at a concrete threshold.
  auto level_volume_term = [&](const DimFunction::Piece& p, const Int& alpha) -> ZBar {
    if (p.form.offset.is_neg_inf()) return ZBar::neg_inf();
    ZBar rdim = dimension(p.cell.residue());
    if (rdim.is_neg_inf()) return ZBar::neg_inf();
    if (p.form.offset.is_pos_inf()) return vol_cell(p.cell);
    Inequality ge;
    ge.coeffs = p.form.coeffs;
    ge.bound = alpha - p.form.offset.fin_value();
    PresburgerSet region = add_inequality_all(p.cell.ord_set(), ge);
    return odot(sup_affine(region, vol_density(p.cell)), rdim);
  };
  auto g = [&](const Int& alpha) -> ZBar {
    ZBar acc = ZBar::neg_inf();
    for (const auto& p : phi.pieces())
      acc = oplus(acc, odot(ZBar::fin(alpha), level_volume_term(p, alpha)));
    return acc;
  };

  std::set<Int> candidates;
  candidates.insert(Int(0));
  for (const auto& p : phi.pieces()) {
    if (!p.form.offset.is_fin()) continue;
    SupResult sw = sup_affine_witness(p.cell.ord_set(), add_forms(vol_density(p.cell), p.form));
    if (sw.arg) {
      ZBar at = p.form.eval(*sw.arg);
      if (at.is_fin()) {
        candidates.insert(at.fin_value() - 1);
        candidates.insert(at.fin_value());
        candidates.insert(at.fin_value() + 1);
      }
    }
  }
  if (combined.is_fin())
    for (long d = -2; d <= 2; ++d) candidates.insert(combined.fin_value() + d);

  ZBar best = ZBar::neg_inf();
  for (const auto& alpha : candidates) best = oplus(best, g(alpha));
  // A +inf integral that no finite threshold certifies comes from an
  // unbounded combined objective; the supremum over alpha diverges with it.
  if (combined.is_pos_inf() && !best.is_pos_inf()) best = ZBar::pos_inf();
  return best;
}

// ---------------------------------------------------------------------------
// Products, Fubini, projection
// ---------------------------------------------------------------------------

DefinableSet vf_product(const DefinableSet& ax, const DefinableSet& ay) {
  const int nx = ax.n(), ny = ay.n(), rx = ax.extra_params(), ry = ay.extra_params();
  DefinableSet out(nx + ny, rx + ry);
  std::vector<int> perm;
  perm.reserve(static_cast<size_t>(nx + ny + rx + ry));
  for (int i = 0; i < nx; ++i) perm.push_back(i);
  for (int i = 0; i < ny; ++i) perm.push_back(nx + rx + i);
  for (int i = 0; i < rx; ++i) perm.push_back(nx + i);
  for (int i = 0; i < ry; ++i) perm.push_back(nx + rx + ny + i);
  for (const auto& cx : ax.cells())
    for (const auto& cy : ay.cells()) {
      std::vector<PadicConstant> centers = cx.centers();
      centers.insert(centers.end(), cy.centers().begin(), cy.centers().end());
      std::vector<int> depth = cx.ac_depth();
      depth.insert(depth.end(), cy.ac_depth().begin(), cy.ac_depth().end());
      std::vector<AcConstraint> ac = cx.ac();
      ac.insert(ac.end(), cy.ac().begin(), cy.ac().end());
      PresburgerSet ord = permute(product(cx.ord_set(), cy.ord_set()), perm);
      out.add_cell(VFCell(nx + ny, std::move(centers), std::move(depth), std::move(ac),
                          std::move(ord), product(cx.residue(), cy.residue())));
    }
  return out;
}

namespace {

struct ProductSplit {
  int nx, ny, rx, ry;
  std::vector<int> x_indices, y_indices;
};

ProductSplit make_split(const DefinableSet& ax, const DefinableSet& ay) {
  ProductSplit s;
  s.nx = ax.n();
  s.ny = ay.n();
  s.rx = ax.extra_params();
  s.ry = ay.extra_params();
  for (int i = 0; i < s.nx; ++i) s.x_indices.push_back(i);
  for (int i = 0; i < s.rx; ++i) s.x_indices.push_back(s.nx + s.ny + i);
  for (int i = 0; i < s.ny; ++i) s.y_indices.push_back(s.nx + i);
  for (int i = 0; i < s.ry; ++i) s.y_indices.push_back(s.nx + s.ny + s.rx + i);
  return s;
}

constexpr size_t kProbeCap = 200000;

// Feasible integer assignments to the listed variables, windows clipped to
// [-clip, clip]; feasibility checked against the full ord_set.
std::vector<std::vector<Int>> enumerate_fibers(const PresburgerSet& s,
                                               const std::vector<int>& vars, const Int& clip) {
  std::vector<std::vector<Int>> out;
  std::vector<Int> current;
  auto restricted = [&](size_t upto) {
    PresburgerSet r = s;
    for (size_t k = 0; k < upto; ++k) {
      r = add_inequality_all(r, var_ge(s.dim(), vars[k], current[k]));
      r = add_inequality_all(r, var_le(s.dim(), vars[k], current[k]));
    }
    return r;
  };
  auto recurse = [&](auto&& self, size_t k) -> void {
    if (k == vars.size()) {
      PresburgerSet r = restricted(k);
      bool nonempty = false;
      for (const auto& cell : r.cells())
        if (find_point(cell)) {
          nonempty = true;
          break;
        }
      if (nonempty) {
        out.push_back(current);
        if (out.size() > kProbeCap) throw std::runtime_error("fiber probe budget exceeded");
      }
      return;
    }
    PresburgerSet r = restricted(k);
    Int lo = -clip, hi = clip;
    bool any_feasible = false;
    bool lo_f = false, hi_f = false;
    Rat lo_r, hi_r;
    for (const auto& cell : r.cells()) {
      RationalWindow w = rational_window(cell, vars[k]);
      if (!w.feasible) continue;
      any_feasible = true;
      if (w.lo_finite) {
        if (!lo_f || w.lo < lo_r) {
          lo_f = true;
          lo_r = w.lo;
        }
      } else
        lo_f = false;
      if (w.hi_finite) {
        if (!hi_f || w.hi > hi_r) {
          hi_f = true;
          hi_r = w.hi;
        }
      } else
        hi_f = false;
    }
    if (!any_feasible) return;
    if (lo_f) {
      Int l;
      mpz_cdiv_q(l.get_mpz_t(), lo_r.get_num().get_mpz_t(), lo_r.get_den().get_mpz_t());
      if (l > lo) lo = l;
    }
    if (hi_f) {
      Int h;
      mpz_fdiv_q(h.get_mpz_t(), hi_r.get_num().get_mpz_t(), hi_r.get_den().get_mpz_t());
      if (h < hi) hi = h;
    }
    for (Int v = lo; v <= hi; ++v) {
      current.push_back(v);
      self(self, k + 1);
      current.pop_back();
    }
  };
  recurse(recurse, 0);
  return out;
}

// x-side density value at a concrete fiber.
ZBar density_x_at(const VFCell& c, const ProductSplit& sp, std::span<const Int> fiber) {
  Int acc(0);
  for (int i = 0; i < sp.nx; ++i)
    acc += -fiber[static_cast<size_t>(i)] + c.depth_credit(i) - c.ac_depth()[i];
  return ZBar::fin(acc);
}

// y-side density over the sliced coordinates (gamma_y first, then z_y).
AffineForm density_y_sliced(const VFCell& c, const ProductSplit& sp) {
  AffineForm f;
  f.coeffs.assign(static_cast<size_t>(sp.ny + sp.ry), Int(0));
  Int off(0);
  for (int i = 0; i < sp.ny; ++i) {
    f.coeffs[static_cast<size_t>(i)] = -1;
    off += c.depth_credit(sp.nx + i) - c.ac_depth()[sp.nx + i];
  }
  f.offset = ZBar::fin(off);
  return f;
}

// Inner integral of one product piece at a fixed x-fiber, with an extra
// ⊙-factor folded into the form's offset.
ZBar inner_at_fiber(const DimFunction::Piece& p, const ProductSplit& sp,
                    std::span<const Int> fiber, const ZBar& extra) {
  ZBar rdim = dimension(p.cell.residue());
  if (rdim.is_neg_inf()) return ZBar::neg_inf();
  std::map<int, Int> assign;
  for (size_t k = 0; k < sp.x_indices.size(); ++k) assign.emplace(sp.x_indices[k], fiber[k]);
  PresburgerSet ys = slice(p.cell.ord_set(), assign);

  ZBar off = odot(p.form.offset, extra);
  if (off.is_neg_inf()) return ZBar::neg_inf();
  AffineForm dens = density_y_sliced(p.cell, sp);
  if (off.is_pos_inf()) {
    ZBar volume = sup_affine(ys, dens);
    return odot(odot(volume, rdim), ZBar::pos_inf());
  }
  // Fold the x-contribution of the form into the offset.
  Int folded = off.fin_value();
  for (size_t k = 0; k < sp.x_indices.size(); ++k)
    folded += p.form.coeffs[static_cast<size_t>(sp.x_indices[k])] * fiber[k];
  AffineForm fy;
  fy.coeffs.reserve(sp.y_indices.size());
  for (int idx : sp.y_indices) fy.coeffs.push_back(p.form.coeffs[static_cast<size_t>(idx)]);
  fy.offset = ZBar::fin(folded);
  return odot(sup_affine(ys, add_forms(dens, fy)), rdim);
}

Int probe_bound(const DimFunction::Piece& p, const ProductSplit& sp) {
  Int b(4);
  SupResult sw = sup_affine_witness(p.cell.ord_set(), add_forms(vol_density(p.cell), p.form));
  const std::optional<std::vector<Int>>* arg = &sw.arg;
  SupResult fallback{ZBar::neg_inf(), std::nullopt};
  if (!sw.arg) {
    fallback = sup_affine_witness(p.cell.ord_set(), vol_density(p.cell));
    arg = &fallback.arg;
  }
  if (*arg)
    for (int idx : sp.x_indices) {
      Int a = abs((**arg)[static_cast<size_t>(idx)]);
      if (a + 4 > b) b = a + 4;
    }
  return b;
}

}  // namespace

FubiniResult fubini_check(const DefinableSet& ax, const DefinableSet& ay,
                          const DimFunction& phi) {
  const ProductSplit sp = make_split(ax, ay);
  const int n = sp.nx + sp.ny, r = sp.rx + sp.ry;
  for (const auto& p : phi.pieces())
    if (p.cell.n() != n || p.cell.extra_params() != r)
      throw std::invalid_argument("fubini_check: piece profile does not match the product");

  ZBar joint = ZBar::neg_inf();
  ZBar iterated = ZBar::neg_inf();
  for (const auto& p : phi.pieces()) {
    joint = oplus(joint, piece_integral(p));

    Int bound = probe_bound(p, sp);
    ZBar piece_iter = ZBar::neg_inf();
    for (const auto& fiber : enumerate_fibers(p.cell.ord_set(), sp.x_indices, bound)) {
      ZBar inner = inner_at_fiber(p, sp, fiber, ZBar::fin(0));
      piece_iter = oplus(piece_iter, odot(density_x_at(p.cell, sp, fiber), inner));
    }
    // Fibers beyond the probe box: bounded per direction by the joint
    // reduction over the clipped-away half-space (sup over those fibers of
    // the fiber suprema, reassociated).
    for (int idx : sp.x_indices) {
      PresburgerSet far_hi =
          add_inequality_all(p.cell.ord_set(), var_ge(p.cell.ord_set().dim(), idx, bound + 1));
      PresburgerSet far_lo =
          add_inequality_all(p.cell.ord_set(), var_le(p.cell.ord_set().dim(), idx, -bound - 1));
      piece_iter = oplus(piece_iter, piece_integral_on(far_hi, p.cell, p.form));
      piece_iter = oplus(piece_iter, piece_integral_on(far_lo, p.cell, p.form));
    }
    iterated = oplus(iterated, piece_iter);
  }
  return FubiniResult{iterated, joint, iterated == joint};
}

bool projection_check(const DefinableSet& ax, const DefinableSet& ay, const DimFunction& psi,
                      const DimFunction& phi) {
  const ProductSplit sp = make_split(ax, ay);
  const int n = sp.nx + sp.ny, r = sp.rx + sp.ry;
  for (const auto& p : phi.pieces())
    if (p.cell.n() != n || p.cell.extra_params() != r)
      throw std::invalid_argument("projection_check: phi profile does not match the product");
  for (const auto& p : psi.pieces())
    if (p.cell.n() != sp.nx || p.cell.extra_params() != sp.rx)
      throw std::invalid_argument("projection_check: psi profile does not match the x factor");

  // Collect the probe fibers from every phi piece.
  std::set<std::vector<Int>> fibers;
  for (const auto& p : phi.pieces()) {
    Int bound = probe_bound(p, sp);
    for (auto& f : enumerate_fibers(p.cell.ord_set(), sp.x_indices, bound))
      fibers.insert(std::move(f));
  }

  for (const auto& fiber : fibers) {
    // psi at the fiber: ⊕ over pieces whose ord_set contains it.
    ZBar psival = ZBar::neg_inf();
    for (const auto& p : psi.pieces())
      if (p.cell.ord_set().contains(fiber)) psival = oplus(psival, p.form.eval(fiber));

    ZBar lhs = ZBar::neg_inf(), inner_total = ZBar::neg_inf();
    for (const auto& q : phi.pieces()) {
      lhs = oplus(lhs, inner_at_fiber(q, sp, fiber, psival));
      inner_total = oplus(inner_total, inner_at_fiber(q, sp, fiber, ZBar::fin(0)));
    }
    ZBar rhs = odot(psival, inner_total);
    if (!(lhs == rhs)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Affine maps and change of variables
// ---------------------------------------------------------------------------

AffineImage apply_affine_map(const DefinableSet& a, const AffineMap& map) {
  const int n = a.n();
  if (static_cast<int>(map.scale.size()) != n || static_cast<int>(map.offset.size()) != n)
    throw std::invalid_argument("apply_affine_map: map arity mismatch");
  long ord_jac = 0;
  for (const auto& s : map.scale) {
    if (s.is_zero()) throw std::invalid_argument("apply_affine_map: singular map (zero scale)");
    ord_jac += s.ord();
  }
  DefinableSet image(a.n(), a.extra_params());
  for (const auto& c : a.cells()) {
    std::vector<PadicConstant> centers;
    std::vector<AcConstraint> ac;
    std::vector<Int> delta(static_cast<size_t>(c.ord_set().dim()), Int(0));
    for (int i = 0; i < n; ++i) {
      centers.push_back(map.scale[static_cast<size_t>(i)] * c.centers()[i] +
                        map.offset[static_cast<size_t>(i)]);
      delta[static_cast<size_t>(i)] = map.scale[static_cast<size_t>(i)].ord();
      if (c.ac()[i].kind == AcKind::FixedDigits) {
        int d = c.ac_depth()[i];
        ac.push_back(AcConstraint::fixed(convolve_digits(
            map.scale[static_cast<size_t>(i)].ac_digits(d), c.ac()[i].digits, d)));
      } else {
        ac.push_back(AcConstraint::free_unit());
      }
    }
    image.add_cell(VFCell(n, std::move(centers), c.ac_depth(), std::move(ac),
                          translate(c.ord_set(), delta), c.residue()));
  }
  return AffineImage{std::move(image), ord_jac};
}

CovResult cov_check(const DefinableSet& a, const AffineMap& map, const DimFunction& phi) {
  AffineImage img = apply_affine_map(a, map);
  for (const auto& p : phi.pieces())
    if (p.cell.n() != a.n() || p.cell.extra_params() != a.extra_params())
      throw std::invalid_argument("cov_check: phi profile mismatch");
  ZBar rhs = integrate(img.image, phi);

  // Pull each piece back through the map. The pulled centers are only kept
  // to truncated precision; integration never reads them.
  const int n = a.n();
  ZBar lhs = ZBar::neg_inf();
  for (const auto& p : phi.pieces()) {
    std::vector<PadicConstant> centers;
    std::vector<AcConstraint> ac;
    std::vector<Int> delta(static_cast<size_t>(p.cell.ord_set().dim()), Int(0));
    Int form_shift(0);
    for (int i = 0; i < n; ++i) {
      const PadicConstant& s = map.scale[static_cast<size_t>(i)];
      long so = s.ord();
      delta[static_cast<size_t>(i)] = -so;
      const int d = p.cell.ac_depth()[i];
      std::vector<Rat> sinv = s.unit_inverse_digits(d);
      PadicConstant diff = p.cell.centers()[i] - map.offset[static_cast<size_t>(i)];
      if (diff.is_zero()) {
        centers.push_back(PadicConstant());
      } else {
        std::vector<std::pair<long, Rat>> terms;
        std::vector<Rat> digs = diff.ac_digits(d);
        std::vector<Rat> prod = convolve_digits(digs, sinv, d);
        for (int t = 0; t < d; ++t)
          if (prod[static_cast<size_t>(t)] != 0)
            terms.emplace_back(diff.ord() - so + t, prod[static_cast<size_t>(t)]);
        centers.push_back(PadicConstant::from_terms(std::move(terms)));
      }
      if (p.cell.ac()[i].kind == AcKind::FixedDigits)
        ac.push_back(AcConstraint::fixed(convolve_digits(sinv, p.cell.ac()[i].digits, d)));
      else
        ac.push_back(AcConstraint::free_unit());
      if (p.form.offset.is_fin()) form_shift += p.form.coeffs[static_cast<size_t>(i)] * so;
    }
    VFCell pulled(n, std::move(centers), p.cell.ac_depth(), std::move(ac),
                  translate(p.cell.ord_set(), delta), p.cell.residue());
    AffineForm pulled_form = p.form;
    if (pulled_form.offset.is_fin())
      pulled_form.offset = ZBar::fin(pulled_form.offset.fin_value() + form_shift);
    pulled_form.offset = odot(pulled_form.offset, ZBar::fin(-Int(img.ord_jac)));
    lhs = oplus(lhs, piece_integral_on(pulled.ord_set(), pulled, pulled_form));
  }
  return CovResult{lhs, rhs, lhs == rhs};
}

}  // namespace tropivol
