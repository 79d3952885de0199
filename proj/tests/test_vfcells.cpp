#include <doctest.h>

#include <random>
#include <set>

#include "tropivol/gen.hpp"
#include "tropivol/vfcells.hpp"

using namespace tropivol;

namespace {

Inequality unit_ge(int dim, int var, long bound) {
  Inequality q;
  q.coeffs.assign(static_cast<size_t>(dim), Int(0));
  q.coeffs[static_cast<size_t>(var)] = 1;
  q.bound = bound;
  return q;
}

Inequality unit_le(int dim, int var, long bound) {
  Inequality q;
  q.coeffs.assign(static_cast<size_t>(dim), Int(0));
  q.coeffs[static_cast<size_t>(var)] = -1;
  q.bound = -bound;
  return q;
}

PresburgerSet gamma_box(std::vector<std::pair<long, long>> ranges) {
  int dim = static_cast<int>(ranges.size());
  std::vector<Inequality> ineqs;
  for (int i = 0; i < dim; ++i) {
    ineqs.push_back(unit_ge(dim, i, ranges[static_cast<size_t>(i)].first));
    ineqs.push_back(unit_le(dim, i, ranges[static_cast<size_t>(i)].second));
  }
  return PresburgerSet(dim, {PresburgerCell(dim, std::move(ineqs), {})});
}

// R = {ord y >= 0} as a one-coordinate cell.
VFCell cell_R() {
  return VFCell(1, {PadicConstant()}, {1}, {AcConstraint::free_unit()},
                PresburgerSet(1, {PresburgerCell(1, {unit_ge(1, 0, 0)}, {})}),
                ResidueSet::point());
}

VFCell cell_ord_ge(long k) {
  return VFCell(1, {PadicConstant()}, {1}, {AcConstraint::free_unit()},
                PresburgerSet(1, {PresburgerCell(1, {unit_ge(1, 0, k)}, {})}),
                ResidueSet::point());
}

VFCell cell_K() {
  return VFCell(1, {PadicConstant()}, {1}, {AcConstraint::free_unit()},
                PresburgerSet::whole(1), ResidueSet::point());
}

VFCell cell_sphere(long gamma) {
  return VFCell(1, {PadicConstant()}, {1}, {AcConstraint::free_unit()},
                gamma_box({{gamma, gamma}}), ResidueSet::point());
}

VFCell cell_ac_fixed(long gamma, std::vector<Rat> digits) {
  int depth = static_cast<int>(digits.size());
  return VFCell(1, {PadicConstant()}, {depth}, {AcConstraint::fixed(std::move(digits))},
                gamma_box({{gamma, gamma}}), ResidueSet::point());
}

DimFunction const_fn(const DefinableSet& a, ZBar value) {
  DimFunction f;
  for (const auto& c : a.cells())
    f.add_piece(c, AffineForm::constant(c.n() + c.extra_params(), value));
  return f;
}

DimFunction neg_ord_fn(const DefinableSet& a) {
  DimFunction f;
  for (const auto& c : a.cells()) {
    AffineForm form;
    form.coeffs.assign(static_cast<size_t>(c.n() + c.extra_params()), Int(0));
    for (int i = 0; i < c.n(); ++i) form.coeffs[static_cast<size_t>(i)] = -1;
    form.offset = ZBar::fin(0);
    f.add_piece(c, form);
  }
  return f;
}

// Counts the distinct length-ell digit prefixes of cell members, by raw
// membership over all digit vectors of length full_len; this is independent
// of the digit bookkeeping inside truncate(). full_len must be deep enough
// that zero-filling beyond it cannot lose members.
long membership_count(const VFCell& c, int ell, int full_len,
                      const std::vector<Rat>& alphabet) {
  std::set<std::vector<Rat>> prefixes;
  std::vector<Rat> digits(static_cast<size_t>(full_len), Rat(0));
  auto rec = [&](auto&& self, int pos) -> void {
    if (pos == full_len) {
      std::vector<std::pair<long, Rat>> terms;
      for (int i = 0; i < full_len; ++i)
        if (digits[static_cast<size_t>(i)] != 0)
          terms.emplace_back(i, digits[static_cast<size_t>(i)]);
      std::vector<PadicConstant> pt{PadicConstant::from_terms(std::move(terms))};
      std::vector<Int> z;
      if (c.contains_point(pt, z))
        prefixes.insert(std::vector<Rat>(digits.begin(), digits.begin() + ell));
      return;
    }
    for (const auto& d : alphabet) {
      digits[static_cast<size_t>(pos)] = d;
      self(self, pos + 1);
    }
  };
  rec(rec, 0);
  return static_cast<long>(prefixes.size());
}

// Predicted count of a residue set over the alphabet, assuming disjoint
// cells (single-source truncations of center-0 cells are disjoint).
long predicted_count(const ResidueSet& s, const std::vector<Rat>& alphabet) {
  long total = 0;
  long nz = 0;
  for (const auto& d : alphabet)
    if (d != 0) ++nz;
  for (const auto& cell : s.cells()) {
    REQUIRE(!cell.is_opaque());
    long c = 1;
    for (const auto& coord : cell.coords()) {
      switch (coord.kind) {
        case CoordKind::Free:
          c *= static_cast<long>(alphabet.size());
          break;
        case CoordKind::FreeNonzero:
          c *= nz;
          break;
        case CoordKind::Fixed: {
          bool in = false;
          for (const auto& d : alphabet)
            if (d == coord.fixed_value) in = true;
          c *= in ? 1 : 0;
          break;
        }
      }
    }
    total += c;
  }
  return total;
}

}  // namespace

TEST_CASE("named volume instances") {
  CHECK(vol(DefinableSet(cell_R())) == ZBar::fin(0));
  CHECK(vol(DefinableSet(cell_ord_ge(3))) == ZBar::fin(-3));
  CHECK(vol(DefinableSet(cell_K())) == ZBar::pos_inf());
  CHECK(vol(DefinableSet(cell_ac_fixed(2, {Rat(1), Rat(0)}))) == ZBar::fin(-4));
}

TEST_CASE("truncate worked instances") {
  CHECK(dimension(truncate(DefinableSet(cell_R()), 4)) == ZBar::fin(4));
  CHECK(dimension(truncate(DefinableSet(cell_ord_ge(3)), 5)) == ZBar::fin(2));
  CHECK(dimension(truncate(DefinableSet(cell_ac_fixed(2, {Rat(1), Rat(2)})), 6)) ==
        ZBar::fin(2));
}

TEST_CASE("truncate rejects cells outside R") {
  DefinableSet k(cell_K());
  CHECK_THROWS_AS(truncate(k, 3), std::domain_error);
  VFCell off_center(1, {PadicConstant::from_terms({{-1, Rat(1)}})}, {1},
                    {AcConstraint::free_unit()},
                    PresburgerSet(1, {PresburgerCell(1, {unit_ge(1, 0, 0)}, {})}),
                    ResidueSet::point());
  CHECK_THROWS_AS(truncate(DefinableSet(off_center), 3), std::domain_error);
}

TEST_CASE("truncate counting oracle on random center-0 cells") {
  std::mt19937_64 rng(424242);
  std::uniform_int_distribution<int> depth_d(1, 2), ell_d(1, 4), lo_d(0, 2), wid_d(0, 2);
  std::vector<Rat> alphabet{Rat(0), Rat(1), Rat(2), Rat(3)};
  for (int trial = 0; trial < 25; ++trial) {
    int depth = depth_d(rng);
    AcConstraint ac = AcConstraint::free_unit();
    if (trial % 2 == 0) {
      std::vector<Rat> digits{Rat(1 + trial % 3)};
      for (int k = 1; k < depth; ++k) digits.push_back(Rat((trial / 2) % 4));
      ac = AcConstraint::fixed(std::move(digits));
    }
    long lo = lo_d(rng), hi = lo + wid_d(rng);
    VFCell c(1, {PadicConstant()}, {depth}, {ac}, gamma_box({{lo, hi}}), ResidueSet::point());
    int ell = ell_d(rng);
    int full_len = static_cast<int>(std::max<long>(ell, hi) + depth + 1);
    ResidueSet img = truncate(DefinableSet(c), ell);
    CHECK(predicted_count(img, alphabet) == membership_count(c, ell, full_len, alphabet));
  }
}

TEST_CASE("closed-form volume equals the truncation-limit oracle") {
  gen::Rng rng(20240820);
  for (int trial = 0; trial < 60; ++trial) {
    int n = 1 + static_cast<int>(trial % 2);
    DefinableSet a = gen::random_defset(rng, n, trial % 3 == 0 ? 1 : 0, 2, 3, 3);
    OracleResult o = vol_truncation_oracle(a, 2, 12);
    CHECK(o.stabilized);
    CHECK(vol(a) == o.value);
  }
}

TEST_CASE("oracle sequences are monotone") {
  gen::Rng rng(77);
  for (int trial = 0; trial < 20; ++trial) {
    DefinableSet a = gen::random_defset(rng, 1 + trial % 2, 0, 2, 3, 3);
    const int n = a.n();
    for (int i = 0; i <= 1; ++i) {
      DefinableSet ai = scale_into_ring(a, i);
      ZBar prev = ZBar::pos_inf();
      for (int ell = 1; ell <= 6; ++ell) {
        ZBar v = odot(dimension(truncate(ai, ell)), ZBar::fin(-static_cast<long>(ell) * n));
        CHECK(v <= prev);  // non-increasing in ell
        prev = v;
      }
    }
    ZBar prev_outer = ZBar::neg_inf();
    for (int i = 0; i <= 2; ++i) {
      DefinableSet ai = scale_into_ring(a, i);
      ZBar vi = odot(ZBar::fin(static_cast<long>(n) * i),
                     vol_truncation_oracle(ai, 0, 8).value);
      CHECK(prev_outer <= vi);  // non-decreasing in i
      prev_outer = vi;
    }
  }
}

TEST_CASE("the whole valued field diverges through the oracle") {
  OracleResult o = vol_truncation_oracle(DefinableSet(cell_K()), 2, 8);
  CHECK(!o.stabilized);
  CHECK(o.value == ZBar::fin(2));  // current value i_max, still climbing
}

TEST_CASE("integrate worked instances") {
  DefinableSet r(cell_R());
  CHECK(integrate(r, neg_ord_fn(r)) == ZBar::fin(0));

  DefinableSet sphere(cell_sphere(0));
  CHECK(integrate(sphere, const_fn(sphere, ZBar::fin(-3))) == ZBar::fin(-3));

  CHECK(integrate(r, const_fn(r, ZBar::pos_inf())) == ZBar::pos_inf());
  CHECK(integrate(r, const_fn(r, ZBar::neg_inf())) == ZBar::neg_inf());
}

TEST_CASE("threshold formula agrees on worked instances") {
  DefinableSet r(cell_R());
  CHECK(integrate_threshold(r, neg_ord_fn(r)) == ZBar::fin(0));
  DefinableSet sphere(cell_sphere(3));
  CHECK(integrate_threshold(sphere, const_fn(sphere, ZBar::fin(-3))) ==
        integrate(sphere, const_fn(sphere, ZBar::fin(-3))));
  DefinableSet empty_ord(
      VFCell(1, {PadicConstant()}, {1}, {AcConstraint::free_unit()},
             PresburgerSet(1, {PresburgerCell(1, {unit_ge(1, 0, 1), unit_le(1, 0, 0)}, {})}),
             ResidueSet::point()));
  CHECK(integrate_threshold(empty_ord, const_fn(empty_ord, ZBar::fin(2))) == ZBar::neg_inf());
}

TEST_CASE("integrate equals threshold on random instances") {
  gen::Rng rng(31337);
  for (int trial = 0; trial < 60; ++trial) {
    DefinableSet a = gen::random_defset(rng, 1 + trial % 2, trial % 3 == 0 ? 1 : 0, 2, 3, 3);
    DimFunction phi = gen::random_dimfn_on(rng, a, 12);
    CHECK(integrate(a, phi) == integrate_threshold(a, phi));
  }
}

TEST_CASE("linearity of the integral") {
  gen::Rng rng(5150);
  for (int trial = 0; trial < 40; ++trial) {
    DefinableSet a = gen::random_defset(rng, 1 + trial % 2, 0, 2, 3, 3);
    DimFunction phi = gen::random_dimfn_on(rng, a, 10);
    DimFunction psi = gen::random_dimfn_on(rng, a, 10);

    // d ⊙ phi
    long d = static_cast<long>(trial % 7) - 3;
    DimFunction scaled;
    for (const auto& p : phi.pieces()) {
      AffineForm f = p.form;
      f.offset = odot(f.offset, ZBar::fin(d));
      scaled.add_piece(p.cell, f);
    }
    CHECK(integrate(a, scaled) == odot(ZBar::fin(d), integrate(a, phi)));

    // phi ⊕ psi is the union of the piece lists.
    DimFunction joined = phi;
    for (const auto& p : psi.pieces()) joined.add_piece(p.cell, p.form);
    CHECK(integrate(a, joined) == oplus(integrate(a, phi), integrate(a, psi)));

    // Monotonicity: phi <= phi ⊕ psi pointwise.
    CHECK(integrate(a, phi) <= integrate(a, joined));
  }
}

TEST_CASE("volume of a disjoint union and coordinate permutation") {
  DefinableSet u(1, 0);
  u.add_cell(cell_sphere(0));
  u.add_cell(cell_ord_ge(2));
  CHECK(vol(u) == oplus(vol(DefinableSet(cell_sphere(0))), vol(DefinableSet(cell_ord_ge(2)))));

  // Two-coordinate cell; swapping the valued-field coordinates keeps vol.
  VFCell c2(2, {PadicConstant(), PadicConstant::from_terms({{0, Rat(1)}})}, {1, 2},
            {AcConstraint::free_unit(), AcConstraint::fixed({Rat(1), Rat(2)})},
            gamma_box({{0, 2}, {1, 3}}), ResidueSet::point());
  std::vector<int> perm{1, 0};
  VFCell swapped(2, {c2.centers()[1], c2.centers()[0]}, {c2.ac_depth()[1], c2.ac_depth()[0]},
                 {c2.ac()[1], c2.ac()[0]}, permute(c2.ord_set(), perm), c2.residue());
  CHECK(vol(DefinableSet(c2)) == vol(DefinableSet(swapped)));
}

TEST_CASE("fubini worked instances") {
  DefinableSet r(cell_R());

  // phi(x, y) = (-ord x) ⊙ (-ord y) over R × R.
  DefinableSet prod = vf_product(r, r);
  DimFunction phi = neg_ord_fn(prod);
  FubiniResult f1 = fubini_check(r, r, phi);
  CHECK(f1.iterated == ZBar::fin(0));
  CHECK(f1.joint == ZBar::fin(0));
  CHECK(f1.equal);

  // phi ≡ 0 over R × {ord >= 3}.
  DefinableSet b3(cell_ord_ge(3));
  DefinableSet prod2 = vf_product(r, b3);
  FubiniResult f2 = fubini_check(r, b3, const_fn(prod2, ZBar::fin(0)));
  CHECK(f2.iterated == ZBar::fin(-3));
  CHECK(f2.joint == ZBar::fin(-3));
  CHECK(f2.equal);

  // A piece with value +inf.
  FubiniResult f3 = fubini_check(r, b3, const_fn(prod2, ZBar::pos_inf()));
  CHECK(f3.iterated == ZBar::pos_inf());
  CHECK(f3.joint == ZBar::pos_inf());
  CHECK(f3.equal);
}

TEST_CASE("fubini on random bounded products") {
  gen::Rng rng(60601);
  for (int trial = 0; trial < 40; ++trial) {
    DefinableSet ax = gen::random_defset(rng, 1, trial % 4 == 0 ? 1 : 0, 2, 2, 3);
    DefinableSet ay = gen::random_defset(rng, 1, 0, 2, 2, 3);
    DefinableSet prod = vf_product(ax, ay);
    DimFunction phi = gen::random_dimfn_on(rng, prod, 10);
    FubiniResult f = fubini_check(ax, ay, phi);
    CHECK(f.equal);
  }
}

TEST_CASE("integrals over the whole field with compensating forms") {
  // ord y itself integrates to 0 over K: every sphere contributes
  // Vol(ord = gamma) ⊙ gamma = -gamma + gamma.
  DefinableSet k(cell_K());
  DimFunction ord_fn;
  {
    AffineForm f;
    f.coeffs = {Int(1)};
    f.offset = ZBar::fin(0);
    ord_fn.add_piece(k.cells()[0], f);
  }
  CHECK(integrate(k, ord_fn) == ZBar::fin(0));
  CHECK(integrate_threshold(k, ord_fn) == ZBar::fin(0));

  // Overcompensating makes it diverge.
  DimFunction twice;
  {
    AffineForm f;
    f.coeffs = {Int(2)};
    f.offset = ZBar::fin(0);
    twice.add_piece(k.cells()[0], f);
  }
  CHECK(integrate(k, twice) == ZBar::pos_inf());
  CHECK(integrate_threshold(k, twice) == ZBar::pos_inf());
}

TEST_CASE("fubini with a supremum beyond every probe window") {
  // phi = 2·ord(x) - ord(y) on R x R: each fiber contributes gamma_x, so the
  // iterated side diverges only across fibers; the tail queries must see it.
  DefinableSet r(cell_R());
  DefinableSet prod = vf_product(r, r);
  DimFunction phi;
  {
    AffineForm f;
    f.coeffs = {Int(2), Int(-1)};
    f.offset = ZBar::fin(0);
    phi.add_piece(prod.cells()[0], f);
  }
  FubiniResult fr = fubini_check(r, r, phi);
  CHECK(fr.joint == ZBar::pos_inf());
  CHECK(fr.iterated == ZBar::pos_inf());
  CHECK(fr.equal);
}

TEST_CASE("change of variables on sets with negative orders") {
  // {ord y >= -2} scaled by pi^3 lands inside the maximal ideal.
  DefinableSet a(cell_ord_ge(-2));
  AffineMap m{{PadicConstant::uniformizer_power(3)}, {PadicConstant()}};
  DefinableSet image = apply_affine_map(a, m).image;
  CHECK(vol(image) == ZBar::fin(-1));  // Vol{ord >= 1}
  CovResult r = cov_check(a, m, neg_ord_fn(image));
  CHECK(r.equal);
  // lhs = sup over gamma' >= 1 of (-gamma' - gamma') = -2 directly.
  CHECK(r.rhs == ZBar::fin(-2));
}

TEST_CASE("projection formula worked instances") {
  DefinableSet r(cell_R());
  DefinableSet prod = vf_product(r, r);

  CHECK(projection_check(r, r, const_fn(r, ZBar::fin(2)), const_fn(prod, ZBar::fin(0))));
  CHECK(projection_check(r, r, neg_ord_fn(r), neg_ord_fn(prod)));
  CHECK(projection_check(r, r, const_fn(r, ZBar::neg_inf()), const_fn(prod, ZBar::fin(0))));
}

TEST_CASE("projection formula on random instances") {
  gen::Rng rng(171717);
  for (int trial = 0; trial < 25; ++trial) {
    DefinableSet ax = gen::random_defset(rng, 1, 0, 2, 2, 3);
    DefinableSet ay = gen::random_defset(rng, 1, 0, 2, 2, 3);
    DefinableSet prod = vf_product(ax, ay);
    DimFunction phi = gen::random_dimfn_on(rng, prod, 10);
    DimFunction psi = gen::random_dimfn_on(rng, ax, 10);
    CHECK(projection_check(ax, ay, psi, phi));
  }
}

TEST_CASE("affine map worked instances") {
  DefinableSet r(cell_R());
  AffineMap scale_pi{{PadicConstant::uniformizer_power(1)}, {PadicConstant()}};
  AffineImage img = apply_affine_map(r, scale_pi);
  CHECK(img.ord_jac == 1);
  CHECK(vol(img.image) == ZBar::fin(-1));

  DefinableSet sphere2(cell_sphere(2));
  AffineMap unit{{PadicConstant::from_terms({{0, Rat(3)}, {1, Rat(1)}})}, {PadicConstant()}};
  AffineImage img2 = apply_affine_map(sphere2, unit);
  CHECK(img2.ord_jac == 0);
  CHECK(vol(img2.image) == vol(sphere2));

  DefinableSet r2 = vf_product(r, r);
  AffineMap two{{PadicConstant::uniformizer_power(2), PadicConstant::from_terms({{0, Rat(1)}})},
                {PadicConstant(), PadicConstant::from_terms({{1, Rat(2)}})}};
  CHECK(apply_affine_map(r2, two).ord_jac == 2);

  AffineMap singular{{PadicConstant()}, {PadicConstant()}};
  CHECK_THROWS_AS(apply_affine_map(r, singular), std::invalid_argument);
}

TEST_CASE("change of variables worked instances") {
  DefinableSet r(cell_R());
  AffineMap scale_pi{{PadicConstant::uniformizer_power(1)}, {PadicConstant()}};
  DefinableSet image = apply_affine_map(r, scale_pi).image;
  CovResult c1 = cov_check(r, scale_pi, const_fn(image, ZBar::fin(0)));
  CHECK(c1.lhs == ZBar::fin(-1));
  CHECK(c1.rhs == ZBar::fin(-1));
  CHECK(c1.equal);

  // F = ϖ² y + c on R, phi = -ord(y - c).
  PadicConstant c = PadicConstant::from_terms({{0, Rat(2)}});
  AffineMap shift{{PadicConstant::uniformizer_power(2)}, {c}};
  DefinableSet img = apply_affine_map(r, shift).image;
  CovResult c2 = cov_check(r, shift, neg_ord_fn(img));
  CHECK(c2.equal);
  CHECK(c2.lhs == ZBar::fin(-4));
}

TEST_CASE("change of variables on random maps") {
  gen::Rng rng(90125);
  for (int trial = 0; trial < 40; ++trial) {
    int n = 1 + trial % 2;
    DefinableSet a = gen::random_defset(rng, n, 0, 2, 2, 3);
    AffineMap m = gen::random_affine_map(rng, n);
    DefinableSet image = apply_affine_map(a, m).image;
    DimFunction phi = gen::random_dimfn_on(rng, image, 10);
    CovResult r = cov_check(a, m, phi);
    CHECK(r.equal);
  }
}
