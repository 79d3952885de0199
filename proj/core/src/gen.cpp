#include "tropivol/gen.hpp"

#include <sstream>
#include <stdexcept>

#include "tropivol/dsl.hpp"

namespace tropivol::gen {

namespace {

long pick(Rng& rng, long lo, long hi) {
  return std::uniform_int_distribution<long>(lo, hi)(rng);
}

bool chance(Rng& rng, int percent) { return pick(rng, 0, 99) < percent; }

Rat random_digit(Rng& rng) {
  static const Rat choices[] = {Rat(1), Rat(2), Rat(3), Rat(-1), Rat(1, 2)};
  return choices[pick(rng, 0, 4)];
}

}  // namespace

ZBar random_zbar(Rng& rng, long lo, long hi, int inf_percent) {
  if (chance(rng, inf_percent)) return chance(rng, 50) ? ZBar::pos_inf() : ZBar::neg_inf();
  return ZBar::fin(pick(rng, lo, hi));
}

VFCell random_cell(Rng& rng, int n, int r, int max_depth, int max_coeff) {
  std::vector<PadicConstant> centers;
  std::vector<int> depth;
  std::vector<AcConstraint> ac;
  for (int i = 0; i < n; ++i) {
    if (chance(rng, 50)) {
      centers.emplace_back();
    } else {
      std::vector<std::pair<long, Rat>> terms;
      long e = pick(rng, 0, 2);
      terms.emplace_back(e, random_digit(rng));
      if (chance(rng, 40)) terms.emplace_back(e + pick(rng, 1, 2), random_digit(rng));
      centers.push_back(PadicConstant::from_terms(std::move(terms)));
    }
    int d = static_cast<int>(pick(rng, 1, max_depth));
    depth.push_back(d);
    if (chance(rng, 50)) {
      ac.push_back(AcConstraint::free_unit());
    } else {
      std::vector<Rat> digits;
      digits.push_back(random_digit(rng));
      for (int k = 1; k < d; ++k) digits.push_back(chance(rng, 40) ? Rat(0) : random_digit(rng));
      ac.push_back(AcConstraint::fixed(std::move(digits)));
    }
  }
  const int dim = n + r;
  std::vector<Inequality> ineqs;
  std::vector<Congruence> congs;
  auto unit = [&](int var, long c, long b) {
    Inequality q;
    q.coeffs.assign(static_cast<size_t>(dim), Int(0));
    q.coeffs[static_cast<size_t>(var)] = c;
    q.bound = b;
    return q;
  };
  for (int i = 0; i < n; ++i) {
    long lo = pick(rng, 0, 2), hi = lo + pick(rng, 0, 3);
    ineqs.push_back(unit(i, 1, lo));
    ineqs.push_back(unit(i, -1, -hi));
  }
  for (int i = n; i < dim; ++i) {
    long lo = pick(rng, -3, 0), hi = lo + pick(rng, 0, 4);
    ineqs.push_back(unit(i, 1, lo));
    ineqs.push_back(unit(i, -1, -hi));
  }
  if (dim > 0 && chance(rng, 40)) {
    Inequality q;
    q.coeffs.assign(static_cast<size_t>(dim), Int(0));
    for (int i = 0; i < dim; ++i) q.coeffs[static_cast<size_t>(i)] = pick(rng, -max_coeff, max_coeff);
    q.bound = pick(rng, -4, 4);
    ineqs.push_back(std::move(q));
  }
  if (dim > 0 && chance(rng, 35)) {
    Congruence c;
    c.coeffs.assign(static_cast<size_t>(dim), Int(0));
    for (int i = 0; i < dim; ++i) c.coeffs[static_cast<size_t>(i)] = pick(rng, 0, 2);
    c.coeffs[static_cast<size_t>(pick(rng, 0, dim - 1))] = 1;
    c.modulus = pick(rng, 2, 4);
    c.residue = pick(rng, 0, 3);
    congs.push_back(std::move(c));
  }
  PresburgerSet ord(dim, {PresburgerCell(dim, std::move(ineqs), std::move(congs))});

  ResidueSet residue = ResidueSet::point();
  if (chance(rng, 40)) {
    std::vector<ResidueCoord> coords;
    int m = static_cast<int>(pick(rng, 1, 2));
    for (int i = 0; i < m; ++i) {
      long k = pick(rng, 0, 2);
      coords.push_back(k == 0   ? ResidueCoord::free()
                       : k == 1 ? ResidueCoord::free_nonzero()
                                : ResidueCoord::fixed(random_digit(rng)));
    }
    residue = ResidueSet({ResidueCell(std::move(coords))});
    if (chance(rng, 30)) {
      ResidueSet extra({ResidueCell::opaque(static_cast<int>(pick(rng, 0, 3)))});
      for (const auto& c : extra.cells()) residue.add_cell(c);
    }
  }
  return VFCell(n, std::move(centers), std::move(depth), std::move(ac), std::move(ord),
                std::move(residue));
}

DefinableSet random_defset(Rng& rng, int n, int r, int max_cells, int max_depth, int max_coeff) {
  DefinableSet out(n, r);
  int count = static_cast<int>(pick(rng, 1, max_cells));
  for (int i = 0; i < count; ++i) out.add_cell(random_cell(rng, n, r, max_depth, max_coeff));
  return out;
}

AffineForm random_form(Rng& rng, int arity, int inf_percent) {
  if (chance(rng, inf_percent))
    return AffineForm::constant(arity, chance(rng, 50) ? ZBar::pos_inf() : ZBar::neg_inf());
  AffineForm f;
  f.coeffs.reserve(static_cast<size_t>(arity));
  for (int i = 0; i < arity; ++i) f.coeffs.push_back(Int(pick(rng, -2, 2)));
  f.offset = ZBar::fin(pick(rng, -5, 5));
  return f;
}

DimFunction random_dimfn_on(Rng& rng, const DefinableSet& a, int inf_percent) {
  DimFunction f;
  for (const auto& c : a.cells())
    f.add_piece(c, random_form(rng, c.n() + c.extra_params(), inf_percent));
  return f;
}

AffineMap random_affine_map(Rng& rng, int n) {
  AffineMap m;
  for (int i = 0; i < n; ++i) {
    long e = pick(rng, -2, 2);
    std::vector<std::pair<long, Rat>> terms{{e, random_digit(rng)}};
    if (chance(rng, 35)) terms.emplace_back(e + pick(rng, 1, 2), random_digit(rng));
    m.scale.push_back(PadicConstant::from_terms(std::move(terms)));
    if (chance(rng, 50)) {
      m.offset.emplace_back();
    } else {
      m.offset.push_back(
          PadicConstant::from_terms({{pick(rng, 0, 2), random_digit(rng)}}));
    }
  }
  return m;
}

namespace {

struct GroupRep {
  std::vector<IntMatrix> elements;  // fixed abstract enumeration of Γ
};

IntMatrix mat2(long a, long b, long c, long d) {
  IntMatrix m(2, 2);
  m.at(0, 0) = a;
  m.at(0, 1) = b;
  m.at(1, 0) = c;
  m.at(1, 1) = d;
  return m;
}

IntMatrix block_diag(const IntMatrix& a, const IntMatrix& b) {
  IntMatrix m(a.rows() + b.rows(), a.cols() + b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) m.at(i, j) = a.at(i, j);
  for (int i = 0; i < b.rows(); ++i)
    for (int j = 0; j < b.cols(); ++j) m.at(a.rows() + i, a.cols() + j) = b.at(i, j);
  return m;
}

// Representation catalogs indexed by a fixed enumeration of the group.
std::vector<GroupRep> reps_of(Rng& rng, int& group_size) {
  switch (pick(rng, 0, 2)) {
    case 0: {  // Z/2 = {e, s}
      group_size = 2;
      GroupRep triv{{IntMatrix::identity(1), IntMatrix::identity(1)}};
      IntMatrix sign(1, 1);
      sign.at(0, 0) = -1;
      GroupRep sgn{{IntMatrix::identity(1), sign}};
      GroupRep reg{{IntMatrix::identity(2), mat2(0, 1, 1, 0)}};
      return {triv, sgn, reg};
    }
    case 1: {  // Z/3 = {e, c, c^2}
      group_size = 3;
      GroupRep triv{{IntMatrix::identity(1), IntMatrix::identity(1), IntMatrix::identity(1)}};
      IntMatrix c = mat2(0, -1, 1, -1);
      GroupRep rot{{IntMatrix::identity(2), c, c * c}};
      return {triv, rot};
    }
    default: {  // S3 = {e, c, c^2, s, sc, sc^2}
      group_size = 6;
      GroupRep triv{{IntMatrix::identity(1), IntMatrix::identity(1), IntMatrix::identity(1),
                     IntMatrix::identity(1), IntMatrix::identity(1), IntMatrix::identity(1)}};
      IntMatrix neg(1, 1);
      neg.at(0, 0) = -1;
      GroupRep sgn{{IntMatrix::identity(1), IntMatrix::identity(1), IntMatrix::identity(1), neg,
                    neg, neg}};
      IntMatrix c = mat2(0, -1, 1, -1);
      IntMatrix s = mat2(-1, 1, 0, 1);
      GroupRep std2{{IntMatrix::identity(2), c, c * c, s, s * c, s * c * c}};
      return {triv, sgn, std2};
    }
  }
}

IntMatrix random_unimodular(Rng& rng, int n) {
  IntMatrix w = IntMatrix::identity(n);
  for (int step = 0; step < 4; ++step) {
    int i = static_cast<int>(pick(rng, 0, n - 1));
    int j = static_cast<int>(pick(rng, 0, n - 1));
    if (i == j) continue;
    IntMatrix e = IntMatrix::identity(n);
    e.at(i, j) = pick(rng, -2, 2);
    w = w * e;
  }
  return w;
}

}  // namespace

ExactSequence random_exact_sequence(Rng& rng) {
  int order = 0;
  std::vector<GroupRep> reps = reps_of(rng, order);
  const GroupRep& ra = reps[static_cast<size_t>(pick(rng, 0, static_cast<long>(reps.size()) - 1))];
  const GroupRep& rb = reps[static_cast<size_t>(pick(rng, 0, static_cast<long>(reps.size()) - 1))];
  const int n1 = ra.elements.front().rows();
  const int n2 = n1 + rb.elements.front().rows();

  std::vector<IntMatrix> mid_elems;
  for (int g = 0; g < order; ++g)
    mid_elems.push_back(block_diag(ra.elements[static_cast<size_t>(g)],
                                   rb.elements[static_cast<size_t>(g)]));
  IntMatrix w = random_unimodular(rng, n2);
  IntMatrix winv = w.inverse_unimodular();
  for (auto& m : mid_elems) m = w * m * winv;
  IntMatrix inj(n2, n1);
  for (int i = 0; i < n1; ++i) inj.at(i, i) = 1;
  inj = w * inj;

  GroupAction mid_action(n2, {}, mid_elems);
  GroupAction sub_action(n1, {}, ra.elements);
  return ExactSequence{RamifiedGaloisModule::tame(std::move(sub_action)),
                       RamifiedGaloisModule::tame(std::move(mid_action)), std::move(inj)};
}

PoincareElement random_fiber_poly(Rng& rng, int g) {
  std::vector<std::pair<long, Int>> terms;
  terms.emplace_back(2L * g, Int(pick(rng, 1, 3)));
  for (long e = 2L * g - 1; e >= 0; --e)
    if (chance(rng, 30)) terms.emplace_back(e, Int(pick(rng, -2, 2)));
  return PoincareElement::from_terms(std::move(terms));
}

std::string corpus(const std::string& kind, int count, unsigned long seed) {
  Rng rng(seed);
  std::ostringstream os;
  os << "; tropivol corpus: kind=" << kind << " count=" << count << " seed=" << seed << "\n";
  for (int i = 0; i < count; ++i) {
    if (kind == "cells") {
      DefinableSet a = random_defset(rng, static_cast<int>(pick(rng, 1, 2)), 0, 2, 3, 3);
      os << SExpr::list({SExpr::symbol("vol"), dsl::to_sexpr(a)}).render() << "\n";
    } else if (kind == "integrals") {
      DefinableSet a = random_defset(rng, static_cast<int>(pick(rng, 1, 2)),
                                     static_cast<int>(pick(rng, 0, 1)), 2, 3, 3);
      DimFunction f = random_dimfn_on(rng, a, 10);
      os << SExpr::list({SExpr::symbol("integrate"), dsl::to_sexpr(a), dsl::to_sexpr(f)}).render()
         << "\n";
    } else if (kind == "products") {
      DefinableSet ax = random_defset(rng, 1, 0, 1, 2, 3);
      DefinableSet ay = random_defset(rng, 1, 0, 1, 2, 3);
      DefinableSet prod = vf_product(ax, ay);
      DimFunction f = random_dimfn_on(rng, prod, 10);
      os << SExpr::list({SExpr::symbol("fubini"), dsl::to_sexpr(ax), dsl::to_sexpr(ay),
                         dsl::to_sexpr(f)})
                .render()
         << "\n";
    } else if (kind == "maps") {
      DefinableSet a = random_defset(rng, 1, 0, 1, 2, 3);
      AffineMap m = random_affine_map(rng, 1);
      DefinableSet img = apply_affine_map(a, m).image;
      DimFunction f = random_dimfn_on(rng, img, 10);
      os << SExpr::list({SExpr::symbol("cov"), dsl::to_sexpr(a), dsl::to_sexpr(m),
                         dsl::to_sexpr(f)})
                .render()
         << "\n";
    } else if (kind == "sequences") {
      ExactSequence seq = random_exact_sequence(rng);
      auto galmod_sexpr = [](const RamifiedGaloisModule& m) {
        std::vector<SExpr> items{SExpr::symbol("galmod"),
                                 SExpr::list({SExpr::symbol("rank"),
                                              SExpr::integer(Int(static_cast<long>(m.rank())))})};
        std::vector<SExpr> elems{SExpr::symbol("elements")};
        for (const auto& g : m.action().elements()) elems.push_back(dsl::to_sexpr(g));
        items.push_back(SExpr::list(std::move(elems)));
        std::vector<SExpr> filt{SExpr::symbol("filtration")};
        for (size_t lvl = 0; lvl < m.filtration().size(); ++lvl) {
          std::vector<SExpr> level{SExpr::symbol("g" + std::to_string(lvl))};
          if (lvl == 0) {
            level.push_back(SExpr::symbol("all"));
          } else if (m.filtration()[lvl].size() == 1) {
            level.push_back(SExpr::symbol("id"));
          } else {
            for (int idx : m.filtration()[lvl])
              level.push_back(SExpr::integer(Int(static_cast<long>(idx))));
          }
          filt.push_back(SExpr::list(std::move(level)));
        }
        items.push_back(SExpr::list(std::move(filt)));
        return SExpr::list(std::move(items));
      };
      os << SExpr::list({SExpr::symbol("additivity"),
                         SExpr::list({SExpr::symbol("sub"), galmod_sexpr(seq.sub)}),
                         SExpr::list({SExpr::symbol("mid"), galmod_sexpr(seq.mid)}),
                         SExpr::list({SExpr::symbol("inj"), dsl::to_sexpr(seq.injection)})})
                .render()
         << "\n";
    } else {
      throw std::invalid_argument("gen: unknown corpus kind '" + kind + "'");
    }
  }
  return os.str();
}

}  // namespace tropivol::gen
