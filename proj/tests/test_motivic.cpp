#include <doctest.h>

#include <random>

#include "tropivol/gen.hpp"
#include "tropivol/motivic.hpp"

using namespace tropivol;

namespace {

// P(Gm) = T^2 - 1: from the scissor relation [A^1] = [Gm] + [point].
PoincareElement gm() { return PoincareElement::from_terms({{2, Int(1)}, {0, Int(-1)}}); }

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

// The unit sphere {ord y = 0} as a cell.
DefinableSet unit_sphere() {
  return DefinableSet(VFCell(
      1, {PadicConstant()}, {1}, {AcConstraint::free_unit()},
      PresburgerSet(1, {PresburgerCell(1, {unit_ge(1, 0, 0), unit_le(1, 0, 0)}, {})}),
      ResidueSet::point()));
}

DimFunction const_on(const DefinableSet& a, ZBar v) {
  DimFunction f;
  for (const auto& c : a.cells())
    f.add_piece(c, AffineForm::constant(c.n() + c.extra_params(), v));
  return f;
}

}  // namespace

TEST_CASE("virtual dimension") {
  CHECK(virtual_dim(PoincareElement::monomial(2)).str() == "1");
  CHECK(virtual_dim(PoincareElement()).doubled == ZBar::neg_inf());
  // T^-4 (T^2 - 1) has degree -2, half is -1.
  PoincareElement p = PoincareElement::monomial(-4) * gm();
  CHECK(virtual_dim(p) == VirtualDim::of_int(Int(-1)));
  // Odd degrees render as halves.
  CHECK(virtual_dim(PoincareElement::monomial(3)).str() == "3/2");
  CHECK(virtual_dim(PoincareElement::monomial(-3)).str() == "-3/2");
}

TEST_CASE("virtual dimension is multiplicative for positive leading coefficients") {
  std::mt19937_64 rng(2718);
  for (int trial = 0; trial < 100; ++trial) {
    gen::Rng grng(rng());
    PoincareElement p = gen::random_fiber_poly(grng, static_cast<int>(trial % 3));
    PoincareElement q = gen::random_fiber_poly(grng, static_cast<int>((trial + 1) % 3));
    CHECK(virtual_dim(p * q).doubled ==
          odot(virtual_dim(p).doubled, virtual_dim(q).doubled));
    CHECK(virtual_dim(p + q).doubled <=
          oplus(virtual_dim(p).doubled, virtual_dim(q).doubled));
  }
}

TEST_CASE("motivic integral of weak Néron data") {
  // Gm-type fiber with ord gamma: T^{-2-2γ}(T² - 1), virtual dim -γ.
  for (long g = -3; g <= 3; ++g) {
    WeakNeronData w(1, {WeakNeronComponent{gm(), 1, g}});
    PoincareElement p = motivic_integral(w);
    CHECK(p == gm() * PoincareElement::monomial(-2 - 2 * g));
    CHECK(virtual_dim(p) == VirtualDim::of_int(Int(-g)));
  }

  // dim 0, one point component of order 0: the class of the point.
  WeakNeronData pt(0, {WeakNeronComponent{PoincareElement::one(), 0, 0}});
  CHECK(motivic_integral(pt) == PoincareElement::one());

  // Two components with orders 0 and 2: the max branch wins the dimension.
  WeakNeronData two(1, {WeakNeronComponent{gm(), 1, 0}, WeakNeronComponent{gm(), 1, 2}});
  PoincareElement p2 = motivic_integral(two);
  CHECK(p2 == gm() * PoincareElement::monomial(-2) + gm() * PoincareElement::monomial(-6));
  CHECK(virtual_dim(p2) == VirtualDim::of_int(Int(0)));
}

TEST_CASE("component splitting does not change the motivic integral") {
  WeakNeronData whole(1, {WeakNeronComponent{gm() + gm(), 1, 1}});
  WeakNeronData split(1, {WeakNeronComponent{gm(), 1, 1}, WeakNeronComponent{gm(), 1, 1}});
  CHECK(motivic_integral(whole) == motivic_integral(split));
}

TEST_CASE("haar integral has virtual dimension -gamma") {
  auto h = haar_integral(gm(), 1, 0);
  CHECK(h.dim == ZBar::fin(0));
  auto h2 = haar_integral(gm() + gm(), 1, 3);
  CHECK(h2.dim == ZBar::fin(-3));
  auto h3 = haar_integral(PoincareElement::one(), 0, -2);
  CHECK(h3.dim == ZBar::fin(2));
  CHECK_THROWS_AS(haar_integral(gm(), 2, 0), std::invalid_argument);
}

TEST_CASE("haar integral on random fibers") {
  gen::Rng rng(1414);
  for (long gamma = -5; gamma <= 5; ++gamma)
    for (int g = 0; g <= 2; ++g) {
      PoincareElement gk = gen::random_fiber_poly(rng, g);
      CHECK(haar_integral(gk, g, gamma).dim == ZBar::fin(-gamma));
    }
}

TEST_CASE("compare_check on the unit-sphere pairing") {
  for (long gamma = -3; gamma <= 3; ++gamma) {
    WeakNeronData w(1, {WeakNeronComponent{gm(), 1, gamma}});
    DefinableSet a = unit_sphere();
    CompareResult r = compare_check(w, a, const_on(a, ZBar::fin(-gamma)));
    CHECK(r.equal);
    CHECK(r.rhs == ZBar::fin(-gamma));
  }

  // A zero-dimensional instance: a point against the unit sphere with the
  // zero density; both sides are 0.
  WeakNeronData point(0, {WeakNeronComponent{PoincareElement::one(), 0, 0}});
  DefinableSet sph = unit_sphere();
  CompareResult pr = compare_check(point, sph, const_on(sph, ZBar::fin(0)));
  CHECK(pr.equal);
  CHECK(pr.rhs == ZBar::fin(0));

  // Deliberate mismatch: a full-fiber model against a smaller ball.
  WeakNeronData w(1, {WeakNeronComponent{PoincareElement::monomial(2), 1, 0}});
  DefinableSet ball(VFCell(1, {PadicConstant()}, {1}, {AcConstraint::free_unit()},
                           PresburgerSet(1, {PresburgerCell(1, {unit_ge(1, 0, 1)}, {})}),
                           ResidueSet::point()));
  CompareResult bad = compare_check(w, ball, const_on(ball, ZBar::fin(0)));
  CHECK(!bad.equal);
}

TEST_CASE("weak Néron data validation") {
  CHECK_THROWS_AS(WeakNeronData(1, {WeakNeronComponent{PoincareElement::monomial(1), 1, 0}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      WeakNeronData(0, {WeakNeronComponent{gm(), 1, 0}}),
      std::invalid_argument);
  CHECK_THROWS_AS(
      WeakNeronData(1, {WeakNeronComponent{PoincareElement::monomial(2, Int(-1)), 1, 0}}),
      std::invalid_argument);
}
