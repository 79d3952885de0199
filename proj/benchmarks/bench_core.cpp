#include <benchmark/benchmark.h>

#include "tropivol/gen.hpp"
#include "tropivol/intlat.hpp"
#include "tropivol/presburger.hpp"
#include "tropivol/vfcells.hpp"

using namespace tropivol;

namespace {

PresburgerSet bounded_box(int dim, long lo, long hi) {
  std::vector<Inequality> ineqs;
  for (int v = 0; v < dim; ++v) {
    Inequality l, h;
    l.coeffs.assign(static_cast<size_t>(dim), Int(0));
    h.coeffs.assign(static_cast<size_t>(dim), Int(0));
    l.coeffs[static_cast<size_t>(v)] = 1;
    l.bound = lo;
    h.coeffs[static_cast<size_t>(v)] = -1;
    h.bound = -hi;
    ineqs.push_back(std::move(l));
    ineqs.push_back(std::move(h));
  }
  return PresburgerSet(dim, {PresburgerCell(dim, std::move(ineqs), {})});
}

void bm_sup_affine(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  PresburgerSet s = bounded_box(dim, -20, 20);
  AffineForm f;
  for (int v = 0; v < dim; ++v) f.coeffs.emplace_back(v % 2 ? -3 : 2);
  f.offset = ZBar::fin(1);
  for (auto _ : state) benchmark::DoNotOptimize(sup_affine(s, f));
}
BENCHMARK(bm_sup_affine)->Arg(1)->Arg(2)->Arg(3)->Arg(4);

void bm_sup_affine_congruence(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  PresburgerSet box = bounded_box(dim, -20, 20);
  PresburgerSet s(dim);
  for (const auto& c : box.cells()) {
    Congruence g;
    g.coeffs.assign(static_cast<size_t>(dim), Int(1));
    g.residue = 1;
    g.modulus = 4;
    s.add_cell(c.with_congruence(g));
  }
  AffineForm f;
  for (int v = 0; v < dim; ++v) f.coeffs.emplace_back(v + 1);
  f.offset = ZBar::fin(0);
  for (auto _ : state) benchmark::DoNotOptimize(sup_affine(s, f));
}
BENCHMARK(bm_sup_affine_congruence)->Arg(2)->Arg(3);

void bm_smith_normal_form(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  IntMatrix m(n, n);
  long seed = 12345;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      seed = seed * 1103515245 + 12345;
      m.at(i, j) = (seed >> 16) % 19 - 9;
    }
  for (auto _ : state) benchmark::DoNotOptimize(smith_normal_form(m));
}
BENCHMARK(bm_smith_normal_form)->Arg(3)->Arg(5)->Arg(8);

void bm_vol_closed_form(benchmark::State& state) {
  gen::Rng rng(42);
  std::vector<DefinableSet> sets;
  for (int i = 0; i < 16; ++i) sets.push_back(gen::random_defset(rng, 2, 0, 2, 3, 5));
  size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(vol(sets[i % sets.size()]));
    ++i;
  }
}
BENCHMARK(bm_vol_closed_form);

void bm_vol_oracle(benchmark::State& state) {
  gen::Rng rng(42);
  std::vector<DefinableSet> sets;
  for (int i = 0; i < 8; ++i) sets.push_back(gen::random_defset(rng, 1, 0, 1, 2, 5));
  size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(vol_truncation_oracle(sets[i % sets.size()], 1, 8));
    ++i;
  }
}
BENCHMARK(bm_vol_oracle);

void bm_integrate(benchmark::State& state) {
  gen::Rng rng(7);
  DefinableSet a = gen::random_defset(rng, 2, 1, 2, 3, 5);
  DimFunction phi = gen::random_dimfn_on(rng, a, 10);
  for (auto _ : state) benchmark::DoNotOptimize(integrate(a, phi));
}
BENCHMARK(bm_integrate);

void bm_fubini(benchmark::State& state) {
  gen::Rng rng(7);
  DefinableSet ax = gen::random_defset(rng, 1, 0, 2, 2, 5);
  DefinableSet ay = gen::random_defset(rng, 1, 0, 2, 2, 5);
  DefinableSet prod = vf_product(ax, ay);
  DimFunction phi = gen::random_dimfn_on(rng, prod, 10);
  for (auto _ : state) benchmark::DoNotOptimize(fubini_check(ax, ay, phi));
}
BENCHMARK(bm_fubini);

}  // namespace

BENCHMARK_MAIN();
