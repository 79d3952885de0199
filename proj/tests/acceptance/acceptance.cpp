// Acceptance suite: runs every acceptance criterion at its stated tolerance
// and prints one pass/fail line per criterion.
//
//   acceptance <path-to-tropivol> <golden-dir>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "tropivol/conductor.hpp"
#include "tropivol/dsl.hpp"
#include "tropivol/gen.hpp"
#include "tropivol/motivic.hpp"
#include "tropivol/vfcells.hpp"

using namespace tropivol;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

struct Criterion {
  int number;
  std::string label;
  double limit_seconds;  // 0 = no stated bound

  template <typename Fn>
  void run(Fn&& body) {
    auto start = std::chrono::steady_clock::now();
    bool ok = false;
    std::string detail;
    try {
      detail = body();
      ok = true;
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (ok && limit_seconds > 0 && secs > limit_seconds) {
      ok = false;
      detail += " [exceeded " + std::to_string(limit_seconds) + "s]";
    }
    if (!ok) ++g_failures;
    std::printf("[%2d] %s  %s (%s; %.2fs)\n", number, ok ? "PASS" : "FAIL", label.c_str(),
                detail.c_str(), secs);
    std::fflush(stdout);
  }
};

void expect(bool cond, const std::string& what) {
  if (!cond) throw std::runtime_error(what);
}

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

VFCell ball(long ord_lo) {
  return VFCell(1, {PadicConstant()}, {1}, {AcConstraint::free_unit()},
                PresburgerSet(1, {PresburgerCell(1, {unit_ge(1, 0, ord_lo)}, {})}),
                ResidueSet::point());
}

VFCell sphere(long gamma) {
  return VFCell(
      1, {PadicConstant()}, {1}, {AcConstraint::free_unit()},
      PresburgerSet(1, {PresburgerCell(1, {unit_ge(1, 0, gamma), unit_le(1, 0, gamma)}, {})}),
      ResidueSet::point());
}

DimFunction const_on(const DefinableSet& a, ZBar v) {
  DimFunction f;
  for (const auto& c : a.cells())
    f.add_piece(c, AffineForm::constant(c.n() + c.extra_params(), v));
  return f;
}

PoincareElement gm() { return PoincareElement::from_terms({{2, Int(1)}, {0, Int(-1)}}); }

// A Haar-normalized definable set: a union of polyspheres, each carrying the
// compensating constant so that every piece integrates to exactly 0.
std::pair<DefinableSet, DimFunction> haar_normalized_set(gen::Rng& rng, int n) {
  std::uniform_int_distribution<long> gamma(0, 3);
  std::uniform_int_distribution<int> cells(1, 2);
  DefinableSet a(n, 0);
  DimFunction phi;
  int count = cells(rng);
  for (int k = 0; k < count; ++k) {
    std::vector<Inequality> ineqs;
    long total = 0;
    for (int i = 0; i < n; ++i) {
      long g = gamma(rng);
      total += g;
      ineqs.push_back(unit_ge(n, i, g));
      ineqs.push_back(unit_le(n, i, g));
    }
    VFCell c(n, std::vector<PadicConstant>(static_cast<size_t>(n)),
             std::vector<int>(static_cast<size_t>(n), 1),
             std::vector<AcConstraint>(static_cast<size_t>(n), AcConstraint::free_unit()),
             PresburgerSet(n, {PresburgerCell(n, std::move(ineqs), {})}), ResidueSet::point());
    a.add_cell(c);
    phi.add_piece(c, AffineForm::constant(n, ZBar::fin(total)));
  }
  return {std::move(a), std::move(phi)};
}

std::string run_tool(const std::string& tool, const std::string& verb, const std::string& file,
                     int& exit_code) {
  std::string cmd = tool + " " + verb + " " + file + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) throw std::runtime_error("cannot spawn " + cmd);
  std::string out;
  char buf[4096];
  size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
  int status = pclose(p);
  exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  std::string tool = argc > 1 ? argv[1] : "";
  std::string golden_dir = argc > 2 ? argv[2] : "";

  Criterion{1, "semiring laws of Zbar", 1.0}.run([&] {
    std::vector<ZBar> specials{ZBar::neg_inf(), ZBar::pos_inf(), ZBar::fin(0)};
    for (const auto& a : specials)
      for (const auto& b : specials)
        for (const auto& c : specials) {
          expect(odot(a, oplus(b, c)) == oplus(odot(a, b), odot(a, c)), "distributivity");
          expect(odot(a, b) == odot(b, a), "odot commutativity");
        }
    gen::Rng grng(2);
    for (int i = 0; i < 10000; ++i) {
      ZBar a = gen::random_zbar(grng, -1000000, 1000000, 20);
      ZBar b = gen::random_zbar(grng, -1000000, 1000000, 20);
      ZBar c = gen::random_zbar(grng, -1000000, 1000000, 20);
      expect(oplus(a, b) == oplus(b, a), "oplus commutativity");
      expect(oplus(oplus(a, b), c) == oplus(a, oplus(b, c)), "oplus associativity");
      expect(odot(odot(a, b), c) == odot(a, odot(b, c)), "odot associativity");
      expect(odot(a, oplus(b, c)) == oplus(odot(a, b), odot(a, c)), "distributivity");
      expect(oplus(a, a) == a, "idempotence");
      expect(oplus(a, ZBar::neg_inf()) == a, "neutral oplus");
      expect(odot(a, ZBar::neg_inf()) == ZBar::neg_inf(), "absorption");
    }
    return std::string("10000 random triples + all infinity combinations");
  });

  Criterion{2, "closed-form vol equals the truncation-limit oracle", 10.0}.run([&] {
    gen::Rng rng(20240822);
    int checked = 0, monotone = 0;
    for (int trial = 0; trial < 200; ++trial) {
      int n = 1 + trial % 2;
      DefinableSet a = gen::random_defset(rng, n, trial % 4 == 0 ? 1 : 0, 2, 3, 9);
      OracleResult o = vol_truncation_oracle(a, 2, 12);
      expect(o.stabilized, "oracle did not stabilize");
      expect(vol(a) == o.value, "closed form != oracle");
      ++checked;
      if (trial < 40) {
        for (int i = 0; i <= 1; ++i) {
          DefinableSet ai = scale_into_ring(a, i);
          ZBar prev = ZBar::pos_inf();
          for (int ell = 1; ell <= 6; ++ell) {
            ZBar v = odot(dimension(truncate(ai, ell)), ZBar::fin(-static_cast<long>(ell) * n));
            expect(v <= prev, "ell-sequence not non-increasing");
            prev = v;
          }
        }
        ZBar prev_outer = ZBar::neg_inf();
        for (int i = 0; i <= 2; ++i) {
          ZBar vi = odot(ZBar::fin(static_cast<long>(n) * i),
                         vol_truncation_oracle(scale_into_ring(a, i), 0, 12).value);
          expect(prev_outer <= vi, "i-sequence not non-decreasing");
          prev_outer = vi;
        }
        ++monotone;
      }
    }
    return std::to_string(checked) + " cells, monotone sequences on " + std::to_string(monotone);
  });

  Criterion{3, "named volume instances", 0}.run([&] {
    expect(vol(DefinableSet(ball(0))) == ZBar::fin(0), "Vol(R) != 0");
    expect(vol(DefinableSet(ball(3))) == ZBar::fin(-3), "Vol(ord>=3) != -3");
    DefinableSet k(VFCell(1, {PadicConstant()}, {1}, {AcConstraint::free_unit()},
                          PresburgerSet::whole(1), ResidueSet::point()));
    expect(vol(k) == ZBar::pos_inf(), "Vol(K) != +inf");
    VFCell ac2(1, {PadicConstant()}, {2}, {AcConstraint::fixed({Rat(1), Rat(0)})},
               PresburgerSet(1, {PresburgerCell(1, {unit_ge(1, 0, 2), unit_le(1, 0, 2)}, {})}),
               ResidueSet::point());
    expect(vol(DefinableSet(ac2)) == ZBar::fin(-4), "Vol(ord=2, ac2 fixed) != -4");
    return std::string("Vol(R)=0, Vol(ord>=3)=-3, Vol(K)=+inf, Vol(ord=2,ac2)=-4");
  });

  Criterion{4, "integral equals its threshold form; monotone in the integrand", 0}.run([&] {
    gen::Rng rng(20240823);
    int n_eq = 0;
    for (int trial = 0; trial < 100; ++trial) {
      DefinableSet a = gen::random_defset(rng, 1 + trial % 2, trial % 3 == 0 ? 1 : 0, 2, 3, 9);
      DimFunction phi = gen::random_dimfn_on(rng, a, 12);
      expect(integrate(a, phi) == integrate_threshold(a, phi), "threshold mismatch");
      DimFunction psi = gen::random_dimfn_on(rng, a, 12);
      DimFunction joined = phi;
      for (const auto& p : psi.pieces()) joined.add_piece(p.cell, p.form);
      expect(integrate(a, phi) <= integrate(a, joined), "monotonicity violated");
      ++n_eq;
    }
    return std::to_string(n_eq) + " instances";
  });

  Criterion{5, "Tonelli-Fubini on products", 10.0}.run([&] {
    gen::Rng rng(20240824);
    int checked = 0;
    for (int trial = 0; trial < 100; ++trial) {
      DefinableSet ax = gen::random_defset(rng, 1, trial % 5 == 0 ? 1 : 0, 2, 2, 9);
      DefinableSet ay = gen::random_defset(rng, 1, 0, 2, 2, 9);
      DefinableSet prod = vf_product(ax, ay);
      DimFunction phi = gen::random_dimfn_on(rng, prod, 12);
      FubiniResult f = fubini_check(ax, ay, phi);
      expect(f.equal, "iterated != joint");
      ++checked;
    }
    return std::to_string(checked) + " product instances incl. ±inf pieces";
  });

  Criterion{6, "change of variables", 0}.run([&] {
    DefinableSet r(ball(0));
    AffineMap scale_pi{{PadicConstant::uniformizer_power(1)}, {PadicConstant()}};
    DefinableSet image = apply_affine_map(r, scale_pi).image;
    CovResult base = cov_check(r, scale_pi, const_on(image, ZBar::fin(0)));
    expect(base.lhs == ZBar::fin(-1) && base.rhs == ZBar::fin(-1) && base.equal,
           "pi-scaling instance != -1");
    gen::Rng rng(20240825);
    int checked = 0;
    for (int trial = 0; trial < 100; ++trial) {
      int n = 1 + trial % 2;
      DefinableSet a = gen::random_defset(rng, n, 0, 2, 2, 9);
      AffineMap m = gen::random_affine_map(rng, n);
      DefinableSet img = apply_affine_map(a, m).image;
      DimFunction phi = gen::random_dimfn_on(rng, img, 10);
      expect(cov_check(a, m, phi).equal, "cov mismatch");
      ++checked;
    }
    return std::to_string(checked) + " generated maps; pi-scaling gives -1 = -1";
  });

  Criterion{7, "linearity and the projection formula", 0}.run([&] {
    gen::Rng rng(20240826);
    for (int trial = 0; trial < 50; ++trial) {
      DefinableSet a = gen::random_defset(rng, 1 + trial % 2, 0, 2, 3, 9);
      DimFunction phi = gen::random_dimfn_on(rng, a, 10);
      DimFunction psi = gen::random_dimfn_on(rng, a, 10);
      long d = static_cast<long>(trial % 9) - 4;
      DimFunction scaled;
      for (const auto& p : phi.pieces()) {
        AffineForm f = p.form;
        f.offset = odot(f.offset, ZBar::fin(d));
        scaled.add_piece(p.cell, f);
      }
      expect(integrate(a, scaled) == odot(ZBar::fin(d), integrate(a, phi)),
             "scalar linearity failed");
      DimFunction joined = phi;
      for (const auto& p : psi.pieces()) joined.add_piece(p.cell, p.form);
      expect(integrate(a, joined) == oplus(integrate(a, phi), integrate(a, psi)),
             "oplus linearity failed");
    }
    for (int trial = 0; trial < 50; ++trial) {
      DefinableSet ax = gen::random_defset(rng, 1, 0, 2, 2, 9);
      DefinableSet ay = gen::random_defset(rng, 1, 0, 2, 2, 9);
      DefinableSet prod = vf_product(ax, ay);
      DimFunction phi = gen::random_dimfn_on(rng, prod, 10);
      DimFunction psi = gen::random_dimfn_on(rng, ax, 10);
      expect(projection_check(ax, ay, psi, phi), "projection formula failed");
    }
    return std::string("50 linearity + 50 projection instances");
  });

  Criterion{8, "residue-ring Tonelli-Fubini", 0}.run([&] {
    gen::Rng rng(20240827);
    std::uniform_int_distribution<int> cells(0, 4), dims(0, 5), kind(0, 2);
    for (int trial = 0; trial < 200; ++trial) {
      auto rand_set = [&]() {
        ResidueSet s;
        int n = cells(rng);
        for (int i = 0; i < n; ++i) {
          std::vector<ResidueCoord> coords;
          int d = dims(rng);
          for (int j = 0; j < d; ++j) {
            int k = kind(rng);
            coords.push_back(k == 0   ? ResidueCoord::free()
                             : k == 1 ? ResidueCoord::free_nonzero()
                                      : ResidueCoord::fixed(Rat(j)));
          }
          s.add_cell(ResidueCell(std::move(coords)));
        }
        return s;
      };
      ResidueSet x = rand_set(), y = rand_set();
      std::vector<std::vector<ZBar>> phi(x.cells().size(),
                                         std::vector<ZBar>(y.cells().size(), ZBar::fin(0)));
      for (auto& row : phi)
        for (auto& v : row) v = gen::random_zbar(rng, -9, 9, 15);
      expect(residue_fubini_check(x, y, phi).equal, "residue fubini failed");
    }
    return std::string("200 instances");
  });

  Criterion{9, "Haar integrals have virtual dimension -gamma", 0}.run([&] {
    gen::Rng rng(20240828);
    int checked = 0;
    for (long gamma = -5; gamma <= 5; ++gamma)
      for (int g = 0; g <= 2; ++g)
        for (int rep = 0; rep < 3; ++rep) {
          PoincareElement gk = gen::random_fiber_poly(rng, g);
          expect(haar_integral(gk, g, gamma).dim == ZBar::fin(-gamma), "haar dim != -gamma");
          ++checked;
        }
    return std::to_string(checked) + " (gamma, g, fiber) instances";
  });

  Criterion{10, "dimension comparison on the unit-sphere pairing", 0}.run([&] {
    for (long gamma = -3; gamma <= 3; ++gamma) {
      WeakNeronData w(1, {WeakNeronComponent{gm(), 1, gamma}});
      DefinableSet a(sphere(0));
      CompareResult r = compare_check(w, a, const_on(a, ZBar::fin(-gamma)));
      expect(r.equal, "pairing unequal at gamma=" + std::to_string(gamma));
    }
    WeakNeronData w(1, {WeakNeronComponent{PoincareElement::monomial(2), 1, 0}});
    DefinableSet shifted(ball(1));
    CompareResult bad = compare_check(w, shifted, const_on(shifted, ZBar::fin(0)));
    expect(!bad.equal, "mismatched pairing reported equal");
    return std::string("gamma in {-3..3} equal; deliberate mismatch unequal");
  });

  Criterion{11, "reproduction of the ramified quadratic example", 1.0}.run([&] {
    IntMatrix swap(2, 2);
    swap.at(0, 1) = 1;
    swap.at(1, 0) = 1;
    GroupAction swap_action(2, {swap}, {IntMatrix::identity(2), swap});
    IntMatrix neg(1, 1);
    neg.at(0, 0) = -1;
    GroupAction sign_action(1, {neg}, {IntMatrix::identity(1), neg});

    TraceDecomposition t = trace_decomposition(RamifiedGaloisModule::tame(swap_action));
    expect(t.b_part_basis.cols() == 1 && abs(t.b_part_basis.at(0, 0)) == 1 &&
               t.b_part_basis.at(0, 0) == -t.b_part_basis.at(1, 0),
           "kernel basis != (1,-1)");
    expect(t.split_rank == 1, "split rank != 1");
    expect(t.split_generators.cols() == 1 && abs(t.split_generators.at(0, 0)) == 1 &&
               t.split_generators.at(0, 0) == t.split_generators.at(1, 0),
           "split generator != e1+e2");
    expect(t.isogeny_cokernel == std::vector<Int>{Int(2)}, "isogeny kernel != mu_2");

    expect(torus_conductor(RamifiedGaloisModule::tame(sign_action)).value == Rat(1, 2),
           "c(G1) != 1/2");
    expect(torus_conductor(RamifiedGaloisModule::tame(swap_action)).value == Rat(1, 2),
           "c(G2) != 1/2");
    GroupAction trivial(1, {}, {IntMatrix::identity(1), IntMatrix::identity(1)});
    expect(torus_conductor(RamifiedGaloisModule::tame(trivial)).value == Rat(0), "c(G3) != 0");

    IntMatrix inj(2, 1);
    inj.at(0, 0) = 1;
    inj.at(1, 0) = -1;
    AdditivityResult r = additivity_check(ExactSequence{
        RamifiedGaloisModule::tame(sign_action), RamifiedGaloisModule::tame(swap_action), inj});
    expect(r.equal && r.c_mid == Rat(1, 2) && r.c_sub == Rat(1, 2) && r.c_quot == Rat(0),
           "additivity 1/2 = 1/2 + 0 failed");
    return std::string("trace split, conductors 1/2, 1/2, 0, additivity true");
  });

  Criterion{12, "conductor combinator and gamma integrality", 0}.run([&] {
    expect(chai_combine({Rat(1, 2)}, {Rat(0)}, 0).value == Rat(1, 2), "(1/2,0,0) != 1/2");
    bool rejected = false;
    try {
      chai_combine({Rat(1, 2)}, {Rat(0)}, -1);
    } catch (const std::invalid_argument&) {
      rejected = true;
    }
    expect(rejected, "negative total not rejected");
    gen::Rng rng(20240829);
    std::uniform_int_distribution<long> num(0, 6), gam(-2, 4);
    for (int trial = 0; trial < 100; ++trial) {
      Rat ct(num(rng), 2), ca(num(rng), 2);
      ct.canonicalize();
      ca.canonicalize();
      long gamma = gam(rng);
      if (ct + ca + Rat(gamma) < 0) continue;
      Rat total = chai_combine({ct}, {ca}, gamma).value;
      Rat diff = total - ct - ca;
      diff.canonicalize();
      expect(diff.get_den() == 1 && diff.get_num() == gamma, "gamma integrality violated");
    }
    return std::string("combinator exact; difference always the integer gamma");
  });

  Criterion{13, "dimensional Fubini on Haar-normalized products", 0}.run([&] {
    gen::Rng rng(20240830);
    for (int trial = 0; trial < 50; ++trial) {
      auto [t_set, t_phi] = haar_normalized_set(rng, 1 + trial % 2);
      auto [a_set, a_phi] = haar_normalized_set(rng, 1 + (trial / 2) % 2);
      ZBar dim_t = integrate(t_set, t_phi);
      ZBar dim_a = integrate(a_set, a_phi);
      expect(dim_t == ZBar::fin(0) && dim_a == ZBar::fin(0), "factor dims != 0");

      // Product density: per product piece, the sum of the factor constants.
      DefinableSet prod = vf_product(t_set, a_set);
      DimFunction phi;
      const int nt = t_set.n(), na = a_set.n();
      size_t idx = 0;
      for (size_t i = 0; i < t_set.cells().size(); ++i)
        for (size_t j = 0; j < a_set.cells().size(); ++j, ++idx) {
          AffineForm f;
          f.coeffs.assign(static_cast<size_t>(nt + na), Int(0));
          f.offset = ZBar::fin(t_phi.pieces()[i].form.offset.fin_value() +
                               a_phi.pieces()[j].form.offset.fin_value());
          phi.add_piece(prod.cells()[idx], f);
        }
      ZBar dim_g = integrate(prod, phi);
      expect(dim_g == odot(dim_t, dim_a), "dim integral not multiplicative");
      expect(dim_g == ZBar::fin(0), "product dim != 0");
      FubiniResult fr = fubini_check(t_set, a_set, phi);
      expect(fr.equal && fr.joint == dim_g, "fubini split failed");
    }
    return std::string("50 bounded instances, all dims 0 and split");
  });

  Criterion{14, "CLI golden corpus", 60.0}.run([&] {
    if (tool.empty() || golden_dir.empty())
      throw std::runtime_error("tool path and golden dir required");
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(golden_dir))
      if (entry.path().extension() == ".sx") files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    expect(!files.empty(), "no golden documents found");
    int checked = 0;
    for (const auto& file : files) {
      std::string stem = file.stem().string();
      std::string verb = stem.substr(0, stem.find('_'));
      int expected_exit = 0;
      auto xpos = stem.rfind("_x");
      if (xpos != std::string::npos && xpos + 2 < stem.size() &&
          std::isdigit(static_cast<unsigned char>(stem[xpos + 2])))
        expected_exit = std::stoi(stem.substr(xpos + 2));
      fs::path expected_path = file;
      expected_path.replace_extension(".expected");
      std::ifstream ef(expected_path);
      expect(ef.good(), "missing expected file for " + stem);
      std::stringstream eb;
      eb << ef.rdbuf();
      int exit_code = 0;
      std::string out = run_tool(tool, verb, file.string(), exit_code);
      expect(exit_code == expected_exit, stem + ": exit " + std::to_string(exit_code) +
                                             " != " + std::to_string(expected_exit));
      expect(out == eb.str(), stem + ": output differs from golden bytes");
      ++checked;
    }
    return std::to_string(checked) + " documents byte-exact";
  });

  std::printf("%s: %d criterion(s) failed\n", g_failures == 0 ? "OK" : "FAILURES", g_failures);
  return g_failures == 0 ? 0 : 1;
}
