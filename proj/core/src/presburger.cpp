#include "tropivol/presburger.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "tropivol/intlat.hpp"

namespace tropivol {

namespace {

Int floor_div(const Int& a, const Int& b) {
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}
Int ceil_div(const Int& a, const Int& b) {
  Int q;
  mpz_cdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}
Int mod_pos(const Int& a, const Int& m) {
  Int r;
  mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  return r;
}
Int vec_dot(std::span<const Int> a, std::span<const Int> b) {
  Int s(0);
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

PresburgerCell::PresburgerCell(int dim, std::vector<Inequality> ineqs,
                               std::vector<Congruence> congs)
    : dim_(dim), ineqs_(std::move(ineqs)), congs_(std::move(congs)) {
  if (dim < 0) throw std::invalid_argument("PresburgerCell: negative dimension");
  for (const auto& q : ineqs_)
    if (static_cast<int>(q.coeffs.size()) != dim)
      throw std::invalid_argument("PresburgerCell: inequality arity mismatch");
  for (auto& c : congs_) {
    if (static_cast<int>(c.coeffs.size()) != dim)
      throw std::invalid_argument("PresburgerCell: congruence arity mismatch");
    if (c.modulus < 2) throw std::invalid_argument("PresburgerCell: modulus must be >= 2");
    c.residue = mod_pos(c.residue, c.modulus);
  }
}

PresburgerCell PresburgerCell::with_inequality(Inequality extra) const {
  std::vector<Inequality> ineqs = ineqs_;
  ineqs.push_back(std::move(extra));
  return PresburgerCell(dim_, std::move(ineqs), congs_);
}

PresburgerCell PresburgerCell::with_congruence(Congruence extra) const {
  std::vector<Congruence> congs = congs_;
  congs.push_back(std::move(extra));
  return PresburgerCell(dim_, ineqs_, std::move(congs));
}

bool PresburgerCell::contains(std::span<const Int> point) const {
  if (static_cast<int>(point.size()) != dim_) return false;
  for (const auto& q : ineqs_)
    if (vec_dot(q.coeffs, point) < q.bound) return false;
  for (const auto& c : congs_)
    if (mod_pos(vec_dot(c.coeffs, point), c.modulus) != c.residue) return false;
  return true;
}

PresburgerSet::PresburgerSet(int dim, std::vector<PresburgerCell> cells)
    : dim_(dim), cells_(std::move(cells)) {
  for (const auto& c : cells_)
    if (c.dim() != dim) throw std::invalid_argument("PresburgerSet: mixed cell dimensions");
}

void PresburgerSet::add_cell(PresburgerCell c) {
  if (c.dim() != dim_) throw std::invalid_argument("PresburgerSet: mixed cell dimensions");
  cells_.push_back(std::move(c));
}

bool PresburgerSet::contains(std::span<const Int> point) const {
  for (const auto& c : cells_)
    if (c.contains(point)) return true;
  return false;
}

ZBar AffineForm::eval(std::span<const Int> point) const {
  if (!offset.is_fin()) return offset;
  return ZBar::fin(vec_dot(coeffs, point) + offset.fin_value());
}

AffineForm add_forms(const AffineForm& a, const AffineForm& b) {
  if (a.coeffs.size() != b.coeffs.size())
    throw std::invalid_argument("add_forms: arity mismatch");
  ZBar off = odot(a.offset, b.offset);
  if (!off.is_fin()) return AffineForm::constant(static_cast<int>(a.coeffs.size()), off);
  AffineForm r;
  r.coeffs.reserve(a.coeffs.size());
  for (size_t i = 0; i < a.coeffs.size(); ++i) r.coeffs.push_back(a.coeffs[i] + b.coeffs[i]);
  r.offset = off;
  return r;
}

// ---------------------------------------------------------------------------
// Exact integer feasibility for a single conjunctive cell.
//
// Strategy: normalize (gcd-tighten inequalities, reduce congruences), turn
// congruences into equalities with auxiliary variables and eliminate them
// exactly through Smith normal form, then decide the residual pure-inequality
// system by Fourier–Motzkin windows with bounded enumeration, falling back to
// dark-shadow elimination and splinters for unbounded thin systems.
// ---------------------------------------------------------------------------

namespace {

struct Sys {
  int dim = 0;
  std::vector<Inequality> ineqs;
  std::vector<Congruence> congs;
};

constexpr int kEnumCap = 256;
constexpr size_t kRowCap = 20000;
constexpr long kDescentCap = 200000;

enum class Norm { Ok, Unsat };

Norm normalize(Sys& s) {
  std::map<std::vector<Int>, Int> strongest;
  for (auto& q : s.ineqs) {
    Int g(0);
    bool all_zero = true;
    for (const auto& c : q.coeffs) {
      if (c != 0) all_zero = false;
      g = gcd(g, c);
    }
    if (all_zero) {
      if (q.bound > 0) return Norm::Unsat;
      continue;
    }
    if (g > 1) {
      for (auto& c : q.coeffs) c /= g;
      q.bound = ceil_div(q.bound, g);
    }
    auto it = strongest.find(q.coeffs);
    if (it == strongest.end())
      strongest.emplace(q.coeffs, q.bound);
    else if (q.bound > it->second)
      it->second = q.bound;
  }
  s.ineqs.clear();
  for (auto& [c, b] : strongest) s.ineqs.push_back(Inequality{c, b});

  std::vector<Congruence> keep;
  for (auto& c : s.congs) {
    Int m = c.modulus;
    for (auto& x : c.coeffs) x = mod_pos(x, m);
    Int r = mod_pos(c.residue, m);
    Int g = m;
    bool all_zero = true;
    for (const auto& x : c.coeffs) {
      if (x != 0) all_zero = false;
      g = gcd(g, x);
    }
    if (all_zero) {
      if (r != 0) return Norm::Unsat;
      continue;
    }
    if (g > 1) {
      if (r % g != 0) return Norm::Unsat;
      for (auto& x : c.coeffs) x /= g;
      r /= g;
      m /= g;
    }
    if (m == 1) continue;
    keep.push_back(Congruence{c.coeffs, r, m});
  }
  s.congs = std::move(keep);
  return Norm::Ok;
}

Sys substitute(const Sys& s, int var, const Int& val) {
  Sys t;
  t.dim = s.dim - 1;
  for (const auto& q : s.ineqs) {
    Inequality r;
    r.bound = q.bound - q.coeffs[var] * val;
    for (int i = 0; i < s.dim; ++i)
      if (i != var) r.coeffs.push_back(q.coeffs[i]);
    t.ineqs.push_back(std::move(r));
  }
  for (const auto& c : s.congs) {
    Congruence r;
    r.modulus = c.modulus;
    r.residue = mod_pos(c.residue - c.coeffs[var] * val, c.modulus);
    for (int i = 0; i < s.dim; ++i)
      if (i != var) r.coeffs.push_back(c.coeffs[i]);
    t.congs.push_back(std::move(r));
  }
  return t;
}

// --- Fourier–Motzkin over the rational relaxation -------------------------

struct Row {
  std::vector<Int> c;
  Int b;
};

void reduce_row(Row& r) {
  Int g(0);
  for (const auto& x : r.c) g = gcd(g, x);
  g = gcd(g, r.b);
  if (g > 1) {
    for (auto& x : r.c) x /= g;
    r.b /= g;
  }
}

enum class FmStatus { Ok, Infeasible };

// Eliminates variable `var` (rationally exact); keeps rows deduplicated.
FmStatus fm_eliminate(std::vector<Row>& rows, int var) {
  std::vector<Row> pos, neg;
  std::map<std::vector<Int>, Int> out;
  auto push = [&](Row r) -> FmStatus {
    reduce_row(r);
    bool all_zero = std::all_of(r.c.begin(), r.c.end(), [](const Int& x) { return x == 0; });
    if (all_zero) return r.b > 0 ? FmStatus::Infeasible : FmStatus::Ok;
    auto it = out.find(r.c);
    if (it == out.end())
      out.emplace(std::move(r.c), std::move(r.b));
    else if (r.b > it->second)
      it->second = r.b;
    return FmStatus::Ok;
  };
  for (auto& r : rows) {
    if (r.c[var] > 0)
      pos.push_back(std::move(r));
    else if (r.c[var] < 0)
      neg.push_back(std::move(r));
    else if (push(std::move(r)) == FmStatus::Infeasible)
      return FmStatus::Infeasible;
  }
  for (const auto& p : pos)
    for (const auto& n : neg) {
      Int a = p.c[var];
      Int c = -n.c[var];
      Row r;
      r.c.resize(p.c.size());
      for (size_t i = 0; i < p.c.size(); ++i) r.c[i] = c * p.c[i] + a * n.c[i];
      r.b = c * p.b + a * n.b;
      if (push(std::move(r)) == FmStatus::Infeasible) return FmStatus::Infeasible;
      if (out.size() > kRowCap) throw std::runtime_error("presburger: constraint blow-up");
    }
  rows.clear();
  for (auto& [c, b] : out) rows.push_back(Row{c, b});
  return FmStatus::Ok;
}

// Eliminates every variable except `keep`, cheapest pairing first.
FmStatus fm_project(std::vector<Row>& rows, int dim, int keep) {
  std::vector<int> remaining;
  for (int v = 0; v < dim; ++v)
    if (v != keep) remaining.push_back(v);
  while (!remaining.empty()) {
    size_t best = 0;
    long best_cost = -1;
    for (size_t k = 0; k < remaining.size(); ++k) {
      long p = 0, n = 0;
      for (const auto& r : rows) {
        if (r.c[remaining[k]] > 0) ++p;
        if (r.c[remaining[k]] < 0) ++n;
      }
      long cost = p * n;
      if (best_cost < 0 || cost < best_cost) {
        best_cost = cost;
        best = k;
      }
    }
    int var = remaining[best];
    remaining.erase(remaining.begin() + best);
    if (fm_eliminate(rows, var) == FmStatus::Infeasible) return FmStatus::Infeasible;
  }
  return FmStatus::Ok;
}

RationalWindow window_from_rows(const std::vector<Row>& rows, int var) {
  RationalWindow w;
  w.feasible = true;
  for (const auto& r : rows) {
    const Int& c = r.c[var];
    if (c == 0) continue;
    Rat bound(r.b, c);
    bound.canonicalize();
    if (c > 0) {  // var >= b/c
      if (!w.lo_finite || bound > w.lo) {
        w.lo_finite = true;
        w.lo = bound;
      }
    } else {  // var <= b/c
      if (!w.hi_finite || bound < w.hi) {
        w.hi_finite = true;
        w.hi = bound;
      }
    }
  }
  if (w.lo_finite && w.hi_finite && w.lo > w.hi) w.feasible = false;
  return w;
}

std::vector<Row> rows_of(const Sys& s) {
  std::vector<Row> rows;
  rows.reserve(s.ineqs.size());
  for (const auto& q : s.ineqs) rows.push_back(Row{q.coeffs, q.bound});
  return rows;
}

RationalWindow rational_window_sys(const Sys& s, int var) {
  std::vector<Row> rows = rows_of(s);
  if (fm_project(rows, s.dim, var) == FmStatus::Infeasible) return RationalWindow{};
  return window_from_rows(rows, var);
}

// --- core recursion --------------------------------------------------------

std::optional<std::vector<Int>> solve(Sys s);

std::optional<std::vector<Int>> solve_with_congs(const Sys& s) {
  const int k = static_cast<int>(s.congs.size());
  const int n = s.dim + k;
  IntMatrix e(k, n);
  std::vector<Int> rhs(k);
  for (int j = 0; j < k; ++j) {
    for (int i = 0; i < s.dim; ++i) e.at(j, i) = s.congs[j].coeffs[i];
    e.at(j, s.dim + j) = -s.congs[j].modulus;
    rhs[j] = s.congs[j].residue;
  }
  SmithResult snf = smith_normal_form(e);
  std::vector<Int> c = snf.u.apply(rhs);
  std::vector<Int> y0(n, Int(0));
  std::vector<int> free_pos;
  for (int i = 0; i < k; ++i) {
    if (snf.diag[i] != 0) {
      if (c[i] % snf.diag[i] != 0) return std::nullopt;
      y0[i] = c[i] / snf.diag[i];
    } else {
      if (c[i] != 0) return std::nullopt;
      free_pos.push_back(i);
    }
  }
  for (int i = k; i < n; ++i) free_pos.push_back(i);
  std::vector<Int> p = snf.v.apply(y0);

  const int q = static_cast<int>(free_pos.size());
  Sys t;
  t.dim = q;
  for (const auto& iq : s.ineqs) {
    Inequality r;
    r.coeffs.assign(q, Int(0));
    r.bound = iq.bound;
    for (int i = 0; i < s.dim; ++i) {
      if (iq.coeffs[i] == 0) continue;
      r.bound -= iq.coeffs[i] * p[i];
      for (int f = 0; f < q; ++f) r.coeffs[f] += iq.coeffs[i] * snf.v.at(i, free_pos[f]);
    }
    t.ineqs.push_back(std::move(r));
  }
  auto sol = solve(std::move(t));
  if (!sol) return std::nullopt;
  std::vector<Int> x(s.dim);
  for (int i = 0; i < s.dim; ++i) {
    x[i] = p[i];
    for (int f = 0; f < q; ++f) x[i] += snf.v.at(i, free_pos[f]) * (*sol)[f];
  }
  return x;
}

struct BoundTerm {
  Int coef;               // > 0
  std::vector<Int> rest;  // over the remaining variables, z removed
  Int cnst;
};

std::vector<Int> insert_at(std::vector<Int> v, int pos, Int val) {
  v.insert(v.begin() + pos, std::move(val));
  return v;
}

std::optional<std::vector<Int>> solve(Sys s) {
  if (normalize(s) == Norm::Unsat) return std::nullopt;
  if (s.dim == 0) return std::vector<Int>{};
  if (!s.congs.empty()) return solve_with_congs(s);
  if (s.ineqs.empty()) return std::vector<Int>(s.dim, Int(0));

  // Rational windows for every variable; any infeasible window settles it.
  std::vector<RationalWindow> win(s.dim);
  for (int v = 0; v < s.dim; ++v) {
    win[v] = rational_window_sys(s, v);
    if (!win[v].feasible) return std::nullopt;
  }

  // Enumerate the variable with the smallest finite integer window, when small.
  int enum_var = -1;
  Int enum_lo, enum_hi, enum_size;
  for (int v = 0; v < s.dim; ++v) {
    if (!win[v].lo_finite || !win[v].hi_finite) continue;
    Int lo = ceil_div(win[v].lo.get_num(), win[v].lo.get_den());
    Int hi = floor_div(win[v].hi.get_num(), win[v].hi.get_den());
    if (lo > hi) return std::nullopt;
    Int size = hi - lo + 1;
    if (enum_var < 0 || size < enum_size) {
      enum_var = v;
      enum_lo = lo;
      enum_hi = hi;
      enum_size = size;
    }
  }
  if (enum_var >= 0 && enum_size <= kEnumCap) {
    for (Int val = enum_lo; val <= enum_hi; ++val) {
      if (auto sol = solve(substitute(s, enum_var, val)))
        return insert_at(std::move(*sol), enum_var, val);
    }
    return std::nullopt;
  }

  // Omega elimination of one variable.
  int z = -1;
  Int z_score;
  long z_rows = 0;
  for (int v = 0; v < s.dim; ++v) {
    Int maxc(0);
    long cnt = 0;
    for (const auto& q : s.ineqs)
      if (q.coeffs[v] != 0) {
        ++cnt;
        Int a = abs(q.coeffs[v]);
        if (a > maxc) maxc = a;
      }
    if (cnt == 0) continue;
    if (z < 0 || maxc < z_score || (maxc == z_score && cnt < z_rows)) {
      z = v;
      z_score = maxc;
      z_rows = cnt;
    }
  }
  if (z < 0) {
    // No inequality mentions any variable (all constant rows were consumed).
    return std::vector<Int>(s.dim, Int(0));
  }

  std::vector<BoundTerm> lowers, uppers;  // a z >= cnst + rest·x ; b z <= cnst + rest·x
  std::vector<Inequality> frees;
  for (const auto& q : s.ineqs) {
    const Int& cz = q.coeffs[z];
    if (cz == 0) {
      Inequality f;
      f.bound = q.bound;
      for (int i = 0; i < s.dim; ++i)
        if (i != z) f.coeffs.push_back(q.coeffs[i]);
      frees.push_back(std::move(f));
      continue;
    }
    BoundTerm t;
    t.coef = abs(cz);
    t.rest.reserve(s.dim - 1);
    if (cz > 0) {
      // cz z + Σ c_i x_i >= b  =>  cz z >= b - Σ c_i x_i
      for (int i = 0; i < s.dim; ++i)
        if (i != z) t.rest.push_back(-q.coeffs[i]);
      t.cnst = q.bound;
      lowers.push_back(std::move(t));
    } else {
      // cz z + Σ c_i x_i >= b, cz < 0  =>  |cz| z <= Σ c_i x_i - b
      for (int i = 0; i < s.dim; ++i)
        if (i != z) t.rest.push_back(q.coeffs[i]);
      t.cnst = -q.bound;
      uppers.push_back(std::move(t));
    }
  }

  // The explicit return type forces evaluation of the gmp expression
  // template; a deduced return would dangle on the vec_dot temporary.
  auto eval_term = [](const BoundTerm& t, std::span<const Int> x) -> Int {
    return t.cnst + vec_dot(t.rest, x);
  };
  auto z_window_low = [&](std::span<const Int> x) {
    Int lo;
    bool first = true;
    for (const auto& t : lowers) {
      Int v = ceil_div(eval_term(t, x), t.coef);
      if (first || v > lo) {
        lo = v;
        first = false;
      }
    }
    return lo;
  };
  auto z_window_high = [&](std::span<const Int> x) {
    Int hi;
    bool first = true;
    for (const auto& t : uppers) {
      Int v = floor_div(eval_term(t, x), t.coef);
      if (first || v < hi) {
        hi = v;
        first = false;
      }
    }
    return hi;
  };

  if (lowers.empty() || uppers.empty()) {
    Sys t;
    t.dim = s.dim - 1;
    t.ineqs = frees;
    auto sol = solve(std::move(t));
    if (!sol) return std::nullopt;
    Int zval(0);
    if (!lowers.empty())
      zval = z_window_low(*sol);
    else if (!uppers.empty())
      zval = z_window_high(*sol);
    return insert_at(std::move(*sol), z, zval);
  }

  // Dark shadow: a β − b α >= (a−1)(b−1) for every pair. Exact when every
  // pair has a unit coefficient on one side.
  bool exact = true;
  Sys dark;
  dark.dim = s.dim - 1;
  dark.ineqs = frees;
  for (const auto& lo : lowers)
    for (const auto& hi : uppers) {
      if (lo.coef > 1 && hi.coef > 1) exact = false;
      Inequality q;
      q.coeffs.assign(s.dim - 1, Int(0));
      for (int i = 0; i < s.dim - 1; ++i)
        q.coeffs[i] = lo.coef * hi.rest[i] - hi.coef * lo.rest[i];
      q.bound = (lo.coef - 1) * (hi.coef - 1) - lo.coef * hi.cnst + hi.coef * lo.cnst;
      dark.ineqs.push_back(std::move(q));
    }
  if (auto sol = solve(std::move(dark))) {
    Int zlo = z_window_low(*sol);
    Int zhi = z_window_high(*sol);
    if (zlo > zhi) throw std::logic_error("presburger: dark shadow window empty");
    return insert_at(std::move(*sol), z, zlo);
  }
  if (exact) return std::nullopt;

  // Splinters: any solution missed by the dark shadow pins a z to within a
  // bounded offset of some lower bound.
  Int bmax(0);
  for (const auto& hi : uppers)
    if (hi.coef > bmax) bmax = hi.coef;
  for (const auto& lo : lowers) {
    const Int& a = lo.coef;
    if (a < 2) continue;
    Int kmax = floor_div(a * bmax - a - bmax, bmax);
    for (Int k(0); k <= kmax; ++k) {
      // a z = cnst + k + rest·x
      Sys sp;
      sp.dim = s.dim - 1;
      for (const auto& q : s.ineqs) {
        const Int& cz = q.coeffs[z];
        Inequality r;
        r.coeffs.assign(s.dim - 1, Int(0));
        int w = 0;
        for (int i = 0; i < s.dim; ++i) {
          if (i == z) continue;
          r.coeffs[w] = a * q.coeffs[i] + cz * lo.rest[w];
          ++w;
        }
        r.bound = a * q.bound - cz * (lo.cnst + k);
        sp.ineqs.push_back(std::move(r));
      }
      Congruence cg;
      cg.coeffs = lo.rest;
      cg.modulus = a;
      cg.residue = mod_pos(-(lo.cnst + k), a);
      sp.congs.push_back(std::move(cg));
      if (auto sol = solve(std::move(sp))) {
        Int num = lo.cnst + k + vec_dot(lo.rest, *sol);
        Int zval;
        mpz_divexact(zval.get_mpz_t(), num.get_mpz_t(), a.get_mpz_t());
        return insert_at(std::move(*sol), z, zval);
      }
    }
  }
  return std::nullopt;
}

Sys sys_of(const PresburgerCell& c) {
  Sys s;
  s.dim = c.dim();
  s.ineqs = c.inequalities();
  s.congs = c.congruences();
  return s;
}

// Rational supremum of w·x over the relaxation of a cell.
struct RatSup {
  bool feasible = false;
  bool bounded = false;
  Rat value;
};

RatSup rational_sup(const PresburgerCell& cell, std::span<const Int> w) {
  const int dim = cell.dim();
  std::vector<Row> rows;
  for (const auto& q : cell.inequalities()) {
    Row r;
    r.c = q.coeffs;
    r.c.push_back(Int(0));
    r.b = q.bound;
    rows.push_back(std::move(r));
  }
  // t = w·x encoded as two inequalities.
  Row up, dn;
  up.c.assign(dim + 1, Int(0));
  dn.c.assign(dim + 1, Int(0));
  for (int i = 0; i < dim; ++i) {
    up.c[i] = -w[i];
    dn.c[i] = w[i];
  }
  up.c[dim] = 1;
  dn.c[dim] = -1;
  up.b = 0;
  dn.b = 0;
  rows.push_back(std::move(up));
  rows.push_back(std::move(dn));
  RatSup out;
  if (fm_project(rows, dim + 1, dim) == FmStatus::Infeasible) return out;
  RationalWindow wd = window_from_rows(rows, dim);
  if (!wd.feasible) return out;
  out.feasible = true;
  out.bounded = wd.hi_finite;
  if (wd.hi_finite) out.value = wd.hi;
  return out;
}

}  // namespace

std::optional<std::vector<Int>> find_point(const PresburgerCell& c) {
  return solve(sys_of(c));
}

bool is_empty(const PresburgerSet& s) {
  for (const auto& c : s.cells())
    if (find_point(c)) return false;
  return true;
}

RationalWindow rational_window(const PresburgerCell& c, int var) {
  if (var < 0 || var >= c.dim()) throw std::invalid_argument("rational_window: bad variable");
  Sys s = sys_of(c);
  return rational_window_sys(s, var);
}

namespace {

SupResult sup_affine_cell(const PresburgerCell& cell, const AffineForm& f) {
  SupResult out{ZBar::neg_inf(), std::nullopt};
  auto witness = find_point(cell);
  if (!witness) return out;
  if (f.offset.is_neg_inf()) return out;
  if (f.offset.is_pos_inf()) {
    out.value = ZBar::pos_inf();
    return out;
  }
  bool zero = std::all_of(f.coeffs.begin(), f.coeffs.end(), [](const Int& x) { return x == 0; });
  if (zero) {
    out.value = f.offset;
    out.arg = std::move(witness);
    return out;
  }
  RatSup rs = rational_sup(cell, f.coeffs);
  if (!rs.feasible) throw std::logic_error("sup_affine: witness in rationally empty cell");
  if (!rs.bounded) {
    // Nonempty integer set plus an unbounded rational objective gives an
    // unbounded integer objective: the recession ray scaled by the lcm of the
    // moduli stays in the cell.
    out.value = ZBar::pos_inf();
    return out;
  }
  Int v0 = floor_div(rs.value.get_num(), rs.value.get_den());
  Int lo = vec_dot(f.coeffs, *witness);
  if (v0 - lo > kDescentCap) throw std::runtime_error("sup_affine: descent budget exceeded");
  for (Int v = v0; v >= lo; --v) {
    std::vector<Int> neg(f.coeffs.size());
    for (size_t i = 0; i < f.coeffs.size(); ++i) neg[i] = -f.coeffs[i];
    PresburgerCell level =
        cell.with_inequality(Inequality{f.coeffs, v}).with_inequality(Inequality{neg, -v});
    if (auto p = find_point(level)) {
      out.value = ZBar::fin(v + f.offset.fin_value());
      out.arg = std::move(p);
      return out;
    }
  }
  throw std::logic_error("sup_affine: descent passed the witness value");
}

}  // namespace

SupResult sup_affine_witness(const PresburgerSet& s, const AffineForm& f) {
  if (static_cast<int>(f.coeffs.size()) != s.dim() && f.offset.is_fin())
    throw std::invalid_argument("sup_affine: form arity mismatch");
  SupResult best{ZBar::neg_inf(), std::nullopt};
  for (const auto& cell : s.cells()) {
    AffineForm g = f;
    if (!g.offset.is_fin()) g.coeffs.assign(s.dim(), Int(0));
    SupResult r = sup_affine_cell(cell, g);
    if (r.value > best.value) best = std::move(r);
  }
  return best;
}

ZBar sup_affine(const PresburgerSet& s, const AffineForm& f) {
  return sup_affine_witness(s, f).value;
}

PresburgerSet slice(const PresburgerSet& s, const std::map<int, Int>& assignments) {
  for (const auto& [idx, val] : assignments) {
    (void)val;
    if (idx < 0 || idx >= s.dim())
      throw std::invalid_argument("slice: assigned index out of range");
  }
  const int new_dim = s.dim() - static_cast<int>(assignments.size());
  PresburgerSet out(new_dim);
  for (const auto& cell : s.cells()) {
    std::vector<Inequality> ineqs;
    std::vector<Congruence> congs;
    bool dead = false;
    for (const auto& q : cell.inequalities()) {
      Inequality r;
      r.bound = q.bound;
      for (int i = 0; i < s.dim(); ++i) {
        auto it = assignments.find(i);
        if (it != assignments.end())
          r.bound -= q.coeffs[i] * it->second;
        else
          r.coeffs.push_back(q.coeffs[i]);
      }
      bool all_zero =
          std::all_of(r.coeffs.begin(), r.coeffs.end(), [](const Int& x) { return x == 0; });
      if (all_zero) {
        if (r.bound > 0) {
          dead = true;
          break;
        }
        continue;
      }
      ineqs.push_back(std::move(r));
    }
    if (dead) continue;
    for (const auto& c : cell.congruences()) {
      Congruence r;
      r.modulus = c.modulus;
      Int res = c.residue;
      for (int i = 0; i < s.dim(); ++i) {
        auto it = assignments.find(i);
        if (it != assignments.end())
          res -= c.coeffs[i] * it->second;
        else
          r.coeffs.push_back(c.coeffs[i]);
      }
      r.residue = mod_pos(res, r.modulus);
      bool all_zero =
          std::all_of(r.coeffs.begin(), r.coeffs.end(), [](const Int& x) { return x == 0; });
      if (all_zero) {
        if (r.residue != 0) {
          dead = true;
          break;
        }
        continue;
      }
      congs.push_back(std::move(r));
    }
    if (dead) continue;
    out.add_cell(PresburgerCell(new_dim, std::move(ineqs), std::move(congs)));
  }
  return out;
}

PresburgerSet product(const PresburgerSet& a, const PresburgerSet& b) {
  const int dim = a.dim() + b.dim();
  PresburgerSet out(dim);
  auto pad_front = [&](const std::vector<Int>& c) {
    std::vector<Int> r = c;
    r.resize(dim, Int(0));
    return r;
  };
  auto pad_back = [&](const std::vector<Int>& c) {
    std::vector<Int> r(a.dim(), Int(0));
    r.insert(r.end(), c.begin(), c.end());
    return r;
  };
  for (const auto& ca : a.cells())
    for (const auto& cb : b.cells()) {
      std::vector<Inequality> ineqs;
      std::vector<Congruence> congs;
      for (const auto& q : ca.inequalities()) ineqs.push_back({pad_front(q.coeffs), q.bound});
      for (const auto& q : cb.inequalities()) ineqs.push_back({pad_back(q.coeffs), q.bound});
      for (const auto& c : ca.congruences())
        congs.push_back({pad_front(c.coeffs), c.residue, c.modulus});
      for (const auto& c : cb.congruences())
        congs.push_back({pad_back(c.coeffs), c.residue, c.modulus});
      out.add_cell(PresburgerCell(dim, std::move(ineqs), std::move(congs)));
    }
  return out;
}

PresburgerSet translate(const PresburgerSet& s, std::span<const Int> delta) {
  if (static_cast<int>(delta.size()) != s.dim())
    throw std::invalid_argument("translate: delta arity mismatch");
  PresburgerSet out(s.dim());
  for (const auto& cell : s.cells()) {
    std::vector<Inequality> ineqs;
    std::vector<Congruence> congs;
    for (const auto& q : cell.inequalities())
      ineqs.push_back({q.coeffs, q.bound + vec_dot(q.coeffs, delta)});
    for (const auto& c : cell.congruences())
      congs.push_back(
          {c.coeffs, mod_pos(c.residue + vec_dot(c.coeffs, delta), c.modulus), c.modulus});
    out.add_cell(PresburgerCell(s.dim(), std::move(ineqs), std::move(congs)));
  }
  return out;
}

PresburgerSet permute(const PresburgerSet& s, std::span<const int> perm) {
  if (static_cast<int>(perm.size()) != s.dim())
    throw std::invalid_argument("permute: permutation arity mismatch");
  std::vector<bool> seen(s.dim(), false);
  for (int p : perm) {
    if (p < 0 || p >= s.dim() || seen[p]) throw std::invalid_argument("permute: not a permutation");
    seen[p] = true;
  }
  PresburgerSet out(s.dim());
  for (const auto& cell : s.cells()) {
    std::vector<Inequality> ineqs;
    std::vector<Congruence> congs;
    auto remap = [&](const std::vector<Int>& c) {
      std::vector<Int> r(s.dim());
      for (int i = 0; i < s.dim(); ++i) r[i] = c[perm[i]];
      return r;
    };
    for (const auto& q : cell.inequalities()) ineqs.push_back({remap(q.coeffs), q.bound});
    for (const auto& c : cell.congruences())
      congs.push_back({remap(c.coeffs), c.residue, c.modulus});
    out.add_cell(PresburgerCell(s.dim(), std::move(ineqs), std::move(congs)));
  }
  return out;
}

}  // namespace tropivol
