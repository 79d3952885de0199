#include "tropivol/dsl.hpp"

#include <json.hpp>
#include <map>
#include <sstream>

namespace tropivol::dsl {

namespace {

using Json = nlohmann::ordered_json;

[[noreturn]] void fail(const SExpr& e, const std::string& msg) { throw ParseError(msg, e.loc()); }

void expect_head(const SExpr& e, const char* head) {
  if (!e.is_list() || e.head() != head)
    fail(e, std::string("expected (") + head + " ...)");
}

std::vector<const SExpr*> fields(const SExpr& list, const std::string& key) {
  std::vector<const SExpr*> out;
  for (size_t i = 1; i < list.items().size(); ++i)
    if (list.items()[i].is_list() && list.items()[i].head() == key)
      out.push_back(&list.items()[i]);
  return out;
}

const SExpr& field(const SExpr& list, const std::string& key) {
  auto all = fields(list, key);
  if (all.empty()) fail(list, "missing (" + key + " ...)");
  if (all.size() > 1) fail(*all[1], "duplicate (" + key + " ...)");
  return *all[0];
}

const SExpr* field_opt(const SExpr& list, const std::string& key) {
  auto all = fields(list, key);
  if (all.size() > 1) fail(*all[1], "duplicate (" + key + " ...)");
  return all.empty() ? nullptr : all[0];
}

long to_long(const SExpr& e) {
  const Int& v = e.integer_value();
  if (!v.fits_slong_p()) fail(e, "integer out of machine range");
  return v.get_si();
}

int to_int(const SExpr& e) {
  long v = to_long(e);
  if (v < -(1L << 30) || v > (1L << 30)) fail(e, "integer out of range");
  return static_cast<int>(v);
}

std::vector<Int> load_int_vector(const SExpr& e) {
  std::vector<Int> out;
  for (const auto& item : e.items()) out.push_back(item.integer_value());
  return out;
}

}  // namespace

ZBar load_zbar(const SExpr& e) {
  if (e.is_integer()) return ZBar::fin(e.integer_value());
  if (e.is_symbol()) {
    if (e.symbol_name() == "-inf") return ZBar::neg_inf();
    if (e.symbol_name() == "+inf") return ZBar::pos_inf();
  }
  fail(e, "expected an integer, -inf, or +inf");
}

namespace {

PresburgerCell load_pcell(const SExpr& e, int dim) {
  expect_head(e, "cell");
  std::vector<Inequality> ineqs;
  std::vector<Congruence> congs;
  for (size_t i = 1; i < e.items().size(); ++i) {
    const SExpr& c = e.items()[i];
    const std::string h = c.head();
    if (h == "ge" || h == "le" || h == "eq") {
      if (c.items().size() != 3) fail(c, "expected (" + h + " (coeffs...) bound)");
      std::vector<Int> coeffs = load_int_vector(c.items()[1]);
      if (static_cast<int>(coeffs.size()) != dim) fail(c, "coefficient arity mismatch");
      Int bound = c.items()[2].integer_value();
      if (h == "ge" || h == "eq") ineqs.push_back(Inequality{coeffs, bound});
      if (h == "le" || h == "eq") {
        std::vector<Int> neg;
        for (const auto& x : coeffs) neg.push_back(-x);
        ineqs.push_back(Inequality{std::move(neg), -bound});
      }
    } else if (h == "cong") {
      if (c.items().size() != 4) fail(c, "expected (cong (coeffs...) residue modulus)");
      std::vector<Int> coeffs = load_int_vector(c.items()[1]);
      if (static_cast<int>(coeffs.size()) != dim) fail(c, "coefficient arity mismatch");
      Int residue = c.items()[2].integer_value();
      Int modulus = c.items()[3].integer_value();
      if (modulus < 2) fail(c.items()[3], "modulus must be >= 2");
      congs.push_back(Congruence{std::move(coeffs), std::move(residue), std::move(modulus)});
    } else {
      fail(c, "unknown cell constraint (want ge, le, eq, or cong)");
    }
  }
  return PresburgerCell(dim, std::move(ineqs), std::move(congs));
}

PresburgerSet load_pset_body(const SExpr& e) {
  int dim = to_int(field(e, "r").items().at(1));
  if (dim < 0) fail(e, "negative dimension");
  PresburgerSet out(dim);
  for (const auto* c : fields(e, "cell")) out.add_cell(load_pcell(*c, dim));
  return out;
}

}  // namespace

PresburgerSet load_pset(const SExpr& e) {
  expect_head(e, "pset");
  return load_pset_body(e);
}

ResidueSet load_rset(const SExpr& e) {
  expect_head(e, "rset");
  ResidueSet out;
  for (const auto* c : fields(e, "cell")) {
    const auto& items = c->items();
    if (items.size() == 2 && items[1].is_list() && items[1].head() == "opaque") {
      out.add_cell(ResidueCell::opaque(to_int(items[1].items().at(1))));
      continue;
    }
    std::vector<ResidueCoord> coords;
    for (size_t i = 1; i < items.size(); ++i) {
      const SExpr& m = items[i];
      if (m.is_symbol() && m.symbol_name() == "free")
        coords.push_back(ResidueCoord::free());
      else if (m.is_symbol() && m.symbol_name() == "nonzero")
        coords.push_back(ResidueCoord::free_nonzero());
      else if (m.is_list() && m.head() == "fixed" && m.items().size() == 2)
        coords.push_back(ResidueCoord::fixed(m.items()[1].rational_value()));
      else
        fail(m, "unknown residue coordinate marker");
    }
    out.add_cell(ResidueCell(std::move(coords)));
  }
  return out;
}

PadicConstant load_padic(const SExpr& e) {
  if (!e.is_list()) fail(e, "expected a list of (exponent digit) pairs");
  std::vector<std::pair<long, Rat>> terms;
  for (const auto& t : e.items()) {
    if (!t.is_list() || t.items().size() != 2) fail(t, "expected an (exponent digit) pair");
    long exp = to_long(t.items()[0]);
    Rat digit = t.items()[1].rational_value();
    if (digit == 0) fail(t.items()[1], "digits must be nonzero");
    terms.emplace_back(exp, std::move(digit));
  }
  return PadicConstant::from_terms(std::move(terms));
}

namespace {

AcConstraint load_ac_spec(const SExpr& e) {
  if (e.is_symbol() && e.symbol_name() == "free") return AcConstraint::free_unit();
  if (e.is_list() && e.head() == "fixed") {
    std::vector<Rat> digits;
    for (size_t i = 1; i < e.items().size(); ++i) digits.push_back(e.items()[i].rational_value());
    return AcConstraint::fixed(std::move(digits));
  }
  fail(e, "expected free or (fixed digits...)");
}

}  // namespace

VFCell load_vfcell(const SExpr& e) {
  expect_head(e, "vfcell");
  const int n = to_int(field(e, "n").items().at(1));
  if (n < 0) fail(e, "negative coordinate count");

  std::vector<PadicConstant> centers;
  if (const SExpr* c = field_opt(e, "center")) {
    for (size_t i = 1; i < c->items().size(); ++i) centers.push_back(load_padic(c->items()[i]));
  }
  if (centers.empty()) centers.assign(static_cast<size_t>(n), PadicConstant());
  if (static_cast<int>(centers.size()) != n) fail(e, "center count must equal n");

  std::vector<int> depth;
  const SExpr& d = field(e, "acdepth");
  for (size_t i = 1; i < d.items().size(); ++i) depth.push_back(to_int(d.items()[i]));
  if (static_cast<int>(depth.size()) != n) fail(d, "acdepth count must equal n");

  std::vector<AcConstraint> ac;
  const SExpr& a = field(e, "ac");
  const auto& ai = a.items();
  if (n == 1 && ai.size() == 3 && ai[1].is_symbol() && ai[1].symbol_name() == "fixed") {
    // Flattened single-coordinate form: (ac fixed (1 0)).
    std::vector<Rat> digits;
    for (const auto& x : ai[2].items()) digits.push_back(x.rational_value());
    ac.push_back(AcConstraint::fixed(std::move(digits)));
  } else {
    for (size_t i = 1; i < ai.size(); ++i) ac.push_back(load_ac_spec(ai[i]));
  }
  if (static_cast<int>(ac.size()) != n) fail(a, "ac constraint count must equal n");

  const SExpr& o = field(e, "ordset");
  PresburgerSet ord(0);
  if (o.items().size() == 2 && o.items()[1].is_list() && o.items()[1].head() == "pset")
    ord = load_pset(o.items()[1]);
  else
    ord = load_pset_body(o);

  ResidueSet residue = ResidueSet::point();
  if (const SExpr* r = field_opt(e, "residue")) {
    if (r->items().size() == 2 && r->items()[1].is_list() && r->items()[1].head() == "rset")
      residue = load_rset(r->items()[1]);
    else
      fail(*r, "expected (residue (rset ...))");
  }
  return VFCell(n, std::move(centers), std::move(depth), std::move(ac), std::move(ord),
                std::move(residue));
}

DefinableSet load_defset(const SExpr& e) {
  if (e.is_list() && e.head() == "vfcell") return DefinableSet(load_vfcell(e));
  expect_head(e, "defset");
  if (e.items().size() < 2) fail(e, "defset needs at least one cell");
  DefinableSet out(load_vfcell(e.items()[1]));
  for (size_t i = 2; i < e.items().size(); ++i) out.add_cell(load_vfcell(e.items()[i]));
  return out;
}

DimFunction load_dimfn(const SExpr& e) {
  expect_head(e, "dimfn");
  DimFunction out;
  for (const auto* p : fields(e, "piece")) {
    if (p->items().size() != 3) fail(*p, "expected (piece (vfcell ...) (form ...))");
    VFCell cell = load_vfcell(p->items()[1]);
    const SExpr& f = p->items()[2];
    expect_head(f, "form");
    ZBar offset = ZBar::fin(0);
    if (const SExpr* off = field_opt(f, "offset")) {
      if (off->items().size() != 2) fail(*off, "expected (offset value)");
      offset = load_zbar(off->items()[1]);
    }
    const int arity = cell.n() + cell.extra_params();
    std::vector<Int> coeffs(static_cast<size_t>(arity), Int(0));
    if (const SExpr* cf = field_opt(f, "coeffs")) {
      coeffs.clear();
      for (size_t i = 1; i < cf->items().size(); ++i)
        coeffs.push_back(cf->items()[i].integer_value());
      if (static_cast<int>(coeffs.size()) != arity) fail(*cf, "coefficient arity mismatch");
    }
    out.add_piece(std::move(cell), AffineForm{std::move(coeffs), offset});
  }
  if (out.pieces().empty()) fail(e, "dimfn needs at least one piece");
  return out;
}

IntMatrix load_matrix(const SExpr& e) {
  expect_head(e, "mat");
  std::vector<std::vector<Int>> rows;
  for (size_t i = 1; i < e.items().size(); ++i) {
    const SExpr& r = e.items()[i];
    expect_head(r, "row");
    std::vector<Int> row;
    for (size_t j = 1; j < r.items().size(); ++j) row.push_back(r.items()[j].integer_value());
    if (!rows.empty() && row.size() != rows.front().size()) fail(r, "ragged matrix rows");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) fail(e, "empty matrix");
  IntMatrix m(static_cast<int>(rows.size()), static_cast<int>(rows.front().size()));
  for (size_t i = 0; i < rows.size(); ++i)
    for (size_t j = 0; j < rows[i].size(); ++j)
      m.at(static_cast<int>(i), static_cast<int>(j)) = rows[i][j];
  return m;
}

WeakNeronData load_weak_neron(const SExpr& e) {
  expect_head(e, "weak-neron");
  int dimx = to_int(field(e, "dimx").items().at(1));
  std::vector<WeakNeronComponent> comps;
  for (const auto* c : fields(e, "comp")) {
    WeakNeronComponent comp;
    const SExpr& poly = field(*c, "poly");
    std::vector<std::pair<long, Int>> terms;
    for (size_t i = 1; i < poly.items().size(); ++i) {
      const SExpr& t = poly.items()[i];
      if (!t.is_list() || t.items().size() != 2) fail(t, "expected (exponent coefficient)");
      terms.emplace_back(to_long(t.items()[0]), t.items()[1].integer_value());
    }
    comp.poincare = PoincareElement::from_terms(std::move(terms));
    comp.dim = to_int(field(*c, "dim").items().at(1));
    comp.ord_omega = to_long(field(*c, "ord").items().at(1));
    comps.push_back(std::move(comp));
  }
  return WeakNeronData(dimx, std::move(comps));
}

RamifiedGaloisModule load_galmod(const SExpr& e) {
  expect_head(e, "galmod");
  const int rank = to_int(field(e, "rank").items().at(1));
  std::vector<IntMatrix> gens;
  for (const auto* g : fields(e, "gen")) {
    if (g->items().size() != 2) fail(*g, "expected (gen (mat ...))");
    gens.push_back(load_matrix(g->items()[1]));
  }
  GroupAction action = [&]() {
    if (const SExpr* el = field_opt(e, "elements")) {
      std::vector<IntMatrix> elems;
      for (size_t i = 1; i < el->items().size(); ++i) elems.push_back(load_matrix(el->items()[i]));
      return GroupAction(rank, std::move(gens), std::move(elems));
    }
    return GroupAction::from_generators(rank, std::move(gens));
  }();

  const SExpr& filt = field(e, "filtration");
  std::vector<std::vector<int>> levels;
  for (size_t i = 1; i < filt.items().size(); ++i) {
    const SExpr& lvl = filt.items()[i];
    if (!lvl.is_list() || lvl.items().size() < 2) fail(lvl, "expected (gK spec...)");
    std::vector<int> idx;
    const SExpr& spec = lvl.items()[1];
    if (spec.is_symbol() && spec.symbol_name() == "all") {
      for (size_t k = 0; k < action.elements().size(); ++k) idx.push_back(static_cast<int>(k));
    } else if (spec.is_symbol() && spec.symbol_name() == "id") {
      idx.push_back(action.identity_index());
    } else {
      for (size_t k = 1; k < lvl.items().size(); ++k) idx.push_back(to_int(lvl.items()[k]));
    }
    levels.push_back(std::move(idx));
  }
  return RamifiedGaloisModule(std::move(action), std::move(levels));
}

AffineMap load_affine_map(const SExpr& e) {
  expect_head(e, "map");
  AffineMap m;
  const SExpr& sc = field(e, "scale");
  for (size_t i = 1; i < sc.items().size(); ++i) m.scale.push_back(load_padic(sc.items()[i]));
  if (const SExpr* off = field_opt(e, "offset")) {
    for (size_t i = 1; i < off->items().size(); ++i)
      m.offset.push_back(load_padic(off->items()[i]));
  }
  if (m.offset.empty()) m.offset.assign(m.scale.size(), PadicConstant());
  if (m.offset.size() != m.scale.size()) fail(e, "scale/offset arity mismatch");
  return m;
}

namespace {

SExpr sym(const char* s) { return SExpr::symbol(s); }
SExpr num(const Int& v) { return SExpr::integer(v); }
SExpr num(long v) { return SExpr::integer(Int(v)); }
SExpr rat(const Rat& v) {
  if (v.get_den() == 1) return SExpr::integer(v.get_num());
  return SExpr::rational(v);
}
SExpr lst(std::vector<SExpr> items) { return SExpr::list(std::move(items)); }

SExpr zbar_sexpr(const ZBar& z) {
  if (z.is_neg_inf()) return sym("-inf");
  if (z.is_pos_inf()) return sym("+inf");
  return num(z.fin_value());
}

}  // namespace

SExpr to_sexpr(const PresburgerSet& s) {
  std::vector<SExpr> items{sym("pset"), lst({sym("r"), num(static_cast<long>(s.dim()))})};
  for (const auto& cell : s.cells()) {
    std::vector<SExpr> ci{sym("cell")};
    for (const auto& q : cell.inequalities()) {
      std::vector<SExpr> coeffs;
      for (const auto& c : q.coeffs) coeffs.push_back(num(c));
      ci.push_back(lst({sym("ge"), lst(std::move(coeffs)), num(q.bound)}));
    }
    for (const auto& c : cell.congruences()) {
      std::vector<SExpr> coeffs;
      for (const auto& x : c.coeffs) coeffs.push_back(num(x));
      ci.push_back(lst({sym("cong"), lst(std::move(coeffs)), num(c.residue), num(c.modulus)}));
    }
    items.push_back(lst(std::move(ci)));
  }
  return lst(std::move(items));
}

SExpr to_sexpr(const ResidueSet& s) {
  std::vector<SExpr> items{sym("rset")};
  for (const auto& cell : s.cells()) {
    std::vector<SExpr> ci{sym("cell")};
    if (cell.is_opaque()) {
      ci.push_back(lst({sym("opaque"), num(static_cast<long>(cell.dimension()))}));
    } else {
      for (const auto& c : cell.coords()) {
        switch (c.kind) {
          case CoordKind::Free:
            ci.push_back(sym("free"));
            break;
          case CoordKind::FreeNonzero:
            ci.push_back(sym("nonzero"));
            break;
          case CoordKind::Fixed:
            ci.push_back(lst({sym("fixed"), rat(c.fixed_value)}));
            break;
        }
      }
    }
    items.push_back(lst(std::move(ci)));
  }
  return lst(std::move(items));
}

SExpr to_sexpr(const PadicConstant& c) {
  std::vector<SExpr> items;
  for (const auto& [e, d] : c.terms()) items.push_back(lst({num(e), rat(d)}));
  return lst(std::move(items));
}

SExpr to_sexpr(const VFCell& c) {
  std::vector<SExpr> items{sym("vfcell"), lst({sym("n"), num(static_cast<long>(c.n()))})};
  {
    std::vector<SExpr> ctr{sym("center")};
    for (const auto& x : c.centers()) ctr.push_back(to_sexpr(x));
    items.push_back(lst(std::move(ctr)));
  }
  {
    std::vector<SExpr> d{sym("acdepth")};
    for (int x : c.ac_depth()) d.push_back(num(static_cast<long>(x)));
    items.push_back(lst(std::move(d)));
  }
  {
    std::vector<SExpr> a{sym("ac")};
    for (const auto& spec : c.ac()) {
      if (spec.kind == AcKind::FreeUnit) {
        a.push_back(sym("free"));
      } else {
        std::vector<SExpr> f{sym("fixed")};
        for (const auto& d : spec.digits) f.push_back(rat(d));
        a.push_back(lst(std::move(f)));
      }
    }
    items.push_back(lst(std::move(a)));
  }
  items.push_back(lst({sym("ordset"), to_sexpr(c.ord_set())}));
  items.push_back(lst({sym("residue"), to_sexpr(c.residue())}));
  return lst(std::move(items));
}

SExpr to_sexpr(const DefinableSet& a) {
  std::vector<SExpr> items{sym("defset")};
  for (const auto& c : a.cells()) items.push_back(to_sexpr(c));
  return lst(std::move(items));
}

SExpr to_sexpr(const DimFunction& f) {
  std::vector<SExpr> items{sym("dimfn")};
  for (const auto& p : f.pieces()) {
    std::vector<SExpr> coeffs{sym("coeffs")};
    for (const auto& c : p.form.coeffs) coeffs.push_back(num(c));
    items.push_back(lst({sym("piece"), to_sexpr(p.cell),
                         lst({sym("form"), lst(std::move(coeffs)),
                              lst({sym("offset"), zbar_sexpr(p.form.offset)})})}));
  }
  return lst(std::move(items));
}

SExpr to_sexpr(const IntMatrix& m) {
  std::vector<SExpr> items{sym("mat")};
  for (int i = 0; i < m.rows(); ++i) {
    std::vector<SExpr> row{sym("row")};
    for (int j = 0; j < m.cols(); ++j) row.push_back(num(m.at(i, j)));
    items.push_back(lst(std::move(row)));
  }
  return lst(std::move(items));
}

SExpr to_sexpr(const AffineMap& m) {
  std::vector<SExpr> sc{sym("scale")}, off{sym("offset")};
  for (const auto& s : m.scale) sc.push_back(to_sexpr(s));
  for (const auto& o : m.offset) off.push_back(to_sexpr(o));
  return lst({sym("map"), lst(std::move(sc)), lst(std::move(off))});
}

std::optional<Verb> verb_of(const std::string& name) {
  if (name == "vol") return Verb::Vol;
  if (name == "integrate") return Verb::Integrate;
  if (name == "fubini") return Verb::Fubini;
  if (name == "cov") return Verb::Cov;
  if (name == "motivic") return Verb::Motivic;
  if (name == "compare") return Verb::Compare;
  if (name == "conductor") return Verb::Conductor;
  if (name == "trace") return Verb::Trace;
  if (name == "additivity") return Verb::Additivity;
  if (name == "snf") return Verb::Snf;
  return std::nullopt;
}

std::string verb_name(Verb v) {
  switch (v) {
    case Verb::Vol: return "vol";
    case Verb::Integrate: return "integrate";
    case Verb::Fubini: return "fubini";
    case Verb::Cov: return "cov";
    case Verb::Motivic: return "motivic";
    case Verb::Compare: return "compare";
    case Verb::Conductor: return "conductor";
    case Verb::Trace: return "trace";
    case Verb::Additivity: return "additivity";
    case Verb::Snf: return "snf";
  }
  return "?";
}

Command make_command(Verb verb, const std::vector<SExpr>& doc) {
  Command cmd;
  cmd.verb = verb;
  if (doc.size() == 1 && doc.front().is_list()) {
    auto wrapped = verb_of(doc.front().head());
    if (wrapped) {
      if (*wrapped != verb)
        fail(doc.front(), "document verb '" + doc.front().head() +
                              "' does not match the requested verb '" + verb_name(verb) + "'");
      cmd.payload.assign(doc.front().items().begin() + 1, doc.front().items().end());
      return cmd;
    }
  }
  cmd.payload = doc;
  return cmd;
}

namespace {

std::string bool_str(bool b) { return b ? "true" : "false"; }

Json int_json(const Int& v) {
  if (v.fits_slong_p()) return Json(v.get_si());
  return Json(v.get_str());
}

Json zbar_field(const ZBar& z) {
  Json j = Json::object();
  if (z.is_neg_inf())
    j["neginf"] = true;
  else if (z.is_pos_inf())
    j["posinf"] = true;
  else
    j["fin"] = int_json(z.fin_value());
  return j;
}

Json matrix_json(const IntMatrix& m) {
  Json rows = Json::array();
  for (int i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(int_json(m.at(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json poincare_json(const PoincareElement& p) {
  Json terms = Json::array();
  for (const auto& [e, c] : p.terms()) {
    Json t = Json::array();
    t.push_back(e);
    t.push_back(int_json(c));
    terms.push_back(std::move(t));
  }
  return terms;
}

std::string int_list_str(const std::vector<Int>& v) {
  std::ostringstream os;
  os << '[';
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) os << ", ";
    os << v[i].get_str();
  }
  os << ']';
  return os.str();
}

const SExpr& arg(const Command& cmd, size_t i, const char* what) {
  if (i >= cmd.payload.size())
    throw ParseError(std::string("missing argument: expected ") + what, SourceLoc{});
  return cmd.payload[i];
}

}  // namespace

std::string zbar_to_json(const ZBar& z) { return zbar_field(z).dump(); }

ZBar zbar_from_json(const std::string& text) {
  Json j = Json::parse(text);
  if (j.contains("neginf") && j["neginf"].get<bool>()) return ZBar::neg_inf();
  if (j.contains("posinf") && j["posinf"].get<bool>()) return ZBar::pos_inf();
  if (j.contains("fin")) {
    if (j["fin"].is_string()) return ZBar::fin(Int(j["fin"].get<std::string>()));
    return ZBar::fin(Int(static_cast<long>(j["fin"].get<long long>())));
  }
  throw std::invalid_argument("zbar_from_json: unrecognized shape");
}

RunResult run(const Command& cmd) {
  std::ostringstream text;
  Json json = Json::object();
  int exit_code = 0;

  switch (cmd.verb) {
    case Verb::Vol: {
      DefinableSet a = load_defset(arg(cmd, 0, "a definable set"));
      ZBar v = vol(a);
      text << "vol = " << v.str() << '\n';
      json["vol"] = zbar_field(v);
      if (cmd.oracle_imax > 0 || cmd.oracle_lmax > 0) {
        int imax = cmd.oracle_imax > 0 ? cmd.oracle_imax : 2;
        int lmax = cmd.oracle_lmax > 0 ? cmd.oracle_lmax : 8;
        OracleResult o = vol_truncation_oracle(a, imax, lmax);
        text << "oracle = " << o.value.str() << (o.stabilized ? " stabilized" : " not-stabilized")
             << '\n';
        json["oracle"] = zbar_field(o.value);
        json["oracle_stabilized"] = o.stabilized;
      }
      break;
    }
    case Verb::Integrate: {
      DefinableSet a = load_defset(arg(cmd, 0, "a definable set"));
      DimFunction phi = load_dimfn(arg(cmd, 1, "a dimensional function"));
      ZBar v = integrate(a, phi);
      text << "integral = " << v.str() << '\n';
      json["integral"] = zbar_field(v);
      break;
    }
    case Verb::Fubini: {
      DefinableSet ax = load_defset(arg(cmd, 0, "the x factor"));
      DefinableSet ay = load_defset(arg(cmd, 1, "the y factor"));
      DimFunction phi = load_dimfn(arg(cmd, 2, "a dimensional function"));
      FubiniResult r = fubini_check(ax, ay, phi);
      text << "iterated = " << r.iterated.str() << '\n';
      text << "joint = " << r.joint.str() << '\n';
      text << "equal = " << bool_str(r.equal) << '\n';
      json["iterated"] = zbar_field(r.iterated);
      json["joint"] = zbar_field(r.joint);
      json["equal"] = r.equal;
      if (!r.equal) exit_code = 2;
      break;
    }
    case Verb::Cov: {
      DefinableSet a = load_defset(arg(cmd, 0, "a definable set"));
      AffineMap map = load_affine_map(arg(cmd, 1, "an affine map"));
      DimFunction phi = load_dimfn(arg(cmd, 2, "a dimensional function"));
      CovResult r = cov_check(a, map, phi);
      text << "lhs = " << r.lhs.str() << '\n';
      text << "rhs = " << r.rhs.str() << '\n';
      text << "equal = " << bool_str(r.equal) << '\n';
      json["lhs"] = zbar_field(r.lhs);
      json["rhs"] = zbar_field(r.rhs);
      json["equal"] = r.equal;
      if (!r.equal) exit_code = 2;
      break;
    }
    case Verb::Motivic: {
      WeakNeronData w = load_weak_neron(arg(cmd, 0, "weak Néron data"));
      PoincareElement p = motivic_integral(w);
      VirtualDim d = virtual_dim(p);
      text << "integral = " << p.str() << '\n';
      text << "virtual dimension = " << d.str() << '\n';
      json["integral"] = poincare_json(p);
      json["integral_str"] = p.str();
      json["virtual_dim"] = d.str();
      break;
    }
    case Verb::Compare: {
      WeakNeronData w = load_weak_neron(arg(cmd, 0, "weak Néron data"));
      DefinableSet a = load_defset(arg(cmd, 1, "a definable set"));
      DimFunction phi = load_dimfn(arg(cmd, 2, "a dimensional function"));
      CompareResult r = compare_check(w, a, phi);
      text << "lhs = " << r.lhs.str() << '\n';
      text << "rhs = " << r.rhs.str() << '\n';
      text << "equal = " << bool_str(r.equal) << '\n';
      json["lhs"] = r.lhs.str();
      json["rhs"] = zbar_field(r.rhs);
      json["equal"] = r.equal;
      if (!r.equal) exit_code = 2;
      break;
    }
    case Verb::Conductor: {
      RamifiedGaloisModule m = load_galmod(arg(cmd, 0, "a Galois module"));
      ConductorValue c = torus_conductor(m);
      text << "c = " << c.value.get_str() << '\n';
      json["c"] = c.value.get_str();
      break;
    }
    case Verb::Trace: {
      RamifiedGaloisModule m = load_galmod(arg(cmd, 0, "a Galois module"));
      TraceDecomposition t = trace_decomposition(m);
      text << "b-part basis = " << t.b_part_basis.str() << '\n';
      text << "split rank = " << t.split_rank << '\n';
      text << "split generators = " << t.split_generators.str() << '\n';
      text << "isogeny cokernel = " << int_list_str(t.isogeny_cokernel) << '\n';
      json["b_part_basis"] = matrix_json(t.b_part_basis);
      json["split_rank"] = t.split_rank;
      json["split_generators"] = matrix_json(t.split_generators);
      Json coker = Json::array();
      for (const auto& d : t.isogeny_cokernel) coker.push_back(int_json(d));
      json["isogeny_cokernel"] = std::move(coker);
      break;
    }
    case Verb::Additivity: {
      arg(cmd, 0, "(sub ...), (mid ...), (inj ...)");
      std::vector<SExpr> items;
      items.push_back(SExpr::symbol("additivity"));
      for (const auto& p : cmd.payload) items.push_back(p);
      SExpr scope = SExpr::list(std::move(items));
      const SExpr& sub = field(scope, "sub");
      const SExpr& mid = field(scope, "mid");
      const SExpr& inj = field(scope, "inj");
      if (sub.items().size() != 2 || mid.items().size() != 2 || inj.items().size() != 2)
        fail(scope, "expected (sub (galmod ...)) (mid (galmod ...)) (inj (mat ...))");
      ExactSequence seq{load_galmod(sub.items()[1]), load_galmod(mid.items()[1]),
                        load_matrix(inj.items()[1])};
      AdditivityResult r = additivity_check(seq);
      Rat sum = r.c_sub + r.c_quot;
      sum.canonicalize();
      text << "c(sub) = " << r.c_sub.get_str() << '\n';
      text << "c(mid) = " << r.c_mid.get_str() << '\n';
      text << "c(quot) = " << r.c_quot.get_str() << '\n';
      text << "c(sub) + c(quot) = " << sum.get_str() << '\n';
      text << "equal = " << bool_str(r.equal) << '\n';
      json["c_sub"] = r.c_sub.get_str();
      json["c_mid"] = r.c_mid.get_str();
      json["c_quot"] = r.c_quot.get_str();
      json["equal"] = r.equal;
      if (!r.equal) exit_code = 2;
      break;
    }
    case Verb::Snf: {
      IntMatrix m = load_matrix(arg(cmd, 0, "a matrix"));
      SmithResult s = smith_normal_form(m);
      text << "d = " << int_list_str(s.diag) << '\n';
      text << "u = " << s.u.str() << '\n';
      text << "v = " << s.v.str() << '\n';
      Json d = Json::array();
      for (const auto& x : s.diag) d.push_back(int_json(x));
      json["d"] = std::move(d);
      json["u"] = matrix_json(s.u);
      json["v"] = matrix_json(s.v);
      break;
    }
  }

  RunResult out;
  out.exit_code = exit_code;
  if (cmd.format == OutputFormat::Json)
    out.output = json.dump(2) + "\n";
  else
    out.output = text.str();
  return out;
}

}  // namespace tropivol::dsl
