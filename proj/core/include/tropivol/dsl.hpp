#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tropivol/conductor.hpp"
#include "tropivol/motivic.hpp"
#include "tropivol/sexpr.hpp"
#include "tropivol/vfcells.hpp"

namespace tropivol::dsl {

// Document loaders. Each validates shape and reports failures as ParseError
// with the offending node's location.
ZBar load_zbar(const SExpr& e);
PresburgerSet load_pset(const SExpr& e);
ResidueSet load_rset(const SExpr& e);
PadicConstant load_padic(const SExpr& e);
VFCell load_vfcell(const SExpr& e);
DefinableSet load_defset(const SExpr& e);
DimFunction load_dimfn(const SExpr& e);
IntMatrix load_matrix(const SExpr& e);
WeakNeronData load_weak_neron(const SExpr& e);
RamifiedGaloisModule load_galmod(const SExpr& e);
AffineMap load_affine_map(const SExpr& e);

// Serializers; load(to_sexpr(x)) reproduces x.
SExpr to_sexpr(const PresburgerSet& s);
SExpr to_sexpr(const ResidueSet& s);
SExpr to_sexpr(const PadicConstant& c);
SExpr to_sexpr(const VFCell& c);
SExpr to_sexpr(const DefinableSet& a);
SExpr to_sexpr(const DimFunction& f);
SExpr to_sexpr(const IntMatrix& m);
SExpr to_sexpr(const AffineMap& m);

enum class Verb { Vol, Integrate, Fubini, Cov, Motivic, Compare, Conductor, Trace, Additivity, Snf };
std::optional<Verb> verb_of(const std::string& name);
std::string verb_name(Verb v);

enum class OutputFormat { Text, Json };

struct Command {
  Verb verb;
  std::vector<SExpr> payload;
  OutputFormat format = OutputFormat::Text;
  // When positive, the vol verb also runs the truncation-limit oracle.
  int oracle_imax = 0;
  int oracle_lmax = 0;
};

/// Pairs the CLI verb with a parsed document. The document may be wrapped in
/// the verb form (the wrapper must then match) or be the bare payload.
Command make_command(Verb verb, const std::vector<SExpr>& doc);

struct RunResult {
  int exit_code;  // 0 success, 2 for a check verb reporting inequality
  std::string output;
};

/// Executes a validated command; output is deterministic byte-for-byte.
RunResult run(const Command& cmd);

// ZBar JSON codec: {"neginf":true}, {"posinf":true}, {"fin":n}.
// Round-trips bit-exactly.
std::string zbar_to_json(const ZBar& z);
ZBar zbar_from_json(const std::string& text);

}  // namespace tropivol::dsl
