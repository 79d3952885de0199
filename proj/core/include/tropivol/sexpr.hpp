#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "tropivol/zbar.hpp"

namespace tropivol {

struct SourceLoc {
  int line = 1, col = 1;
};

/// Parse tree node: a list, or a typed atom (symbol, integer, rational).
/// Atoms are typed at parse time; every node carries its source location.
class SExpr {
 public:
  enum class Kind { List, Symbol, Integer, Rational };

  static SExpr list(std::vector<SExpr> items, SourceLoc loc = {});
  static SExpr symbol(std::string name, SourceLoc loc = {});
  static SExpr integer(Int value, SourceLoc loc = {});
  static SExpr rational(Rat value, SourceLoc loc = {});

  Kind kind() const { return kind_; }
  SourceLoc loc() const { return loc_; }

  bool is_list() const { return kind_ == Kind::List; }
  bool is_symbol() const { return kind_ == Kind::Symbol; }
  bool is_integer() const { return kind_ == Kind::Integer; }
  bool is_rational() const { return kind_ == Kind::Rational; }

  const std::vector<SExpr>& items() const;
  const std::string& symbol_name() const;
  const Int& integer_value() const;
  /// Rational value; integers coerce.
  Rat rational_value() const;

  /// Head symbol of a non-empty list, or empty string.
  std::string head() const;

  std::string render() const;

 private:
  Kind kind_ = Kind::List;
  SourceLoc loc_;
  std::string sym_;
  Int int_;
  Rat rat_;
  std::vector<SExpr> items_;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, SourceLoc loc)
      : std::runtime_error(msg + " at line " + std::to_string(loc.line) + ", column " +
                           std::to_string(loc.col)),
        loc_(loc) {}
  SourceLoc loc() const { return loc_; }

 private:
  SourceLoc loc_;
};

/// doc := sexpr+ ; comments run from ';' to end of line.
std::vector<SExpr> parse_document(std::string_view text);

/// Renders a whole document, one form per line.
std::string render_document(const std::vector<SExpr>& doc);

}  // namespace tropivol
