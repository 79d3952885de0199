#include "tropivol/sexpr.hpp"

#include <cctype>
#include <sstream>

namespace tropivol {

SExpr SExpr::list(std::vector<SExpr> items, SourceLoc loc) {
  SExpr e;
  e.kind_ = Kind::List;
  e.items_ = std::move(items);
  e.loc_ = loc;
  return e;
}
SExpr SExpr::symbol(std::string name, SourceLoc loc) {
  SExpr e;
  e.kind_ = Kind::Symbol;
  e.sym_ = std::move(name);
  e.loc_ = loc;
  return e;
}
SExpr SExpr::integer(Int value, SourceLoc loc) {
  SExpr e;
  e.kind_ = Kind::Integer;
  e.int_ = std::move(value);
  e.loc_ = loc;
  return e;
}
SExpr SExpr::rational(Rat value, SourceLoc loc) {
  SExpr e;
  e.kind_ = Kind::Rational;
  e.rat_ = std::move(value);
  e.rat_.canonicalize();
  e.loc_ = loc;
  return e;
}

const std::vector<SExpr>& SExpr::items() const {
  if (!is_list()) throw ParseError("expected a list", loc_);
  return items_;
}
const std::string& SExpr::symbol_name() const {
  if (!is_symbol()) throw ParseError("expected a symbol", loc_);
  return sym_;
}
const Int& SExpr::integer_value() const {
  if (!is_integer()) throw ParseError("expected an integer", loc_);
  return int_;
}
Rat SExpr::rational_value() const {
  if (is_integer()) return Rat(int_);
  if (!is_rational()) throw ParseError("expected a rational", loc_);
  return rat_;
}

std::string SExpr::head() const {
  if (!is_list() || items_.empty() || !items_.front().is_symbol()) return "";
  return items_.front().symbol_name();
}

std::string SExpr::render() const {
  switch (kind_) {
    case Kind::Symbol:
      return sym_;
    case Kind::Integer:
      return int_.get_str();
    case Kind::Rational:
      return rat_.get_str();
    case Kind::List: {
      std::ostringstream os;
      os << '(';
      for (size_t i = 0; i < items_.size(); ++i) {
        if (i) os << ' ';
        os << items_[i].render();
      }
      os << ')';
      return os.str();
    }
  }
  return "";
}

std::string render_document(const std::vector<SExpr>& doc) {
  std::ostringstream os;
  for (const auto& e : doc) os << e.render() << '\n';
  return os.str();
}

namespace {

struct Cursor {
  std::string_view text;
  size_t pos = 0;
  SourceLoc loc;

  bool done() const { return pos >= text.size(); }
  char peek() const { return text[pos]; }
  char advance() {
    char c = text[pos++];
    if (c == '\n') {
      ++loc.line;
      loc.col = 1;
    } else {
      ++loc.col;
    }
    return c;
  }
  void skip_blank() {
    while (!done()) {
      char c = peek();
      if (c == ';') {
        while (!done() && peek() != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }
};

bool atom_char(char c) {
  return !std::isspace(static_cast<unsigned char>(c)) && c != '(' && c != ')' && c != ';';
}

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

SExpr atom_of(const std::string& token, SourceLoc loc) {
  std::string_view t = token;
  std::string_view body = t;
  if (!body.empty() && (body.front() == '-' || body.front() == '+')) body.remove_prefix(1);
  if (all_digits(body)) return SExpr::integer(Int(token), loc);
  size_t slash = t.find('/');
  if (slash != std::string_view::npos && slash > 0) {
    std::string_view num = t.substr(0, slash), den = t.substr(slash + 1);
    std::string_view num_body = num;
    if (!num_body.empty() && (num_body.front() == '-' || num_body.front() == '+'))
      num_body.remove_prefix(1);
    if (all_digits(num_body) && all_digits(den)) {
      Int numerator{std::string(num)};
      Int denominator{std::string(den)};
      if (denominator == 0) throw ParseError("zero denominator", loc);
      Rat r(numerator, denominator);
      r.canonicalize();
      return SExpr::rational(r, loc);
    }
  }
  return SExpr::symbol(token, loc);
}

SExpr parse_one(Cursor& cur) {
  cur.skip_blank();
  if (cur.done()) throw ParseError("unexpected end of input", cur.loc);
  SourceLoc start = cur.loc;
  char c = cur.peek();
  if (c == '(') {
    cur.advance();
    std::vector<SExpr> items;
    for (;;) {
      cur.skip_blank();
      if (cur.done()) throw ParseError("unbalanced '(': missing ')'", start);
      if (cur.peek() == ')') {
        cur.advance();
        break;
      }
      items.push_back(parse_one(cur));
    }
    return SExpr::list(std::move(items), start);
  }
  if (c == ')') throw ParseError("unexpected ')'", cur.loc);
  std::string token;
  while (!cur.done() && atom_char(cur.peek())) token.push_back(cur.advance());
  if (token.empty()) throw ParseError("unexpected character", cur.loc);
  return atom_of(token, start);
}

}  // namespace

std::vector<SExpr> parse_document(std::string_view text) {
  Cursor cur{text, 0, {}};
  std::vector<SExpr> doc;
  for (;;) {
    cur.skip_blank();
    if (cur.done()) break;
    doc.push_back(parse_one(cur));
  }
  if (doc.empty()) throw ParseError("empty document", cur.loc);
  return doc;
}

}  // namespace tropivol
