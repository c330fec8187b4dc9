#pragma once

#include <cctype>
#include <map>
#include <string>
#include <vector>

#include "sppfix/system.hpp"

namespace sppfix {

// Equation-system text format, one equation per line:
//
//   <Var> = <term> (+ <term>)*
//   term   = factor (* factor)*
//   factor = <Var> (^ <int>)?  |  <number>
//   number = decimal ("0.4", exact, = 2/5) | fraction ("2/5") | integer
//
// '#' starts a comment, blank lines are ignored. Minus signs are rejected as
// NegativeCoefficient; numeric factors fold into the term's coefficient.
namespace parser_detail {

struct Cursor {
  const std::string& line;
  int line_no;
  size_t pos = 0;

  [[noreturn]] void fail(errc code, const std::string& msg) const {
    raise(code, msg + " (line " + std::to_string(line_no) + ", column " +
                    std::to_string(pos + 1) + ")");
  }
  void skip_ws() {
    while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t')) ++pos;
  }
  bool done() {
    skip_ws();
    return pos >= line.size();
  }
  char peek() {
    skip_ws();
    return pos < line.size() ? line[pos] : '\0';
  }
  bool consume(char c) {
    if (peek() == c) {
      ++pos;
      return true;
    }
    return false;
  }
};

inline bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
inline bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

inline std::string read_ident(Cursor& cur) {
  cur.skip_ws();
  size_t start = cur.pos;
  if (start >= cur.line.size() || !ident_start(cur.line[start]))
    cur.fail(errc::syntax_error, "expected a variable name");
  while (cur.pos < cur.line.size() && ident_char(cur.line[cur.pos])) ++cur.pos;
  return cur.line.substr(start, cur.pos - start);
}

inline std::string read_number(Cursor& cur) {
  cur.skip_ws();
  size_t start = cur.pos;
  while (cur.pos < cur.line.size() &&
         (std::isdigit(static_cast<unsigned char>(cur.line[cur.pos])) || cur.line[cur.pos] == '.' ||
          cur.line[cur.pos] == '/'))
    ++cur.pos;
  if (cur.pos == start) cur.fail(errc::syntax_error, "expected a number");
  return cur.line.substr(start, cur.pos - start);
}

struct RawTerm {
  Rational coeff = Rational(1);
  std::map<std::string, int> powers;  // by name; resolved to indices later
};

inline RawTerm read_term(Cursor& cur) {
  RawTerm term;
  bool saw_factor = false;
  while (true) {
    cur.skip_ws();
    if (cur.pos < cur.line.size() && cur.line[cur.pos] == '-')
      cur.fail(errc::negative_coefficient, "negative values are not allowed");
    char c = cur.peek();
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::string lit = read_number(cur);
      try {
        term.coeff *= parse_rational_literal(lit);
      } catch (const Error&) {
        cur.fail(errc::syntax_error, "bad number literal '" + lit + "'");
      }
    } else if (ident_start(c)) {
      std::string name = read_ident(cur);
      int exponent = 1;
      if (cur.consume('^')) {
        std::string e = read_number(cur);
        if (e.find('.') != std::string::npos || e.find('/') != std::string::npos || e.empty())
          cur.fail(errc::syntax_error, "exponent must be a positive integer");
        exponent = std::stoi(e);
        if (exponent < 1) cur.fail(errc::syntax_error, "exponent must be >= 1");
      }
      term.powers[name] += exponent;
    } else {
      cur.fail(errc::syntax_error, "expected a coefficient or variable");
    }
    saw_factor = true;
    if (!cur.consume('*')) break;
  }
  if (!saw_factor) cur.fail(errc::syntax_error, "empty term");
  return term;
}

struct RawEquation {
  std::string lhs;
  std::vector<RawTerm> terms;
  int line_no;
};

}  // namespace parser_detail

inline SppSystem parse_system(const std::string& text) {
  using namespace parser_detail;
  std::vector<RawEquation> raw;
  std::vector<std::string> order;
  std::map<std::string, int> index;

  int line_no = 0;
  size_t start = 0;
  while (start <= text.size()) {
    size_t end = text.find('\n', start);
    std::string line =
        text.substr(start, end == std::string::npos ? std::string::npos : end - start);
    start = end == std::string::npos ? text.size() + 1 : end + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    Cursor cur{line, line_no};
    if (cur.done()) continue;

    RawEquation eq;
    eq.line_no = line_no;
    eq.lhs = read_ident(cur);
    if (!cur.consume('=')) cur.fail(errc::syntax_error, "expected '='");
    eq.terms.push_back(read_term(cur));
    while (!cur.done()) {
      cur.skip_ws();
      if (cur.pos < cur.line.size() && cur.line[cur.pos] == '-')
        cur.fail(errc::negative_coefficient, "negative values are not allowed");
      if (!cur.consume('+')) cur.fail(errc::syntax_error, "expected '+' between terms");
      eq.terms.push_back(read_term(cur));
    }
    if (index.count(eq.lhs))
      cur.fail(errc::syntax_error, "variable '" + eq.lhs + "' defined twice");
    index[eq.lhs] = static_cast<int>(order.size());
    order.push_back(eq.lhs);
    raw.push_back(std::move(eq));
  }

  SppSystem sys;
  sys.variables = order;
  for (const auto& eq : raw) {
    Polynomial poly;
    for (const auto& term : eq.terms) {
      std::map<int, int> powers;
      for (auto& [name, e] : term.powers) {
        auto it = index.find(name);
        if (it == index.end())
          raise(errc::unknown_variable, "variable '" + name + "' is never defined (line " +
                                            std::to_string(eq.line_no) + ")");
        powers[it->second] = e;
      }
      if (powers.empty())
        poly.add_constant(term.coeff);
      else
        poly.add_term(term.coeff, std::move(powers));
    }
    sys.equations.push_back(std::move(poly));
  }
  sys.validate();
  return sys;
}

}  // namespace sppfix
