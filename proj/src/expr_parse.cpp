// Recursive-descent parser for the expression grammar:
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := number | 'pi' | 'x' | '(' expr ')' | func '(' expr ')' | table '(' expr ')' | '-' factor
//   func   := 'sin' | 'cos' | 'abs'

#include <cctype>
#include <charconv>
#include <cmath>

#include "expr_detail.hpp"
#include "fif/expr.hpp"

namespace fif {
namespace {

using detail::NodePtr;
using detail::Op;

class Parser {
 public:
  Parser(std::string_view src, const TableRegistry& tables) : src_(src), tables_(tables) {}

  NodePtr parse() {
    NodePtr e = expr();
    skip_ws();
    if (pos_ != src_.size()) fail("unexpected '" + std::string(1, src_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError("syntax error: " + msg, pos_); }

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) {
      if (pos_ >= src_.size()) fail(std::string("expected '") + c + "' before end of input");
      fail(std::string("expected '") + c + "'");
    }
  }

  NodePtr expr() {
    NodePtr lhs = term();
    for (;;) {
      if (accept('+'))
        lhs = detail::make_binary(Op::add, lhs, term());
      else if (accept('-'))
        lhs = detail::make_binary(Op::sub, lhs, term());
      else
        return lhs;
    }
  }

  NodePtr term() {
    NodePtr lhs = factor();
    for (;;) {
      if (accept('*')) {
        lhs = detail::make_binary(Op::mul, lhs, factor());
      } else if (accept('/')) {
        const std::size_t at = pos_;
        NodePtr rhs = factor();
        if (detail::has_variable(*rhs))
          throw ParseError("syntax error: division by an x-dependent expression", at);
        if (detail::evaluate(*rhs, 0.0) == 0.0) throw ParseError("syntax error: division by zero", at);
        lhs = detail::make_binary(Op::div, lhs, rhs);
      } else {
        return lhs;
      }
    }
  }

  NodePtr factor() {
    skip_ws();
    if (pos_ >= src_.size()) fail("unexpected end of input");
    const char c = src_[pos_];
    if (c == '-') {
      ++pos_;
      return detail::make_unary(Op::neg, factor());
    }
    if (c == '(') {
      ++pos_;
      NodePtr e = expr();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    fail("unexpected '" + std::string(1, c) + "'");
  }

  NodePtr number() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() && (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.')) ++pos_;
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t p = pos_ + 1;
      if (p < src_.size() && (src_[p] == '+' || src_[p] == '-')) ++p;
      if (p < src_.size() && std::isdigit(static_cast<unsigned char>(src_[p]))) {
        pos_ = p;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      }
    }
    const std::string_view lexeme = src_.substr(start, pos_ - start);
    double value = 0.0;
    auto [end, ec] = std::from_chars(lexeme.data(), lexeme.data() + lexeme.size(), value);
    if (ec != std::errc() || end != lexeme.data() + lexeme.size() || !std::isfinite(value))
      throw ParseError("syntax error: malformed number '" + std::string(lexeme) + "'", start);
    return detail::make_number(value, std::string(lexeme));
  }

  NodePtr identifier() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) ++pos_;
    const std::string name(src_.substr(start, pos_ - start));
    if (name == "pi") return detail::make_pi();
    if (name == "x") return detail::make_variable();
    if (name == "sin" || name == "cos" || name == "abs") {
      expect('(');
      NodePtr arg = expr();
      expect(')');
      return detail::make_unary(name == "sin" ? Op::sin : name == "cos" ? Op::cos : Op::abs, arg);
    }
    if (auto it = tables_.find(name); it != tables_.end()) {
      expect('(');
      NodePtr arg = expr();
      expect(')');
      return detail::make_table(name, it->second, arg);
    }
    throw ParseError("unknown identifier '" + name + "'", start);
  }

  std::string_view src_;
  const TableRegistry& tables_;
  std::size_t pos_ = 0;
};

double signed_number(std::string_view src, std::size_t& pos) {
  while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) ++pos;
  const std::size_t start = pos;
  if (pos < src.size() && (src[pos] == '-' || src[pos] == '+')) ++pos;
  while (pos < src.size() && (std::isdigit(static_cast<unsigned char>(src[pos])) || src[pos] == '.' ||
                              src[pos] == 'e' || src[pos] == 'E' ||
                              ((src[pos] == '-' || src[pos] == '+') && (src[pos - 1] == 'e' || src[pos - 1] == 'E'))))
    ++pos;
  std::string_view lexeme = src.substr(start, pos - start);
  if (!lexeme.empty() && lexeme.front() == '+') lexeme.remove_prefix(1);
  double value = 0.0;
  auto [end, ec] = std::from_chars(lexeme.data(), lexeme.data() + lexeme.size(), value);
  if (lexeme.empty() || ec != std::errc() || end != lexeme.data() + lexeme.size())
    throw ParseError("table: malformed number", start);
  return value;
}

}  // namespace

std::shared_ptr<const PiecewiseTable> parse_table(std::string_view src) {
  std::vector<double> xs, ys;
  std::size_t pos = 0;
  auto skip = [&] {
    while (pos < src.size() && (std::isspace(static_cast<unsigned char>(src[pos])) || src[pos] == ',')) ++pos;
  };
  for (skip(); pos < src.size(); skip()) {
    const std::size_t pair_start = pos;
    if (src[pos] != '(') throw ParseError("table: expected '('", pos);
    ++pos;
    const double x = signed_number(src, pos);
    while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) ++pos;
    if (pos >= src.size() || src[pos] != ',') throw ParseError("table: expected ','", pos);
    ++pos;
    const double y = signed_number(src, pos);
    while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) ++pos;
    if (pos >= src.size() || src[pos] != ')') throw ParseError("table: expected ')'", pos);
    ++pos;
    if (!xs.empty() && !(x > xs.back()))
      throw ParseError("table: abscissae must be strictly increasing", pair_start);
    xs.push_back(x);
    ys.push_back(y);
  }
  if (xs.size() < 2) throw ParseError("table: at least two (x, y) pairs required", pos);
  return std::make_shared<const PiecewiseTable>(std::move(xs), std::move(ys));
}

ExprFunction parse_expr(std::string_view source, const TableRegistry& tables) {
  return ExprFunction(Parser(source, tables).parse());
}

}  // namespace fif
