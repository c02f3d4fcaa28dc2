#include "fif/expr.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "expr_detail.hpp"

namespace fif {
namespace detail {

namespace {

std::string shortest_repr(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc()) throw std::logic_error("cannot format constant");
  return std::string(buf, end);
}

bool is_binary(Op op) {
  return op == Op::add || op == Op::sub || op == Op::mul || op == Op::div;
}

int precedence(const Node& n) {
  switch (n.op) {
    case Op::add:
    case Op::sub:
      return 1;
    case Op::mul:
    case Op::div:
      return 2;
    case Op::neg:
      return 3;
    default:
      return 4;
  }
}

void print(const Node& n, std::string& out);

void print_operand(const Node& child, int min_prec, std::string& out) {
  if (precedence(child) < min_prec) {
    out += '(';
    print(child, out);
    out += ')';
  } else {
    print(child, out);
  }
}

void print(const Node& n, std::string& out) {
  switch (n.op) {
    case Op::number:
      out += n.text;
      return;
    case Op::pi:
      out += "pi";
      return;
    case Op::variable:
      out += 'x';
      return;
    case Op::add:
    case Op::sub:
    case Op::mul:
    case Op::div: {
      const int p = precedence(n);
      print_operand(*n.lhs, p, out);
      out += n.op == Op::add ? " + " : n.op == Op::sub ? " - " : n.op == Op::mul ? " * " : " / ";
      // left-associative grammar: a right operand of equal precedence needs parentheses
      print_operand(*n.rhs, p + 1, out);
      return;
    }
    case Op::neg:
      out += '-';
      print_operand(*n.lhs, 3, out);
      return;
    case Op::sin:
    case Op::cos:
    case Op::abs:
      out += n.op == Op::sin ? "sin(" : n.op == Op::cos ? "cos(" : "abs(";
      print(*n.lhs, out);
      out += ')';
      return;
    case Op::table:
      out += n.text;
      out += '(';
      print(*n.lhs, out);
      out += ')';
      return;
  }
}

void emit(const Node& n, Program& p, std::size_t depth) {
  p.stack_depth = std::max(p.stack_depth, depth + 1);
  switch (n.op) {
    case Op::number:
    case Op::pi:
      p.code.push_back({Op::number, n.value, nullptr});
      return;
    case Op::variable:
      p.code.push_back({Op::variable, 0.0, nullptr});
      return;
    case Op::add:
    case Op::sub:
    case Op::mul:
    case Op::div:
      emit(*n.lhs, p, depth);
      emit(*n.rhs, p, depth + 1);
      p.code.push_back({n.op, 0.0, nullptr});
      return;
    case Op::neg:
    case Op::sin:
    case Op::cos:
    case Op::abs:
      emit(*n.lhs, p, depth);
      p.code.push_back({n.op, 0.0, nullptr});
      return;
    case Op::table:
      emit(*n.lhs, p, depth);
      p.code.push_back({Op::table, 0.0, n.table.get()});
      return;
  }
}

bool has_table_or_abs(const Node& n) {
  if (n.op == Op::abs || n.op == Op::table) return true;
  if (n.lhs && has_table_or_abs(*n.lhs)) return true;
  if (n.rhs && has_table_or_abs(*n.rhs)) return true;
  return false;
}

NodePtr substitute_node(const NodePtr& n, const NodePtr& inner) {
  switch (n->op) {
    case Op::variable:
      return inner;
    case Op::number:
    case Op::pi:
      return n;
    case Op::add:
    case Op::sub:
    case Op::mul:
    case Op::div:
      return make_binary(n->op, substitute_node(n->lhs, inner), substitute_node(n->rhs, inner));
    case Op::table:
      return make_table(n->text, n->table, substitute_node(n->lhs, inner));
    default:
      return make_unary(n->op, substitute_node(n->lhs, inner));
  }
}

bool same_node(const Node& a, const Node& b) {
  if (a.op != b.op) return false;
  switch (a.op) {
    case Op::number:
      return a.value == b.value;
    case Op::pi:
    case Op::variable:
      return true;
    case Op::table:
      return a.text == b.text && same_node(*a.lhs, *b.lhs);
    default:
      if (!same_node(*a.lhs, *b.lhs)) return false;
      return !is_binary(a.op) || same_node(*a.rhs, *b.rhs);
  }
}

}  // namespace

NodePtr make_number(double value, std::string lexeme) {
  if (!std::isfinite(value)) throw std::invalid_argument("non-finite constant");
  auto n = std::make_shared<Node>();
  n->op = Op::number;
  n->value = value;
  n->text = lexeme.empty() ? shortest_repr(value) : std::move(lexeme);
  return n;
}

NodePtr make_pi() {
  auto n = std::make_shared<Node>();
  n->op = Op::pi;
  n->value = std::numbers::pi;
  return n;
}

NodePtr make_variable() {
  auto n = std::make_shared<Node>();
  n->op = Op::variable;
  return n;
}

NodePtr make_binary(Op op, NodePtr lhs, NodePtr rhs) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return n;
}

NodePtr make_unary(Op op, NodePtr child) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->lhs = std::move(child);
  return n;
}

NodePtr make_table(std::string name, std::shared_ptr<const PiecewiseTable> table, NodePtr arg) {
  auto n = std::make_shared<Node>();
  n->op = Op::table;
  n->text = std::move(name);
  n->table = std::move(table);
  n->lhs = std::move(arg);
  return n;
}

bool has_variable(const Node& n) {
  if (n.op == Op::variable) return true;
  if (n.lhs && has_variable(*n.lhs)) return true;
  if (n.rhs && has_variable(*n.rhs)) return true;
  return false;
}

double evaluate(const Node& n, double x) {
  switch (n.op) {
    case Op::number:
    case Op::pi:
      return n.value;
    case Op::variable:
      return x;
    case Op::add:
      return evaluate(*n.lhs, x) + evaluate(*n.rhs, x);
    case Op::sub:
      return evaluate(*n.lhs, x) - evaluate(*n.rhs, x);
    case Op::mul:
      return evaluate(*n.lhs, x) * evaluate(*n.rhs, x);
    case Op::div:
      return evaluate(*n.lhs, x) / evaluate(*n.rhs, x);
    case Op::neg:
      return -evaluate(*n.lhs, x);
    case Op::sin:
      return std::sin(evaluate(*n.lhs, x));
    case Op::cos:
      return std::cos(evaluate(*n.lhs, x));
    case Op::abs:
      return std::abs(evaluate(*n.lhs, x));
    case Op::table:
      return (*n.table)(evaluate(*n.lhs, x));
  }
  return 0.0;
}

double Program::operator()(double x) const {
  double local[32] = {};
  std::vector<double> heap;
  double* stack = local;
  if (stack_depth > 32) {
    heap.resize(stack_depth);
    stack = heap.data();
  }
  std::size_t top = 0;
  for (const Instr& in : code) {
    switch (in.op) {
      case Op::number:
        stack[top++] = in.value;
        break;
      case Op::variable:
        stack[top++] = x;
        break;
      case Op::add:
        --top;
        stack[top - 1] += stack[top];
        break;
      case Op::sub:
        --top;
        stack[top - 1] -= stack[top];
        break;
      case Op::mul:
        --top;
        stack[top - 1] *= stack[top];
        break;
      case Op::div:
        --top;
        stack[top - 1] /= stack[top];
        break;
      case Op::neg:
        stack[top - 1] = -stack[top - 1];
        break;
      case Op::sin:
        stack[top - 1] = std::sin(stack[top - 1]);
        break;
      case Op::cos:
        stack[top - 1] = std::cos(stack[top - 1]);
        break;
      case Op::abs:
        stack[top - 1] = std::abs(stack[top - 1]);
        break;
      case Op::table:
        stack[top - 1] = (*in.table)(stack[top - 1]);
        break;
      case Op::pi:
        break;
    }
  }
  return stack[0];
}

Program compile(const Node& root) {
  Program p;
  emit(root, p, 0);
  return p;
}

std::shared_ptr<const Impl> make_impl(NodePtr root) {
  auto impl = std::make_shared<Impl>();
  impl->program = compile(*root);
  impl->has_x = has_variable(*root);
  impl->analytic = !has_table_or_abs(*root);
  impl->trig = trig_affine_form(*root);
  impl->pwl = piecewise_linear_form(*root);
  impl->root = std::move(root);
  return impl;
}

}  // namespace detail

PiecewiseTable::PiecewiseTable(std::vector<double> x, std::vector<double> y)
    : xs(std::move(x)), ys(std::move(y)) {
  if (xs.size() != ys.size() || xs.size() < 2)
    throw ConfigError("piecewise table needs at least two (x, y) pairs");
  for (std::size_t i = 1; i < xs.size(); ++i)
    if (!(xs[i] > xs[i - 1])) throw ConfigError("piecewise table abscissae must be strictly increasing");
}

double PiecewiseTable::operator()(double x) const {
  if (x <= xs.front()) return ys.front();
  if (x >= xs.back()) return ys.back();
  const auto it = std::upper_bound(xs.begin(), xs.end(), x);
  const std::size_t i = static_cast<std::size_t>(it - xs.begin());
  const double t = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
  return ys[i - 1] + t * (ys[i] - ys[i - 1]);
}

double PiecewiseTable::max_abs_slope() const {
  double m = 0.0;
  for (std::size_t i = 1; i < xs.size(); ++i)
    m = std::max(m, std::abs((ys[i] - ys[i - 1]) / (xs[i] - xs[i - 1])));
  return m;
}

double TrigAffine::operator()(double x) const {
  double v = constant + slope * x;
  for (const Harmonic& h : harmonics) v += h.amplitude * std::sin(h.frequency * x + h.phase);
  return v;
}

ExprFunction::ExprFunction() : ExprFunction(detail::make_number(0.0)) {}

ExprFunction::ExprFunction(std::shared_ptr<const detail::Node> root)
    : impl_(detail::make_impl(std::move(root))) {}

ExprFunction ExprFunction::constant(double value) {
  if (value < 0.0) return ExprFunction(detail::make_unary(detail::Op::neg, detail::make_number(-value)));
  return ExprFunction(detail::make_number(value));
}

ExprFunction ExprFunction::variable() { return ExprFunction(detail::make_variable()); }

ExprFunction ExprFunction::table(std::string name, std::shared_ptr<const PiecewiseTable> table) {
  return ExprFunction(detail::make_table(std::move(name), std::move(table), detail::make_variable()));
}

double ExprFunction::operator()(double x) const { return impl_->program(x); }

std::string ExprFunction::to_string() const {
  std::string out;
  detail::print(*impl_->root, out);
  return out;
}

bool ExprFunction::depends_on_x() const { return impl_->has_x; }

ExprFunction ExprFunction::substitute(const ExprFunction& inner) const {
  return ExprFunction(detail::substitute_node(impl_->root, inner.impl_->root));
}

const std::optional<TrigAffine>& ExprFunction::trig_affine() const { return impl_->trig; }

bool ExprFunction::is_piecewise_linear() const { return impl_->pwl; }

bool ExprFunction::is_analytic() const { return impl_->analytic; }

const detail::Node& ExprFunction::node() const { return *impl_->root; }

ExprFunction operator+(const ExprFunction& a, const ExprFunction& b) {
  return ExprFunction(detail::make_binary(detail::Op::add, a.impl_->root, b.impl_->root));
}

ExprFunction operator-(const ExprFunction& a, const ExprFunction& b) {
  return ExprFunction(detail::make_binary(detail::Op::sub, a.impl_->root, b.impl_->root));
}

ExprFunction operator*(const ExprFunction& a, const ExprFunction& b) {
  return ExprFunction(detail::make_binary(detail::Op::mul, a.impl_->root, b.impl_->root));
}

ExprFunction operator-(const ExprFunction& a) {
  return ExprFunction(detail::make_unary(detail::Op::neg, a.impl_->root));
}

ExprFunction abs(const ExprFunction& a) {
  return ExprFunction(detail::make_unary(detail::Op::abs, a.impl_->root));
}

bool same_tree(const ExprFunction& a, const ExprFunction& b) {
  return detail::same_node(a.node(), b.node());
}

}  // namespace fif
