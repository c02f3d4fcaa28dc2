#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fif/expr.hpp"

namespace fif::detail {

enum class Op { number, pi, variable, add, sub, mul, div, neg, sin, cos, abs, table };

struct Node {
  Op op = Op::number;
  double value = 0.0;
  std::string text;  // number lexeme or table name
  std::shared_ptr<const Node> lhs;
  std::shared_ptr<const Node> rhs;
  std::shared_ptr<const PiecewiseTable> table;
};

using NodePtr = std::shared_ptr<const Node>;

NodePtr make_number(double value, std::string lexeme = {});
NodePtr make_pi();
NodePtr make_variable();
NodePtr make_binary(Op op, NodePtr lhs, NodePtr rhs);
NodePtr make_unary(Op op, NodePtr child);
NodePtr make_table(std::string name, std::shared_ptr<const PiecewiseTable> table, NodePtr arg);

bool has_variable(const Node& n);
double evaluate(const Node& n, double x);

/// Postfix program evaluated on a small value stack.
struct Instr {
  Op op;
  double value;
  const PiecewiseTable* table;
};

struct Program {
  std::vector<Instr> code;
  std::size_t stack_depth = 0;

  double operator()(double x) const;
};

Program compile(const Node& root);

std::optional<TrigAffine> trig_affine_form(const Node& n);
bool piecewise_linear_form(const Node& n);

struct Impl {
  NodePtr root;
  Program program;
  std::optional<TrigAffine> trig;
  bool pwl = false;
  bool analytic = false;
  bool has_x = false;
};

std::shared_ptr<const Impl> make_impl(NodePtr root);

}  // namespace fif::detail
