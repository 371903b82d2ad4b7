#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>

#include "qbat/errors.hpp"

namespace qbat::expr {

enum class NodeKind { Number, Symbol, Neg, Add, Sub, Mul, Div, Pow, Call };

enum class FuncId { Sin, Cos, Tan, Sqrt, Abs, Exp, Ln };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

/// Immutable expression tree. Binary nodes use lhs/rhs; Neg and Call use lhs.
struct Node {
    NodeKind kind;
    double number = 0.0;      // Number
    std::string symbol;       // Symbol
    FuncId func = FuncId::Sin;  // Call
    NodePtr lhs;
    NodePtr rhs;
};

NodePtr make_number(double v);
NodePtr make_symbol(std::string name);
NodePtr make_unary(NodeKind kind, NodePtr operand);  // Neg
NodePtr make_binary(NodeKind kind, NodePtr lhs, NodePtr rhs);
NodePtr make_call(FuncId f, NodePtr arg);

const char* func_name(FuncId f);

/// Parses an arithmetic expression over "k" and named parameters.
/// Precedence: ^ binds tighter than unary minus, then * /, then + -.
/// + - * / associate left, ^ associates right. Throws ParseError with the
/// byte offset of the offending token.
NodePtr parse_expression(std::string_view text);

using Params = std::map<std::string, double>;

/// Tree-walking evaluation at momentum k; the symbol "k" resolves to the
/// momentum, every other symbol to an entry of params. Throws
/// UnboundSymbolError for a symbol missing from params and EvalError for
/// domain failures (x/0, ln(x<=0), sqrt(x<0), non-integer powers of
/// negative bases).
double evaluate(const Node& ast, double k, const Params& params);

/// Fully parenthesized rendering; parse(to_string(ast)) reproduces the tree.
std::string to_string(const Node& ast);

/// Every distinct symbol referenced by the tree.
std::set<std::string> free_symbols(const Node& ast);

/// Structural equality (kinds, bit-identical literals, symbols, shape).
bool equal(const Node& a, const Node& b);

}  // namespace qbat::expr
