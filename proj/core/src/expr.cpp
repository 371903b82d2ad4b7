#include "qbat/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <utility>

namespace qbat::expr {

NodePtr make_number(double v) {
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::Number;
    n->number = v;
    return n;
}

NodePtr make_symbol(std::string name) {
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::Symbol;
    n->symbol = std::move(name);
    return n;
}

NodePtr make_unary(NodeKind kind, NodePtr operand) {
    auto n = std::make_shared<Node>();
    n->kind = kind;
    n->lhs = std::move(operand);
    return n;
}

NodePtr make_binary(NodeKind kind, NodePtr lhs, NodePtr rhs) {
    auto n = std::make_shared<Node>();
    n->kind = kind;
    n->lhs = std::move(lhs);
    n->rhs = std::move(rhs);
    return n;
}

NodePtr make_call(FuncId f, NodePtr arg) {
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::Call;
    n->func = f;
    n->lhs = std::move(arg);
    return n;
}

const char* func_name(FuncId f) {
    switch (f) {
        case FuncId::Sin: return "sin";
        case FuncId::Cos: return "cos";
        case FuncId::Tan: return "tan";
        case FuncId::Sqrt: return "sqrt";
        case FuncId::Abs: return "abs";
        case FuncId::Exp: return "exp";
        case FuncId::Ln: return "ln";
    }
    return "?";
}

namespace {

bool lookup_func(const std::string& name, FuncId& out) {
    if (name == "sin") { out = FuncId::Sin; return true; }
    if (name == "cos") { out = FuncId::Cos; return true; }
    if (name == "tan") { out = FuncId::Tan; return true; }
    if (name == "sqrt") { out = FuncId::Sqrt; return true; }
    if (name == "abs") { out = FuncId::Abs; return true; }
    if (name == "exp") { out = FuncId::Exp; return true; }
    if (name == "ln") { out = FuncId::Ln; return true; }
    return false;
}

struct Parser {
    std::string_view text;
    std::size_t pos = 0;

    void skip_ws() {
        while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
    }

    bool at_end() {
        skip_ws();
        return pos >= text.size();
    }

    char peek() {
        skip_ws();
        return pos < text.size() ? text[pos] : '\0';
    }

    [[noreturn]] void fail(const std::string& msg, std::size_t at) {
        throw ParseError(msg + " at offset " + std::to_string(at), at);
    }

    NodePtr parse_sum() {
        NodePtr lhs = parse_product();
        for (;;) {
            char c = peek();
            if (c == '+' || c == '-') {
                ++pos;
                NodePtr rhs = parse_product();
                lhs = make_binary(c == '+' ? NodeKind::Add : NodeKind::Sub,
                                  std::move(lhs), std::move(rhs));
            } else {
                return lhs;
            }
        }
    }

    NodePtr parse_product() {
        NodePtr lhs = parse_unary();
        for (;;) {
            char c = peek();
            if (c == '*' || c == '/') {
                ++pos;
                NodePtr rhs = parse_unary();
                lhs = make_binary(c == '*' ? NodeKind::Mul : NodeKind::Div,
                                  std::move(lhs), std::move(rhs));
            } else {
                return lhs;
            }
        }
    }

    NodePtr parse_unary() {
        if (peek() == '-') {
            ++pos;
            return make_unary(NodeKind::Neg, parse_unary());
        }
        return parse_power();
    }

    // '^' is right-associative and binds tighter than unary minus; the
    // exponent may carry its own sign, as in 2^-3.
    NodePtr parse_power() {
        NodePtr base = parse_primary();
        if (peek() == '^') {
            ++pos;
            return make_binary(NodeKind::Pow, std::move(base), parse_unary());
        }
        return base;
    }

    NodePtr parse_primary() {
        skip_ws();
        if (pos >= text.size()) fail("unexpected end of input", pos);
        char c = text[pos];

        if (c == '(') {
            ++pos;
            NodePtr inner = parse_sum();
            if (peek() != ')') fail("unbalanced parenthesis", pos);
            ++pos;
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            return parse_number();
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            return parse_ident();
        }
        fail(std::string("unknown token '") + c + "'", pos);
    }

    NodePtr parse_number() {
        std::size_t start = pos;
        while (pos < text.size() &&
               (std::isdigit(static_cast<unsigned char>(text[pos])) || text[pos] == '.')) {
            ++pos;
        }
        if (pos < text.size() && (text[pos] == 'e' || text[pos] == 'E')) {
            std::size_t mark = pos;
            ++pos;
            if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) ++pos;
            if (pos >= text.size() || !std::isdigit(static_cast<unsigned char>(text[pos]))) {
                pos = mark;  // 'e' belongs to a following identifier, not this literal
            } else {
                while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
            }
        }
        std::string lit(text.substr(start, pos - start));
        char* end = nullptr;
        double v = std::strtod(lit.c_str(), &end);
        if (end == lit.c_str() || *end != '\0') fail("malformed number '" + lit + "'", start);
        return make_number(v);
    }

    NodePtr parse_ident() {
        std::size_t start = pos;
        while (pos < text.size() &&
               (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_')) {
            ++pos;
        }
        std::string name(text.substr(start, pos - start));
        if (peek() == '(') {
            FuncId f;
            if (!lookup_func(name, f)) fail("unknown function '" + name + "'", start);
            ++pos;
            NodePtr arg = parse_sum();
            if (peek() != ')') fail("unbalanced parenthesis", pos);
            ++pos;
            return make_call(f, std::move(arg));
        }
        return make_symbol(std::move(name));
    }
};

}  // namespace

NodePtr parse_expression(std::string_view text) {
    Parser p{text};
    if (p.at_end()) throw ParseError("empty expression", 0);
    NodePtr ast = p.parse_sum();
    if (!p.at_end()) p.fail("trailing input", p.pos);
    return ast;
}

double evaluate(const Node& ast, double k, const Params& params) {
    switch (ast.kind) {
        case NodeKind::Number:
            return ast.number;
        case NodeKind::Symbol: {
            if (ast.symbol == "k") return k;
            auto it = params.find(ast.symbol);
            if (it == params.end()) throw UnboundSymbolError(ast.symbol);
            return it->second;
        }
        case NodeKind::Neg:
            return -evaluate(*ast.lhs, k, params);
        case NodeKind::Add:
            return evaluate(*ast.lhs, k, params) + evaluate(*ast.rhs, k, params);
        case NodeKind::Sub:
            return evaluate(*ast.lhs, k, params) - evaluate(*ast.rhs, k, params);
        case NodeKind::Mul:
            return evaluate(*ast.lhs, k, params) * evaluate(*ast.rhs, k, params);
        case NodeKind::Div: {
            double num = evaluate(*ast.lhs, k, params);
            double den = evaluate(*ast.rhs, k, params);
            if (den == 0.0) throw EvalError("division by zero");
            return num / den;
        }
        case NodeKind::Pow: {
            double base = evaluate(*ast.lhs, k, params);
            double exp = evaluate(*ast.rhs, k, params);
            if (base < 0.0 && exp != std::floor(exp)) {
                throw EvalError("non-integer power of a negative base");
            }
            return std::pow(base, exp);
        }
        case NodeKind::Call: {
            double x = evaluate(*ast.lhs, k, params);
            switch (ast.func) {
                case FuncId::Sin: return std::sin(x);
                case FuncId::Cos: return std::cos(x);
                case FuncId::Tan: return std::tan(x);
                case FuncId::Sqrt:
                    if (x < 0.0) throw EvalError("sqrt of a negative value");
                    return std::sqrt(x);
                case FuncId::Abs: return std::fabs(x);
                case FuncId::Exp: return std::exp(x);
                case FuncId::Ln:
                    if (x <= 0.0) throw EvalError("ln of a non-positive value");
                    return std::log(x);
            }
            throw EvalError("unknown function id");
        }
    }
    throw EvalError("malformed expression tree");
}

namespace {

std::string number_literal(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void print_node(const Node& n, std::string& out) {
    switch (n.kind) {
        case NodeKind::Number:
            out += number_literal(n.number);
            return;
        case NodeKind::Symbol:
            out += n.symbol;
            return;
        case NodeKind::Neg:
            out += "(-";
            print_node(*n.lhs, out);
            out += ')';
            return;
        case NodeKind::Call:
            out += func_name(n.func);
            out += '(';
            print_node(*n.lhs, out);
            out += ')';
            return;
        default: {
            char op = '?';
            switch (n.kind) {
                case NodeKind::Add: op = '+'; break;
                case NodeKind::Sub: op = '-'; break;
                case NodeKind::Mul: op = '*'; break;
                case NodeKind::Div: op = '/'; break;
                case NodeKind::Pow: op = '^'; break;
                default: break;
            }
            out += '(';
            print_node(*n.lhs, out);
            out += op;
            print_node(*n.rhs, out);
            out += ')';
            return;
        }
    }
}

}  // namespace

std::string to_string(const Node& ast) {
    std::string out;
    print_node(ast, out);
    return out;
}

namespace {

void collect_symbols(const Node& n, std::set<std::string>& out) {
    if (n.kind == NodeKind::Symbol) out.insert(n.symbol);
    if (n.lhs) collect_symbols(*n.lhs, out);
    if (n.rhs) collect_symbols(*n.rhs, out);
}

}  // namespace

std::set<std::string> free_symbols(const Node& ast) {
    std::set<std::string> out;
    collect_symbols(ast, out);
    return out;
}

bool equal(const Node& a, const Node& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case NodeKind::Number: {
            // bit-level comparison so that (0.0, -0.0) and NaN payloads count
            return a.number == b.number &&
                   std::signbit(a.number) == std::signbit(b.number);
        }
        case NodeKind::Symbol:
            return a.symbol == b.symbol;
        case NodeKind::Neg:
            return equal(*a.lhs, *b.lhs);
        case NodeKind::Call:
            return a.func == b.func && equal(*a.lhs, *b.lhs);
        default:
            return equal(*a.lhs, *b.lhs) && equal(*a.rhs, *b.rhs);
    }
}

}  // namespace qbat::expr
