#include "asymint/exprlang.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "asymint/errors.hpp"

namespace asymint {
namespace {

using Kind = FunctionExpr::Kind;
using NodePtr = std::shared_ptr<const FunctionExpr::Node>;

NodePtr make(Kind kind, NodePtr lhs = nullptr, NodePtr rhs = nullptr, double value = 0.0) {
  return std::make_shared<const FunctionExpr::Node>(FunctionExpr::Node{kind, value, std::move(lhs), std::move(rhs)});
}

// expr    := term (('+'|'-') term)*
// term    := unary (('*'|'/') unary)*
// unary   := '-' unary | '+' unary | power
// power   := primary ('^' unary)?
// primary := number | 't' | func '(' expr ')' | '(' expr ')'
class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  NodePtr run() {
    skip_ws();
    if (pos_ == text_.size()) throw SyntaxError(pos_, "empty expression");
    NodePtr e = expr();
    skip_ws();
    if (pos_ != text_.size()) throw SyntaxError(pos_, std::string("unexpected '") + text_[pos_] + "'");
    return e;
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!accept(c)) {
      if (pos_ == text_.size()) throw SyntaxError(pos_, std::string("expected '") + c + "' before end of input");
      throw SyntaxError(pos_, std::string("expected '") + c + "'");
    }
  }

  NodePtr expr() {
    NodePtr lhs = term();
    for (;;) {
      if (accept('+')) lhs = make(Kind::Add, lhs, term());
      else if (accept('-')) lhs = make(Kind::Sub, lhs, term());
      else return lhs;
    }
  }
  NodePtr term() {
    NodePtr lhs = unary();
    for (;;) {
      if (accept('*')) lhs = make(Kind::Mul, lhs, unary());
      else if (accept('/')) lhs = make(Kind::Div, lhs, unary());
      else return lhs;
    }
  }
  NodePtr unary() {
    if (accept('-')) return make(Kind::Neg, unary());
    if (accept('+')) return unary();
    return power();
  }
  NodePtr power() {
    NodePtr base = primary();
    if (accept('^')) return make(Kind::Pow, base, unary());
    return base;
  }
  NodePtr primary() {
    skip_ws();
    if (pos_ == text_.size()) throw SyntaxError(pos_, "expected expression before end of input");
    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    if (accept('(')) {
      NodePtr e = expr();
      expect(')');
      return e;
    }
    throw SyntaxError(pos_, std::string("unexpected '") + c + "'");
  }
  NodePtr number() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.')) ++pos_;
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t p = pos_ + 1;
      if (p < text_.size() && (text_[p] == '+' || text_[p] == '-')) ++p;
      if (p < text_.size() && std::isdigit(static_cast<unsigned char>(text_[p]))) {
        pos_ = p;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      }
    }
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, v);
    if (ec == std::errc::result_out_of_range) throw Error(Errc::Overflow, "numeric literal out of range at position " + std::to_string(start));
    if (ec != std::errc() || ptr != text_.data() + pos_) throw SyntaxError(start, "malformed number");
    return make(Kind::Number, nullptr, nullptr, v);
  }
  NodePtr identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) ++pos_;
    const std::string_view name = text_.substr(start, pos_ - start);
    if (name == "t") return make(Kind::Var);
    Kind fn;
    if (name == "exp") fn = Kind::Exp;
    else if (name == "log") fn = Kind::Log;
    else if (name == "sin") fn = Kind::Sin;
    else if (name == "cos") fn = Kind::Cos;
    else if (name == "abs") fn = Kind::Abs;
    else throw Error(Errc::UnknownIdentifier, "'" + std::string(name) + "' at position " + std::to_string(start));
    expect('(');
    NodePtr arg = expr();
    expect(')');
    return make(fn, arg);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

[[noreturn]] void domain_error(const char* what, double t) {
  std::ostringstream msg;
  msg.precision(17);
  msg << what << " at t=" << t;
  throw Error(Errc::DomainError, msg.str());
}

double checked(double v, double t) {
  if (std::isnan(v)) domain_error("result is not a number", t);
  if (std::isinf(v)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "result overflows at t=" << t;
    throw Error(Errc::Overflow, msg.str());
  }
  return v;
}

double evaluate(const FunctionExpr::Node& n, double t) {
  switch (n.kind) {
    case Kind::Number: return n.value;
    case Kind::Var: return t;
    case Kind::Neg: return -evaluate(*n.lhs, t);
    case Kind::Add: return checked(evaluate(*n.lhs, t) + evaluate(*n.rhs, t), t);
    case Kind::Sub: return checked(evaluate(*n.lhs, t) - evaluate(*n.rhs, t), t);
    case Kind::Mul: return checked(evaluate(*n.lhs, t) * evaluate(*n.rhs, t), t);
    case Kind::Div: {
      const double den = evaluate(*n.rhs, t);
      if (den == 0.0) domain_error("division by zero", t);
      return checked(evaluate(*n.lhs, t) / den, t);
    }
    case Kind::Pow: {
      const double base = evaluate(*n.lhs, t);
      const double ex = evaluate(*n.rhs, t);
      if (base == 0.0 && ex < 0.0) domain_error("zero raised to a negative power", t);
      if (base < 0.0 && ex != std::floor(ex)) domain_error("negative base with non-integer exponent", t);
      return checked(std::pow(base, ex), t);
    }
    case Kind::Exp: return checked(std::exp(evaluate(*n.lhs, t)), t);
    case Kind::Log: {
      const double x = evaluate(*n.lhs, t);
      if (!(x > 0.0)) domain_error("log of a nonpositive value", t);
      return std::log(x);
    }
    case Kind::Sin: return std::sin(evaluate(*n.lhs, t));
    case Kind::Cos: return std::cos(evaluate(*n.lhs, t));
    case Kind::Abs: return std::abs(evaluate(*n.lhs, t));
  }
  return 0.0;
}

const char* function_name(Kind k) {
  switch (k) {
    case Kind::Exp: return "exp";
    case Kind::Log: return "log";
    case Kind::Sin: return "sin";
    case Kind::Cos: return "cos";
    case Kind::Abs: return "abs";
    default: return "";
  }
}

const char* structure_name(Kind k) {
  switch (k) {
    case Kind::Neg: return "Neg";
    case Kind::Add: return "Add";
    case Kind::Sub: return "Sub";
    case Kind::Mul: return "Mul";
    case Kind::Div: return "Div";
    case Kind::Pow: return "Pow";
    case Kind::Exp: return "Exp";
    case Kind::Log: return "Log";
    case Kind::Sin: return "Sin";
    case Kind::Cos: return "Cos";
    case Kind::Abs: return "Abs";
    default: return "";
  }
}

std::string format_number(double v, int digits) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

void print(const FunctionExpr::Node& n, std::string& out) {
  switch (n.kind) {
    case Kind::Number: out += format_number(n.value, 17); return;
    case Kind::Var: out += 't'; return;
    case Kind::Neg:
      out += "(-";
      print(*n.lhs, out);
      out += ')';
      return;
    case Kind::Add:
    case Kind::Sub:
    case Kind::Mul:
    case Kind::Div:
    case Kind::Pow: {
      static constexpr char ops[] = {'+', '-', '*', '/', '^'};
      out += '(';
      print(*n.lhs, out);
      out += ops[static_cast<int>(n.kind) - static_cast<int>(Kind::Add)];
      print(*n.rhs, out);
      out += ')';
      return;
    }
    default:
      out += function_name(n.kind);
      out += '(';
      print(*n.lhs, out);
      out += ')';
  }
}

void print_structure(const FunctionExpr::Node& n, std::string& out) {
  if (n.kind == Kind::Number) {
    out += format_number(n.value, 15);
    return;
  }
  if (n.kind == Kind::Var) {
    out += 't';
    return;
  }
  out += structure_name(n.kind);
  out += '(';
  print_structure(*n.lhs, out);
  if (n.rhs) {
    out += ", ";
    print_structure(*n.rhs, out);
  }
  out += ')';
}

bool same(const FunctionExpr::Node& a, const FunctionExpr::Node& b) {
  if (a.kind != b.kind) return false;
  if (a.kind == Kind::Number) return a.value == b.value;
  if (static_cast<bool>(a.lhs) != static_cast<bool>(b.lhs) || static_cast<bool>(a.rhs) != static_cast<bool>(b.rhs))
    return false;
  return (!a.lhs || same(*a.lhs, *b.lhs)) && (!a.rhs || same(*a.rhs, *b.rhs));
}

}  // namespace

FunctionExpr::FunctionExpr() : root_(make(Kind::Number)), source_("0") {}

FunctionExpr::FunctionExpr(std::shared_ptr<const Node> root, std::string source)
    : root_(std::move(root)), source_(std::move(source)) {}

FunctionExpr FunctionExpr::parse(std::string_view text) {
  return FunctionExpr(Parser(text).run(), std::string(text));
}

FunctionExpr FunctionExpr::constant(double value) {
  return FunctionExpr(make(Kind::Number, nullptr, nullptr, value), format_number(value, 17));
}

double FunctionExpr::operator()(double t) const { return checked(evaluate(*root_, t), t); }

std::string FunctionExpr::to_string() const {
  std::string out;
  print(*root_, out);
  return out;
}

std::string FunctionExpr::structure() const {
  std::string out;
  print_structure(*root_, out);
  return out;
}

bool FunctionExpr::is_zero() const noexcept { return root_->kind == Kind::Number && root_->value == 0.0; }

bool same_structure(const FunctionExpr& a, const FunctionExpr& b) { return same(a.root(), b.root()); }

}  // namespace asymint
