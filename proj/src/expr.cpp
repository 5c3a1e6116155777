#include "subcurv/expr.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <functional>

namespace subcurv {

using detail::Node;
using detail::NodePtr;

// ---------------------------------------------------------------- tables ---

std::shared_ptr<const VariableTable> VariableTable::create(
    std::vector<std::string> names) {
  auto t = std::shared_ptr<VariableTable>(new VariableTable());
  t->names_ = std::move(names);
  for (std::size_t i = 0; i < t->names_.size(); ++i) {
    auto [it, fresh] = t->index_.emplace(t->names_[i], int(i));
    if (!fresh)
      throw ConfigError("duplicate variable name '" + t->names_[i] + "'");
  }
  return t;
}

int VariableTable::index_of(std::string_view name) const {
  auto it = index_.find(std::string(name));
  return it == index_.end() ? -1 : it->second;
}

Environment::Environment(TablePtr table) : table_(std::move(table)) {
  values_.resize(std::size_t(table_->size()), 0.0);
  set_.resize(std::size_t(table_->size()), 0);
}

void Environment::set(std::string_view name, double value) {
  int i = table_->index_of(name);
  if (i < 0)
    throw UnknownIdentifier("no variable '" + std::string(name) + "' in table");
  set(i, value);
}

void Environment::set(int index, double value) {
  values_[std::size_t(index)] = value;
  set_[std::size_t(index)] = 1;
}

double Environment::get(int index) const {
  if (!has(index))
    throw MissingVariable("variable '" + table_->name(index) + "' has no value");
  return values_[std::size_t(index)];
}

// ----------------------------------------------------------- construction ---

static NodePtr make_const_node(double v) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Constant;
  n->value = v;
  return n;
}

Expr Expr::constant(double v, TablePtr table) {
  if (!std::isfinite(v))
    throw DomainError("non-finite constant in expression construction");
  return Expr(make_const_node(v), std::move(table));
}

Expr Expr::variable(std::string_view name, const TablePtr& table) {
  int i = table->index_of(name);
  if (i < 0)
    throw UnknownIdentifier("no variable '" + std::string(name) + "' in table");
  return variable(i, table);
}

Expr Expr::variable(int index, const TablePtr& table) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Variable;
  n->var = index;
  return Expr(std::move(n), table);
}

bool Expr::is_constant() const {
  return node_ && node_->kind == Node::Kind::Constant;
}
bool Expr::is_zero() const { return is_constant() && node_->value == 0.0; }
bool Expr::is_one() const { return is_constant() && node_->value == 1.0; }
double Expr::constant_value() const { return node_->value; }

TablePtr Expr::merge_tables(const Expr& a, const Expr& b) {
  if (a.table_ && b.table_ && a.table_ != b.table_)
    throw DimensionMismatch("combining expressions from different variable tables");
  return a.table_ ? a.table_ : b.table_;
}

static double fold_binary(BinaryOp op, double x, double y) {
  switch (op) {
    case BinaryOp::Add: return x + y;
    case BinaryOp::Sub: return x - y;
    case BinaryOp::Mul: return x * y;
    case BinaryOp::Div: return x / y;
    case BinaryOp::Pow: return std::pow(x, y);
  }
  return 0.0;
}

Expr Expr::make_binary(BinaryOp op, const Expr& a, const Expr& b) {
  TablePtr table = merge_tables(a, b);
  if (a.is_constant() && b.is_constant()) {
    double v = fold_binary(op, a.constant_value(), b.constant_value());
    if (std::isfinite(v)) return constant(v, table);
    // leave the tree intact; eval reports the domain problem with context
  }
  switch (op) {
    case BinaryOp::Add:
      if (a.is_zero()) return Expr(b.node_, table);
      if (b.is_zero()) return Expr(a.node_, table);
      break;
    case BinaryOp::Sub:
      if (b.is_zero()) return Expr(a.node_, table);
      break;
    case BinaryOp::Mul:
      if (a.is_zero() || b.is_zero()) return constant(0.0, table);
      if (a.is_one()) return Expr(b.node_, table);
      if (b.is_one()) return Expr(a.node_, table);
      break;
    case BinaryOp::Div:
      if (a.is_zero() && !(b.is_constant() && b.constant_value() == 0.0))
        return constant(0.0, table);
      if (b.is_one()) return Expr(a.node_, table);
      break;
    case BinaryOp::Pow:
      if (b.is_one()) return Expr(a.node_, table);
      if (b.is_zero()) return constant(1.0, table);
      break;
  }
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Binary;
  n->bop = op;
  n->a = a.node_;
  n->b = b.node_;
  return Expr(std::move(n), table);
}

Expr Expr::make_unary(UnaryOp op, const Expr& a) {
  if (a.is_constant()) return constant(-a.constant_value(), a.table_);
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Unary;
  n->uop = op;
  n->a = a.node_;
  return Expr(std::move(n), a.table_);
}

static double fold_func(FuncOp f, double x) {
  switch (f) {
    case FuncOp::Sin: return std::sin(x);
    case FuncOp::Cos: return std::cos(x);
    case FuncOp::Exp: return std::exp(x);
    case FuncOp::Log: return std::log(x);
    case FuncOp::Sqrt: return std::sqrt(x);
  }
  return 0.0;
}

Expr Expr::make_func(FuncOp f, const Expr& a) {
  if (a.is_constant()) {
    double v = fold_func(f, a.constant_value());
    if (std::isfinite(v)) return constant(v, a.table_);
  }
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Func;
  n->fop = f;
  n->a = a.node_;
  return Expr(std::move(n), a.table_);
}

Expr operator+(const Expr& a, const Expr& b) { return Expr::make_binary(BinaryOp::Add, a, b); }
Expr operator-(const Expr& a, const Expr& b) { return Expr::make_binary(BinaryOp::Sub, a, b); }
Expr operator*(const Expr& a, const Expr& b) { return Expr::make_binary(BinaryOp::Mul, a, b); }
Expr operator/(const Expr& a, const Expr& b) { return Expr::make_binary(BinaryOp::Div, a, b); }
Expr operator-(const Expr& a) { return Expr::make_unary(UnaryOp::Neg, a); }
Expr pow(const Expr& a, const Expr& b) { return Expr::make_binary(BinaryOp::Pow, a, b); }
Expr sin(const Expr& a) { return Expr::make_func(FuncOp::Sin, a); }
Expr cos(const Expr& a) { return Expr::make_func(FuncOp::Cos, a); }
Expr exp(const Expr& a) { return Expr::make_func(FuncOp::Exp, a); }
Expr log(const Expr& a) { return Expr::make_func(FuncOp::Log, a); }
Expr sqrt(const Expr& a) { return Expr::make_func(FuncOp::Sqrt, a); }

Expr operator+(double c, const Expr& e) { return Expr::constant(c, e.table()) + e; }
Expr operator-(double c, const Expr& e) { return Expr::constant(c, e.table()) - e; }
Expr operator*(double c, const Expr& e) { return Expr::constant(c, e.table()) * e; }
Expr operator/(double c, const Expr& e) { return Expr::constant(c, e.table()) / e; }

// ------------------------------------------------------------------- eval ---

namespace {

double eval_node(const Node* n, const Environment& env,
                 std::unordered_map<const Node*, double>& memo) {
  auto it = memo.find(n);
  if (it != memo.end()) return it->second;
  double r = 0.0;
  switch (n->kind) {
    case Node::Kind::Constant: r = n->value; break;
    case Node::Kind::Variable: r = env.get(n->var); break;
    case Node::Kind::Unary: r = -eval_node(n->a.get(), env, memo); break;
    case Node::Kind::Binary: {
      double x = eval_node(n->a.get(), env, memo);
      double y = eval_node(n->b.get(), env, memo);
      switch (n->bop) {
        case BinaryOp::Add: r = x + y; break;
        case BinaryOp::Sub: r = x - y; break;
        case BinaryOp::Mul: r = x * y; break;
        case BinaryOp::Div:
          if (y == 0.0) throw DomainError("division by zero");
          r = x / y;
          break;
        case BinaryOp::Pow:
          r = std::pow(x, y);
          if (!std::isfinite(r))
            throw DomainError("pow(" + std::to_string(x) + ", " +
                              std::to_string(y) + ") out of domain");
          break;
      }
      break;
    }
    case Node::Kind::Func: {
      double x = eval_node(n->a.get(), env, memo);
      switch (n->fop) {
        case FuncOp::Sin: r = std::sin(x); break;
        case FuncOp::Cos: r = std::cos(x); break;
        case FuncOp::Exp: r = std::exp(x); break;
        case FuncOp::Log:
          if (x <= 0.0)
            throw DomainError("log(" + std::to_string(x) + ")");
          r = std::log(x);
          break;
        case FuncOp::Sqrt:
          if (x < 0.0)
            throw DomainError("sqrt(" + std::to_string(x) + ")");
          r = std::sqrt(x);
          break;
      }
      break;
    }
  }
  if (!std::isfinite(r)) throw DomainError("non-finite value in evaluation");
  memo.emplace(n, r);
  return r;
}

}  // namespace

double Expr::eval(const Environment& env) const {
  if (!node_) throw EvaluationError("empty expression");
  if (table_ && env.table() != table_)
    throw DimensionMismatch("environment built from a different variable table");
  std::unordered_map<const Node*, double> memo;
  return eval_node(node_.get(), env, memo);
}

// ------------------------------------------------------------------- diff ---

namespace {

Expr diff_node(const NodePtr& n, int var, const TablePtr& table,
               std::unordered_map<const Node*, Expr>& memo) {
  auto it = memo.find(n.get());
  if (it != memo.end()) return it->second;

  Expr result;
  auto sub = [&](const NodePtr& p) {
    return diff_node(p, var, table, memo);
  };

  switch (n->kind) {
    case Node::Kind::Constant:
      result = Expr::constant(0.0, table);
      break;
    case Node::Kind::Variable:
      result = Expr::constant(n->var == var ? 1.0 : 0.0, table);
      break;
    case Node::Kind::Unary:
      result = -sub(n->a);
      break;
    case Node::Kind::Binary: {
      Expr da = sub(n->a);
      Expr db = sub(n->b);
      Expr ea = Expr::from_node(n->a, table);
      Expr eb = Expr::from_node(n->b, table);
      switch (n->bop) {
        case BinaryOp::Add: result = da + db; break;
        case BinaryOp::Sub: result = da - db; break;
        case BinaryOp::Mul: result = da * eb + ea * db; break;
        case BinaryOp::Div:
          result = (da * eb - ea * db) / (eb * eb);
          break;
        case BinaryOp::Pow:
          if (eb.is_constant()) {
            double k = eb.constant_value();
            result = Expr::constant(k, table) *
                     pow(ea, Expr::constant(k - 1.0, table)) * da;
          } else {
            result = pow(ea, eb) * (db * log(ea) + eb * da / ea);
          }
          break;
      }
      break;
    }
    case Node::Kind::Func: {
      Expr da = sub(n->a);
      Expr ea = Expr::from_node(n->a, table);
      switch (n->fop) {
        case FuncOp::Sin: result = cos(ea) * da; break;
        case FuncOp::Cos: result = -(sin(ea) * da); break;
        case FuncOp::Exp: result = exp(ea) * da; break;
        case FuncOp::Log: result = da / ea; break;
        case FuncOp::Sqrt:
          result = da / (Expr::constant(2.0, table) * sqrt(ea));
          break;
      }
      break;
    }
  }
  memo.emplace(n.get(), result);
  return result;
}

}  // namespace

Expr Expr::diff(int var_index) const {
  if (!node_) throw EvaluationError("empty expression");
  std::unordered_map<const Node*, Expr> memo;
  return diff_node(node_, var_index, table_, memo);
}

Expr Expr::diff(std::string_view var_name) const {
  if (!table_) throw UnknownIdentifier("expression has no variable table");
  int i = table_->index_of(var_name);
  if (i < 0)
    throw UnknownIdentifier("no variable '" + std::string(var_name) + "' in table");
  return diff(i);
}

// ------------------------------------------------------------- substitute ---

namespace {

Expr substitute_node(const NodePtr& n, const TablePtr& table,
                     const std::unordered_map<int, Expr>& map,
                     std::unordered_map<const Node*, Expr>& memo) {
  auto it = memo.find(n.get());
  if (it != memo.end()) return it->second;
  Expr result;
  switch (n->kind) {
    case Node::Kind::Constant:
      result = Expr::constant(n->value, table);
      break;
    case Node::Kind::Variable: {
      auto hit = map.find(n->var);
      result = hit != map.end() ? hit->second : Expr::variable(n->var, table);
      break;
    }
    case Node::Kind::Unary:
      result = -substitute_node(n->a, table, map, memo);
      break;
    case Node::Kind::Binary: {
      Expr a = substitute_node(n->a, table, map, memo);
      Expr b = substitute_node(n->b, table, map, memo);
      switch (n->bop) {
        case BinaryOp::Add: result = a + b; break;
        case BinaryOp::Sub: result = a - b; break;
        case BinaryOp::Mul: result = a * b; break;
        case BinaryOp::Div: result = a / b; break;
        case BinaryOp::Pow: result = pow(a, b); break;
      }
      break;
    }
    case Node::Kind::Func: {
      Expr a = substitute_node(n->a, table, map, memo);
      switch (n->fop) {
        case FuncOp::Sin: result = sin(a); break;
        case FuncOp::Cos: result = cos(a); break;
        case FuncOp::Exp: result = exp(a); break;
        case FuncOp::Log: result = log(a); break;
        case FuncOp::Sqrt: result = sqrt(a); break;
      }
      break;
    }
  }
  memo.emplace(n.get(), result);
  return result;
}

}  // namespace

Expr Expr::substitute(const std::unordered_map<int, Expr>& map) const {
  if (!node_) throw EvaluationError("empty expression");
  std::unordered_map<const Node*, Expr> memo;
  TablePtr target = table_;
  for (const auto& [k, v] : map)
    if (v.table()) target = v.table();
  return substitute_node(node_, target, map, memo);
}

std::vector<int> Expr::variables() const {
  std::vector<int> out;
  if (!node_) return out;
  std::vector<char> seen(table_ ? std::size_t(table_->size()) : 0, 0);
  std::unordered_map<const Node*, char> visited;
  std::function<void(const Node*)> walk = [&](const Node* n) {
    if (visited.count(n)) return;
    visited.emplace(n, 1);
    if (n->kind == Node::Kind::Variable) {
      if (seen.empty()) {
        out.push_back(n->var);
      } else if (!seen[std::size_t(n->var)]) {
        seen[std::size_t(n->var)] = 1;
        out.push_back(n->var);
      }
    }
    if (n->a) walk(n->a.get());
    if (n->b) walk(n->b.get());
  };
  walk(node_.get());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::size_t Expr::node_count() const {
  if (!node_) return 0;
  std::unordered_map<const Node*, char> visited;
  std::function<void(const Node*)> walk = [&](const Node* n) {
    if (visited.count(n)) return;
    visited.emplace(n, 1);
    if (n->a) walk(n->a.get());
    if (n->b) walk(n->b.get());
  };
  walk(node_.get());
  return visited.size();
}

// ----------------------------------------------------------------- render ---

namespace {

// Precedence levels for parenthesization: + - (1), * / (2), unary - (3),
// ^ (4), atoms (5).
int node_prec(const Node* n) {
  switch (n->kind) {
    case Node::Kind::Constant:
      return n->value < 0 ? 3 : 5;
    case Node::Kind::Variable:
    case Node::Kind::Func:
      return 5;
    case Node::Kind::Unary:
      return 3;
    case Node::Kind::Binary:
      switch (n->bop) {
        case BinaryOp::Add:
        case BinaryOp::Sub: return 1;
        case BinaryOp::Mul:
        case BinaryOp::Div: return 2;
        case BinaryOp::Pow: return 4;
      }
  }
  return 5;
}

std::string render_const(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void render_node(const Node* n, const VariableTable* table, std::string& out);

void render_child(const Node* c, const VariableTable* table, int min_prec,
                  std::string& out) {
  bool parens = node_prec(c) < min_prec;
  if (parens) out += '(';
  render_node(c, table, out);
  if (parens) out += ')';
}

void render_node(const Node* n, const VariableTable* table, std::string& out) {
  switch (n->kind) {
    case Node::Kind::Constant:
      out += render_const(n->value);
      break;
    case Node::Kind::Variable:
      out += table ? table->name(n->var) : ("#" + std::to_string(n->var));
      break;
    case Node::Kind::Unary:
      out += '-';
      render_child(n->a.get(), table, 4, out);
      break;
    case Node::Kind::Binary: {
      const char* ops[] = {" + ", " - ", "*", "/", "^"};
      int prec = node_prec(n);
      switch (n->bop) {
        case BinaryOp::Add:
          render_child(n->a.get(), table, prec, out);
          out += ops[0];
          render_child(n->b.get(), table, prec, out);
          break;
        case BinaryOp::Sub:
          render_child(n->a.get(), table, prec, out);
          out += ops[1];
          render_child(n->b.get(), table, prec + 1, out);
          break;
        case BinaryOp::Mul:
          render_child(n->a.get(), table, prec, out);
          out += ops[2];
          render_child(n->b.get(), table, prec, out);
          break;
        case BinaryOp::Div:
          render_child(n->a.get(), table, prec, out);
          out += ops[3];
          render_child(n->b.get(), table, prec + 1, out);
          break;
        case BinaryOp::Pow:
          render_child(n->a.get(), table, prec + 1, out);
          out += ops[4];
          render_child(n->b.get(), table, prec, out);
          break;
      }
      break;
    }
    case Node::Kind::Func: {
      const char* names[] = {"sin", "cos", "exp", "log", "sqrt"};
      out += names[int(n->fop)];
      out += '(';
      render_node(n->a.get(), table, out);
      out += ')';
      break;
    }
  }
}

}  // namespace

std::string Expr::render() const {
  if (!node_) return "<empty>";
  std::string out;
  render_node(node_.get(), table_.get(), out);
  return out;
}

// ------------------------------------------------------------------ parse ---

namespace {

struct Parser {
  std::string_view text;
  std::size_t pos = 0;
  const TablePtr& table;

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos])))
      ++pos;
  }
  bool eof() {
    skip_ws();
    return pos >= text.size();
  }
  char peek() {
    skip_ws();
    return pos < text.size() ? text[pos] : '\0';
  }
  std::string found_token() {
    skip_ws();
    if (pos >= text.size()) return "end of input";
    return "'" + std::string(1, text[pos]) + "'";
  }

  Expr parse_expr() {
    Expr e = parse_term();
    while (true) {
      char c = peek();
      if (c == '+') {
        ++pos;
        e = e + parse_term();
      } else if (c == '-') {
        ++pos;
        e = e - parse_term();
      } else {
        return e;
      }
    }
  }

  Expr parse_term() {
    Expr e = parse_factor();
    while (true) {
      char c = peek();
      if (c == '*') {
        ++pos;
        e = e * parse_factor();
      } else if (c == '/') {
        ++pos;
        e = e / parse_factor();
      } else {
        return e;
      }
    }
  }

  Expr parse_factor() {
    if (peek() == '-') {
      ++pos;
      return -parse_factor();
    }
    return parse_power();
  }

  Expr parse_power() {
    Expr base = parse_atom();
    if (peek() == '^') {
      ++pos;
      // right-assoc; a unary minus is allowed in the exponent
      return pow(base, parse_factor());
    }
    return base;
  }

  Expr parse_atom() {
    skip_ws();
    if (pos >= text.size())
      throw SyntaxError(pos, "a number, identifier or '('", "end of input");
    char c = text[pos];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.')
      return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_')
      return parse_ident();
    if (c == '(') {
      ++pos;
      Expr e = parse_expr();
      expect(')');
      return e;
    }
    throw SyntaxError(pos, "a number, identifier or '('", found_token());
  }

  void expect(char c) {
    skip_ws();
    if (pos >= text.size() || text[pos] != c)
      throw SyntaxError(pos, std::string("'") + c + "'", found_token());
    ++pos;
  }

  Expr parse_number() {
    std::size_t start = pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
    if (pos < text.size() && text[pos] == '.') {
      ++pos;
      while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
    }
    if (pos < text.size() && (text[pos] == 'e' || text[pos] == 'E')) {
      std::size_t mark = pos;
      ++pos;
      if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) ++pos;
      if (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
      } else {
        pos = mark;  // 'e' belongs to a following identifier, not this number
      }
    }
    std::string tok(text.substr(start, pos - start));
    if (tok == ".") throw SyntaxError(start, "digits", "'.'");
    try {
      return Expr::constant(std::stod(tok), table);
    } catch (const std::exception&) {
      throw SyntaxError(start, "a valid number", "'" + tok + "'");
    }
  }

  Expr parse_ident() {
    std::size_t start = pos;
    while (pos < text.size() &&
           (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
      ++pos;
    std::string name(text.substr(start, pos - start));
    skip_ws();
    if (pos < text.size() && text[pos] == '(') {
      ++pos;
      std::vector<Expr> args;
      args.push_back(parse_expr());
      while (peek() == ',') {
        ++pos;
        args.push_back(parse_expr());
      }
      expect(')');
      if (name == "pow") {
        if (args.size() != 2)
          throw SyntaxError(start, "pow with 2 arguments",
                            std::to_string(args.size()) + " arguments");
        return pow(args[0], args[1]);
      }
      if (args.size() != 1)
        throw SyntaxError(start, name + " with 1 argument",
                          std::to_string(args.size()) + " arguments");
      if (name == "sin") return sin(args[0]);
      if (name == "cos") return cos(args[0]);
      if (name == "exp") return exp(args[0]);
      if (name == "log") return log(args[0]);
      if (name == "sqrt") return sqrt(args[0]);
      throw UnknownIdentifier("unknown function '" + name +
                              "' (have: sin cos exp log sqrt pow)");
    }
    int idx = table->index_of(name);
    if (idx < 0)
      throw UnknownIdentifier("unknown variable '" + name + "'");
    return Expr::variable(idx, table);
  }
};

}  // namespace

Expr parse(std::string_view text, const TablePtr& table) {
  Parser p{text, 0, table};
  Expr e = p.parse_expr();
  if (!p.eof())
    throw SyntaxError(p.pos, "end of input", p.found_token());
  return e;
}

// ---------------------------------------------------------------- program ---

ExprProgram::ExprProgram(std::span<const Expr> roots) {
  std::unordered_map<const Node*, std::int32_t> slot;
  // Iterative post-order to avoid recursion limits on deep DAGs.
  std::function<std::int32_t(const Node*)> emit = [&](const Node* n) -> std::int32_t {
    auto it = slot.find(n);
    if (it != slot.end()) return it->second;
    std::vector<std::pair<const Node*, bool>> stack{{n, false}};
    while (!stack.empty()) {
      auto [cur, expanded] = stack.back();
      stack.pop_back();
      if (slot.count(cur)) continue;
      if (!expanded) {
        stack.push_back({cur, true});
        if (cur->b && !slot.count(cur->b.get())) stack.push_back({cur->b.get(), false});
        if (cur->a && !slot.count(cur->a.get())) stack.push_back({cur->a.get(), false});
      } else {
        Instr ins;
        ins.kind = cur->kind;
        ins.uop = cur->uop;
        ins.bop = cur->bop;
        ins.fop = cur->fop;
        ins.value = cur->value;
        ins.var = cur->var;
        ins.a = cur->a ? slot.at(cur->a.get()) : -1;
        ins.b = cur->b ? slot.at(cur->b.get()) : -1;
        slot.emplace(cur, std::int32_t(tape_.size()));
        tape_.push_back(ins);
      }
    }
    return slot.at(n);
  };
  for (const Expr& r : roots) {
    if (r.empty()) throw EvaluationError("empty expression in program");
    if (r.table()) {
      if (table_ && r.table() != table_)
        throw DimensionMismatch("program roots use different variable tables");
      table_ = r.table();
    }
    roots_.push_back(emit(r.node().get()));
  }
}

void ExprProgram::eval(const Environment& env, std::span<double> out,
                       std::vector<double>& slots) const {
  if (out.size() != roots_.size())
    throw DimensionMismatch("program output span has wrong size");
  if (slots.size() != tape_.size()) slots.resize(tape_.size());
  if (table_ && env.table() != table_)
    throw DimensionMismatch("environment built from a different variable table");
  double* s = slots.data();
  for (std::size_t i = 0; i < tape_.size(); ++i) {
    const Instr& ins = tape_[i];
    double r = 0.0;
    switch (ins.kind) {
      case Node::Kind::Constant: r = ins.value; break;
      case Node::Kind::Variable: r = env.get(ins.var); break;
      case Node::Kind::Unary: r = -s[ins.a]; break;
      case Node::Kind::Binary: {
        double x = s[ins.a], y = s[ins.b];
        switch (ins.bop) {
          case BinaryOp::Add: r = x + y; break;
          case BinaryOp::Sub: r = x - y; break;
          case BinaryOp::Mul: r = x * y; break;
          case BinaryOp::Div:
            if (y == 0.0) throw DomainError("division by zero");
            r = x / y;
            break;
          case BinaryOp::Pow:
            r = std::pow(x, y);
            break;
        }
        break;
      }
      case Node::Kind::Func: {
        double x = s[ins.a];
        switch (ins.fop) {
          case FuncOp::Sin: r = std::sin(x); break;
          case FuncOp::Cos: r = std::cos(x); break;
          case FuncOp::Exp: r = std::exp(x); break;
          case FuncOp::Log:
            if (x <= 0.0) throw DomainError("log of non-positive value");
            r = std::log(x);
            break;
          case FuncOp::Sqrt:
            if (x < 0.0) throw DomainError("sqrt of negative value");
            r = std::sqrt(x);
            break;
        }
        break;
      }
    }
    if (!std::isfinite(r)) throw DomainError("non-finite value in evaluation");
    s[i] = r;
  }
  for (std::size_t i = 0; i < roots_.size(); ++i) out[i] = s[roots_[i]];
}

std::vector<double> ExprProgram::eval(const Environment& env) const {
  std::vector<double> slots = make_slots();
  std::vector<double> out(roots_.size());
  eval(env, out, slots);
  return out;
}

}  // namespace subcurv
