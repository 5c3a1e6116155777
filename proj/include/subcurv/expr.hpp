#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "subcurv/error.hpp"

namespace subcurv {

// Ordered, immutable set of variable names. Exprs refer to variables by index
// into one shared table; mixing tables is a usage error and is checked.
class VariableTable {
public:
  static std::shared_ptr<const VariableTable> create(
      std::vector<std::string> names);

  int index_of(std::string_view name) const;  // -1 when absent
  const std::string& name(int index) const { return names_[std::size_t(index)]; }
  int size() const { return int(names_.size()); }

private:
  VariableTable() = default;
  std::vector<std::string> names_;
  std::unordered_map<std::string, int> index_;
};

using TablePtr = std::shared_ptr<const VariableTable>;

// Total assignment of values to (a subset of) a table's variables. eval
// throws MissingVariable when it reads an unset slot.
class Environment {
public:
  explicit Environment(TablePtr table);

  void set(std::string_view name, double value);
  void set(int index, double value);
  double get(int index) const;
  bool has(int index) const { return set_[std::size_t(index)] != 0; }
  const TablePtr& table() const { return table_; }

private:
  TablePtr table_;
  std::vector<double> values_;
  std::vector<char> set_;
};

enum class UnaryOp : std::uint8_t { Neg };
enum class BinaryOp : std::uint8_t { Add, Sub, Mul, Div, Pow };
enum class FuncOp : std::uint8_t { Sin, Cos, Exp, Log, Sqrt };

namespace detail {
struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
  enum class Kind : std::uint8_t { Constant, Variable, Unary, Binary, Func };
  Kind kind;
  UnaryOp uop{};
  BinaryOp bop{};
  FuncOp fop{};
  double value = 0.0;  // Constant
  int var = -1;        // Variable
  NodePtr a, b;
};
}  // namespace detail

// Immutable expression tree (shared subtrees make it a DAG). Construction
// applies light folding only: constant ⊕ constant, 0·e, 1·e, e±0, e^0, e^1.
class Expr {
public:
  Expr() = default;  // empty; using it is an error

  static Expr constant(double v, TablePtr table = nullptr);
  static Expr variable(std::string_view name, const TablePtr& table);
  static Expr variable(int index, const TablePtr& table);

  bool empty() const { return node_ == nullptr; }
  bool is_constant() const;
  bool is_zero() const;   // structural: the constant 0
  bool is_one() const;
  double constant_value() const;  // pre: is_constant()

  const TablePtr& table() const { return table_; }
  const detail::NodePtr& node() const { return node_; }

  // Internal: wrap an existing node. Used by the recursive algorithms.
  static Expr from_node(detail::NodePtr node, TablePtr table) {
    return Expr(std::move(node), std::move(table));
  }

  double eval(const Environment& env) const;
  Expr diff(int var_index) const;
  Expr diff(std::string_view var_name) const;
  std::string render() const;

  // Replace variables by expressions (simultaneous). Keys are var indices.
  Expr substitute(const std::unordered_map<int, Expr>& map) const;

  // Sorted indices of variables that occur in the tree.
  std::vector<int> variables() const;

  std::size_t node_count() const;

  friend Expr operator+(const Expr&, const Expr&);
  friend Expr operator-(const Expr&, const Expr&);
  friend Expr operator*(const Expr&, const Expr&);
  friend Expr operator/(const Expr&, const Expr&);
  friend Expr operator-(const Expr&);
  friend Expr pow(const Expr&, const Expr&);
  friend Expr sin(const Expr&);
  friend Expr cos(const Expr&);
  friend Expr exp(const Expr&);
  friend Expr log(const Expr&);
  friend Expr sqrt(const Expr&);

  Expr operator+(double c) const { return *this + constant(c, table_); }
  Expr operator-(double c) const { return *this - constant(c, table_); }
  Expr operator*(double c) const { return *this * constant(c, table_); }
  Expr operator/(double c) const { return *this / constant(c, table_); }

private:
  Expr(detail::NodePtr node, TablePtr table)
      : node_(std::move(node)), table_(std::move(table)) {}
  static Expr make_unary(UnaryOp, const Expr&);
  static Expr make_binary(BinaryOp, const Expr&, const Expr&);
  static Expr make_func(FuncOp, const Expr&);
  static TablePtr merge_tables(const Expr&, const Expr&);

  detail::NodePtr node_;
  TablePtr table_;
};

Expr operator+(double c, const Expr& e);
Expr operator-(double c, const Expr& e);
Expr operator*(double c, const Expr& e);
Expr operator/(double c, const Expr& e);

// Parses the expression DSL:
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := '-' factor | power
//   power  := atom ('^' factor)?          (right-assoc; unary ok in exponent)
//   atom   := number | ident | ident '(' expr (',' expr)* ')' | '(' expr ')'
// Functions: sin cos exp log sqrt pow. Identifiers must be in `table`.
Expr parse(std::string_view text, const TablePtr& table);

// Straight-line tape compiled from a set of roots; evaluation is a single
// linear pass with no hashing. Use for hot loops; Expr::eval for one-offs.
class ExprProgram {
public:
  ExprProgram() = default;
  explicit ExprProgram(std::span<const Expr> roots);
  explicit ExprProgram(const std::vector<Expr>& roots)
      : ExprProgram(std::span<const Expr>(roots)) {}

  std::size_t num_roots() const { return roots_.size(); }
  std::size_t tape_size() const { return tape_.size(); }

  // Scratch buffer sized for this program; one per thread.
  std::vector<double> make_slots() const { return std::vector<double>(tape_.size()); }

  void eval(const Environment& env, std::span<double> out,
            std::vector<double>& slots) const;
  std::vector<double> eval(const Environment& env) const;

private:
  struct Instr {
    detail::Node::Kind kind;
    UnaryOp uop{};
    BinaryOp bop{};
    FuncOp fop{};
    double value = 0.0;
    int var = -1;
    std::int32_t a = -1, b = -1;
  };
  std::vector<Instr> tape_;
  std::vector<std::int32_t> roots_;
  TablePtr table_;
};

}  // namespace subcurv
