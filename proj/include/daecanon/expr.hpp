#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace daecanon {

enum class Op : std::uint8_t { Const, Time, Param, Neg, Add, Mul, Div, Pow, Sin, Cos, Tan, Exp, Log, Sqrt };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
  Op op = Op::Const;
  int exponent = 0;
  double value = 0.0;
  std::string name;
  NodePtr a, b;
  std::uint64_t id = 0;
  mutable NodePtr dcache;
};

// Immutable scalar function of t. Nodes are hash-consed, so structurally
// equal subexpressions share storage and compare equal by id.
class ScalarFn {
 public:
  ScalarFn();
  ScalarFn(double c);  // NOLINT(google-explicit-constructor)
  explicit ScalarFn(NodePtr n) : n_(std::move(n)) {}

  static ScalarFn time();
  static ScalarFn param(const std::string& name, double value);

  double eval(double t) const;
  ScalarFn derivative(int k = 1) const;

  bool is_const() const;
  double const_value() const;
  bool is_zero() const;
  bool is_one() const;

  std::string str() const;
  std::size_t dag_size() const;
  // Size of the unfolded tree, saturating at 1e18.
  double tree_size() const;

  const NodePtr& node() const { return n_; }
  std::uint64_t id() const { return n_->id; }
  bool same(const ScalarFn& o) const { return n_.get() == o.n_.get(); }

 private:
  NodePtr n_;
};

ScalarFn operator+(const ScalarFn& a, const ScalarFn& b);
ScalarFn operator-(const ScalarFn& a, const ScalarFn& b);
ScalarFn operator*(const ScalarFn& a, const ScalarFn& b);
ScalarFn operator/(const ScalarFn& a, const ScalarFn& b);
ScalarFn operator-(const ScalarFn& a);
ScalarFn pow(const ScalarFn& a, int n);
ScalarFn sin(const ScalarFn& a);
ScalarFn cos(const ScalarFn& a);
ScalarFn tan(const ScalarFn& a);
ScalarFn exp(const ScalarFn& a);
ScalarFn log(const ScalarFn& a);
ScalarFn sqrt(const ScalarFn& a);

using ParamMap = std::map<std::string, double>;

ScalarFn parse(const std::string& source, const ParamMap& params);

// Straight-line program evaluating several roots with shared subexpressions.
class Tape {
 public:
  explicit Tape(const std::vector<ScalarFn>& roots);
  void eval(double t, std::vector<double>& out) const;
  std::size_t size() const { return code_.size(); }

 private:
  struct Ins {
    Op op;
    int a, b;
    int exponent;
    double value;
  };
  std::vector<Ins> code_;
  std::vector<int> roots_;
};

std::size_t dag_size(const std::vector<ScalarFn>& fs);

// Number of live interned nodes; used by the growth guard and tests.
std::size_t live_node_count();

}  // namespace daecanon
