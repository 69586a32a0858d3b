#include "daecanon/expr.hpp"

#include <charconv>
#include <cmath>
#include <cstring>
#include <functional>
#include <mutex>
#include <numbers>
#include <unordered_map>
#include <unordered_set>

#include "daecanon/errors.hpp"

namespace daecanon {

namespace {

struct Key {
  Op op;
  int exponent;
  std::uint64_t vbits;
  std::string name;
  std::uint64_t a, b;
  bool operator==(const Key& o) const {
    return op == o.op && exponent == o.exponent && vbits == o.vbits && a == o.a && b == o.b && name == o.name;
  }
};

struct KeyHash {
  std::size_t operator()(const Key& k) const {
    std::size_t h = static_cast<std::size_t>(k.op) * 0x9E3779B97F4A7C15ULL;
    auto mix = [&h](std::uint64_t v) { h ^= v + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2); };
    mix(static_cast<std::uint64_t>(k.exponent));
    mix(k.vbits);
    mix(k.a);
    mix(k.b);
    if (!k.name.empty()) mix(std::hash<std::string>{}(k.name));
    return h;
  }
};

struct Registry {
  std::recursive_mutex mu;
  std::unordered_map<Key, std::weak_ptr<const Node>, KeyHash> table;
  std::uint64_t next_id = 1;
  std::size_t sweep_at = 1 << 16;
};

Registry& registry() {
  static Registry* r = new Registry;
  return *r;
}

std::uint64_t bits(double v) {
  if (v == 0.0) v = 0.0;  // fold -0
  std::uint64_t u;
  std::memcpy(&u, &v, sizeof u);
  return u;
}

NodePtr intern(Op op, double value, int exponent, const std::string& name, NodePtr a, NodePtr b) {
  if (op == Op::Const && value == 0.0) value = 0.0;
  Key key{op, exponent, op == Op::Const || op == Op::Param ? bits(value) : 0, name, a ? a->id : 0,
          b ? b->id : 0};
  Registry& r = registry();
  std::lock_guard<std::recursive_mutex> lock(r.mu);
  auto it = r.table.find(key);
  if (it != r.table.end()) {
    if (auto sp = it->second.lock()) return sp;
  }
  auto n = std::make_shared<Node>();
  n->op = op;
  n->value = value;
  n->exponent = exponent;
  n->name = name;
  n->a = std::move(a);
  n->b = std::move(b);
  n->id = r.next_id++;
  NodePtr out = n;
  r.table[key] = out;
  if (r.table.size() > r.sweep_at) {
    for (auto i = r.table.begin(); i != r.table.end();) {
      if (i->second.expired())
        i = r.table.erase(i);
      else
        ++i;
    }
    r.sweep_at = std::max<std::size_t>(2 * r.table.size(), 1 << 16);
  }
  return out;
}

bool is_c(const NodePtr& n) { return n->op == Op::Const; }
bool is_cv(const NodePtr& n, double v) { return n->op == Op::Const && n->value == v; }

NodePtr mk_const(double v) { return intern(Op::Const, v, 0, {}, nullptr, nullptr); }

NodePtr mk_mul(NodePtr a, NodePtr b);
NodePtr mk_pow(NodePtr a, int n);
NodePtr mk_div(NodePtr a, NodePtr b);

NodePtr mk_neg(NodePtr a) {
  if (is_c(a)) return mk_const(-a->value);
  if (a->op == Op::Neg) return a->a;
  if (a->op == Op::Mul && is_c(a->a)) return mk_mul(mk_const(-a->a->value), a->b);
  return intern(Op::Neg, 0, 0, {}, std::move(a), nullptr);
}

NodePtr mk_add(NodePtr a, NodePtr b) {
  if (is_c(a) && is_c(b)) return mk_const(a->value + b->value);
  if (is_cv(a, 0)) return b;
  if (is_cv(b, 0)) return a;
  if (a->op == Op::Neg && a->a == b) return mk_const(0);
  if (b->op == Op::Neg && b->a == a) return mk_const(0);
  if (a == b) return mk_mul(mk_const(2), a);
  if (is_c(b)) std::swap(a, b);
  if (is_c(a) && b->op == Op::Add && is_c(b->a)) return mk_add(mk_const(a->value + b->a->value), b->b);
  if (!is_c(a) && a->id > b->id) std::swap(a, b);
  return intern(Op::Add, 0, 0, {}, std::move(a), std::move(b));
}

NodePtr mk_mul(NodePtr a, NodePtr b) {
  if (is_c(a) && is_c(b)) return mk_const(a->value * b->value);
  if (is_c(b)) std::swap(a, b);
  if (is_cv(a, 0)) return a;
  if (is_cv(a, 1)) return b;
  if (is_cv(a, -1)) return mk_neg(b);
  if (a->op == Op::Neg && b->op == Op::Neg) return mk_mul(a->a, b->a);
  if (a->op == Op::Neg) return mk_neg(mk_mul(a->a, b));
  if (b->op == Op::Neg) return mk_neg(mk_mul(a, b->a));
  if (is_c(a) && b->op == Op::Mul && is_c(b->a)) return mk_mul(mk_const(a->value * b->a->value), b->b);
  if (a == b) return mk_pow(a, 2);
  if (a->op == Op::Pow && a->a == b) return mk_pow(b, a->exponent + 1);
  if (b->op == Op::Pow && b->a == a) return mk_pow(a, b->exponent + 1);
  if (a->op == Op::Pow && b->op == Op::Pow && a->a == b->a) return mk_pow(a->a, a->exponent + b->exponent);
  if (a->op == Op::Div && a->b == b) return a->a;
  if (b->op == Op::Div && b->b == a) return b->a;
  if (!is_c(a) && a->id > b->id) std::swap(a, b);
  return intern(Op::Mul, 0, 0, {}, std::move(a), std::move(b));
}

NodePtr mk_div(NodePtr a, NodePtr b) {
  if (is_c(a) && is_c(b) && b->value != 0.0) return mk_const(a->value / b->value);
  if (is_cv(a, 0)) return a;
  if (is_cv(b, 1)) return a;
  if (is_cv(b, -1)) return mk_neg(a);
  if (a == b) return mk_const(1);
  if (a->op == Op::Neg) return mk_neg(mk_div(a->a, b));
  if (b->op == Op::Neg) return mk_neg(mk_div(a, b->a));
  if (a->op == Op::Mul && a->a == b) return a->b;
  if (a->op == Op::Mul && a->b == b) return a->a;
  return intern(Op::Div, 0, 0, {}, std::move(a), std::move(b));
}

NodePtr mk_pow(NodePtr a, int n) {
  if (n == 0) return mk_const(1);
  if (n == 1) return a;
  if (n < 0) return mk_div(mk_const(1), mk_pow(std::move(a), -n));
  if (is_c(a)) return mk_const(std::pow(a->value, n));
  if (a->op == Op::Pow) return mk_pow(a->a, a->exponent * n);
  if (a->op == Op::Neg) {
    NodePtr p = mk_pow(a->a, n);
    return n % 2 == 0 ? p : mk_neg(p);
  }
  return intern(Op::Pow, 0, n, {}, std::move(a), nullptr);
}

double apply_fn(Op op, double x, double t) {
  double r = 0;
  switch (op) {
    case Op::Sin: r = std::sin(x); break;
    case Op::Cos: r = std::cos(x); break;
    case Op::Tan: r = std::tan(x); break;
    case Op::Exp: r = std::exp(x); break;
    case Op::Log:
      if (!(x > 0)) throw DomainError("log of nonpositive value", t);
      r = std::log(x);
      break;
    case Op::Sqrt:
      if (x < 0) throw DomainError("sqrt of negative value", t);
      r = std::sqrt(x);
      break;
    default: break;
  }
  return r;
}

NodePtr mk_fn(Op op, NodePtr a) {
  if (is_c(a)) {
    bool ok = !(op == Op::Log && !(a->value > 0)) && !(op == Op::Sqrt && a->value < 0);
    if (ok) {
      double v = apply_fn(op, a->value, 0.0);
      if (std::isfinite(v)) return mk_const(v);
    }
  }
  if (a->op == Op::Neg) {
    if (op == Op::Sin || op == Op::Tan) return mk_neg(mk_fn(op, a->a));
    if (op == Op::Cos) return mk_fn(op, a->a);
  }
  if (op == Op::Log && a->op == Op::Exp) return a->a;
  return intern(op, 0, 0, {}, std::move(a), nullptr);
}

NodePtr deriv(const NodePtr& n) {
  if (n->dcache) return n->dcache;
  NodePtr d;
  switch (n->op) {
    case Op::Const:
    case Op::Param: d = mk_const(0); break;
    case Op::Time: d = mk_const(1); break;
    case Op::Neg: d = mk_neg(deriv(n->a)); break;
    case Op::Add: d = mk_add(deriv(n->a), deriv(n->b)); break;
    case Op::Mul: d = mk_add(mk_mul(deriv(n->a), n->b), mk_mul(n->a, deriv(n->b))); break;
    case Op::Div: {
      NodePtr da = deriv(n->a), db = deriv(n->b);
      d = mk_div(mk_add(da, mk_neg(mk_mul(n, db))), n->b);
      break;
    }
    case Op::Pow:
      d = mk_mul(mk_mul(mk_const(n->exponent), mk_pow(n->a, n->exponent - 1)), deriv(n->a));
      break;
    case Op::Sin: d = mk_mul(mk_fn(Op::Cos, n->a), deriv(n->a)); break;
    case Op::Cos: d = mk_neg(mk_mul(mk_fn(Op::Sin, n->a), deriv(n->a))); break;
    case Op::Tan: d = mk_mul(mk_add(mk_const(1), mk_pow(n, 2)), deriv(n->a)); break;
    case Op::Exp: d = mk_mul(n, deriv(n->a)); break;
    case Op::Log: d = mk_div(deriv(n->a), n->a); break;
    case Op::Sqrt: d = mk_div(deriv(n->a), mk_mul(mk_const(2), n)); break;
  }
  n->dcache = d;
  return d;
}

// Iterative post-order over the DAG.
template <class F>
void topo(const std::vector<const Node*>& roots, F&& visit) {
  std::unordered_set<const Node*> seen;
  std::vector<std::pair<const Node*, bool>> st;
  for (auto* r : roots) st.emplace_back(r, false);
  while (!st.empty()) {
    auto [n, expanded] = st.back();
    st.pop_back();
    if (expanded) {
      visit(n);
      continue;
    }
    if (seen.count(n)) continue;
    seen.insert(n);
    st.emplace_back(n, true);
    if (n->b) st.emplace_back(n->b.get(), false);
    if (n->a) st.emplace_back(n->a.get(), false);
  }
}

std::string fmt_num(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

int level(const NodePtr& n) {
  switch (n->op) {
    case Op::Add: return 1;
    case Op::Mul:
    case Op::Div: return 2;
    case Op::Pow: return 4;
    default: return 5;
  }
}

void print(const NodePtr& n, std::string& out);

void print_at(const NodePtr& n, int min_level, std::string& out) {
  if (level(n) < min_level) {
    out += '(';
    print(n, out);
    out += ')';
  } else {
    print(n, out);
  }
}

const char* fn_name(Op op) {
  switch (op) {
    case Op::Sin: return "sin";
    case Op::Cos: return "cos";
    case Op::Tan: return "tan";
    case Op::Exp: return "exp";
    case Op::Log: return "log";
    case Op::Sqrt: return "sqrt";
    default: return "?";
  }
}

void print(const NodePtr& n, std::string& out) {
  switch (n->op) {
    case Op::Const: out += fmt_num(n->value); break;
    case Op::Time: out += 't'; break;
    case Op::Param: out += n->name; break;
    case Op::Neg:
      out += '-';
      print_at(n->a, 5, out);
      break;
    case Op::Add:
      print_at(n->a, 1, out);
      if (n->b->op == Op::Neg) {
        out += " - ";
        print_at(n->b->a, 2, out);
      } else if (is_c(n->b) && n->b->value < 0) {
        out += " - " + fmt_num(-n->b->value);
      } else {
        out += " + ";
        print_at(n->b, 1, out);
      }
      break;
    case Op::Mul:
      print_at(n->a, 2, out);
      out += '*';
      print_at(n->b, n->b->op == Op::Div ? 3 : 2, out);
      break;
    case Op::Div:
      print_at(n->a, 2, out);
      out += '/';
      print_at(n->b, 3, out);
      break;
    case Op::Pow:
      print_at(n->a, 5, out);
      out += '^' + std::to_string(n->exponent);
      break;
    default:
      out += fn_name(n->op);
      out += '(';
      print(n->a, out);
      out += ')';
  }
}

class Parser {
 public:
  Parser(const std::string& s, const ParamMap& p) : s_(s), params_(p) {}

  ScalarFn run() {
    ScalarFn e = expr();
    skip();
    if (i_ != s_.size()) throw ParseError("unexpected '" + std::string(1, s_[i_]) + "'", i_);
    return e;
  }

 private:
  void skip() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }
  bool eat(char c) {
    skip();
    if (i_ < s_.size() && s_[i_] == c) {
      ++i_;
      return true;
    }
    return false;
  }

  ScalarFn expr() {
    ScalarFn v = term();
    for (;;) {
      if (eat('+'))
        v = v + term();
      else if (eat('-'))
        v = v - term();
      else
        return v;
    }
  }

  ScalarFn term() {
    ScalarFn v = factor();
    for (;;) {
      if (eat('*'))
        v = v * factor();
      else if (eat('/'))
        v = v / factor();
      else
        return v;
    }
  }

  ScalarFn factor() {
    skip();
    if (i_ < s_.size() && s_[i_] == '-') {
      ++i_;
      return -factor();
    }
    ScalarFn base = atom();
    if (!eat('^')) return base;
    bool paren = eat('(');
    skip();
    int sign = 1;
    if (i_ < s_.size() && (s_[i_] == '-' || s_[i_] == '+')) {
      if (s_[i_] == '-') sign = -1;
      ++i_;
    }
    std::size_t start = i_;
    while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
    if (start == i_) throw ParseError("integer exponent expected", start);
    int n = std::stoi(s_.substr(start, i_ - start)) * sign;
    if (paren && !eat(')')) throw ParseError("')' expected", i_);
    return pow(base, n);
  }

  ScalarFn atom() {
    skip();
    if (i_ >= s_.size()) throw ParseError("unexpected end of input", i_);
    char c = s_[i_];
    if (c == '(') {
      ++i_;
      ScalarFn e = expr();
      if (!eat(')')) throw ParseError("')' expected", i_);
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = i_;
      while (i_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_')) ++i_;
      std::string id = s_.substr(start, i_ - start);
      static const std::map<std::string, Op> fns = {{"sin", Op::Sin}, {"cos", Op::Cos}, {"tan", Op::Tan},
                                                    {"exp", Op::Exp}, {"log", Op::Log}, {"sqrt", Op::Sqrt}};
      auto f = fns.find(id);
      if (f != fns.end()) {
        if (!eat('(')) throw ParseError("'(' expected after " + id, i_);
        ScalarFn arg = expr();
        if (!eat(')')) throw ParseError("')' expected", i_);
        return ScalarFn(mk_fn(f->second, arg.node()));
      }
      if (id == "t") return ScalarFn::time();
      auto p = params_.find(id);
      if (p != params_.end()) return ScalarFn::param(id, p->second);
      if (id == "pi") return ScalarFn(std::numbers::pi);
      throw ParseError("unbound identifier '" + id + "'", start);
    }
    throw ParseError("unexpected '" + std::string(1, c) + "'", i_);
  }

  ScalarFn number() {
    std::size_t start = i_;
    while (i_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[i_])) || s_[i_] == '.')) ++i_;
    if (i_ < s_.size() && (s_[i_] == 'e' || s_[i_] == 'E')) {
      std::size_t save = i_++;
      if (i_ < s_.size() && (s_[i_] == '+' || s_[i_] == '-')) ++i_;
      if (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) {
        while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
      } else {
        i_ = save;
      }
    }
    double v = 0;
    auto res = std::from_chars(s_.data() + start, s_.data() + i_, v);
    if (res.ec != std::errc() || res.ptr != s_.data() + i_) throw ParseError("malformed number", start);
    return ScalarFn(v);
  }

  const std::string& s_;
  const ParamMap& params_;
  std::size_t i_ = 0;
};

}  // namespace

ScalarFn::ScalarFn() : n_(mk_const(0)) {}
ScalarFn::ScalarFn(double c) : n_(mk_const(c)) {}

ScalarFn ScalarFn::time() { return ScalarFn(intern(Op::Time, 0, 0, {}, nullptr, nullptr)); }
ScalarFn ScalarFn::param(const std::string& name, double value) {
  return ScalarFn(intern(Op::Param, value, 0, name, nullptr, nullptr));
}

double ScalarFn::eval(double t) const {
  if (is_c(n_)) return n_->value;
  Tape tape({*this});
  std::vector<double> out;
  tape.eval(t, out);
  return out[0];
}

ScalarFn ScalarFn::derivative(int k) const {
  std::lock_guard<std::recursive_mutex> lock(registry().mu);
  NodePtr n = n_;
  for (int i = 0; i < k; ++i) n = deriv(n);
  return ScalarFn(n);
}

bool ScalarFn::is_const() const { return is_c(n_); }
double ScalarFn::const_value() const { return n_->value; }
bool ScalarFn::is_zero() const { return is_cv(n_, 0); }
bool ScalarFn::is_one() const { return is_cv(n_, 1); }

std::string ScalarFn::str() const {
  std::string out;
  print(n_, out);
  return out;
}

std::size_t ScalarFn::dag_size() const { return daecanon::dag_size({*this}); }

double ScalarFn::tree_size() const {
  std::unordered_map<const Node*, double> memo;
  topo({n_.get()}, [&](const Node* n) {
    double s = 1;
    if (n->a) s += memo[n->a.get()];
    if (n->b) s += memo[n->b.get()];
    memo[n] = std::min(s, 1e18);
  });
  return memo[n_.get()];
}

ScalarFn operator+(const ScalarFn& a, const ScalarFn& b) { return ScalarFn(mk_add(a.node(), b.node())); }
ScalarFn operator-(const ScalarFn& a, const ScalarFn& b) {
  return ScalarFn(mk_add(a.node(), mk_neg(b.node())));
}
ScalarFn operator*(const ScalarFn& a, const ScalarFn& b) { return ScalarFn(mk_mul(a.node(), b.node())); }
ScalarFn operator/(const ScalarFn& a, const ScalarFn& b) { return ScalarFn(mk_div(a.node(), b.node())); }
ScalarFn operator-(const ScalarFn& a) { return ScalarFn(mk_neg(a.node())); }
ScalarFn pow(const ScalarFn& a, int n) { return ScalarFn(mk_pow(a.node(), n)); }
ScalarFn sin(const ScalarFn& a) { return ScalarFn(mk_fn(Op::Sin, a.node())); }
ScalarFn cos(const ScalarFn& a) { return ScalarFn(mk_fn(Op::Cos, a.node())); }
ScalarFn tan(const ScalarFn& a) { return ScalarFn(mk_fn(Op::Tan, a.node())); }
ScalarFn exp(const ScalarFn& a) { return ScalarFn(mk_fn(Op::Exp, a.node())); }
ScalarFn log(const ScalarFn& a) { return ScalarFn(mk_fn(Op::Log, a.node())); }
ScalarFn sqrt(const ScalarFn& a) { return ScalarFn(mk_fn(Op::Sqrt, a.node())); }

ScalarFn parse(const std::string& source, const ParamMap& params) {
  std::lock_guard<std::recursive_mutex> lock(registry().mu);
  return Parser(source, params).run();
}

Tape::Tape(const std::vector<ScalarFn>& roots) {
  std::vector<const Node*> rs;
  rs.reserve(roots.size());
  for (const auto& r : roots) rs.push_back(r.node().get());
  std::unordered_map<const Node*, int> slot;
  topo(rs, [&](const Node* n) {
    Ins ins{n->op, n->a ? slot.at(n->a.get()) : -1, n->b ? slot.at(n->b.get()) : -1, n->exponent, n->value};
    slot[n] = static_cast<int>(code_.size());
    code_.push_back(ins);
  });
  for (auto* r : rs) roots_.push_back(slot.at(r));
}

void Tape::eval(double t, std::vector<double>& out) const {
  std::vector<double> reg(code_.size());
  for (std::size_t i = 0; i < code_.size(); ++i) {
    const Ins& c = code_[i];
    double r = 0;
    switch (c.op) {
      case Op::Const:
      case Op::Param: r = c.value; break;
      case Op::Time: r = t; break;
      case Op::Neg: r = -reg[c.a]; break;
      case Op::Add: r = reg[c.a] + reg[c.b]; break;
      case Op::Mul: r = reg[c.a] * reg[c.b]; break;
      case Op::Div:
        if (reg[c.b] == 0.0) throw DomainError("division by zero", t);
        r = reg[c.a] / reg[c.b];
        break;
      case Op::Pow: {
        double x = reg[c.a], p = 1;
        for (int k = 0; k < c.exponent; ++k) p *= x;
        r = p;
        break;
      }
      default: r = apply_fn(c.op, reg[c.a], t);
    }
    if (!std::isfinite(r)) throw DomainError("non-finite value", t);
    reg[i] = r;
  }
  out.resize(roots_.size());
  for (std::size_t i = 0; i < roots_.size(); ++i) out[i] = reg[roots_[i]];
}

std::size_t dag_size(const std::vector<ScalarFn>& fs) {
  std::vector<const Node*> rs;
  for (const auto& f : fs) rs.push_back(f.node().get());
  std::size_t count = 0;
  topo(rs, [&](const Node*) { ++count; });
  return count;
}

std::size_t live_node_count() {
  Registry& r = registry();
  std::lock_guard<std::recursive_mutex> lock(r.mu);
  std::size_t c = 0;
  for (auto& [k, w] : r.table)
    if (!w.expired()) ++c;
  return c;
}

}  // namespace daecanon
