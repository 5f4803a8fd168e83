#include "fnl/expr.hpp"

#include <algorithm>
#include <functional>

#include "fnl/error.hpp"

namespace fnl {

namespace {

std::size_t mix(std::size_t h, std::size_t v) {
  return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

std::size_t compute_hash(const ExprNode& n) {
  std::size_t h = std::hash<std::string>{}(n.head);
  h = mix(h, n.head_is_var ? 1 : 2);
  for (const auto& a : n.args) {
    h = mix(h, a.binders.size());
    for (const auto& v : a.binders) h = mix(h, std::hash<std::string>{}(v.name));
    h = mix(h, a.body.hash());
  }
  return h;
}

}  // namespace

Expr Expr::make_unchecked(std::string head, bool head_is_var, SortId sort, std::vector<Arg> args) {
  auto n = std::make_shared<ExprNode>();
  n->head = std::move(head);
  n->head_is_var = head_is_var;
  n->sort = std::move(sort);
  n->args = std::move(args);
  for (const auto& a : n->args) {
    n->size += a.body.size();
    n->depth = std::max(n->depth, a.body.depth() + 1);
  }
  n->hash = compute_hash(*n);
  return Expr(std::move(n));
}

Expr Expr::variable(const Var& v) { return make_unchecked(v.name, true, v.sort, {}); }

Expr Expr::apply(const Signature& sig, std::string_view op, std::vector<Arg> args) {
  if (auto vs = sig.variable_sort(op)) {
    if (!args.empty())
      throw Error(ErrorKind::ArityMismatch, "variable " + std::string(op) + " takes no arguments");
    return variable(Var{std::string(op), *vs});
  }
  const OpSignature* s = sig.find_op(op);
  if (!s) throw Error(ErrorKind::UnknownSymbol, std::string(op));
  if (s->args.size() != args.size())
    throw Error(ErrorKind::ArityMismatch, std::string(op) + " expects " +
                                              std::to_string(s->args.size()) + " arguments, got " +
                                              std::to_string(args.size()));
  for (std::size_t i = 0; i < args.size(); ++i) {
    const ArgSlot& slot = s->args[i];
    const Arg& a = args[i];
    if (!a.body) throw Error(ErrorKind::ParseError, "missing argument body");
    if (a.body.sort() != slot.sort)
      throw Error(ErrorKind::SortMismatch, std::string(op) + " argument " + std::to_string(i + 1) +
                                               " must have sort " + slot.sort.name + ", got " +
                                               a.body.sort().name);
    if (a.binders.size() != slot.binders.size())
      throw Error(ErrorKind::ArityMismatch, std::string(op) + " argument " + std::to_string(i + 1) +
                                                " binds " + std::to_string(slot.binders.size()) +
                                                " variables");
    for (std::size_t j = 0; j < a.binders.size(); ++j) {
      const Var& v = a.binders[j];
      auto vs = sig.variable_sort(v.name);
      if (!vs) throw Error(ErrorKind::UnknownSymbol, "binder " + v.name + " is not a variable");
      if (*vs != v.sort || v.sort != slot.binders[j])
        throw Error(ErrorKind::SortMismatch, "binder " + v.name + " must have sort " +
                                                 slot.binders[j].name);
      for (std::size_t k = 0; k < j; ++k)
        if (a.binders[k].name == v.name)
          throw Error(ErrorKind::DuplicateBinder, v.name + " bound twice in one group");
    }
  }
  return make_unchecked(std::string(op), false, s->result, std::move(args));
}

const std::string& Expr::head() const { return node_->head; }
bool Expr::head_is_var() const { return node_->head_is_var; }
const SortId& Expr::sort() const { return node_->sort; }
const std::vector<Arg>& Expr::args() const { return node_->args; }
std::size_t Expr::arity() const { return node_->args.size(); }
std::size_t Expr::size() const { return node_->size; }
std::size_t Expr::depth() const { return node_->depth; }
std::size_t Expr::hash() const { return node_ ? node_->hash : 0; }

Var Expr::as_var() const { return Var{node_->head, node_->sort}; }

bool operator==(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return true;
  if (!a.node_ || !b.node_) return false;
  const ExprNode& x = *a.node_;
  const ExprNode& y = *b.node_;
  return x.hash == y.hash && x.head_is_var == y.head_is_var && x.head == y.head &&
         x.sort == y.sort && x.args == y.args;
}

bool size_lex_less(const Expr& a, const Expr& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return print_expr(a) < print_expr(b);
}

// ---------------------------------------------------------------------------

std::vector<SortId> Perspective::sorts() const {
  std::vector<SortId> out;
  out.reserve(vars.size());
  for (const auto& v : vars) out.push_back(v.sort);
  return out;
}

Perspective Perspective::extended(const std::vector<Var>& more) const {
  Perspective p = *this;
  p.vars.insert(p.vars.end(), more.begin(), more.end());
  return p;
}

SortId sort_of(const Signature& sig, const Expr& e) {
  if (e.head_is_var()) {
    auto vs = sig.variable_sort(e.head());
    if (!vs || *vs != e.sort()) throw Error(ErrorKind::ForeignSignature, "variable " + e.head());
    return e.sort();
  }
  const OpSignature* s = sig.find_op(e.head());
  if (!s) throw Error(ErrorKind::ForeignSignature, "symbol " + e.head());
  if (s->result != e.sort() || s->args.size() != e.arity())
    throw Error(ErrorKind::ForeignSignature, "symbol " + e.head() + " has a different ustype");
  for (std::size_t i = 0; i < e.arity(); ++i) {
    const Arg& a = e.args()[i];
    if (sort_of(sig, a.body) != s->args[i].sort || a.binders.size() != s->args[i].binders.size())
      throw Error(ErrorKind::ForeignSignature, "argument of " + e.head());
    for (std::size_t j = 0; j < a.binders.size(); ++j) {
      auto vs = sig.variable_sort(a.binders[j].name);
      if (!vs || *vs != s->args[i].binders[j])
        throw Error(ErrorKind::ForeignSignature, "binder " + a.binders[j].name);
    }
  }
  return e.sort();
}

bool perspectives_member(const Expr& e, const Perspective& p) {
  if (e.arity() == 0) {
    if (!e.head_is_var()) return true;
    return std::any_of(p.vars.begin(), p.vars.end(),
                       [&](const Var& u) { return u.name == e.head(); });
  }
  for (const auto& a : e.args())
    if (!perspectives_member(a.body, p.extended(a.binders))) return false;
  return true;
}

bool in_class(const Expr& e, const Perspective& p) { return perspectives_member(e, p); }

PgpWitness pgp_decompose(const Expr& e, const Perspective& p) {
  if (!in_class(e, p)) throw Error(ErrorKind::NotInClass, print_expr(e));
  PgpWitness w{e.head(), e.head_is_var(), {}};
  for (const auto& a : e.args()) w.args.push_back(PgpArg{a.binders, a.body, p.extended(a.binders)});
  return w;
}

std::vector<Var> fresh_vars(const Signature& sig, const std::vector<SortId>& sorts,
                            const std::set<Var>& avoid) {
  std::set<std::string> taken;
  for (const auto& v : avoid) taken.insert(v.name);
  std::vector<Var> out;
  for (const auto& s : sorts) {
    for (std::size_t n = 0;; ++n) {
      Var v = sig.variable(s, n);
      if (taken.insert(v.name).second) {
        out.push_back(v);
        break;
      }
    }
  }
  return out;
}

namespace {
void collect_vars(const Expr& e, std::set<Var>& out) {
  if (e.head_is_var()) out.insert(e.as_var());
  for (const auto& a : e.args()) {
    out.insert(a.binders.begin(), a.binders.end());
    collect_vars(a.body, out);
  }
}

void print_into(const Expr& e, std::string& out) {
  out += e.head();
  if (e.arity() == 0) return;
  out += '(';
  bool first = true;
  for (const auto& a : e.args()) {
    if (!first) out += ',';
    first = false;
    if (!a.binders.empty()) {
      out += '(';
      for (std::size_t j = 0; j < a.binders.size(); ++j) {
        if (j) out += ',';
        out += a.binders[j].name;
      }
      out += "): ";
    }
    print_into(a.body, out);
  }
  out += ')';
}
}  // namespace

std::set<Var> all_vars(const Expr& e) {
  std::set<Var> out;
  collect_vars(e, out);
  return out;
}

std::string print_expr(const Expr& e) {
  std::string out;
  print_into(e, out);
  return out;
}

// ---------------------------------------------------------------------------

namespace logic {

namespace {
void need_prop(const Expr& a, std::string_view op) {
  if (a.sort() != prop_sort())
    throw Error(ErrorKind::SortMismatch, std::string(op) + " needs a formula, got sort " + a.sort().name);
}

Expr connective(std::string_view op, std::initializer_list<Expr> xs) {
  std::vector<Arg> args;
  for (const auto& x : xs) {
    need_prop(x, op);
    args.push_back(Arg{{}, x});
  }
  return Expr::make_unchecked(std::string(op), false, prop_sort(), std::move(args));
}
}  // namespace

Expr top() { return Expr::make_unchecked(std::string(kTrue), false, prop_sort(), {}); }
Expr bottom() { return Expr::make_unchecked(std::string(kFalse), false, prop_sort(), {}); }
Expr not_(const Expr& a) { return connective(kNot, {a}); }
Expr imp(const Expr& a, const Expr& b) { return connective(kImp, {a, b}); }
Expr and_(const Expr& a, const Expr& b) { return connective(kAnd, {a, b}); }
Expr or_(const Expr& a, const Expr& b) { return connective(kOr, {a, b}); }
Expr iff(const Expr& a, const Expr& b) { return connective(kIff, {a, b}); }

Expr forall(const Var& x, const Expr& body) {
  need_prop(body, "forall");
  return Expr::make_unchecked(forall_name(x.sort), false, prop_sort(), {Arg{{x}, body}});
}

Expr exists(const Var& x, const Expr& body) {
  need_prop(body, "exists");
  return Expr::make_unchecked(exists_name(x.sort), false, prop_sort(), {Arg{{x}, body}});
}

Expr forall_all(const std::vector<Var>& xs, const Expr& body) {
  Expr out = body;
  for (auto it = xs.rbegin(); it != xs.rend(); ++it) out = forall(*it, out);
  return out;
}

Expr eq(const Expr& a, const Expr& b) {
  if (a.sort() != b.sort())
    throw Error(ErrorKind::SortMismatch, "equation between sorts " + a.sort().name + " and " + b.sort().name);
  return Expr::make_unchecked(eq_name(a.sort()), false, prop_sort(), {Arg{{}, a}, Arg{{}, b}});
}

Expr calc_eq(const Expr& a, const Expr& b) {
  if (a.sort() == prop_sort() && b.sort() == prop_sort()) return iff(a, b);
  return eq(a, b);
}

bool is_connective(std::string_view head) {
  return head == kNot || head == kImp || head == kAnd || head == kOr || head == kIff ||
         head == kTrue || head == kFalse;
}

}  // namespace logic

}  // namespace fnl
