#include "fnl/subst.hpp"

#include <algorithm>
#include <utility>

#include "fnl/error.hpp"

namespace fnl {

namespace {

void collect_fv(const Expr& e, std::vector<Var>& bound, std::set<Var>& out) {
  if (e.head_is_var()) {
    Var v = e.as_var();
    if (std::find(bound.begin(), bound.end(), v) == bound.end()) out.insert(std::move(v));
    return;
  }
  for (const auto& a : e.args()) {
    bound.insert(bound.end(), a.binders.begin(), a.binders.end());
    collect_fv(a.body, bound, out);
    bound.resize(bound.size() - a.binders.size());
  }
}

void collect_gv(const Expr& e, std::set<Var>& out) {
  for (const auto& a : e.args()) {
    out.insert(a.binders.begin(), a.binders.end());
    collect_gv(a.body, out);
  }
}

bool contains(const std::vector<Var>& vs, const Var& v) {
  return std::find(vs.begin(), vs.end(), v) != vs.end();
}

}  // namespace

std::set<Var> fv(const Expr& e) {
  std::vector<Var> bound;
  std::set<Var> out;
  collect_fv(e, bound, out);
  return out;
}

std::set<Var> gv(const Expr& e) {
  std::set<Var> out;
  collect_gv(e, out);
  return out;
}

bool is_closed(const Expr& e) { return fv(e).empty(); }

namespace {
bool subb(const Expr& e, const Var& x, const std::set<Var>& fvd) {
  for (const auto& a : e.args()) {
    if (contains(a.binders, x)) continue;
    if (!subb(a.body, x, fvd)) return false;
    for (const auto& v : a.binders)
      if (fvd.contains(v)) return false;
  }
  return true;
}
}  // namespace

bool substitutable(const Expr& d, const Var& x, const Expr& e) { return subb(e, x, fv(d)); }

SubstMap::SubstMap(std::vector<Var> xs, std::vector<Expr> ds)
    : targets(std::move(xs)), replacements(std::move(ds)) {
  if (targets.size() != replacements.size())
    throw Error(ErrorKind::SortClash, "substitution lists differ in length");
  for (std::size_t i = 0; i < targets.size(); ++i)
    if (targets[i].sort != replacements[i].sort())
      throw Error(ErrorKind::SortClash, "cannot replace " + targets[i].name + " by an expression of sort " +
                                            replacements[i].sort().name);
}

void SubstMap::push(const Var& x, const Expr& d) {
  if (x.sort != d.sort())
    throw Error(ErrorKind::SortClash, "cannot replace " + x.name + " by an expression of sort " + d.sort().name);
  targets.push_back(x);
  replacements.push_back(d);
}

SubstMap SubstMap::then(const SubstMap& other) const {
  SubstMap out = *this;
  out.targets.insert(out.targets.end(), other.targets.begin(), other.targets.end());
  out.replacements.insert(out.replacements.end(), other.replacements.begin(), other.replacements.end());
  return out;
}

namespace {

// The map is a stack of (target, replacement); binder groups push v ← v.
struct Stack {
  std::vector<std::pair<Var, Expr>> pairs;

  const Expr* lookup(const std::string& name) const {
    for (auto it = pairs.rbegin(); it != pairs.rend(); ++it)
      if (it->first.name == name) return &it->second;
    return nullptr;
  }
};

Expr subst_rec(const Expr& e, Stack& st) {
  if (e.arity() == 0) {
    if (!e.head_is_var()) return e;
    const Expr* d = st.lookup(e.head());
    return d ? *d : e;
  }
  std::vector<Arg> args;
  args.reserve(e.arity());
  bool changed = false;
  for (const auto& a : e.args()) {
    for (const auto& v : a.binders) st.pairs.emplace_back(v, Expr::variable(v));
    Expr body = subst_rec(a.body, st);
    st.pairs.resize(st.pairs.size() - a.binders.size());
    changed = changed || !(body.node() == a.body.node());
    args.push_back(Arg{a.binders, std::move(body)});
  }
  if (!changed) return e;
  return Expr::make_unchecked(e.head(), e.head_is_var(), e.sort(), std::move(args));
}

}  // namespace

Expr substitute(const Expr& e, const SubstMap& m) {
  if (m.targets.size() != m.replacements.size())
    throw Error(ErrorKind::SortClash, "substitution lists differ in length");
  Stack st;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m.targets[i].sort != m.replacements[i].sort())
      throw Error(ErrorKind::SortClash, "cannot replace " + m.targets[i].name);
    st.pairs.emplace_back(m.targets[i], m.replacements[i]);
  }
  return subst_rec(e, st);
}

Expr substitute(const Expr& e, const Var& x, const Expr& d) {
  SubstMap m;
  m.push(x, d);
  return substitute(e, m);
}

namespace {

// Position of the innermost binding of `name`, or -1 when free.
long level_of(const std::vector<Var>& env, const std::string& name) {
  for (std::size_t i = env.size(); i-- > 0;)
    if (env[i].name == name) return static_cast<long>(i);
  return -1;
}

bool alpha_rec(const Expr& a, const Expr& b, std::vector<Var>& ea, std::vector<Var>& eb) {
  if (a.head_is_var() != b.head_is_var() || a.sort() != b.sort() || a.arity() != b.arity())
    return false;
  if (a.head_is_var()) {
    long la = level_of(ea, a.head());
    long lb = level_of(eb, b.head());
    if (la != lb) return false;
    return la >= 0 || a.head() == b.head();
  }
  if (a.head() != b.head()) return false;
  for (std::size_t i = 0; i < a.arity(); ++i) {
    const Arg& x = a.args()[i];
    const Arg& y = b.args()[i];
    if (x.binders.size() != y.binders.size()) return false;
    for (std::size_t j = 0; j < x.binders.size(); ++j)
      if (x.binders[j].sort != y.binders[j].sort) return false;
    ea.insert(ea.end(), x.binders.begin(), x.binders.end());
    eb.insert(eb.end(), y.binders.begin(), y.binders.end());
    bool ok = alpha_rec(x.body, y.body, ea, eb);
    ea.resize(ea.size() - x.binders.size());
    eb.resize(eb.size() - y.binders.size());
    if (!ok) return false;
  }
  return true;
}

}  // namespace

bool alpha_equiv(const Expr& a, const Expr& b) {
  std::vector<Var> ea, eb;
  return alpha_rec(a, b, ea, eb);
}

}  // namespace fnl
