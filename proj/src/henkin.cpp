#include "fnl/henkin.hpp"

#include <algorithm>
#include <cstdio>
#include <memory>

#include "fnl/error.hpp"
#include "fnl/parser.hpp"
#include "fnl/subst.hpp"

namespace fnl {

using namespace logic;

// ---------------------------------------------------------------------------
// enumeration

const std::vector<Expr>& Enumerator::get(const SortId& sort, std::size_t depth, const std::vector<Var>& scope) {
  Key key{sort, depth, scope};
  if (auto it = memo_.find(key); it != memo_.end()) return it->second;

  std::vector<Expr> out;
  if (depth > 0) {
    std::set<std::string> seen;
    for (auto it = scope.rbegin(); it != scope.rend(); ++it)
      if (it->sort == sort && seen.insert(it->name).second) out.push_back(Expr::variable(*it));
    for (const auto& [name, op] : sig_.ops())
      if (op.result == sort && op.args.empty()) out.push_back(Expr::make_unchecked(name, false, sort, {}));
    if (depth > 1) {
      for (const auto& [name, op] : sig_.ops()) {
        if (op.result != sort || op.args.empty()) continue;
        std::vector<std::vector<Var>> binders;
        std::vector<const std::vector<Expr>*> kids;
        bool empty = false;
        for (const auto& slot : op.args) {
          std::vector<Var> bs;
          std::set<Var> taken(scope.begin(), scope.end());
          for (const auto& b : slot.binders) {
            std::size_t k = 0;
            while (taken.contains(sig_.variable(b, k))) ++k;
            bs.push_back(sig_.variable(b, k));
            taken.insert(bs.back());
          }
          std::vector<Var> inner = scope;
          inner.insert(inner.end(), bs.begin(), bs.end());
          kids.push_back(&get(slot.sort, depth - 1, inner));
          empty = empty || kids.back()->empty();
          binders.push_back(std::move(bs));
        }
        if (empty) continue;
        std::vector<std::size_t> idx(kids.size(), 0);
        while (true) {
          std::vector<Arg> args;
          for (std::size_t i = 0; i < kids.size(); ++i) args.push_back(Arg{binders[i], (*kids[i])[idx[i]]});
          out.push_back(Expr::make_unchecked(name, false, sort, std::move(args)));
          if (out.size() > limit_)
            throw Error(ErrorKind::EnumerationTooLarge, "more than " + std::to_string(limit_) + " expressions of sort " +
                                                            sort.name + " at depth " + std::to_string(depth));
          std::size_t i = kids.size();
          while (i-- > 0) {
            if (++idx[i] < kids[i]->size()) break;
            idx[i] = 0;
          }
          if (i == static_cast<std::size_t>(-1)) break;
        }
      }
    }
    std::stable_sort(out.begin(), out.end(), size_lex_less);
  }
  return memo_.emplace(std::move(key), std::move(out)).first->second;
}

// ---------------------------------------------------------------------------
// oracles

Oracle theory_oracle(const Structure& m) {
  auto sp = std::make_shared<const Structure>(m);
  return [sp](const Expr& phi) {
    if (phi.sort() != prop_sort() || !is_closed(phi)) return Verdict::Undecided;
    return evaluate(*sp, phi, {}).value() == 1 ? Verdict::Provable : Verdict::Refutable;
  };
}

void require_named(const Structure& m) {
  for (const auto& sort : m.signature.sorts()) {
    if (sort == prop_sort()) continue;
    std::set<Elem> named;
    for (const auto& [name, op] : m.signature.ops())
      if (op.result == sort && op.args.empty()) named.insert(m.apply(name, {}));
    for (Elem e = 0; e < m.size(sort); ++e)
      if (!named.contains(e))
        throw Error(ErrorKind::ElementNotNamed, "element " + m.element_name(sort, e) + " of sort " + sort.name);
  }
}

ConsistencyOracle consistency_from(const Oracle& oracle) {
  return [oracle](const Theory&, const Expr& phi) -> std::optional<bool> {
    switch (oracle(phi)) {
      case Verdict::Provable: return true;
      case Verdict::Refutable: return false;
      case Verdict::Undecided: break;
    }
    return std::nullopt;
  };
}

Theory saturate_bounded(const Theory& t, const std::vector<Expr>& candidates, const ConsistencyOracle& oracle) {
  Theory out = t;
  for (const auto& phi : candidates) {
    auto ok = oracle(out, phi);
    if (!ok) throw Error(ErrorKind::OracleUndecided, print_expr(phi));
    out.axioms.push_back(*ok ? phi : not_(phi));
  }
  return out;
}

// ---------------------------------------------------------------------------
// norms

TermModelContext::TermModelContext(Signature sig, Oracle oracle, std::size_t depth_bound)
    : sig_(std::move(sig)), oracle_(std::move(oracle)), depth_bound_(depth_bound), enum_(sig_) {}

Verdict TermModelContext::decide(const Expr& phi) const {
  ++calls_;
  return oracle_(phi);
}

const std::vector<Expr>& TermModelContext::closed(const SortId& sort) { return enum_.get(sort, depth_bound_, {}); }

Expr TermModelContext::norm(const Expr& e) {
  if (!is_closed(e)) throw Error(ErrorKind::NotInClass, "norm of an open expression " + print_expr(e));
  std::lock_guard lock(mu_);
  if (auto it = cache_.find(e); it != cache_.end()) return it->second;
  Expr out;
  if (e.sort() == prop_sort()) {
    Verdict v = decide(e);
    if (v == Verdict::Undecided) throw Error(ErrorKind::OracleUndecided, print_expr(e));
    out = v == Verdict::Provable ? top() : bottom();
  } else {
    bool found = false;
    for (const auto& a : closed(e.sort())) {
      Verdict v = decide(eq(a, e));
      if (v == Verdict::Undecided) throw Error(ErrorKind::OracleUndecided, print_expr(eq(a, e)));
      if (v == Verdict::Provable) {
        out = a;
        found = true;
        break;
      }
    }
    if (!found) throw Error(ErrorKind::NoRepresentativeInBound, print_expr(e));
  }
  cache_.emplace(e, out);
  cache_.emplace(out, out);
  return out;
}

// ---------------------------------------------------------------------------
// term structure

Elem term_element(const Structure& cm, const Expr& norm) {
  if (norm.sort() == prop_sort()) {
    if (norm == top()) return 1;
    if (norm == bottom()) return 0;
  } else if (auto e = cm.element(norm.sort(), print_expr(norm))) {
    return *e;
  }
  throw Error(ErrorKind::NoRepresentativeInBound, "not a carrier element: " + print_expr(norm));
}

Expr term_of(const Structure& cm, const SortId& sort, Elem e) {
  if (sort == prop_sort()) return e ? top() : bottom();
  // carrier names are canonical prints, so parsing is deterministic
  thread_local std::unordered_map<std::string, Expr> parsed;
  const std::string& name = cm.element_name(sort, e);
  std::string key = sort.name + '\n' + name;
  if (auto it = parsed.find(key); it != parsed.end()) return it->second;
  Expr x = parse_expr(cm.signature, name);
  parsed.emplace(std::move(key), x);
  return x;
}

namespace {

std::vector<Var> canonical_vars(const Signature& sig, const std::vector<SortId>& sorts) {
  std::map<SortId, std::size_t> used;
  std::vector<Var> out;
  for (const auto& s : sorts) out.push_back(sig.variable(s, used[s]++));
  return out;
}

void sequences(const std::vector<SortId>& alphabet, std::size_t len, std::vector<SortId>& cur,
               std::vector<std::vector<SortId>>& out) {
  if (cur.size() == len) {
    out.push_back(cur);
    return;
  }
  for (const auto& a : alphabet) {
    cur.push_back(a);
    sequences(alphabet, len, cur, out);
    cur.pop_back();
  }
}

struct Witnessed {
  std::vector<Rows> tables;            // in discovery order
  std::map<Rows, std::vector<Expr>> by_table;  // first two witnesses each
};

}  // namespace

Structure build_term_structure(TermModelContext& ctx, std::size_t cap) {
  const Signature& sig = ctx.signature();
  Structure s;
  s.signature = sig;
  s.carriers[prop_sort()] = {"0", "1"};
  std::map<SortId, std::vector<Expr>> elems;
  for (const auto& sort : sig.sorts()) {
    if (sort == prop_sort()) continue;
    std::set<std::string> seen;
    for (const auto& e : ctx.closed(sort)) {
      Expr n = ctx.norm(e);
      if (seen.insert(print_expr(n)).second) elems[sort].push_back(n);
    }
    if (elems[sort].empty())
      throw Error(ErrorKind::NoRepresentativeInBound, "no closed expression of sort " + sort.name + " within bound");
    std::sort(elems[sort].begin(), elems[sort].end(), size_lex_less);
    for (const auto& n : elems[sort]) s.carriers[sort].push_back(print_expr(n));
  }

  // selected sets: substitution maps of enumerated expressions
  std::set<SelKey> wanted;
  const std::vector<SortId> vs(sig.var_sorts().begin(), sig.var_sorts().end());
  for (std::size_t len = 1; len <= cap; ++len) {
    std::vector<std::vector<SortId>> seqs;
    std::vector<SortId> cur;
    sequences(vs, len, cur, seqs);
    for (const auto& sort : sig.sorts())
      if (sort != prop_sort())
        for (const auto& d : seqs) wanted.insert(SelKey{sort, d});
  }
  for (const auto& [name, op] : sig.ops()) {
    if (sig.is_distinguished(name)) continue;
    for (const auto& slot : op.args)
      if (!slot.binders.empty()) wanted.insert(SelKey{slot.sort, slot.binders});
  }

  std::map<SelKey, Witnessed> witnesses;
  for (const auto& key : wanted) {
    const std::vector<Var> us = canonical_vars(sig, key.domain);
    const std::size_t depth = key.codomain == prop_sort() ? std::min<std::size_t>(ctx.depth_bound(), 3) : ctx.depth_bound();
    const std::size_t n = s.tuple_count(key.domain);
    Witnessed& w = witnesses[key];
    TableSet& set = s.selected[key];
    for (const auto& e : ctx.enumerator().get(key.codomain, depth, us)) {
      Rows rows(n);
      for (std::size_t t = 0; t < n; ++t) {
        auto coords = decode_tuple(s, key.domain, t);
        std::vector<Expr> cs;
        for (std::size_t j = 0; j < coords.size(); ++j) cs.push_back(term_of(s, key.domain[j], coords[j]));
        rows[t] = term_element(s, ctx.norm(substitute(e, SubstMap(us, cs))));
      }
      auto& ws = w.by_table[rows];
      if (ws.empty()) w.tables.push_back(rows);
      if (ws.size() < 2) ws.push_back(e);
      set.insert(std::move(rows));
    }
  }

  // operations act by substitution then norm
  for (const auto& [name, op] : sig.ops()) {
    if (sig.is_distinguished(name)) continue;
    OpInterp oi;
    struct Choice {
      Rows key;
      std::vector<Expr> witnesses;  // body expressions
    };
    std::vector<std::vector<Choice>> slots;
    std::vector<std::vector<Var>> binders;
    std::size_t total = 1;
    for (const auto& slot : op.args) {
      std::vector<Choice> cs;
      if (slot.binders.empty()) {
        for (Elem e = 0; e < s.size(slot.sort); ++e) cs.push_back(Choice{Rows{e}, {term_of(s, slot.sort, e)}});
        binders.emplace_back();
      } else {
        const Witnessed& w = witnesses.at(SelKey{slot.sort, slot.binders});
        for (const auto& t : w.tables) cs.push_back(Choice{t, w.by_table.at(t)});
        binders.push_back(canonical_vars(sig, slot.binders));
      }
      if (cs.empty()) throw Error(ErrorKind::NoRepresentativeInBound, "no argument for " + name);
      if (total > 2'000'000 / cs.size()) throw Error(ErrorKind::EnumerationTooLarge, "argument space of " + name);
      total *= cs.size();
      slots.push_back(std::move(cs));
    }
    auto value = [&](const std::vector<std::size_t>& idx, std::size_t alt_slot, std::size_t alt) {
      std::vector<Arg> args;
      for (std::size_t i = 0; i < slots.size(); ++i) {
        const Choice& c = slots[i][idx[i]];
        args.push_back(Arg{binders[i], c.witnesses[i == alt_slot ? alt : 0]});
      }
      Expr term = Expr::apply(sig, name, std::move(args));
      pgp_decompose(term, {});
      ++ctx.pgp_checked;
      return term_element(s, ctx.norm(term));
    };
    std::vector<std::size_t> idx(slots.size(), 0);
    for (std::size_t n = 0; n < total; ++n) {
      Rows key;
      for (std::size_t i = 0; i < slots.size(); ++i) key.insert(key.end(), slots[i][idx[i]].key.begin(), slots[i][idx[i]].key.end());
      Elem v = value(idx, slots.size(), 0);
      for (std::size_t i = 0; i < slots.size(); ++i)
        for (std::size_t a = 1; a < slots[i][idx[i]].witnesses.size(); ++a)
          if (value(idx, i, a) != v)
            throw Error(ErrorKind::OracleInconsistent,
                        name + ": equal arguments " + print_expr(slots[i][idx[i]].witnesses[0]) + " and " +
                            print_expr(slots[i][idx[i]].witnesses[a]) + " give different norms");
      oi.table.emplace(std::move(key), v);
      for (std::size_t i = slots.size(); i-- > 0;) {
        if (++idx[i] < slots[i].size()) break;
        idx[i] = 0;
      }
    }
    s.interp.emplace(name, std::move(oi));
  }
  validate_structure(s);
  return s;
}

Agreement check_cm_expr(TermModelContext& ctx, const Structure& cm, const Expr& e, const std::vector<Var>& xs) {
  Agreement out;
  Perspective p{xs};
  FnTable table = evaluate(cm, e, p);
  const auto sorts = p.sorts();
  for (std::size_t t = 0; t < table.rows.size(); ++t) {
    auto coords = decode_tuple(cm, sorts, t);
    std::vector<Expr> ss;
    for (std::size_t j = 0; j < coords.size(); ++j) ss.push_back(term_of(cm, sorts[j], coords[j]));
    Expr inst = xs.empty() ? e : substitute(e, SubstMap(xs, ss));
    Elem want = term_element(cm, ctx.norm(inst));
    ++out.cases;
    if (want != table.rows[t]) {
      out.agree = false;
      out.detail = print_expr(e) + " at " + print_expr(inst) + ": structure gives " +
                   cm.element_name(e.sort(), table.rows[t]) + ", norm is " + cm.element_name(e.sort(), want);
      return out;
    }
  }
  return out;
}

Agreement check_ded_sat(TermModelContext& ctx, const Structure& cm, const Expr& phi) {
  Verdict v = ctx.decide(phi);
  if (v == Verdict::Undecided) throw Error(ErrorKind::OracleUndecided, print_expr(phi));
  Agreement out;
  out.cases = 1;
  const bool provable = v == Verdict::Provable;
  const bool sat = satisfies(cm, phi);
  if (provable != sat) {
    out.agree = false;
    out.detail = print_expr(phi) + (provable ? " provable but not satisfied" : " satisfied but not provable");
  }
  return out;
}

// ---------------------------------------------------------------------------
// Henkin constants

std::string special_constant_name(const Expr& phi, const Var& x) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto feed = [&](std::string_view s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
  };
  feed(print_expr(phi));
  feed("|");
  feed(x.name);
  feed(":");
  feed(x.sort.name);
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return std::string("c_") + buf;
}

SpecialConstant special_constant(const Signature& sig, const Expr& phi, const Var& x) {
  for (const auto& v : fv(phi))
    if (v != x) throw Error(ErrorKind::NotSingleFree, print_expr(phi) + " has free " + v.name);
  if (phi.sort() != prop_sort()) throw Error(ErrorKind::SortMismatch, "special constant for a non-formula");
  SpecialConstant out{sig, special_constant_name(phi, x), {}};
  if (!out.signature.find_op(out.name)) out.signature.add_op(out.name, OpSignature{x.sort, {}});
  Expr c = Expr::apply(out.signature, out.name);
  out.axiom = imp(exists(x, phi), substitute(phi, x, c));
  return out;
}

Theory henkin_extend(const Theory& t, std::size_t levels, std::size_t depth) {
  Theory cur = t;
  for (std::size_t level = 0; level < levels; ++level) {
    Enumerator en(cur.signature);
    Signature next = cur.signature;
    std::vector<Expr> added;
    for (const auto& sort : cur.signature.var_sorts()) {
      const Var x = cur.signature.variable(sort, 0);
      for (const auto& phi : en.get(prop_sort(), depth, {x})) {
        const std::string name = special_constant_name(phi, x);
        if (next.find_op(name)) continue;
        SpecialConstant sc = special_constant(next, phi, x);
        next = std::move(sc.signature);
        added.push_back(std::move(sc.axiom));
      }
    }
    cur.signature = std::move(next);
    cur.axioms.insert(cur.axioms.end(), added.begin(), added.end());
  }
  return cur;
}

namespace {

// (x, φ) of an axiom ∃x φ → ψ.
std::optional<std::pair<Var, Expr>> special_shape(const Expr& ax) {
  if (ax.head_is_var() || ax.head() != kImp) return std::nullopt;
  const Expr& lhs = ax.args()[0].body;
  if (lhs.head_is_var() || !lhs.head().starts_with("exists^")) return std::nullopt;
  const Arg& a = lhs.args()[0];
  if (a.binders.size() != 1) return std::nullopt;
  return std::make_pair(a.binders[0], a.body);
}

}  // namespace

Structure expand_henkin_model(const Structure& m, const Theory& extended) {
  if (!extends(m.signature, extended.signature))
    throw Error(ErrorKind::NotAnExtension, "theory signature does not extend the structure's");
  Structure out = m;
  out.signature = extended.signature;
  for (const auto& ax : extended.axioms) {
    auto shape = special_shape(ax);
    if (!shape) continue;
    const auto& [x, phi] = *shape;
    const std::string name = special_constant_name(phi, x);
    if (m.signature.find_op(name) || out.interp.contains(name) || !out.signature.find_op(name)) continue;
    FnTable t = evaluate(out, phi, Perspective{{x}});
    auto it = std::find(t.rows.begin(), t.rows.end(), 1);
    out.interp.emplace(name, OpInterp::constant(it == t.rows.end() ? 0 : static_cast<Elem>(it - t.rows.begin())));
  }
  validate_structure(out);
  return out;
}

Proof derive_henkin_instance(const Theory& t, const Expr& phi, const Var& z) {
  const Expr nphi = not_(phi);
  SpecialConstant sc = special_constant(t.signature, nphi, z);
  auto pos = std::find(t.axioms.begin(), t.axioms.end(), sc.axiom);
  if (pos == t.axioms.end()) throw Error(ErrorKind::SourceProofInvalid, "no special axiom for " + print_expr(nphi));
  const Expr c = Expr::apply(t.signature, sc.name);
  const Expr phic = substitute(phi, z, c);
  const Expr ex = exists(z, nphi);

  ProofBuilder pb(t);
  std::size_t ax = pb.axiom(static_cast<std::size_t>(pos - t.axioms.begin()));
  std::size_t contra = pb.mp(ax, pb.taut(imp(imp(ex, not_(phic)), imp(phic, not_(ex)))));
  std::size_t intro = pb.add(imp(nphi, ex), just::ExistsIntro{z, Expr::variable(z)});
  std::size_t back = pb.mp(intro, pb.taut(imp(imp(nphi, ex), imp(not_(ex), phi))));
  std::size_t all = pb.gen_under(back, z);
  pb.chain(contra, all);
  return std::move(pb).finish();
}

}  // namespace fnl

namespace fnl {

void CheckTally::add(bool ok, const std::string& detail) {
  ++cases;
  if (ok) return;
  if (failures++ == 0) first = detail;
}

TermModelReport run_term_model(const Structure& m, const TermModelOptions& opt) {
  TermModelReport rep;
  if (opt.depth == 0) return rep;
  if (!m.is_full()) throw Error(ErrorKind::InvalidStructure, "term model source must be a full structure");
  require_named(m);
  const Signature& sig = m.signature;
  TermModelContext ctx(sig, theory_oracle(m), opt.depth);
  Structure cm = build_term_structure(ctx, opt.cap);
  for (const auto& s : sig.sorts()) rep.carrier_sizes[s.name] = cm.size(s);

  const std::size_t pd = std::min(opt.prop_depth, opt.depth);
  auto closed_of = [&](const SortId& s) -> const std::vector<Expr>& {
    return ctx.enumerator().get(s, s == prop_sort() ? pd : opt.depth);
  };

  // norm properties (1)-(3) and idempotence
  for (const auto& s : sig.sorts()) {
    const auto& es = closed_of(s);
    for (const auto& e : es) {
      Expr n = ctx.norm(e);
      rep.norm_props.add(ctx.decide(calc_eq(n, e)) == Verdict::Provable, "norm(e) = e unprovable for " + print_expr(e));
      if (s == prop_sort())
        rep.norm_props.add((ctx.decide(e) == Verdict::Provable) == (n == top()), "norm disagrees with provability of " + print_expr(e));
      rep.idempotence.add(ctx.norm(n) == n, "norm not idempotent at " + print_expr(e));
    }
    if (s == prop_sort()) continue;
    // property (2) over pairs of the smaller closed terms
    const auto& small = ctx.enumerator().get(s, std::min<std::size_t>(opt.depth, 3));
    for (const auto& a : small)
      for (const auto& b : small)
        rep.norm_props.add((ctx.decide(calc_eq(a, b)) == Verdict::Provable) == (ctx.norm(a) == ctx.norm(b)),
                           "provable equality and norms differ on " + print_expr(a) + ", " + print_expr(b));
  }

  // tables against norms over closed expressions and over perspectives of v0.. of each variable sort
  auto tally_cm = [&](const Expr& e, const std::vector<Var>& xs) {
    Agreement a = check_cm_expr(ctx, cm, e, xs);
    rep.cm_expr.cases += a.cases;
    if (!a.agree && rep.cm_expr.failures++ == 0) rep.cm_expr.first = a.detail;
  };
  std::vector<std::vector<Var>> scopes{{}};
  for (const auto& vs : sig.var_sorts())
    for (std::size_t k = 1; k <= opt.open_vars; ++k) {
      std::vector<Var> xs;
      for (std::size_t i = 0; i < k; ++i) xs.push_back(sig.variable(vs, i));
      scopes.push_back(xs);
    }
  for (const auto& xs : scopes)
    for (const auto& s : sig.sorts()) {
      for (const auto& e : ctx.enumerator().get(s, s == prop_sort() ? pd : opt.depth, xs)) tally_cm(e, xs);
    }

  // provable iff satisfied, and the restriction agreeing with m
  Structure back = restrict_structure(cm, sig);
  for (const auto& phi : closed_of(prop_sort())) {
    Agreement a = check_ded_sat(ctx, cm, phi);
    rep.ded_sat.add(a.agree, a.detail);
    rep.restriction.add(satisfies(back, phi) == satisfies(m, phi), "restriction and source differ on " + print_expr(phi));
  }

  rep.oracle_calls = ctx.oracle_calls();
  rep.pgp_checked = ctx.pgp_checked;
  rep.term_structure = std::move(cm);
  return rep;
}

}  // namespace fnl
