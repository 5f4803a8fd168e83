#include "fnl/calculus.hpp"

#include <algorithm>
#include <cstdint>
#include <unordered_map>

#include "fnl/error.hpp"
#include "fnl/subst.hpp"

namespace fnl {

using namespace logic;

void validate_theory(const Theory& t) {
  for (std::size_t i = 0; i < t.axioms.size(); ++i)
    if (sort_of(t.signature, t.axioms[i]) != prop_sort())
      throw Error(ErrorKind::SortMismatch, "axiom " + std::to_string(i + 1) + " is not a formula");
}

std::string justification_name(const Justification& j) {
  static const char* names[] = {"taut",    "forall_elim", "exists_intro", "forall_imp", "exists_imp", "eq_refl",
                                "eq_congr", "axiom",      "premise",      "mp",         "gen"};
  return names[j.index()];
}

// ---------------------------------------------------------------------------
// tautologies

namespace {

bool is_prop_connective(const Expr& e) { return !e.head_is_var() && is_connective(e.head()) && e.sort() == prop_sort(); }

void collect_atoms(const Expr& e, std::unordered_map<Expr, std::size_t, ExprHash>& index, std::vector<Expr>& out) {
  if (is_prop_connective(e)) {
    for (const auto& a : e.args()) collect_atoms(a.body, index, out);
    return;
  }
  if (index.emplace(e, out.size()).second) out.push_back(e);
}

using Bits = std::vector<std::uint64_t>;

Bits eval_bits(const Expr& e, const std::unordered_map<Expr, std::size_t, ExprHash>& index,
               const std::vector<Bits>& atoms, std::size_t words, std::uint64_t mask) {
  if (!is_prop_connective(e)) return atoms[index.at(e)];
  const std::string& h = e.head();
  if (h == kTrue) return Bits(words, mask);
  if (h == kFalse) return Bits(words, 0);
  Bits a = eval_bits(e.args()[0].body, index, atoms, words, mask);
  if (h == kNot) {
    for (auto& w : a) w = ~w & mask;
    return a;
  }
  Bits b = eval_bits(e.args()[1].body, index, atoms, words, mask);
  for (std::size_t i = 0; i < words; ++i) {
    if (h == kImp) a[i] = (~a[i] | b[i]) & mask;
    else if (h == kAnd) a[i] &= b[i];
    else if (h == kOr) a[i] |= b[i];
    else a[i] = ~(a[i] ^ b[i]) & mask;
  }
  return a;
}

}  // namespace

std::vector<Expr> taut_atoms(const Expr& phi) {
  std::unordered_map<Expr, std::size_t, ExprHash> index;
  std::vector<Expr> out;
  collect_atoms(phi, index, out);
  return out;
}

bool is_tautology(const Expr& phi) {
  if (phi.sort() != prop_sort()) return false;
  std::unordered_map<Expr, std::size_t, ExprHash> index;
  std::vector<Expr> atoms;
  collect_atoms(phi, index, atoms);
  const std::size_t n = atoms.size();
  if (n > kMaxTautAtoms) throw Error(ErrorKind::TooManyAtoms, std::to_string(n) + " atoms");

  // Assignment k gives atom j the value bit j of k; 64 assignments per word.
  const std::size_t rows = std::size_t{1} << n;
  const std::size_t words = (rows + 63) / 64;
  const std::uint64_t mask = rows >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << rows) - 1);
  std::vector<Bits> cols(n, Bits(words, 0));
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t w = 0; w < words; ++w) {
      std::uint64_t bits = 0;
      for (std::size_t k = 0; k < 64 && w * 64 + k < rows; ++k)
        if (((w * 64 + k) >> j) & 1) bits |= std::uint64_t{1} << k;
      cols[j][w] = bits;
    }
  }
  Bits r = eval_bits(phi, index, cols, words, mask);
  return std::all_of(r.begin(), r.end(), [&](std::uint64_t w) { return w == mask; });
}

// ---------------------------------------------------------------------------
// axiom schemes

std::pair<Expr, Expr> split_imp(const Expr& phi) {
  if (phi.head_is_var() || phi.head() != kImp || phi.arity() != 2)
    throw Error(ErrorKind::SourceProofInvalid, "not an implication: " + print_expr(phi));
  return {phi.args()[0].body, phi.args()[1].body};
}

namespace {

bool is_imp(const Expr& e) { return !e.head_is_var() && e.head() == kImp && e.arity() == 2; }

// Body of `quant^s((x): body)` when e has that shape.
std::optional<Expr> quantified(const Expr& e, std::string_view quant, const Var& x) {
  if (e.head_is_var() || e.arity() != 1) return std::nullopt;
  std::string want = quant == "forall" ? forall_name(x.sort) : exists_name(x.sort);
  if (e.head() != want) return std::nullopt;
  const Arg& a = e.args()[0];
  if (a.binders.size() != 1 || a.binders[0] != x) return std::nullopt;
  return a.body;
}

bool is_eq_refl(const Expr& phi) {
  if (phi.head_is_var() || phi.arity() != 2) return false;
  const Expr& l = phi.args()[0].body;
  const Expr& r = phi.args()[1].body;
  if (!(l == r)) return false;
  if (phi.head() == kIff) return true;
  return phi.head() == eq_name(l.sort());
}

bool check_forall_elim(const just::ForallElim& j, const Expr& phi) {
  if (!is_imp(phi) || j.a.sort() != j.x.sort) return false;
  auto [l, r] = split_imp(phi);
  auto psi = quantified(l, "forall", j.x);
  return psi && substitutable(j.a, j.x, *psi) && r == substitute(*psi, j.x, j.a);
}

bool check_exists_intro(const just::ExistsIntro& j, const Expr& phi) {
  if (!is_imp(phi) || j.a.sort() != j.x.sort) return false;
  auto [l, r] = split_imp(phi);
  auto psi = quantified(r, "exists", j.x);
  return psi && substitutable(j.a, j.x, *psi) && l == substitute(*psi, j.x, j.a);
}

// ∀x(ψ→χ) → (ψ → ∀x χ), x ∉ fv(ψ)
bool check_forall_dist(const just::ForallImpDist& j, const Expr& phi) {
  if (!is_imp(phi)) return false;
  auto [l, r] = split_imp(phi);
  auto body = quantified(l, "forall", j.x);
  if (!body || !is_imp(*body) || !is_imp(r)) return false;
  auto [psi, chi] = split_imp(*body);
  auto [psi2, qchi] = split_imp(r);
  auto chi2 = quantified(qchi, "forall", j.x);
  return psi == psi2 && chi2 && *chi2 == chi && !fv(psi).contains(j.x);
}

// ∀x(χ→ψ) → (∃x χ → ψ), x ∉ fv(ψ)
bool check_exists_dist(const just::ExistsImpDist& j, const Expr& phi) {
  if (!is_imp(phi)) return false;
  auto [l, r] = split_imp(phi);
  auto body = quantified(l, "forall", j.x);
  if (!body || !is_imp(*body) || !is_imp(r)) return false;
  auto [chi, psi] = split_imp(*body);
  auto [qchi, psi2] = split_imp(r);
  auto chi2 = quantified(qchi, "exists", j.x);
  return psi == psi2 && chi2 && *chi2 == chi && !fv(psi).contains(j.x);
}

bool distinct(const std::vector<Var>& vs) {
  std::set<Var> s(vs.begin(), vs.end());
  return s.size() == vs.size();
}

}  // namespace

Expr eq_congr_formula(const Signature& sig, const just::EqCongr& d) {
  auto fail = [](const std::string& why) -> Expr { throw Error(ErrorKind::SideConditionViolated, why); };
  const OpSignature* op = sig.find_op(d.op);
  if (!op) throw Error(ErrorKind::UnknownSymbol, d.op);
  if (d.slot >= op->arity() || d.delta.size() != d.slot || d.delta.size() + 1 + d.gamma.size() != op->arity())
    return fail("argument context does not fit " + d.op);
  const ArgSlot& slot = op->args[d.slot];
  const std::size_t r = slot.binders.size();
  if (d.xs.size() != r || d.ys.size() != r || d.zs.size() != r) return fail("binder count");
  for (std::size_t j = 0; j < r; ++j)
    if (d.xs[j].sort != slot.binders[j] || d.ys[j].sort != slot.binders[j] || d.zs[j].sort != slot.binders[j])
      return fail("binder sorts");
  if (!d.b1 || !d.b2 || d.b1.sort() != slot.sort || d.b2.sort() != slot.sort) return fail("argument sorts");
  if (!distinct(d.zs)) return fail("z variables not distinct");
  auto f1 = fv(d.b1), f2 = fv(d.b2);
  for (const auto& z : d.zs)
    if (f1.contains(z) || f2.contains(z)) return fail(z.name + " occurs free in an argument");
  // Without these the renamed antecedent can capture z (see README).
  for (std::size_t j = 0; j < r; ++j)
    if (!substitutable(Expr::variable(d.zs[j]), d.xs[j], d.b1) ||
        !substitutable(Expr::variable(d.zs[j]), d.ys[j], d.b2))
      return fail(d.zs[j].name + " is captured by the renaming");

  auto as_exprs = [](const std::vector<Var>& vs) {
    std::vector<Expr> out;
    for (const auto& v : vs) out.push_back(Expr::variable(v));
    return out;
  };
  Expr antecedent = forall_all(d.zs, calc_eq(substitute(d.b1, SubstMap(d.xs, as_exprs(d.zs))),
                                             substitute(d.b2, SubstMap(d.ys, as_exprs(d.zs)))));
  auto side = [&](const std::vector<Var>& binders, const Expr& body) {
    std::vector<Arg> args = d.delta;
    args.push_back(Arg{binders, body});
    args.insert(args.end(), d.gamma.begin(), d.gamma.end());
    return Expr::apply(sig, d.op, std::move(args));
  };
  return imp(antecedent, calc_eq(side(d.xs, d.b1), side(d.ys, d.b2)));
}

bool check_axiom_instance(const Signature& sig, const Justification& j, const Expr& phi) {
  if (!phi || phi.sort() != prop_sort()) return false;
  return std::visit(
      [&](const auto& d) -> bool {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, just::Taut>) {
          return is_tautology(phi);
        } else if constexpr (std::is_same_v<T, just::ForallElim>) {
          return check_forall_elim(d, phi);
        } else if constexpr (std::is_same_v<T, just::ExistsIntro>) {
          return check_exists_intro(d, phi);
        } else if constexpr (std::is_same_v<T, just::ForallImpDist>) {
          return check_forall_dist(d, phi);
        } else if constexpr (std::is_same_v<T, just::ExistsImpDist>) {
          return check_exists_dist(d, phi);
        } else if constexpr (std::is_same_v<T, just::EqRefl>) {
          return is_eq_refl(phi);
        } else if constexpr (std::is_same_v<T, just::EqCongr>) {
          try {
            return eq_congr_formula(sig, d) == phi;
          } catch (const Error&) {
            return false;
          }
        } else {
          return false;
        }
      },
      j);
}

// ---------------------------------------------------------------------------
// proof checking

CheckResult check_proof(const Proof& p) {
  const Signature& sig = p.theory.signature;
  auto fail = [](std::size_t i, std::string why) { return CheckResult{false, i, std::move(why)}; };
  if (p.lines.empty()) return fail(0, "empty proof");
  for (std::size_t i = 0; i < p.lines.size(); ++i) {
    const ProofLine& line = p.lines[i];
    const Expr& phi = line.formula;
    if (!phi) return fail(i, "missing formula");
    try {
      if (sort_of(sig, phi) != prop_sort()) return fail(i, "not a formula");
    } catch (const Error& e) {
      return fail(i, e.what());
    }
    auto earlier = [&](std::size_t k) { return k < i; };
    std::string why = std::visit(
        [&](const auto& d) -> std::string {
          using T = std::decay_t<decltype(d)>;
          if constexpr (std::is_same_v<T, just::Axiom>) {
            if (d.index >= p.theory.axioms.size()) return "no axiom " + std::to_string(d.index + 1);
            return p.theory.axioms[d.index] == phi ? "" : "formula differs from axiom " + std::to_string(d.index + 1);
          } else if constexpr (std::is_same_v<T, just::Premise>) {
            if (d.index >= p.premises.size()) return "no premise " + std::to_string(d.index + 1);
            return p.premises[d.index] == phi ? "" : "formula differs from premise " + std::to_string(d.index + 1);
          } else if constexpr (std::is_same_v<T, just::MP>) {
            if (!earlier(d.from) || !earlier(d.impl)) return "mp must cite earlier lines";
            const Expr& impl = p.lines[d.impl].formula;
            if (!is_imp(impl)) return "line " + std::to_string(d.impl + 1) + " is not an implication";
            auto [a, b] = split_imp(impl);
            if (!(a == p.lines[d.from].formula)) return "antecedent differs from line " + std::to_string(d.from + 1);
            return b == phi ? "" : "consequent differs from this line";
          } else if constexpr (std::is_same_v<T, just::Gen>) {
            if (!earlier(d.from)) return "gen must cite an earlier line";
            if (sig.variable_sort(d.x.name) != d.x.sort) return d.x.name + " is not a variable";
            return forall(d.x, p.lines[d.from].formula) == phi ? "" : "not the generalization of line " +
                                                                          std::to_string(d.from + 1);
          } else if constexpr (std::is_same_v<T, just::Taut>) {
            try {
              return is_tautology(phi) ? "" : "not a tautology";
            } catch (const Error& e) {
              return e.what();
            }
          } else {
            return check_axiom_instance(sig, line.why, phi) ? "" : "not an instance of " + justification_name(line.why);
          }
        },
        line.why);
    if (!why.empty()) return fail(i, why);
  }
  return {};
}

std::set<std::size_t> used_axioms(const Proof& p) {
  std::set<std::size_t> out;
  for (const auto& l : p.lines)
    if (auto* a = std::get_if<just::Axiom>(&l.why)) out.insert(a->index);
  return out;
}

Proof restrict_to_used_axioms(const Proof& p) {
  auto used = used_axioms(p);
  Proof out = p;
  out.theory.axioms.clear();
  std::unordered_map<std::size_t, std::size_t> renumber;
  for (std::size_t k : used) {
    renumber[k] = out.theory.axioms.size();
    out.theory.axioms.push_back(k < p.theory.axioms.size() ? p.theory.axioms[k] : Expr{});
  }
  for (auto& l : out.lines)
    if (auto* a = std::get_if<just::Axiom>(&l.why)) a->index = renumber.at(a->index);
  return out;
}

bool is_consistent_up_to(const Theory&, const Oracle& oracle) {
  switch (oracle(bottom())) {
    case Verdict::Provable: return false;
    case Verdict::Refutable: return true;
    case Verdict::Undecided: break;
  }
  throw Error(ErrorKind::OracleUndecided, "oracle does not decide false");
}

// ---------------------------------------------------------------------------

ProofBuilder::ProofBuilder(Theory t, std::vector<Expr> premises) {
  proof_.theory = std::move(t);
  proof_.premises = std::move(premises);
}

std::size_t ProofBuilder::add(Expr f, Justification why) {
  proof_.lines.push_back(ProofLine{std::move(f), std::move(why)});
  return proof_.lines.size() - 1;
}

std::size_t ProofBuilder::mp(std::size_t from, std::size_t impl) {
  auto [a, b] = split_imp(formula(impl));
  return add(b, just::MP{from, impl});
}

std::size_t ProofBuilder::gen(std::size_t from, const Var& x) { return add(forall(x, formula(from)), just::Gen{from, x}); }

std::size_t ProofBuilder::premise(std::size_t k) { return add(proof_.premises.at(k), just::Premise{k}); }

std::size_t ProofBuilder::axiom(std::size_t k) { return add(proof_.theory.axioms.at(k), just::Axiom{k}); }

std::size_t ProofBuilder::chain(std::size_t h_to_a, std::size_t a_to_b) {
  auto [h, a] = split_imp(formula(h_to_a));
  auto [a2, b] = split_imp(formula(a_to_b));
  std::size_t t = taut(imp(imp(h, a), imp(imp(a, b), imp(h, b))));
  return mp(a_to_b, mp(h_to_a, t));
}

std::size_t ProofBuilder::gen_under(std::size_t h_to_x, const Var& x) {
  auto [h, body] = split_imp(formula(h_to_x));
  std::size_t g = gen(h_to_x, x);
  std::size_t dist = add(imp(forall(x, imp(h, body)), imp(h, forall(x, body))), just::ForallImpDist{x});
  return mp(g, dist);
}

std::size_t ProofBuilder::weaken(std::size_t x, const Expr& h) {
  const Expr f = formula(x);
  return mp(x, taut(imp(f, imp(h, f))));
}

// ---------------------------------------------------------------------------
// inferring instantiation data

namespace {

bool match_rec(const Expr& psi, const Var& x, const Expr& t, std::vector<Var>& bound, std::optional<Expr>& found) {
  if (psi.head_is_var() && psi.head() == x.name &&
      std::find(bound.begin(), bound.end(), x) == bound.end()) {
    if (found) return *found == t;
    if (t.sort() != x.sort) return false;
    found = t;
    return true;
  }
  if (psi.head_is_var() != t.head_is_var() || psi.head() != t.head() || psi.arity() != t.arity() ||
      psi.sort() != t.sort())
    return false;
  for (std::size_t i = 0; i < psi.arity(); ++i) {
    const Arg& a = psi.args()[i];
    const Arg& b = t.args()[i];
    if (a.binders != b.binders) return false;
    bound.insert(bound.end(), a.binders.begin(), a.binders.end());
    bool ok = match_rec(a.body, x, b.body, bound, found);
    bound.resize(bound.size() - a.binders.size());
    if (!ok) return false;
  }
  return true;
}

}  // namespace

std::optional<Expr> match_instance(const Expr& psi, const Var& x, const Expr& target) {
  std::vector<Var> bound;
  std::optional<Expr> found;
  if (!match_rec(psi, x, target, bound, found)) return std::nullopt;
  if (!found) return Expr::variable(x);
  return found;
}

std::optional<just::EqCongr> infer_eq_congr(const Expr& phi, std::size_t slot) {
  if (!is_imp(phi)) return std::nullopt;
  auto [ante, concl] = split_imp(phi);
  if (concl.head_is_var() || concl.arity() != 2) return std::nullopt;
  const Expr& l = concl.args()[0].body;
  const Expr& r = concl.args()[1].body;
  if (l.head_is_var() || l.head() != r.head() || l.arity() != r.arity() || slot >= l.arity()) return std::nullopt;
  just::EqCongr d;
  d.op = l.head();
  d.slot = slot;
  d.delta.assign(l.args().begin(), l.args().begin() + slot);
  d.gamma.assign(l.args().begin() + slot + 1, l.args().end());
  d.xs = l.args()[slot].binders;
  d.ys = r.args()[slot].binders;
  d.b1 = l.args()[slot].body;
  d.b2 = r.args()[slot].body;
  Expr cur = ante;
  for (std::size_t j = 0; j < d.xs.size(); ++j) {
    if (cur.head_is_var() || cur.arity() != 1 || cur.args()[0].binders.size() != 1) return std::nullopt;
    d.zs.push_back(cur.args()[0].binders[0]);
    cur = cur.args()[0].body;
  }
  return d;
}

}  // namespace fnl
