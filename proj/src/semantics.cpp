#include "fnl/semantics.hpp"

#include <algorithm>
#include <atomic>
#include <functional>

#include "fnl/error.hpp"
#include "fnl/subst.hpp"

namespace fnl {

namespace {

std::uint64_t splitmix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::string rows_text(const Rows& r) {
  std::string out = "[";
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(r[i]);
  }
  return out + "]";
}

std::string sorts_text(const std::vector<SortId>& ss) {
  std::string out = "<";
  for (std::size_t i = 0; i < ss.size(); ++i) {
    if (i) out += ',';
    out += ss[i].name;
  }
  return out + ">";
}

}  // namespace

std::size_t RowsHash::operator()(const Rows& r) const {
  std::uint64_t h = r.size();
  for (Elem e : r) h = splitmix(h ^ e);
  return static_cast<std::size_t>(h);
}

OpInterp OpInterp::constant(Elem v) {
  OpInterp o;
  o.table.emplace(Rows{}, v);
  return o;
}

OpInterp OpInterp::hashed(std::uint64_t seed) {
  OpInterp o;
  o.hash_seed = seed;
  return o;
}

// ---------------------------------------------------------------------------
// operation kinds

namespace {

enum class Kind { True, False, Not, Imp, And, Or, Iff, Eq, Forall, Exists, User };

Kind classify(const Signature& sig, std::string_view op) {
  if (op == kTrue) return Kind::True;
  if (op == kFalse) return Kind::False;
  if (op == kNot) return Kind::Not;
  if (op == kImp) return Kind::Imp;
  if (op == kAnd) return Kind::And;
  if (op == kOr) return Kind::Or;
  if (op == kIff) return Kind::Iff;
  if (sig.is_distinguished(op)) {
    if (op.starts_with("eq_")) return Kind::Eq;
    if (op.starts_with("forall^")) return Kind::Forall;
    if (op.starts_with("exists^")) return Kind::Exists;
  }
  return Kind::User;
}

struct Resolved {
  Kind kind;
  const OpInterp* interp = nullptr;
  std::string_view name;
  std::size_t result_size = 0;
};

Resolved resolve(const Structure& s, std::string_view op) {
  const OpSignature* sig = s.signature.find_op(op);
  if (!sig) throw Error(ErrorKind::ForeignSignature, "symbol " + std::string(op));
  Resolved r{classify(s.signature, op), nullptr, op, s.size(sig->result)};
  if (r.kind == Kind::User) {
    auto it = s.interp.find(op);
    if (it == s.interp.end()) throw Error(ErrorKind::MissingInterpretation, std::string(op));
    r.interp = &it->second;
  }
  return r;
}

Elem apply_resolved(const Resolved& r, const Elem* args, std::size_t n) {
  switch (r.kind) {
    case Kind::True: return 1;
    case Kind::False: return 0;
    case Kind::Not: return args[0] ? 0 : 1;
    case Kind::Imp: return (!args[0] || args[1]) ? 1 : 0;
    case Kind::And: return (args[0] && args[1]) ? 1 : 0;
    case Kind::Or: return (args[0] || args[1]) ? 1 : 0;
    case Kind::Iff: return (args[0] == args[1]) ? 1 : 0;
    case Kind::Eq: return (args[0] == args[1]) ? 1 : 0;
    case Kind::Forall: return std::all_of(args, args + n, [](Elem e) { return e == 1; }) ? 1 : 0;
    case Kind::Exists: return std::any_of(args, args + n, [](Elem e) { return e == 1; }) ? 1 : 0;
    case Kind::User: break;
  }
  Rows key(args, args + n);
  auto it = r.interp->table.find(key);
  if (it != r.interp->table.end()) return it->second;
  if (r.interp->hash_seed) {
    std::uint64_t h = splitmix(*r.interp->hash_seed ^ std::hash<std::string_view>{}(r.name));
    for (Elem e : key) h = splitmix(h ^ (e + 0x51ULL));
    return static_cast<Elem>(h % r.result_size);
  }
  throw Error(ErrorKind::MissingInterpretation, std::string(r.name) + " at " + rows_text(key));
}

}  // namespace

// ---------------------------------------------------------------------------
// Structure

std::size_t Structure::size(const SortId& s) const {
  if (s == prop_sort()) return 2;
  auto it = carriers.find(s);
  if (it == carriers.end()) throw Error(ErrorKind::InvalidStructure, "no carrier for sort " + s.name);
  return it->second.size();
}

std::size_t Structure::tuple_count(const std::vector<SortId>& sorts) const {
  std::size_t n = 1;
  for (const auto& s : sorts) n *= size(s);
  return n;
}

bool Structure::in_selected(const SortId& codomain, const std::vector<SortId>& domain, const Rows& rows) const {
  if (domain.empty()) return rows.size() == 1 && rows[0] < size(codomain);
  auto it = selected.find(SelKey{codomain, domain});
  if (it == selected.end()) return true;
  return it->second.contains(rows);
}

std::optional<Elem> Structure::element(const SortId& s, std::string_view name) const {
  if (s == prop_sort()) {
    if (name == "0" || name == "false") return 0;
    if (name == "1" || name == "true") return 1;
    return std::nullopt;
  }
  auto it = carriers.find(s);
  if (it == carriers.end()) return std::nullopt;
  auto pos = std::find(it->second.begin(), it->second.end(), name);
  if (pos == it->second.end()) return std::nullopt;
  return static_cast<Elem>(pos - it->second.begin());
}

const std::string& Structure::element_name(const SortId& s, Elem e) const {
  static const std::vector<std::string> bools{"0", "1"};
  if (s == prop_sort()) return bools.at(e);
  return carriers.at(s).at(e);
}

Elem Structure::apply(std::string_view op, const Rows& args) const {
  return apply_resolved(resolve(*this, op), args.data(), args.size());
}

std::vector<Elem> decode_tuple(const Structure& s, const std::vector<SortId>& sorts, std::size_t index) {
  std::vector<Elem> out(sorts.size());
  for (std::size_t k = sorts.size(); k-- > 0;) {
    std::size_t n = s.size(sorts[k]);
    out[k] = static_cast<Elem>(index % n);
    index /= n;
  }
  return out;
}

std::vector<Rows> all_tables(const Structure& s, const SortId& codomain, const std::vector<SortId>& domain,
                             std::size_t limit) {
  const std::size_t rows = s.tuple_count(domain);
  const std::size_t base = s.size(codomain);
  std::size_t count = 1;
  for (std::size_t i = 0; i < rows; ++i) {
    if (count > limit / base) throw Error(ErrorKind::InvalidStructure, "function space too large: " +
                                                                           codomain.name + "^" + sorts_text(domain));
    count *= base;
  }
  std::vector<Rows> out;
  out.reserve(count);
  Rows cur(rows, 0);
  for (std::size_t n = 0; n < count; ++n) {
    out.push_back(cur);
    for (std::size_t i = rows; i-- > 0;) {
      if (++cur[i] < base) break;
      cur[i] = 0;
    }
  }
  return out;
}

std::vector<Rows> selected_members(const Structure& s, const SortId& codomain, const std::vector<SortId>& domain,
                                   std::size_t limit) {
  if (domain.empty()) {
    std::vector<Rows> out;
    for (Elem e = 0; e < s.size(codomain); ++e) out.push_back(Rows{e});
    return out;
  }
  auto it = s.selected.find(SelKey{codomain, domain});
  if (it == s.selected.end()) return all_tables(s, codomain, domain, limit);
  std::vector<Rows> out(it->second.begin(), it->second.end());
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// validation

namespace {

// Flattened argument length of an operation and per-slot (codomain, domain).
std::vector<std::pair<SortId, std::vector<SortId>>> slot_spaces(const OpSignature& op) {
  std::vector<std::pair<SortId, std::vector<SortId>>> out;
  for (const auto& a : op.args) out.emplace_back(a.sort, a.binders);
  return out;
}

}  // namespace

void validate_structure(const Structure& s) {
  for (const auto& sort : s.signature.sorts()) {
    if (sort == prop_sort()) {
      auto it = s.carriers.find(sort);
      if (it != s.carriers.end() && it->second != std::vector<std::string>{"0", "1"})
        throw Error(ErrorKind::InvalidStructure, "carrier of prop must be 0,1");
      continue;
    }
    auto it = s.carriers.find(sort);
    if (it == s.carriers.end() || it->second.empty())
      throw Error(ErrorKind::InvalidStructure, "empty carrier for sort " + sort.name);
    std::set<std::string> names(it->second.begin(), it->second.end());
    if (names.size() != it->second.size())
      throw Error(ErrorKind::InvalidStructure, "repeated element in carrier of " + sort.name);
  }
  for (const auto& [sort, elems] : s.carriers)
    if (!s.signature.has_sort(sort)) throw Error(ErrorKind::InvalidStructure, "carrier for unknown sort " + sort.name);

  for (const auto& [key, set] : s.selected) {
    if (!s.signature.has_sort(key.codomain) || key.domain.empty())
      throw Error(ErrorKind::InvalidStructure, "bad selected set " + key.codomain.name + "^" + sorts_text(key.domain));
    for (const auto& d : key.domain)
      if (!s.signature.is_var_sort(d))
        throw Error(ErrorKind::InvalidStructure, "selected set domain sort not a variable sort: " + d.name);
    const std::size_t n = s.tuple_count(key.domain), m = s.size(key.codomain);
    for (const auto& rows : set) {
      if (rows.size() != n)
        throw Error(ErrorKind::InvalidStructure, "table of wrong size in " + key.codomain.name + "^" + sorts_text(key.domain));
      for (Elem e : rows)
        if (e >= m) throw Error(ErrorKind::InterpretationOutOfCarrier, "selected table value " + std::to_string(e));
    }
  }

  for (const auto& [name, op] : s.signature.ops()) {
    if (s.signature.is_distinguished(name)) continue;
    auto it = s.interp.find(name);
    if (it == s.interp.end()) throw Error(ErrorKind::MissingInterpretation, name);
    const OpInterp& oi = it->second;
    const std::size_t m = s.size(op.result);
    auto spaces = slot_spaces(op);
    std::size_t width = 0;
    std::vector<std::size_t> widths;
    for (const auto& [cod, dom] : spaces) {
      widths.push_back(s.tuple_count(dom));
      width += widths.back();
    }
    for (const auto& [key, v] : oi.table) {
      if (v >= m) throw Error(ErrorKind::InterpretationOutOfCarrier, name + " yields " + std::to_string(v));
      if (key.size() != width) throw Error(ErrorKind::InvalidStructure, name + ": argument of wrong shape " + rows_text(key));
      std::size_t off = 0;
      for (std::size_t i = 0; i < spaces.size(); ++i) {
        const std::size_t cm = s.size(spaces[i].first);
        for (std::size_t k = 0; k < widths[i]; ++k)
          if (key[off + k] >= cm) throw Error(ErrorKind::InterpretationOutOfCarrier, name + " argument " + rows_text(key));
        off += widths[i];
      }
    }
    if (oi.hash_seed) continue;
    // totality over the product of the selected argument sets
    std::vector<std::vector<Rows>> doms;
    std::size_t total = 1;
    bool small = true;
    for (const auto& [cod, dom] : spaces) {
      try {
        doms.push_back(selected_members(s, cod, dom, 200'000));
      } catch (const Error&) {
        small = false;
        break;
      }
      total *= std::max<std::size_t>(doms.back().size(), 1);
      if (total > 2'000'000) {
        small = false;
        break;
      }
    }
    if (!small) continue;
    std::vector<std::size_t> idx(doms.size(), 0);
    for (std::size_t n = 0; n < total; ++n) {
      Rows key;
      for (std::size_t i = 0; i < doms.size(); ++i) key.insert(key.end(), doms[i][idx[i]].begin(), doms[i][idx[i]].end());
      if (!oi.table.contains(key)) throw Error(ErrorKind::MissingInterpretation, name + " at " + rows_text(key));
      for (std::size_t i = doms.size(); i-- > 0;) {
        if (++idx[i] < doms[i].size()) break;
        idx[i] = 0;
      }
    }
  }
  for (const auto& [name, oi] : s.interp)
    if (!s.signature.find_op(name) || s.signature.is_distinguished(name))
      throw Error(ErrorKind::InvalidStructure, "interpretation for non-user symbol " + name);
}

Structure make_full_structure(const Signature& sig, std::map<SortId, std::vector<std::string>> carriers,
                              std::map<std::string, OpInterp, std::less<>> interp) {
  Structure s;
  s.signature = sig;
  s.carriers = std::move(carriers);
  s.carriers[prop_sort()] = {"0", "1"};
  s.interp = std::move(interp);
  validate_structure(s);
  return s;
}

// ---------------------------------------------------------------------------
// closure laws

std::string_view to_string(ClosureLaw law) {
  switch (law) {
    case ClosureLaw::Constant: return "constant";
    case ClosureLaw::Projection: return "projection";
    case ClosureLaw::Fixing: return "fixing";
    case ClosureLaw::Composition: return "composition";
  }
  return "?";
}

bool ClosureReport::has(ClosureLaw law) const {
  return std::any_of(violations.begin(), violations.end(), [&](const auto& v) { return v.law == law; });
}

namespace {

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

std::vector<std::vector<SortId>> sequences_up_to(const std::vector<SortId>& alphabet, std::size_t from, std::size_t to) {
  std::vector<std::vector<SortId>> out;
  for (std::size_t len = from; len <= to; ++len) {
    std::vector<SortId> cur;
    sequences(alphabet, len, cur, out);
  }
  return out;
}

std::vector<SortId> concat(std::vector<SortId> a, const std::vector<SortId>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

}  // namespace

ClosureReport check_closure(const Structure& s, const ClosureOptions& opt) {
  ClosureReport rep;
  const std::vector<SortId> vs(s.signature.var_sorts().begin(), s.signature.var_sorts().end());
  const std::vector<SortId> all(s.signature.sorts().begin(), s.signature.sorts().end());
  auto declared = [&](const SortId& g, const std::vector<SortId>& d) {
    return s.selected.contains(SelKey{g, d});
  };
  auto violate = [&](ClosureLaw law, std::string detail) {
    rep.violations.push_back(ClosureViolation{law, std::move(detail)});
    return opt.stop_at_first;
  };
  auto name = [](const SortId& g, const std::vector<SortId>& d) { return g.name + "^" + sorts_text(d); };

  const auto sigmas = sequences_up_to(vs, 1, opt.cap);
  if (!s.is_full())
    for (const auto& g : all)
      for (const auto& d : sigmas)
        if (!declared(g, d)) rep.notes.push_back("undeclared " + name(g, d) + " taken as full");

  // constants and projections
  for (const auto& g : all)
    for (const auto& d : sigmas) {
      if (!declared(g, d)) continue;
      const std::size_t n = s.tuple_count(d);
      for (Elem w = 0; w < s.size(g); ++w)
        if (!s.in_selected(g, d, Rows(n, w)) &&
            violate(ClosureLaw::Constant, "cst_" + s.element_name(g, w) + " not in " + name(g, d)))
          return rep;
      for (std::size_t j = 0; j < d.size(); ++j) {
        if (d[j] != g) continue;
        Rows pj(n);
        for (std::size_t t = 0; t < n; ++t) pj[t] = decode_tuple(s, d, t)[j];
        if (!s.in_selected(g, d, pj) && violate(ClosureLaw::Projection, "pj_" + std::to_string(j + 1) + " not in " + name(g, d)))
          return rep;
      }
    }

  // partial fixing: g ∈ M_γ^{σ⃗⧺ρ⃗}, x⃗ ∈ M_σ⃗ ⟹ g_x⃗ ∈ M_γ^ρ⃗
  for (const auto& g : all)
    for (const auto& rho : sigmas) {
      if (!declared(g, rho)) continue;
      for (const auto& sigma : sequences_up_to(vs, 1, opt.cap >= rho.size() ? opt.cap - rho.size() : 0)) {
        if (sigma.empty()) continue;
        std::vector<Rows> src;
        try {
          src = selected_members(s, g, concat(sigma, rho), opt.budget);
        } catch (const Error&) {
          rep.notes.push_back("fixing into " + name(g, rho) + " from " + name(g, concat(sigma, rho)) + " skipped (budget)");
          continue;
        }
        const std::size_t block = s.tuple_count(rho), nx = s.tuple_count(sigma);
        for (const auto& tab : src)
          for (std::size_t x = 0; x < nx; ++x) {
            Rows part(tab.begin() + x * block, tab.begin() + (x + 1) * block);
            if (!s.in_selected(g, rho, part) &&
                violate(ClosureLaw::Fixing, "fixing " + rows_text(tab) + " in " + name(g, concat(sigma, rho)) +
                                                " at tuple " + std::to_string(x) + " gives " + rows_text(part) +
                                                " not in " + name(g, rho)))
              return rep;
          }
      }
    }

  // composition
  for (const auto& [opname, op] : s.signature.ops()) {
    if (op.args.empty()) continue;
    Resolved r = resolve(s, opname);
    for (const auto& sigma : sigmas) {
      if (!declared(op.result, sigma)) continue;
      std::vector<std::vector<Rows>> srcs;
      std::vector<std::size_t> blocks;
      std::size_t total = 1;
      bool over = false;
      for (const auto& a : op.args) {
        try {
          srcs.push_back(selected_members(s, a.sort, concat(sigma, a.binders), opt.budget));
        } catch (const Error&) {
          over = true;
          break;
        }
        blocks.push_back(s.tuple_count(a.binders));
        if (srcs.back().empty() || total > opt.budget / srcs.back().size()) {
          over = !srcs.back().empty();
          total = srcs.back().empty() ? 0 : total;
          break;
        }
        total *= srcs.back().size();
      }
      if (over) {
        rep.notes.push_back("composition of " + opname + " into " + name(op.result, sigma) + " skipped (budget)");
        continue;
      }
      if (srcs.size() != op.args.size()) continue;
      const std::size_t ny = s.tuple_count(sigma);
      std::vector<std::size_t> idx(srcs.size(), 0);
      for (std::size_t n = 0; n < total; ++n) {
        Rows out(ny);
        bool defined = true;
        for (std::size_t y = 0; y < ny && defined; ++y) {
          Rows key;
          for (std::size_t i = 0; i < srcs.size(); ++i) {
            const Rows& gi = srcs[i][idx[i]];
            Rows part(gi.begin() + y * blocks[i], gi.begin() + (y + 1) * blocks[i]);
            if (!s.in_selected(op.args[i].sort, op.args[i].binders, part)) defined = false;  // a fixing failure
            key.insert(key.end(), part.begin(), part.end());
          }
          if (defined) out[y] = apply_resolved(r, key.data(), key.size());
        }
        if (defined && !s.in_selected(op.result, sigma, out)) {
          std::string args;
          for (std::size_t i = 0; i < srcs.size(); ++i) args += (i ? "," : "") + rows_text(srcs[i][idx[i]]);
          if (violate(ClosureLaw::Composition,
                      opname + " composed with " + args + " gives " + rows_text(out) + " not in " + name(op.result, sigma)))
            return rep;
        }
        for (std::size_t i = srcs.size(); i-- > 0;) {
          if (++idx[i] < srcs[i].size()) break;
          idx[i] = 0;
        }
      }
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// evaluation

FnTable compose_node(const Structure& s, const Expr& e, const Perspective& p, const std::vector<const FnTable*>& args,
                     EvalMode mode) {
  const std::vector<SortId> sigma = p.sorts();
  const std::size_t n = s.tuple_count(sigma);
  FnTable out{sigma, e.sort(), Rows(n)};

  if (e.head_is_var()) {
    std::size_t k = p.vars.size();
    for (std::size_t j = p.vars.size(); j-- > 0;)
      if (p.vars[j].name == e.head()) {
        k = j;
        break;
      }
    if (k == p.vars.size()) throw Error(ErrorKind::NotInPerspective, e.head());
    std::size_t stride = 1;
    for (std::size_t j = k + 1; j < sigma.size(); ++j) stride *= s.size(sigma[j]);
    const std::size_t size_k = s.size(sigma[k]);
    for (std::size_t t = 0; t < n; ++t) out.rows[t] = static_cast<Elem>((t / stride) % size_k);
    return out;
  }

  Resolved r = resolve(s, e.head());
  const std::size_t m = e.arity();
  if (m == 0) {
    Elem v = apply_resolved(r, nullptr, 0);
    std::fill(out.rows.begin(), out.rows.end(), v);
    return out;
  }

  std::vector<std::size_t> blocks(m);
  std::vector<const TableSet*> sets(m, nullptr);
  std::size_t width = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const Arg& a = e.args()[i];
    std::vector<SortId> bs;
    for (const auto& v : a.binders) bs.push_back(v.sort);
    blocks[i] = s.tuple_count(bs);
    width += blocks[i];
    if (!bs.empty())
      if (auto it = s.selected.find(SelKey{a.body.sort(), bs}); it != s.selected.end()) sets[i] = &it->second;
    if (args[i]->rows.size() != n * blocks[i]) throw Error(ErrorKind::InvalidStructure, "argument table of wrong size");
  }

  std::atomic<bool> missed{false};
  std::string miss_detail;
  auto row = [&](std::size_t t, Rows& key) {
    key.clear();
    for (std::size_t i = 0; i < m; ++i) {
      const Elem* b = args[i]->rows.data() + t * blocks[i];
      key.insert(key.end(), b, b + blocks[i]);
      if (sets[i] && !sets[i]->contains(Rows(b, b + blocks[i]))) return false;
    }
    out.rows[t] = apply_resolved(r, key.data(), key.size());
    return true;
  };

  bool parallel = mode == EvalMode::Parallel && n >= 64;
  if (!parallel) {
    Rows key;
    key.reserve(width);
    for (std::size_t t = 0; t < n; ++t)
      if (!row(t, key)) throw Error(ErrorKind::SelectedSetMiss, e.head() + " at row " + std::to_string(t));
    return out;
  }
  std::exception_ptr err;
#pragma omp parallel
  {
    Rows key;
    key.reserve(width);
#pragma omp for schedule(static)
    for (long t = 0; t < static_cast<long>(n); ++t) {
      if (missed.load(std::memory_order_relaxed)) continue;
      try {
        if (!row(static_cast<std::size_t>(t), key)) {
#pragma omp critical
          if (!missed.exchange(true)) miss_detail = e.head() + " at row " + std::to_string(t);
        }
      } catch (...) {
#pragma omp critical
          {
            if (!err) err = std::current_exception();
            missed = true;
          }
      }
    }
  }
  if (err) std::rethrow_exception(err);
  if (missed) throw Error(ErrorKind::SelectedSetMiss, miss_detail);
  return out;
}

namespace {

FnTable eval_rec(const Structure& s, const Expr& e, const Perspective& p, EvalMode mode) {
  std::vector<FnTable> kids;
  kids.reserve(e.arity());
  for (const auto& a : e.args()) kids.push_back(eval_rec(s, a.body, p.extended(a.binders), mode));
  std::vector<const FnTable*> ptrs;
  for (const auto& k : kids) ptrs.push_back(&k);
  return compose_node(s, e, p, ptrs, mode);
}

}  // namespace

FnTable evaluate(const Structure& s, const Expr& e, const Perspective& p, EvalMode mode) {
  if (!in_class(e, p)) throw Error(ErrorKind::NotInPerspective, print_expr(e));
  return eval_rec(s, e, p, mode);
}

std::size_t Evaluator::KeyHash::operator()(const Key& k) const {
  std::size_t h = k.e.hash();
  for (const auto& v : k.vars) h = static_cast<std::size_t>(splitmix(h ^ std::hash<std::string>{}(v.name)));
  return h;
}

const FnTable& Evaluator::eval(const Expr& e, const Perspective& p) {
  Key key{e, p.vars};
  if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  std::vector<const FnTable*> ptrs;
  ptrs.reserve(e.arity());
  for (const auto& a : e.args()) ptrs.push_back(&eval(a.body, p.extended(a.binders)));
  FnTable t = compose_node(s_, e, p, ptrs, mode_);
  return cache_.emplace(std::move(key), std::move(t)).first->second;
}

// pointwise reference: environments, rightmost binding wins
namespace {

Elem eval_point(const Structure& s, const Expr& e, std::vector<std::pair<std::string, Elem>>& env) {
  if (e.head_is_var()) {
    for (auto it = env.rbegin(); it != env.rend(); ++it)
      if (it->first == e.head()) return it->second;
    throw Error(ErrorKind::NotInPerspective, e.head());
  }
  Rows key;
  for (const auto& a : e.args()) {
    std::vector<SortId> bs;
    for (const auto& v : a.binders) bs.push_back(v.sort);
    const std::size_t nb = s.tuple_count(bs);
    Rows block(nb);
    for (std::size_t t = 0; t < nb; ++t) {
      auto coords = decode_tuple(s, bs, t);
      for (std::size_t j = 0; j < bs.size(); ++j) env.emplace_back(a.binders[j].name, coords[j]);
      block[t] = eval_point(s, a.body, env);
      env.resize(env.size() - bs.size());
    }
    if (!bs.empty() && !s.in_selected(a.body.sort(), bs, block))
      throw Error(ErrorKind::SelectedSetMiss, e.head());
    key.insert(key.end(), block.begin(), block.end());
  }
  return s.apply(e.head(), key);
}

}  // namespace

FnTable evaluate_reference(const Structure& s, const Expr& e, const Perspective& p) {
  const std::vector<SortId> sigma = p.sorts();
  const std::size_t n = s.tuple_count(sigma);
  FnTable out{sigma, e.sort(), Rows(n)};
  std::vector<std::pair<std::string, Elem>> env;
  for (std::size_t t = 0; t < n; ++t) {
    auto coords = decode_tuple(s, sigma, t);
    env.clear();
    for (std::size_t j = 0; j < sigma.size(); ++j) env.emplace_back(p.vars[j].name, coords[j]);
    out.rows[t] = eval_point(s, e, env);
  }
  return out;
}

Perspective covering_perspective(const Expr& e) {
  auto f = fv(e);
  return Perspective{std::vector<Var>(f.begin(), f.end())};
}

bool satisfies(const Structure& s, const Expr& phi) {
  if (phi.sort() != prop_sort()) return false;
  FnTable t = evaluate(s, phi, covering_perspective(phi));
  return std::all_of(t.rows.begin(), t.rows.end(), [](Elem v) { return v == 1; });
}

bool satisfies_theory(const Structure& s, const Theory& t) {
  return std::all_of(t.axioms.begin(), t.axioms.end(), [&](const Expr& a) { return satisfies(s, a); });
}

Structure restrict_structure(const Structure& s, const Signature& to) {
  if (!extends(to, s.signature)) throw Error(ErrorKind::NotAnExtension, "target signature is not extended by the structure's");
  Structure out = s;
  out.signature = to;
  for (auto it = out.interp.begin(); it != out.interp.end();) {
    if (!to.find_op(it->first)) it = out.interp.erase(it);
    else ++it;
  }
  return out;
}

}  // namespace fnl
