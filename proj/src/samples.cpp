#include "fnl/samples.hpp"

#include <algorithm>

#include "fnl/error.hpp"

namespace fnl {

namespace {

// Flattened argument tuples of `op` over the selected sets, or empty when
// there are more than `limit`.
std::vector<Rows> op_domain(const Structure& s, const OpSignature& op, std::size_t limit) {
  std::vector<std::vector<Rows>> spaces;
  std::size_t total = 1;
  for (const auto& slot : op.args) {
    try {
      spaces.push_back(selected_members(s, slot.sort, slot.binders, limit));
    } catch (const Error&) {
      return {};
    }
    if (total > limit / spaces.back().size()) return {};
    total *= spaces.back().size();
  }
  std::vector<Rows> out;
  std::vector<std::size_t> idx(spaces.size(), 0);
  for (std::size_t n = 0; n < total; ++n) {
    Rows key;
    for (std::size_t i = 0; i < spaces.size(); ++i) key.insert(key.end(), spaces[i][idx[i]].begin(), spaces[i][idx[i]].end());
    out.push_back(std::move(key));
    for (std::size_t i = spaces.size(); i-- > 0;) {
      if (++idx[i] < spaces[i].size()) break;
      idx[i] = 0;
    }
  }
  return out;
}

std::vector<std::string> names(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back("e" + std::to_string(i));
  return out;
}

Rows constant_table(std::size_t rows, Elem w) { return Rows(rows, w); }

Rows projection_table(const Structure& s, const std::vector<SortId>& d, std::size_t j) {
  Rows out(s.tuple_count(d));
  for (std::size_t t = 0; t < out.size(); ++t) out[t] = decode_tuple(s, d, t)[j];
  return out;
}

bool is_constant(const Rows& r) { return std::all_of(r.begin(), r.end(), [&](Elem e) { return e == r[0]; }); }

bool is_identity(const Rows& r) {
  for (std::size_t i = 0; i < r.size(); ++i)
    if (r[i] != i) return false;
  return true;
}

const SortId kAlpha{"alpha"};

}  // namespace

Structure random_full_structure(const Signature& sig, Rng& rng, std::size_t max_carrier) {
  Structure s;
  s.signature = sig;
  s.carriers[prop_sort()] = {"0", "1"};
  for (const auto& sort : sig.sorts())
    if (sort != prop_sort()) s.carriers[sort] = names(1 + rng() % max_carrier);
  for (const auto& [name, op] : sig.ops()) {
    if (sig.is_distinguished(name)) continue;
    const std::size_t m = s.size(op.result);
    OpInterp oi;
    auto dom = op_domain(s, op, 512);
    if (dom.empty()) {
      oi.hash_seed = rng();
    } else {
      for (auto& key : dom) oi.table.emplace(std::move(key), static_cast<Elem>(rng() % m));
    }
    s.interp.emplace(name, std::move(oi));
  }
  validate_structure(s);
  return s;
}

Structure boolean_structure() { return make_full_structure(Signature{}, {}, {}); }

Structure toy_structure() {
  Signature sig;
  sig.add_sort(kAlpha, true);
  sig.add_variable("x", kAlpha);
  sig.add_variable("y", kAlpha);
  sig.add_op("a", OpSignature{kAlpha, {}});
  sig.add_op("b", OpSignature{kAlpha, {}});
  sig.add_op("f", OpSignature{kAlpha, {ArgSlot{kAlpha, {}}}});
  std::map<std::string, OpInterp, std::less<>> interp;
  interp.emplace("a", OpInterp::constant(0));
  interp.emplace("b", OpInterp::constant(1));
  OpInterp f;
  f.table.emplace(Rows{0}, 1);
  f.table.emplace(Rows{1}, 1);
  interp.emplace("f", std::move(f));
  return make_full_structure(sig, {{kAlpha, {"0", "1"}}}, std::move(interp));
}

ClosedSample closed_nonfull_sample(Rng& rng) {
  Signature sig;
  sig.add_sort(kAlpha, true);
  for (auto c : {"c0", "c1", "c2"}) sig.add_op(c, OpSignature{kAlpha, {}});
  sig.add_op("f", OpSignature{kAlpha, {ArgSlot{kAlpha, {}}}});
  sig.add_op("sum", OpSignature{kAlpha, {ArgSlot{kAlpha, {kAlpha}}}});
  sig.add_op("Q", OpSignature{prop_sort(), {ArgSlot{kAlpha, {kAlpha}}}});
  sig.add_op("P", OpSignature{prop_sort(), {ArgSlot{kAlpha, {}}}});

  Structure s;
  s.signature = sig;
  s.carriers[prop_sort()] = {"0", "1"};
  s.carriers[kAlpha] = names(3);

  Rows f{0, 1, 2};
  std::size_t i = rng() % 3, j = (i + 1 + rng() % 2) % 3;
  std::swap(f[i], f[j]);

  for (std::size_t n = 1; n <= 3; ++n) {
    std::vector<SortId> d(n, kAlpha);
    TableSet& set = s.selected[SelKey{kAlpha, d}];
    const std::size_t rows = s.tuple_count(d);
    for (Elem w = 0; w < 3; ++w) set.insert(constant_table(rows, w));
    for (std::size_t k = 0; k < n; ++k) {
      Rows pj = projection_table(s, d, k);
      Rows fpj = pj;
      for (auto& e : fpj) e = f[e];
      set.insert(pj);
      set.insert(fpj);
    }
  }

  for (Elem w = 0; w < 3; ++w) s.interp["c" + std::to_string(w)] = OpInterp::constant(w);
  OpInterp& fi = s.interp["f"];
  for (Elem e = 0; e < 3; ++e) fi.table.emplace(Rows{e}, f[e]);
  const bool through_f = rng() % 2;
  OpInterp& sum = s.interp["sum"];
  for (Elem w = 0; w < 3; ++w) sum.table.emplace(constant_table(3, w), through_f ? f[w] : w);
  sum.table.emplace(Rows{0, 1, 2}, static_cast<Elem>(rng() % 3));
  sum.table.emplace(f, static_cast<Elem>(rng() % 3));
  OpInterp& q = s.interp["Q"];
  for (const auto& t : selected_members(s, kAlpha, {kAlpha})) q.table.emplace(t, static_cast<Elem>(rng() % 2));
  OpInterp& p = s.interp["P"];
  for (Elem e = 0; e < 3; ++e) p.table.emplace(Rows{e}, static_cast<Elem>(rng() % 2));
  validate_structure(s);

  Structure full = s;
  full.selected.clear();
  full.interp["sum"].hash_seed = rng();
  full.interp["Q"].hash_seed = rng();
  // overwrite a few completion-only points explicitly
  for (int k = 0; k < 3; ++k) {
    Rows t{static_cast<Elem>(rng() % 3), static_cast<Elem>(rng() % 3), static_cast<Elem>(rng() % 3)};
    if (!s.in_selected(kAlpha, {kAlpha}, t)) full.interp["sum"].table.emplace(t, static_cast<Elem>(rng() % 3));
  }
  validate_structure(full);
  return {std::move(s), std::move(full)};
}

Mutation mutated_structure(ClosureLaw law, Rng& rng) {
  Signature sig;
  sig.add_sort(kAlpha, true);
  sig.add_op("c", OpSignature{kAlpha, {}});
  sig.add_op("P", OpSignature{prop_sort(), {ArgSlot{kAlpha, {}}}});
  if (law == ClosureLaw::Composition) sig.add_op("f", OpSignature{kAlpha, {ArgSlot{kAlpha, {}}}});

  Structure s;
  s.signature = sig;
  s.carriers[prop_sort()] = {"0", "1"};
  const std::size_t n = 2 + rng() % 2;
  s.carriers[kAlpha] = names(n);
  s.interp["c"] = OpInterp::constant(static_cast<Elem>(rng() % n));
  OpInterp& p = s.interp["P"];
  for (Elem e = 0; e < n; ++e) p.table.emplace(Rows{e}, static_cast<Elem>(rng() % 2));

  const std::vector<SortId> d1{kAlpha}, d2{kAlpha, kAlpha};
  auto all1 = all_tables(s, kAlpha, d1);
  std::vector<Rows> odd;  // neither constant nor the identity
  for (const auto& t : all1)
    if (!is_constant(t) && !is_identity(t)) odd.push_back(t);

  Mutation out{s, ClosureOptions{}, law};
  Structure& m = out.structure;
  switch (law) {
    case ClosureLaw::Constant: {
      out.options.cap = 1;
      Rows drop = constant_table(n, static_cast<Elem>(rng() % n));
      for (const auto& t : all1)
        if (t != drop) m.selected[SelKey{kAlpha, d1}].insert(t);
      break;
    }
    case ClosureLaw::Projection: {
      out.options.cap = 1;
      for (const auto& t : all1)
        if (!is_identity(t)) m.selected[SelKey{kAlpha, d1}].insert(t);
      break;
    }
    case ClosureLaw::Fixing: {
      const Rows h = odd[rng() % odd.size()];
      for (const auto& t : all1)
        if (t != h) m.selected[SelKey{kAlpha, d1}].insert(t);
      TableSet& two = m.selected[SelKey{kAlpha, d2}];
      for (Elem w = 0; w < n; ++w) two.insert(constant_table(n * n, w));
      two.insert(projection_table(m, d2, 0));
      two.insert(projection_table(m, d2, 1));
      Rows g;
      const std::size_t x0 = rng() % n;
      for (std::size_t x = 0; x < n; ++x) {
        Rows block = x == x0 ? h : (rng() % 2 ? constant_table(n, static_cast<Elem>(rng() % n)) : projection_table(m, d1, 0));
        g.insert(g.end(), block.begin(), block.end());
      }
      two.insert(g);
      break;
    }
    case ClosureLaw::Composition: {
      const Rows f = odd[rng() % odd.size()];
      OpInterp& fi = m.interp["f"];
      for (Elem e = 0; e < n; ++e) fi.table.emplace(Rows{e}, f[e]);
      TableSet& one = m.selected[SelKey{kAlpha, d1}];
      TableSet& two = m.selected[SelKey{kAlpha, d2}];
      for (Elem w = 0; w < n; ++w) {
        one.insert(constant_table(n, w));
        two.insert(constant_table(n * n, w));
      }
      one.insert(projection_table(m, d1, 0));
      two.insert(projection_table(m, d2, 0));
      two.insert(projection_table(m, d2, 1));
      break;
    }
  }
  validate_structure(m);
  return out;
}

}  // namespace fnl
