#include "fnl/io.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "fnl/error.hpp"
#include "fnl/parser.hpp"

namespace fnl {

namespace {

bool bare_byte(char c) {
  auto u = static_cast<unsigned char>(c);
  return std::isalnum(u) || c == '_' || c == '.' || c == '\'' || c == ':' || u >= 0x80;
}

std::string quote(const std::string& name) {
  if (!name.empty() && std::all_of(name.begin(), name.end(), bare_byte)) return name;
  std::string out = "\"";
  for (char c : name) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

std::string trim(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

struct Line {
  std::size_t number;  // first physical line
  std::string text;
};

// Strips comments and joins lines while braces are open or after a trailing comma.
std::vector<Line> logical_lines(std::string_view text) {
  std::vector<Line> out;
  std::size_t number = 0;
  std::string pending;
  std::size_t start = 0;
  int depth = 0;
  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    ++number;
    std::string line;
    bool quoted = false;
    for (std::size_t i = 0; i < raw.size(); ++i) {
      char c = raw[i];
      if (quoted) {
        line += c;
        if (c == '\\' && i + 1 < raw.size()) line += raw[++i];
        else if (c == '"') quoted = false;
        continue;
      }
      if (c == '#') break;
      if (c == '"') quoted = true;
      if (c == '{') ++depth;
      if (c == '}') --depth;
      line += c;
    }
    if (pending.empty()) start = number;
    pending += pending.empty() ? line : " " + line;
    if (depth > 0 || (!trim(line).empty() && trim(line).back() == ',')) continue;
    depth = 0;
    if (!trim(pending).empty()) out.push_back(Line{start, trim(pending)});
    pending.clear();
  }
  if (!trim(pending).empty()) out.push_back(Line{start, trim(pending)});
  return out;
}

[[noreturn]] void fail(std::string_view source, std::size_t line, const std::string& msg) {
  throw Error(ErrorKind::ParseError, std::string(source) + ":" + std::to_string(line) + ": " + msg);
}

// Runs f, re-raising any library error with the location in front.
template <class F>
auto located(std::string_view source, std::size_t line, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    const std::string where = std::string(source) + ":" + std::to_string(line) + ": ";
    if (std::string_view(e.what()).find(std::string(source) + ":") != std::string_view::npos) throw;
    std::string_view msg = e.what();
    const std::string kind = std::string(to_string(e.kind())) + ": ";
    if (msg.starts_with(kind)) msg.remove_prefix(kind.size());
    throw Error(e.kind(), where + std::string(msg));
  }
}

std::pair<std::string, std::string> split_word(const std::string& s) {
  std::size_t i = 0;
  while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  return {s.substr(0, i), trim(std::string_view(s).substr(i))};
}

// `name : rest`
std::pair<std::string, std::string> split_colon_decl(std::string_view source, const Line& l, const std::string& body) {
  std::size_t c = body.find(" :");
  if (c == std::string::npos) c = body.find(':');
  if (c == std::string::npos) fail(source, l.number, "expected 'name : ...'");
  std::string name = trim(std::string_view(body).substr(0, c));
  std::string rest = trim(std::string_view(body).substr(c + (body[c] == ' ' ? 2 : 1)));
  if (name.empty() || rest.empty()) fail(source, l.number, "expected 'name : ...'");
  return {name, rest};
}

// Returns true when the line was a signature directive.
bool signature_line(Signature& sig, std::string_view source, const Line& l) {
  auto [kw, rest] = split_word(l.text);
  if (kw == "sort" || kw == "varsort") {
    if (rest.empty()) fail(source, l.number, "missing sort name");
    if (rest == "prop" || rest == "π") return true;
    sig.add_sort(SortId{rest}, kw == "varsort");
    return true;
  }
  if (kw == "op") {
    auto [name, ty] = split_colon_decl(source, l, rest);
    if (sig.is_distinguished(name)) fail(source, l.number, "redeclared distinguished symbol " + name);
    OpSignature op = located(source, l.number, [&] { return parse_ustype(sig, ty); });
    sig.add_op(name, std::move(op));
    return true;
  }
  if (kw == "var") {
    auto [name, s] = split_colon_decl(source, l, rest);
    SortId sort = located(source, l.number, [&] { return sig.resolve_sort(s); });
    located(source, l.number, [&] {
      sig.add_variable(name, sort);
      return 0;
    });
    return true;
  }
  return false;
}

// ---------------------------------------------------------------------------
// tokens for interp / selected statements

struct Tok {
  enum Kind { Name, Sym, End } kind;
  std::string text;
};

class Tokens {
 public:
  Tokens(std::string_view text, std::string_view source, std::size_t line) : source_(source), line_(line) {
    std::size_t i = 0;
    while (i < text.size()) {
      char c = text[i];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++i;
      } else if (c == '-' && i + 1 < text.size() && text[i + 1] == '>') {
        toks_.push_back({Tok::Sym, "->"});
        i += 2;
      } else if (c == '"') {
        std::string s;
        ++i;
        while (i < text.size() && text[i] != '"') {
          if (text[i] == '\\' && i + 1 < text.size()) ++i;
          s += text[i++];
        }
        if (i >= text.size()) fail(source_, line_, "unterminated string");
        ++i;
        toks_.push_back({Tok::Name, s});
      } else if (bare_byte(c)) {
        std::string s;
        while (i < text.size() && bare_byte(text[i])) s += text[i++];
        toks_.push_back({Tok::Name, s});
      } else if (std::string_view("{}(),;=^").find(c) != std::string_view::npos) {
        toks_.push_back({Tok::Sym, std::string(1, c)});
        ++i;
      } else {
        fail(source_, line_, std::string("unexpected character '") + c + "'");
      }
    }
  }

  const Tok& peek() const {
    static const Tok end{Tok::End, ""};
    return pos_ < toks_.size() ? toks_[pos_] : end;
  }
  bool at(std::string_view sym) const { return peek().kind == Tok::Sym && peek().text == sym; }
  bool accept(std::string_view sym) {
    if (!at(sym)) return false;
    ++pos_;
    return true;
  }
  void expect(std::string_view sym) {
    if (!accept(sym)) error("expected '" + std::string(sym) + "'");
  }
  std::string name() {
    if (peek().kind != Tok::Name) error("expected a name");
    return toks_[pos_++].text;
  }
  bool done() const { return pos_ >= toks_.size(); }
  [[noreturn]] void error(const std::string& msg) const {
    fail(source_, line_, msg + (done() ? " at end of line" : " before '" + peek().text + "'"));
  }

 private:
  std::string_view source_;
  std::size_t line_;
  std::vector<Tok> toks_;
  std::size_t pos_ = 0;
};

Elem read_element(const Structure& s, Tokens& t, const SortId& sort) {
  std::string n = t.name();
  auto e = s.element(sort, n);
  if (!e) t.error("'" + n + "' is not an element of " + sort.name);
  return *e;
}

// {key -> value, ...} over M_domain → M_codomain, total.
Rows read_table(const Structure& s, Tokens& t, const SortId& codomain, const std::vector<SortId>& domain) {
  const std::size_t n = s.tuple_count(domain);
  Rows rows(n, 0);
  std::vector<bool> filled(n, false);
  t.expect("{");
  while (!t.accept("}")) {
    std::vector<Elem> key;
    bool paren = t.accept("(");
    if (!paren && domain.size() != 1) t.error("expected a tuple of " + std::to_string(domain.size()));
    for (std::size_t j = 0; j < domain.size(); ++j) {
      if (j) t.expect(",");
      key.push_back(read_element(s, t, domain[j]));
    }
    if (paren) t.expect(")");
    t.expect("->");
    Elem v = read_element(s, t, codomain);
    std::size_t idx = 0;
    for (std::size_t j = 0; j < domain.size(); ++j) idx = idx * s.size(domain[j]) + key[j];
    if (filled[idx]) t.error("repeated table entry");
    filled[idx] = true;
    rows[idx] = v;
    if (!t.at("}")) t.expect(",");
  }
  if (std::find(filled.begin(), filled.end(), false) != filled.end()) t.error("table is not total");
  return rows;
}

Rows read_slot(const Structure& s, Tokens& t, const ArgSlot& slot) {
  if (slot.binders.empty()) return Rows{read_element(s, t, slot.sort)};
  return read_table(s, t, slot.sort, slot.binders);
}

void read_interp(Structure& s, const std::string& body, std::string_view source, std::size_t line) {
  Tokens t(body, source, line);
  std::string name = t.name();
  const OpSignature* op = s.signature.find_op(name);
  if (!op) fail(source, line, "unknown symbol " + name);
  if (s.signature.is_distinguished(name)) fail(source, line, "distinguished symbol " + name + " has a fixed meaning");
  OpInterp& oi = s.interp[name];
  if (t.accept("=")) {
    if (!op->args.empty()) t.error(name + " takes arguments");
    oi.table[Rows{}] = read_element(s, t, op->result);
  } else if (t.peek().kind == Tok::Name && t.peek().text == "hash") {
    t.name();
    std::string n = t.name();
    try {
      oi.hash_seed = std::stoull(n);
    } catch (const std::exception&) {
      t.error("bad hash seed");
    }
  } else {
    t.expect("{");
    while (!t.accept("}")) {
      Rows key;
      if (op->args.size() != 1 || t.at("(")) {
        t.expect("(");
        for (std::size_t i = 0; i < op->args.size(); ++i) {
          if (i) t.expect(",");
          Rows part = read_slot(s, t, op->args[i]);
          key.insert(key.end(), part.begin(), part.end());
        }
        t.expect(")");
      } else {
        key = read_slot(s, t, op->args[0]);
      }
      t.expect("->");
      Elem v = read_element(s, t, op->result);
      if (!oi.table.emplace(std::move(key), v).second) t.error("repeated argument");
      t.accept(";");
    }
  }
  if (!t.done()) t.error("trailing input");
}

void read_selected(Structure& s, const std::string& body, std::string_view source, std::size_t line) {
  Tokens t(body, source, line);
  SortId cod = located(source, line, [&] { return s.signature.resolve_sort(t.name()); });
  t.expect("^");
  t.expect("(");
  std::vector<SortId> dom;
  while (!t.accept(")")) {
    if (!dom.empty()) t.expect(",");
    dom.push_back(located(source, line, [&] { return s.signature.resolve_sort(t.name()); }));
  }
  if (dom.empty()) fail(source, line, "selected set needs a nonempty domain");
  t.expect("=");
  TableSet& set = s.selected[SelKey{cod, dom}];
  do {
    set.insert(read_table(s, t, cod, dom));
  } while (t.accept(","));
  if (!t.done()) t.error("trailing input");
}

std::string sorts_list(const std::vector<SortId>& ss) {
  std::string out;
  for (std::size_t i = 0; i < ss.size(); ++i) out += (i ? "," : "") + ss[i].name;
  return out;
}

std::string table_text(const Structure& s, const SortId& cod, const std::vector<SortId>& dom, const Elem* rows) {
  std::string out = "{";
  const std::size_t n = s.tuple_count(dom);
  for (std::size_t t = 0; t < n; ++t) {
    if (t) out += ", ";
    auto coords = decode_tuple(s, dom, t);
    if (dom.size() == 1) {
      out += quote(s.element_name(dom[0], coords[0]));
    } else {
      out += "(";
      for (std::size_t j = 0; j < dom.size(); ++j) out += (j ? "," : "") + quote(s.element_name(dom[j], coords[j]));
      out += ")";
    }
    out += "->" + quote(s.element_name(cod, rows[t]));
  }
  return out + "}";
}

Var read_var(const Signature& sig, std::string_view source, std::size_t line, const std::string& name) {
  auto sort = sig.variable_sort(name);
  if (!sort) fail(source, line, "'" + name + "' is not a variable");
  return Var{name, *sort};
}

std::size_t read_index(std::string_view source, std::size_t line, const std::string& word, std::size_t bound,
                       const char* what) {
  std::size_t k = 0;
  try {
    std::size_t used = 0;
    k = std::stoul(word, &used);
    if (used != word.size()) throw std::invalid_argument(word);
  } catch (const std::exception&) {
    fail(source, line, std::string("bad ") + what + " number '" + word + "'");
  }
  if (k == 0 || k > bound) fail(source, line, std::string(what) + " number " + word + " out of range");
  return k - 1;
}

}  // namespace

// ---------------------------------------------------------------------------

Signature parse_signature(std::string_view text, std::string_view source) {
  Signature sig;
  for (const auto& l : logical_lines(text))
    if (!signature_line(sig, source, l)) fail(source, l.number, "unknown directive '" + split_word(l.text).first + "'");
  return sig;
}

Theory parse_theory(std::string_view text, std::string_view source) {
  Theory t;
  std::vector<Line> axioms;
  for (const auto& l : logical_lines(text)) {
    if (signature_line(t.signature, source, l)) continue;
    auto [kw, rest] = split_word(l.text);
    if (kw != "axiom") fail(source, l.number, "unknown directive '" + kw + "'");
    axioms.push_back(Line{l.number, rest});
  }
  for (const auto& a : axioms) {
    Expr e = located(source, a.number, [&] { return parse_expr(t.signature, a.text); });
    if (e.sort() != prop_sort()) fail(source, a.number, "axiom is not a formula");
    t.axioms.push_back(std::move(e));
  }
  return t;
}

Structure parse_structure(std::string_view text, std::string_view source) {
  Structure s;
  s.carriers[prop_sort()] = {"0", "1"};
  std::vector<Line> later;
  for (const auto& l : logical_lines(text)) {
    if (signature_line(s.signature, source, l)) continue;
    auto [kw, rest] = split_word(l.text);
    if (kw == "carrier") {
      std::size_t eq = rest.find('=');
      if (eq == std::string::npos) fail(source, l.number, "expected 'carrier <sort> = a, b, ...'");
      SortId sort = located(source, l.number, [&] { return s.signature.resolve_sort(trim(rest.substr(0, eq))); });
      if (sort == prop_sort()) fail(source, l.number, "the carrier of prop is fixed");
      Tokens t(rest.substr(eq + 1), source, l.number);
      std::vector<std::string> elems;
      do {
        elems.push_back(t.name());
      } while (t.accept(","));
      if (!t.done()) t.error("trailing input");
      s.carriers[sort] = std::move(elems);
    } else if (kw == "interp" || kw == "selected") {
      later.push_back(l);
    } else {
      fail(source, l.number, "unknown directive '" + kw + "'");
    }
  }
  for (const auto& sort : s.signature.sorts())
    if (!s.carriers.contains(sort)) fail(source, 0, "no carrier for sort " + sort.name);
  for (const auto& l : later) {
    auto [kw, rest] = split_word(l.text);
    if (kw == "interp") read_interp(s, rest, source, l.number);
    else read_selected(s, rest, source, l.number);
  }
  located(source, 0, [&] {
    validate_structure(s);
    return 0;
  });
  return s;
}

Proof parse_proof(const Theory& t, std::string_view text, std::string_view source) {
  Proof p{t, {}, {}};
  const Signature& sig = t.signature;
  for (const auto& l : logical_lines(text)) {
    auto [kw, rest] = split_word(l.text);
    if (kw == "premise") {
      if (!p.lines.empty()) fail(source, l.number, "premises must precede the proof lines");
      p.premises.push_back(located(source, l.number, [&] { return parse_expr(sig, rest); }));
      continue;
    }
    std::size_t dot = l.text.find('.');
    if (dot == std::string::npos || dot == 0 ||
        !std::all_of(l.text.begin(), l.text.begin() + dot, [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
      fail(source, l.number, "expected '<n>. <formula> ; <rule>'");
    if (std::stoul(l.text.substr(0, dot)) != p.lines.size() + 1)
      fail(source, l.number, "expected line number " + std::to_string(p.lines.size() + 1));
    std::string body = l.text.substr(dot + 1);
    std::size_t semi = body.rfind(';');
    if (semi == std::string::npos) fail(source, l.number, "missing '; <rule>'");
    Expr phi = located(source, l.number, [&] { return parse_expr(sig, trim(body.substr(0, semi))); });
    auto [rule, args] = split_word(trim(body.substr(semi + 1)));
    std::vector<std::string> words;
    {
      std::istringstream in(args);
      std::string w;
      while (in >> w) words.push_back(w);
    }
    auto need = [&](std::size_t n) {
      if (words.size() != n) fail(source, l.number, rule + " takes " + std::to_string(n) + " argument(s)");
    };
    const std::size_t here = p.lines.size();
    Justification why;
    if (rule == "taut") {
      need(0);
      why = just::Taut{};
    } else if (rule == "eq_refl") {
      need(0);
      why = just::EqRefl{};
    } else if (rule == "forall_elim" || rule == "exists_intro") {
      if (words.empty()) fail(source, l.number, rule + " needs a variable");
      Var x = read_var(sig, source, l.number, words[0]);
      std::string term = trim(split_word(args).second);
      std::optional<Expr> a;
      if (!term.empty()) {
        a = located(source, l.number, [&] { return parse_expr(sig, term); });
      } else {
        auto [lhs, rhs] = located(source, l.number, [&] { return split_imp(phi); });
        const Expr& quant = rule == "forall_elim" ? lhs : rhs;
        const Expr& inst = rule == "forall_elim" ? rhs : lhs;
        if (!quant.head_is_var() && quant.arity() == 1 && quant.args()[0].binders.size() == 1)
          a = match_instance(quant.args()[0].body, quant.args()[0].binders[0], inst);
        if (!a) fail(source, l.number, "cannot infer the instantiation term; give it after the variable");
      }
      if (rule == "forall_elim") why = just::ForallElim{x, *a};
      else why = just::ExistsIntro{x, *a};
    } else if (rule == "forall_imp" || rule == "exists_imp") {
      need(1);
      Var x = read_var(sig, source, l.number, words[0]);
      if (rule == "forall_imp") why = just::ForallImpDist{x};
      else why = just::ExistsImpDist{x};
    } else if (rule == "eq_congr") {
      need(1);
      std::size_t slot = read_index(source, l.number, words[0], 1u << 20, "slot");
      auto d = infer_eq_congr(phi, slot);
      if (!d) fail(source, l.number, "not a congruence instance at slot " + words[0]);
      why = *d;
    } else if (rule == "axiom") {
      need(1);
      why = just::Axiom{read_index(source, l.number, words[0], t.axioms.size(), "axiom")};
    } else if (rule == "premise") {
      need(1);
      why = just::Premise{read_index(source, l.number, words[0], p.premises.size(), "premise")};
    } else if (rule == "mp") {
      need(2);
      why = just::MP{read_index(source, l.number, words[0], here, "line"), read_index(source, l.number, words[1], here, "line")};
    } else if (rule == "gen") {
      need(2);
      why = just::Gen{read_index(source, l.number, words[0], here, "line"), read_var(sig, source, l.number, words[1])};
    } else {
      fail(source, l.number, "unknown rule '" + rule + "'");
    }
    p.lines.push_back(ProofLine{std::move(phi), std::move(why)});
  }
  return p;
}

// ---------------------------------------------------------------------------

std::string write_signature(const Signature& sig) {
  std::string out;
  for (const auto& s : sig.sorts())
    if (s != prop_sort()) out += (sig.is_var_sort(s) ? "varsort " : "sort ") + s.name + "\n";
  for (const auto& [name, op] : sig.ops())
    if (!sig.is_distinguished(name)) out += "op " + name + " : " + print_ustype(op) + "\n";
  for (const auto& [name, s] : sig.named_variables()) out += "var " + name + " : " + s.name + "\n";
  return out;
}

std::string write_theory(const Theory& t) {
  std::string out = write_signature(t.signature);
  for (const auto& a : t.axioms) out += "axiom " + print_expr(a) + "\n";
  return out;
}

std::string write_structure(const Structure& s) {
  std::string out = write_signature(s.signature);
  for (const auto& [sort, elems] : s.carriers) {
    if (sort == prop_sort()) continue;
    out += "carrier " + sort.name + " = ";
    for (std::size_t i = 0; i < elems.size(); ++i) out += (i ? ", " : "") + quote(elems[i]);
    out += "\n";
  }
  for (const auto& [name, oi] : s.interp) {
    const OpSignature& op = *s.signature.find_op(name);
    if (op.args.empty() && oi.table.contains(Rows{})) {
      out += "interp " + name + " = " + quote(s.element_name(op.result, oi.table.at(Rows{}))) + "\n";
    } else if (!oi.table.empty()) {
      std::vector<std::pair<Rows, Elem>> entries(oi.table.begin(), oi.table.end());
      std::sort(entries.begin(), entries.end());
      out += "interp " + name + " {\n";
      for (const auto& [key, v] : entries) {
        std::string args;
        std::size_t off = 0;
        for (std::size_t i = 0; i < op.args.size(); ++i) {
          const ArgSlot& slot = op.args[i];
          if (i) args += ", ";
          if (slot.binders.empty()) {
            args += quote(s.element_name(slot.sort, key[off++]));
          } else {
            args += table_text(s, slot.sort, slot.binders, key.data() + off);
            off += s.tuple_count(slot.binders);
          }
        }
        if (op.args.size() != 1) args = "(" + args + ")";
        out += "  " + args + " -> " + quote(s.element_name(op.result, v)) + ";\n";
      }
      out += "}\n";
    }
    if (oi.hash_seed) out += "interp " + name + " hash " + std::to_string(*oi.hash_seed) + "\n";
  }
  for (const auto& [key, set] : s.selected) {
    std::vector<Rows> tables(set.begin(), set.end());
    std::sort(tables.begin(), tables.end());
    out += "selected " + key.codomain.name + "^(" + sorts_list(key.domain) + ") =";
    for (std::size_t i = 0; i < tables.size(); ++i)
      out += (i ? ",\n  " : " ") + table_text(s, key.codomain, key.domain, tables[i].data());
    out += "\n";
  }
  return out;
}

std::string write_proof(const Proof& p) {
  std::string out;
  for (const auto& pr : p.premises) out += "premise " + print_expr(pr) + "\n";
  for (std::size_t i = 0; i < p.lines.size(); ++i) {
    const ProofLine& l = p.lines[i];
    std::string rule = justification_name(l.why);
    std::visit(
        [&](const auto& j) {
          using J = std::decay_t<decltype(j)>;
          if constexpr (std::is_same_v<J, just::ForallElim> || std::is_same_v<J, just::ExistsIntro>)
            rule += " " + j.x.name + " " + print_expr(j.a);
          else if constexpr (std::is_same_v<J, just::ForallImpDist> || std::is_same_v<J, just::ExistsImpDist>)
            rule += " " + j.x.name;
          else if constexpr (std::is_same_v<J, just::EqCongr>)
            rule += " " + std::to_string(j.slot + 1);
          else if constexpr (std::is_same_v<J, just::Axiom> || std::is_same_v<J, just::Premise>)
            rule += " " + std::to_string(j.index + 1);
          else if constexpr (std::is_same_v<J, just::MP>)
            rule += " " + std::to_string(j.from + 1) + " " + std::to_string(j.impl + 1);
          else if constexpr (std::is_same_v<J, just::Gen>)
            rule += " " + std::to_string(j.from + 1) + " " + j.x.name;
        },
        l.why);
    out += std::to_string(i + 1) + ". " + print_expr(l.formula) + " ; " + rule + "\n";
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path);
  out << content;
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path);
}

Theory load_theory(const std::string& path) { return parse_theory(read_file(path), path); }
Structure load_structure(const std::string& path) { return parse_structure(read_file(path), path); }
Proof load_proof(const Theory& t, const std::string& path) { return parse_proof(t, read_file(path), path); }

}  // namespace fnl
