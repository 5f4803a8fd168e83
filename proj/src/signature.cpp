#include "fnl/signature.hpp"

#include <cctype>

#include "fnl/error.hpp"

namespace fnl {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::UnknownSort: return "UnknownSort";
    case ErrorKind::MalformedUstype: return "MalformedUstype";
    case ErrorKind::BinderSortNotInVSRT: return "BinderSortNotInVSRT";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::UnknownSymbol: return "UnknownSymbol";
    case ErrorKind::SortMismatch: return "SortMismatch";
    case ErrorKind::ArityMismatch: return "ArityMismatch";
    case ErrorKind::DuplicateBinder: return "DuplicateBinder";
    case ErrorKind::AliasAmbiguity: return "AliasAmbiguity";
    case ErrorKind::ForeignSignature: return "ForeignSignature";
    case ErrorKind::NotInClass: return "NotInClass";
    case ErrorKind::SortClash: return "SortClash";
    case ErrorKind::TooManyAtoms: return "TooManyAtoms";
    case ErrorKind::SideConditionViolated: return "SideConditionViolated";
    case ErrorKind::PremiseNotClosed: return "PremiseNotClosed";
    case ErrorKind::SourceProofInvalid: return "SourceProofInvalid";
    case ErrorKind::OracleUndecided: return "OracleUndecided";
    case ErrorKind::OracleInconsistent: return "OracleInconsistent";
    case ErrorKind::MissingInterpretation: return "MissingInterpretation";
    case ErrorKind::InterpretationOutOfCarrier: return "InterpretationOutOfCarrier";
    case ErrorKind::NotInPerspective: return "NotInPerspective";
    case ErrorKind::SelectedSetMiss: return "SelectedSetMiss";
    case ErrorKind::NotAnExtension: return "NotAnExtension";
    case ErrorKind::NotSingleFree: return "NotSingleFree";
    case ErrorKind::NoRepresentativeInBound: return "NoRepresentativeInBound";
    case ErrorKind::ElementNotNamed: return "ElementNotNamed";
    case ErrorKind::InvalidStructure: return "InvalidStructure";
    case ErrorKind::EnumerationTooLarge: return "EnumerationTooLarge";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

std::string eq_name(const SortId& sort) { return "eq_" + sort.name; }
std::string forall_name(const SortId& sort) { return "forall^" + sort.name; }
std::string exists_name(const SortId& sort) { return "exists^" + sort.name; }

namespace {

OpSignature constant_sig(const SortId& s) { return OpSignature{s, {}}; }

OpSignature fn_sig(const SortId& result, std::vector<SortId> args) {
  OpSignature op{result, {}};
  for (auto& a : args) op.args.push_back(ArgSlot{std::move(a), {}});
  return op;
}

OpSignature quantifier_sig(const SortId& s) {
  return OpSignature{prop_sort(), {ArgSlot{prop_sort(), {s}}}};
}

}  // namespace

Signature::Signature() { add_sort(prop_sort(), false); }

std::map<std::string, OpSignature> Signature::distinguished() const {
  const SortId p = prop_sort();
  std::map<std::string, OpSignature> d;
  d[std::string(kTrue)] = constant_sig(p);
  d[std::string(kFalse)] = constant_sig(p);
  d[std::string(kNot)] = fn_sig(p, {p});
  for (auto name : {kImp, kAnd, kOr, kIff}) d[std::string(name)] = fn_sig(p, {p, p});
  for (const auto& s : sorts_) d[eq_name(s)] = fn_sig(p, {s, s});
  for (const auto& s : var_sorts_) {
    d[forall_name(s)] = quantifier_sig(s);
    d[exists_name(s)] = quantifier_sig(s);
  }
  return d;
}

bool Signature::is_distinguished(std::string_view name) const {
  if (name == kTrue || name == kFalse || name == kNot || name == kImp || name == kAnd ||
      name == kOr || name == kIff)
    return true;
  auto rest = [&](std::string_view prefix) -> std::optional<SortId> {
    if (!name.starts_with(prefix)) return std::nullopt;
    return SortId{std::string(name.substr(prefix.size()))};
  };
  if (auto s = rest("eq_")) return sorts_.contains(*s);
  if (auto s = rest("forall^")) return var_sorts_.contains(*s);
  if (auto s = rest("exists^")) return var_sorts_.contains(*s);
  return false;
}

void Signature::add_sort(const SortId& sort, bool var_sort) {
  sorts_.insert(sort);
  if (var_sort) var_sorts_.insert(sort);
  for (auto& [name, op] : distinguished())
    if (!ops_.contains(name)) ops_.emplace(name, op);
}

void Signature::add_op(const std::string& name, OpSignature sig) { ops_[name] = std::move(sig); }

void Signature::remove_op(const std::string& name) {
  if (auto it = ops_.find(name); it != ops_.end()) ops_.erase(it);
}

void Signature::add_variable(const std::string& name, const SortId& sort) {
  named_vars_[name] = sort;
}

const OpSignature* Signature::find_op(std::string_view name) const {
  auto it = ops_.find(name);
  return it == ops_.end() ? nullptr : &it->second;
}

std::optional<SortId> Signature::variable_sort(std::string_view name) const {
  if (auto it = named_vars_.find(name); it != named_vars_.end()) return it->second;
  // enumerated family v<n>:<sort>
  if (name.size() < 4 || name[0] != 'v') return std::nullopt;
  std::size_t i = 1;
  while (i < name.size() && std::isdigit(static_cast<unsigned char>(name[i]))) ++i;
  if (i == 1 || i >= name.size() || name[i] != ':') return std::nullopt;
  if (i > 2 && name[1] == '0') return std::nullopt;  // no leading zeros
  SortId s{std::string(name.substr(i + 1))};
  if (!var_sorts_.contains(s)) return std::nullopt;
  return s;
}

Var Signature::variable(const SortId& sort, std::size_t index) const {
  if (!var_sorts_.contains(sort))
    throw Error(ErrorKind::BinderSortNotInVSRT, "no variables of sort " + sort.name);
  return Var{"v" + std::to_string(index) + ":" + sort.name, sort};
}

SortId Signature::resolve_sort(std::string_view name) const {
  SortId s{name == "π" ? std::string("prop") : std::string(name)};
  if (!sorts_.contains(s)) throw Error(ErrorKind::UnknownSort, std::string(name));
  return s;
}

// ---------------------------------------------------------------------------
// ustype grammar

namespace {

class UstypeReader {
 public:
  UstypeReader(const Signature& sig, std::string_view text) : sig_(sig) {
    for (char c : text)
      if (!std::isspace(static_cast<unsigned char>(c))) text_.push_back(c);
  }

  OpSignature read() {
    OpSignature op;
    if (peek() == '(') {
      ++pos_;
      for (;;) {
        op.args.push_back(read_theta());
        if (peek() == ',') { ++pos_; continue; }
        expect(')');
        break;
      }
    }
    op.result = read_sort();
    if (pos_ != text_.size()) fail("trailing characters");
    return op;
  }

 private:
  ArgSlot read_theta() {
    ArgSlot slot;
    if (peek() == '(') {
      ++pos_;
      for (;;) {
        SortId b = read_sort();
        if (!sig_.is_var_sort(b)) throw Error(ErrorKind::BinderSortNotInVSRT, b.name);
        slot.binders.push_back(b);
        if (peek() == ',') { ++pos_; continue; }
        expect(')');
        break;
      }
    }
    slot.sort = read_sort();
    return slot;
  }

  SortId read_sort() {
    std::size_t start = pos_;
    while (pos_ < text_.size() && text_[pos_] != '(' && text_[pos_] != ')' && text_[pos_] != ',')
      ++pos_;
    if (start == pos_) fail(pos_ < text_.size() && text_[pos_] == ')' ? "empty group" : "sort expected");
    return sig_.resolve_sort(std::string_view(text_).substr(start, pos_ - start));
  }

  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  [[noreturn]] void fail(const std::string& why) const {
    throw Error(ErrorKind::MalformedUstype, why + " at offset " + std::to_string(pos_) + " in '" + text_ + "'");
  }

  const Signature& sig_;
  std::string text_;
  std::size_t pos_ = 0;
};

}  // namespace

OpSignature parse_ustype(const Signature& sig, std::string_view text) {
  return UstypeReader(sig, text).read();
}

std::string print_ustype(const OpSignature& op) {
  std::string out;
  if (!op.args.empty()) {
    out += '(';
    for (std::size_t i = 0; i < op.args.size(); ++i) {
      if (i) out += ',';
      const auto& slot = op.args[i];
      if (!slot.binders.empty()) {
        out += '(';
        for (std::size_t j = 0; j < slot.binders.size(); ++j) {
          if (j) out += ',';
          out += slot.binders[j].name;
        }
        out += ')';
      }
      out += slot.sort.name;
    }
    out += ')';
  }
  out += op.result.name;
  return out;
}

// ---------------------------------------------------------------------------

std::vector<std::string> validate_signature(const Signature& sig) {
  std::vector<std::string> v;
  for (const auto& s : sig.var_sorts())
    if (!sig.has_sort(s)) v.push_back("VSRT not a subset of SRT: " + s.name);
  if (!sig.has_sort(prop_sort())) v.push_back("distinguished sort prop missing");

  for (const auto& [name, op] : sig.ops()) {
    if (sig.is_variable(name)) v.push_back("VAR ∩ SOP nonempty: " + name);
    if (!sig.has_sort(op.result)) v.push_back("unknown result sort in " + name);
    for (const auto& slot : op.args) {
      if (!sig.has_sort(slot.sort)) v.push_back("unknown argument sort in " + name);
      for (const auto& b : slot.binders)
        if (!sig.is_var_sort(b)) v.push_back("binder sort not in VSRT in " + name);
    }
  }
  for (const auto& [name, sort] : sig.named_variables())
    if (!sig.is_var_sort(sort)) v.push_back("variable of non-variable sort: " + name);

  for (const auto& [name, expected] : sig.distinguished()) {
    const OpSignature* got = sig.find_op(name);
    if (!got)
      v.push_back("distinguished symbol missing: " + name);
    else if (!(*got == expected))
      v.push_back("distinguished ustype mismatch: " + name + " has " + print_ustype(*got) +
                  ", expected " + print_ustype(expected));
  }
  return v;
}

bool extends(const Signature& sub, const Signature& super) {
  if (sub.sorts() != super.sorts() || sub.var_sorts() != super.var_sorts() ||
      sub.named_variables() != super.named_variables())
    return false;
  for (const auto& [name, op] : sub.ops()) {
    const OpSignature* other = super.find_op(name);
    if (!other || !(*other == op)) return false;
  }
  return true;
}

}  // namespace fnl
