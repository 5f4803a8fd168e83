#include "fnl/parser.hpp"

#include <cctype>
#include <optional>

#include "fnl/error.hpp"

namespace fnl {

bool is_name_byte(char c) {
  auto u = static_cast<unsigned char>(c);
  return std::isalnum(u) || c == '_' || u >= 0x80;
}

namespace {

class ExprReader {
 public:
  ExprReader(const Signature& sig, std::string_view text) : sig_(sig), text_(text) {}

  Expr read_all() {
    Expr e = expr();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

 private:
  Expr expr() {
    std::size_t save = pos_;
    std::string word = name();
    if (word == "forall" || word == "exists") {
      std::size_t after = pos_;
      skip_ws();
      if (is_name_byte(peek())) {
        std::string v = name();
        skip_ws();
        if (peek() == '.') {
          ++pos_;
          Var x = variable(v);
          Expr body = expr();
          std::string op = word == "forall" ? forall_name(x.sort) : exists_name(x.sort);
          return Expr::apply(sig_, op, {Arg{{x}, body}});
        }
      }
      pos_ = after;
    }
    pos_ = save;
    Expr lhs = app();
    skip_ws();
    if (peek() == '=') {
      ++pos_;
      Expr rhs = app();
      if (lhs.sort() != rhs.sort())
        throw Error(ErrorKind::AliasAmbiguity, "'=' between sorts " + lhs.sort().name + " and " +
                                                   rhs.sort().name + at());
      return Expr::apply(sig_, eq_name(lhs.sort()), {Arg{{}, lhs}, Arg{{}, rhs}});
    }
    return lhs;
  }

  Expr app() {
    skip_ws();
    if (peek() == '(') {
      ++pos_;
      Expr e = expr();
      expect(')');
      return e;
    }
    std::size_t start = pos_;
    std::string head = name();
    if (head.empty()) fail("name expected");
    skip_ws();
    std::vector<Arg> args;
    if (peek() == '(') {
      ++pos_;
      for (;;) {
        args.push_back(arg());
        skip_ws();
        if (peek() == ',') { ++pos_; continue; }
        expect(')');
        break;
      }
    }
    if (!sig_.is_variable(head) && !sig_.find_op(head)) {
      pos_ = start;
      throw Error(ErrorKind::UnknownSymbol, head + at());
    }
    return Expr::apply(sig_, head, std::move(args));
  }

  Arg arg() {
    skip_ws();
    if (peek() == '(') {
      if (auto binders = try_binders()) return Arg{std::move(*binders), expr()};
    }
    return Arg{{}, expr()};
  }

  // `(x,y):` ahead? Consumes it on success, leaves the position alone otherwise.
  std::optional<std::vector<Var>> try_binders() {
    std::size_t save = pos_;
    ++pos_;
    std::vector<std::string> names;
    for (;;) {
      skip_ws();
      std::string v = name();
      if (v.empty()) { pos_ = save; return std::nullopt; }
      names.push_back(std::move(v));
      skip_ws();
      if (peek() == ',') { ++pos_; continue; }
      if (peek() != ')') { pos_ = save; return std::nullopt; }
      ++pos_;
      break;
    }
    skip_ws();
    if (peek() != ':') { pos_ = save; return std::nullopt; }
    ++pos_;
    std::vector<Var> out;
    for (const auto& n : names) out.push_back(variable(n));
    return out;
  }

  Var variable(const std::string& n) {
    auto s = sig_.variable_sort(n);
    if (!s) throw Error(ErrorKind::UnknownSymbol, n + " is not a variable" + at());
    return Var{n, *s};
  }

  // NAME := word ('^' word)? where word may contain ':' between name bytes.
  std::string name() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (is_name_byte(c)) { ++pos_; continue; }
      bool joins = pos_ > start && pos_ + 1 < text_.size() && is_name_byte(text_[pos_ + 1]);
      if ((c == ':' || c == '^') && joins) { ++pos_; continue; }
      break;
    }
    return std::string(text_.substr(start, pos_ - start));
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

  void expect(char c) {
    skip_ws();
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  std::string at() const { return " at offset " + std::to_string(pos_); }

  [[noreturn]] void fail(const std::string& why) const {
    throw Error(ErrorKind::ParseError, why + at());
  }

  const Signature& sig_;
  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr parse_expr(const Signature& sig, std::string_view text) {
  return ExprReader(sig, text).read_all();
}

}  // namespace fnl
