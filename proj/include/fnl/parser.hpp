#pragma once

#include <string_view>

#include "fnl/expr.hpp"

namespace fnl {

/// Parses the expression text grammar
///
///   expr := 'forall' VAR '.' expr | 'exists' VAR '.' expr | app ('=' app)?
///   app  := '(' expr ')' | NAME ('(' arg (',' arg)* ')')?
///   arg  := '(' VAR (',' VAR)* ')' ':' expr | expr
///
/// `forall x. e` resolves to forall^s with s the sort of x, and `a = b` to
/// eq_s with s the common sort. Throws ParseError and the GP errors of
/// Expr::apply; AliasAmbiguity when the two sides of `=` differ in sort.
Expr parse_expr(const Signature& sig, std::string_view text);

/// True for bytes that may occur in a name (ASCII word characters and any
/// byte of a multibyte UTF-8 sequence).
bool is_name_byte(char c);

}  // namespace fnl
