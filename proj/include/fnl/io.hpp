#pragma once

#include <string>
#include <string_view>

#include "fnl/calculus.hpp"
#include "fnl/semantics.hpp"

namespace fnl {

// Line-oriented text formats. `#` starts a comment. Every file may open with
// a signature section:
//
//   sort beta                 ordinary sort
//   varsort alpha             sort with variables
//   op f : (alpha)alpha       operation with its ustype
//   var x : alpha             named variable
//
// Theory files (.flt) add `axiom <formula>` lines. Structure files (.fls) add
//
//   carrier alpha = a, b
//   interp c = a
//   interp f { a -> b; b -> b }
//   interp g { (a, b) -> a; ... }            several slots
//   interp sum { {a->a, b->b} -> a; ... }    binding slot: inline table
//   interp h hash 17                         fallback for missing arguments
//   selected alpha^(alpha) = {a->a, b->b}, {a->b, b->a}
//
// Element names that are not plain words are written as "quoted" strings.
// Proof files (.flp) hold `premise <formula>` lines followed by
//
//   <n>. <formula> ; <rule> <args>
//
// with 1-based line, axiom, premise and slot numbers. Rules: taut,
// forall_elim x [a], exists_intro x [a], forall_imp x, exists_imp x, eq_refl,
// eq_congr k, axiom k, premise k, mp i j (i: A, j: A → B), gen i x.
// Instantiation terms and congruence data are inferred when omitted.
//
// Parse failures throw ParseError with `<source>:<line>:` in front.

Signature parse_signature(std::string_view text, std::string_view source = "<input>");
Theory parse_theory(std::string_view text, std::string_view source = "<input>");
Structure parse_structure(std::string_view text, std::string_view source = "<input>");
/// Proof lines are read against the signature of `t`.
Proof parse_proof(const Theory& t, std::string_view text, std::string_view source = "<input>");

std::string write_signature(const Signature& sig);
std::string write_theory(const Theory& t);
std::string write_structure(const Structure& s);
std::string write_proof(const Proof& p);

/// Reads a whole file. Throws Io.
std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

Theory load_theory(const std::string& path);
Structure load_structure(const std::string& path);
Proof load_proof(const Theory& t, const std::string& path);

}  // namespace fnl
