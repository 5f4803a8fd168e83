#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fnl {

enum class ErrorKind {
  UnknownSort,
  MalformedUstype,
  BinderSortNotInVSRT,
  ParseError,
  UnknownSymbol,
  SortMismatch,
  ArityMismatch,
  DuplicateBinder,
  AliasAmbiguity,
  ForeignSignature,
  NotInClass,
  SortClash,
  TooManyAtoms,
  SideConditionViolated,
  PremiseNotClosed,
  SourceProofInvalid,
  OracleUndecided,
  OracleInconsistent,
  MissingInterpretation,
  InterpretationOutOfCarrier,
  NotInPerspective,
  SelectedSetMiss,
  NotAnExtension,
  NotSingleFree,
  NoRepresentativeInBound,
  ElementNotNamed,
  InvalidStructure,
  EnumerationTooLarge,
  Io,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace fnl
