// Copyright 2026 The conex authors.
// Licensed under the Apache License, Version 2.0.
#pragma once

#include <stdexcept>
#include <string>

namespace conex {

enum class Errc {
  ZeroInput,
  SingularInput,
  ZeroPivot,
  InternalMismatch,
  NoInvolution,
  DegenerateChart,
  NotDivision,
  ZeroIdeal,
  RankDeficient,
  OddExponentUnpaired,
  NotIsotropic,
  NoTraceOne,
  SingularInducedForm,
  NonzeroDegree,
  NontrivialClassification,
  ParseError,
  InvalidArgument,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace conex
