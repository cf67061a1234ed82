// Copyright 2026 The conex authors.
// Licensed under the Apache License, Version 2.0.
#include "conex/errors.hpp"

namespace conex {

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::ZeroInput: return "ZeroInput";
    case Errc::SingularInput: return "SingularInput";
    case Errc::ZeroPivot: return "ZeroPivot";
    case Errc::InternalMismatch: return "InternalMismatch";
    case Errc::NoInvolution: return "NoInvolution";
    case Errc::DegenerateChart: return "DegenerateChart";
    case Errc::NotDivision: return "NotDivision";
    case Errc::ZeroIdeal: return "ZeroIdeal";
    case Errc::RankDeficient: return "RankDeficient";
    case Errc::OddExponentUnpaired: return "OddExponentUnpaired";
    case Errc::NotIsotropic: return "NotIsotropic";
    case Errc::NoTraceOne: return "NoTraceOne";
    case Errc::SingularInducedForm: return "SingularInducedForm";
    case Errc::NonzeroDegree: return "NonzeroDegree";
    case Errc::NontrivialClassification: return "NontrivialClassification";
    case Errc::ParseError: return "ParseError";
    case Errc::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace conex
