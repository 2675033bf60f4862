#pragma once

// JSON documents read and written by the command line tool.
//   series     {"coeffs":[...], "tail_bound":x, "weight":{"kind":"unit"}}
//   polynomial {"rational_coeffs":[["p","q"], ...]}
//   matrix     {"dim":d, "re":[row-major], "im":[row-major]}
//   sequence   {"prefix":[...], "eventual":x}   entries are numbers or "p/q"
//   vector     {"re":[...], "im":[...]}
//   symbol     a series/polynomial for α, or {"alpha_tilde":{"num":poly,"den":poly}}

#include <json.hpp>

#include <string>

#include "opcalc/factorization.hpp"
#include "opcalc/hereditary.hpp"
#include "opcalc/model.hpp"
#include "opcalc/renorm.hpp"
#include "opcalc/seq_lab.hpp"

namespace opcalc::io {

using nlohmann::json;

inline constexpr const char* kSchemaVersion = "1";

Rational rational_from_json(const json& j);
json rational_to_json(const Rational& q);  // "p/q" string

RealPolynomial polynomial_from_json(const json& j);  // rational_coeffs or coeffs
json polynomial_to_json(const RealPolynomial& p);

TruncatedSeries series_from_json(const json& j);
json series_to_json(const TruncatedSeries& f);

OperatorMatrix matrix_from_json(const json& j);
json matrix_to_json(const Mat& m);

Vec vector_from_json(const json& j, Eigen::Index dim);
json vector_to_json(const Vec& v);

EventualSeq sequence_from_json(const json& j);
json sequence_to_json(const EventualSeq& s);

/// α̃ as an exact rational function, from either document form.
RationalSeries symbol_tilde_from_json(const json& j);
/// True when the document gives α itself (series or polynomial).
bool symbol_is_alpha(const json& j);

json to_json(const DominanceVerdict& v);
json to_json(const FactorizationCertificate& c);
json to_json(const AdmissibilityReport& r);
json to_json(const MembershipCertificate& c);
json to_json(const RenormModel& m);
json to_json(const DecompositionResult& d);
json to_json(const CharFnSample& s);
json to_json(const InclusionVerdict& v);
json to_json(const LimitProbe& p);

/// JSON Schema (draft-07) for every document above and the certificates.
json schema();

}  // namespace opcalc::io
