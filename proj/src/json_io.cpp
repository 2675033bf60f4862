#include "opcalc/json_io.hpp"

#include <cmath>

#include "opcalc/error.hpp"

namespace opcalc::io {

namespace {

[[noreturn]] void bad(const std::string& what) { fail(ErrorKind::input, what); }

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) bad(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

double number(const json& j, const char* what) {
  if (!j.is_number()) bad(std::string(what) + " must be a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) bad(std::string(what) + " must be finite");
  return v;
}

std::vector<double> number_array(const json& j, const char* what) {
  if (!j.is_array()) bad(std::string(what) + " must be an array");
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& v : j) out.push_back(number(v, what));
  return out;
}

json cplx_json(cplx z) { return {{"re", z.real()}, {"im", z.imag()}}; }

// null for non-finite values, which JSON cannot carry
json real_json(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

Rational rational_from_json(const json& j) {
  if (j.is_number()) return Rational(number(j, "rational entry"));
  if (j.is_string()) {
    Rational q;
    if (q.set_str(j.get<std::string>(), 10) != 0) bad("malformed rational \"" + j.get<std::string>() + "\"");
    if (q.get_den() == 0) bad("rational with zero denominator");
    q.canonicalize();
    return q;
  }
  if (j.is_array() && j.size() == 2 && j[0].is_string() && j[1].is_string()) {
    Rational q;
    if (q.set_str(j[0].get<std::string>() + "/" + j[1].get<std::string>(), 10) != 0)
      bad("malformed rational pair");
    if (q.get_den() == 0) bad("rational with zero denominator");
    q.canonicalize();
    return q;
  }
  bad("rational entries are numbers, \"p/q\" strings or [\"p\",\"q\"] pairs");
}

json rational_to_json(const Rational& q) { return q.get_str(); }

RealPolynomial polynomial_from_json(const json& j) {
  if (j.is_object() && j.contains("rational_coeffs")) {
    const json& c = j.at("rational_coeffs");
    if (!c.is_array()) bad("rational_coeffs must be an array");
    std::vector<Rational> q;
    for (const auto& v : c) q.push_back(rational_from_json(v));
    return RealPolynomial(std::move(q));
  }
  if (j.is_object() && j.contains("coeffs")) {
    if (j.contains("tail_bound") && number(j.at("tail_bound"), "tail_bound") != 0.0)
      bad("a polynomial cannot carry a tail bound");
    return RealPolynomial::from_doubles(number_array(j.at("coeffs"), "coeffs"));
  }
  bad("polynomial needs \"rational_coeffs\" or \"coeffs\"");
}

json polynomial_to_json(const RealPolynomial& p) {
  json c = json::array();
  for (const auto& q : p.coeffs()) c.push_back({q.get_num().get_str(), q.get_den().get_str()});
  return {{"rational_coeffs", c}};
}

TruncatedSeries series_from_json(const json& j) {
  if (!j.is_object()) bad("series must be an object");
  WeightRef w = GoodWeight::unit();
  if (j.contains("weight")) {
    const json& wj = j.at("weight");
    const json& kind = field(wj, "kind");
    if (!kind.is_string()) bad("weight kind must be a string");
    const std::string k = kind.get<std::string>();
    if (k == "explicit") {
      w = GoodWeight::explicit_weights(number_array(field(wj, "prefix"), "weight prefix"),
                                       number(field(wj, "eventual"), "weight eventual"));
    } else if (k != "unit") {
      bad("weight kind must be \"unit\" or \"explicit\"");
    }
  }
  if (j.contains("rational_coeffs")) {
    return TruncatedSeries::from_polynomial(polynomial_from_json(j), w);
  }
  const double tail = j.contains("tail_bound") ? number(j.at("tail_bound"), "tail_bound") : 0.0;
  if (tail < 0.0) bad("tail_bound must be nonnegative");
  return TruncatedSeries(number_array(field(j, "coeffs"), "coeffs"), tail, w);
}

json series_to_json(const TruncatedSeries& f) {
  json w;
  const GoodWeight& g = f.weight();
  switch (g.kind()) {
    case GoodWeight::Kind::unit: w = {{"kind", "unit"}}; break;
    case GoodWeight::Kind::explicit_prefix:
      w = {{"kind", "explicit"}, {"prefix", g.prefix()}, {"eventual", g.eventual()}};
      break;
    case GoodWeight::Kind::operator_induced:
      w = {{"kind", "operator-induced"}, {"prefix", g.prefix()}};
      break;
  }
  std::vector<double> c(f.coeffs().begin(), f.coeffs().end());
  return {{"coeffs", c}, {"tail_bound", f.tail_bound()}, {"weight", w}};
}

OperatorMatrix matrix_from_json(const json& j) {
  const json& dj = field(j, "dim");
  if (!dj.is_number_integer() || dj.get<long long>() < 1) bad("dim must be a positive integer");
  const auto d = static_cast<Eigen::Index>(dj.get<long long>());
  const std::vector<double> re = number_array(field(j, "re"), "re");
  std::vector<double> im(re.size(), 0.0);
  if (j.contains("im")) im = number_array(j.at("im"), "im");
  if (re.size() != static_cast<std::size_t>(d * d) || im.size() != re.size())
    bad("matrix needs dim*dim row-major entries in re and im");
  Mat m(d, d);
  for (Eigen::Index r = 0; r < d; ++r)
    for (Eigen::Index c = 0; c < d; ++c) {
      const auto k = static_cast<std::size_t>(r * d + c);
      m(r, c) = cplx(re[k], im[k]);
    }
  return OperatorMatrix(std::move(m));
}

json matrix_to_json(const Mat& m) {
  std::vector<double> re, im;
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      re.push_back(m(r, c).real());
      im.push_back(m(r, c).imag());
    }
  json out = {{"dim", m.rows()}, {"re", re}, {"im", im}};
  if (m.rows() != m.cols()) out = {{"rows", m.rows()}, {"cols", m.cols()}, {"re", re}, {"im", im}};
  return out;
}

Vec vector_from_json(const json& j, Eigen::Index dim) {
  std::vector<double> re, im;
  if (j.is_array()) {
    re = number_array(j, "vector");
  } else {
    re = number_array(field(j, "re"), "re");
    if (j.contains("im")) im = number_array(j.at("im"), "im");
  }
  if (im.empty()) im.assign(re.size(), 0.0);
  if (re.size() != static_cast<std::size_t>(dim) || im.size() != re.size())
    bad("vector length does not match the matrix dimension");
  Vec v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v(i) = cplx(re[static_cast<std::size_t>(i)], im[static_cast<std::size_t>(i)]);
  return v;
}

json vector_to_json(const Vec& v) {
  std::vector<double> re, im;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    re.push_back(v(i).real());
    im.push_back(v(i).imag());
  }
  return {{"re", re}, {"im", im}};
}

EventualSeq sequence_from_json(const json& j) {
  const json& p = field(j, "prefix");
  if (!p.is_array()) bad("prefix must be an array");
  std::vector<Rational> q;
  for (const auto& v : p) q.push_back(rational_from_json(v));
  return EventualSeq(std::move(q), rational_from_json(field(j, "eventual")));
}

json sequence_to_json(const EventualSeq& s) {
  json p = json::array();
  for (const auto& v : s.prefix()) p.push_back(rational_to_json(v));
  return {{"prefix", p}, {"eventual", rational_to_json(s.eventual())}};
}

bool symbol_is_alpha(const json& j) { return !(j.is_object() && j.contains("alpha_tilde")); }

RationalSeries symbol_tilde_from_json(const json& j) {
  if (!symbol_is_alpha(j)) {
    const json& t = j.at("alpha_tilde");
    const RealPolynomial num = polynomial_from_json(field(t, "num"));
    const RealPolynomial den =
        t.contains("den") ? polynomial_from_json(t.at("den")) : RealPolynomial::constant(1);
    if (den.is_zero() || den.coeff(0) == 0) bad("alpha_tilde denominator must be nonzero at 0");
    return RationalSeries(num, den);
  }
  const RealPolynomial p = polynomial_from_json(j);
  const auto [q, r] = divmod(p, RealPolynomial{1, -1});
  if (!r.is_zero()) bad("alpha(1) is not zero");
  return RationalSeries::polynomial(q);
}

json to_json(const DominanceVerdict& v) {
  json out = {{"relation", to_string(v.relation)}, {"margin", real_json(v.margin)}, {"exact", v.exact}};
  out["witness_index"] = v.witness_index ? json(*v.witness_index) : json(nullptr);
  return out;
}

json to_json(const FactorizationCertificate& c) {
  return {{"f", series_to_json(c.f)},
          {"g", series_to_json(c.g)},
          {"fg", series_to_json(c.fg)},
          {"verdict_g", to_json(c.verdict_g)},
          {"verdict_fg", to_json(c.verdict_fg)},
          {"epsilon", c.epsilon},
          {"N_split", c.N_split},
          {"status", to_string(c.status)},
          {"failed_stage", c.failed_stage},
          {"message", c.message}};
}

json to_json(const AdmissibilityReport& r) {
  return {{"admissible", r.admissible},
          {"strongly_admissible", r.strongly_admissible},
          {"alpha_tilde", series_to_json(r.alpha_tilde)},
          {"alpha_at_one", r.alpha_at_one},
          {"min_on_unit_interval", real_json(r.min_on_unit_interval)},
          {"circle_root_margin", real_json(r.circle_root_margin)},
          {"reason", r.reason}};
}

json to_json(const MembershipCertificate& c) {
  return {{"verdict", to_string(c.verdict)},
          {"min_eigenvalue", real_json(c.min_eigenvalue)},
          {"threshold", real_json(c.threshold)},
          {"truncation_N", c.truncation_N},
          {"series_tail", real_json(c.series_tail)},
          {"spectral_ok", c.spectral_ok},
          {"summability_ok", c.summability_ok},
          {"strict", c.strict},
          {"spectral_radius", real_json(c.spectral_radius)},
          {"failed_condition", c.failed_condition}};
}

json to_json(const RenormModel& m) {
  return {{"G", matrix_to_json(m.gram)},
          {"W", matrix_to_json(m.W)},
          {"D", matrix_to_json(m.D)},
          {"B", matrix_to_json(m.B)},
          {"beta_tilde", series_to_json(m.beta_tilde)},
          {"contraction_norm", real_json(m.contraction_norm)},
          {"gram_min_eigenvalue", real_json(m.gram_min_eigenvalue)},
          {"residuals",
           {{"defect_identity", real_json(m.defect_residual)},
            {"limit_crosscheck", m.limit_crosscheck < 0 ? json(nullptr) : real_json(m.limit_crosscheck)}}},
          {"limit_method", to_string(m.limit_method)},
          {"iterations", m.iterations}};
}

json to_json(const DecompositionResult& d) {
  return {{"H0", matrix_to_json(d.H0_basis)},
          {"H1", matrix_to_json(d.H1_basis)},
          {"dim_H0", d.H0_basis.cols()},
          {"dim_H1", d.H1_basis.cols()},
          {"unitary_residual", real_json(d.unitary_residual)},
          {"invariance_residual", real_json(d.invariance_residual)}};
}

json to_json(const CharFnSample& s) {
  json out = {{"z", cplx_json(s.z)}, {"theta_norm", real_json(s.theta_norm)}, {"empty", s.empty}};
  out["det_abs"] = s.det_abs ? real_json(*s.det_abs) : json(nullptr);
  return out;
}

json to_json(const InclusionVerdict& v) {
  json g = json::array();
  for (const auto& q : v.gamma_prefix) g.push_back(rational_to_json(q));
  json out = {{"status", to_string(v.status)},
              {"gamma_prefix", g},
              {"gamma_polynomial", v.gamma_polynomial},
              {"bounded_on_unit_interval", v.bounded_on_unit_interval},
              {"reason", v.reason}};
  out["first_negative_index"] = v.first_negative_index ? json(*v.first_negative_index) : json(nullptr);
  out["counterexample"] =
      v.counterexample ? json{{"Lambda", sequence_to_json(v.counterexample->Lambda)}} : json(nullptr);
  return out;
}

json to_json(const LimitProbe& p) {
  return {{"verdict", to_string(p.verdict)},
          {"value", real_json(p.value)},
          {"oscillation", real_json(p.oscillation)},
          {"alarm", p.alarm},
          {"steps", p.trace.size()}};
}

json schema() {
  const json num_array = {{"type", "array"}, {"items", {{"type", "number"}}}};
  const json rational = {
      {"oneOf",
       {{{"type", "number"}},
        {{"type", "string"}, {"pattern", "^-?[0-9]+(/[0-9]+)?$"}},
        {{"type", "array"}, {"items", {{"type", "string"}}}, {"minItems", 2}, {"maxItems", 2}}}}};
  const json weight = {{"type", "object"},
                       {"required", {"kind"}},
                       {"properties",
                        {{"kind", {{"enum", {"unit", "explicit", "operator-induced"}}}},
                         {"prefix", num_array},
                         {"eventual", {{"type", "number"}}}}}};
  const json series = {{"type", "object"},
                       {"required", {"coeffs"}},
                       {"properties",
                        {{"coeffs", num_array},
                         {"tail_bound", {{"type", "number"}, {"minimum", 0}}},
                         {"weight", {{"$ref", "#/definitions/weight"}}}}}};
  const json polynomial = {
      {"type", "object"},
      {"required", {"rational_coeffs"}},
      {"properties",
       {{"rational_coeffs", {{"type", "array"}, {"items", {{"$ref", "#/definitions/rational"}}}}}}}};
  const json matrix = {{"type", "object"},
                       {"required", {"re", "im"}},
                       {"properties",
                        {{"dim", {{"type", "integer"}, {"minimum", 0}}},
                         {"rows", {{"type", "integer"}, {"minimum", 0}}},
                         {"cols", {{"type", "integer"}, {"minimum", 0}}},
                         {"re", num_array},
                         {"im", num_array}}}};
  const json vec = {{"type", "object"},
                    {"required", {"re", "im"}},
                    {"properties", {{"re", num_array}, {"im", num_array}}}};
  const json sequence = {
      {"type", "object"},
      {"required", {"prefix", "eventual"}},
      {"properties",
       {{"prefix", {{"type", "array"}, {"items", {{"$ref", "#/definitions/rational"}}}}},
        {"eventual", {{"$ref", "#/definitions/rational"}}}}}};
  const json nullable_number = {{"type", {"number", "null"}}};

  auto when_command = [](const std::string& cmd, json props, json req) {
    return json{{"if", {{"properties", {{"command", {{"const", cmd}}}}}}},
                {"then",
                 {{"properties",
                   {{"result", {{"type", "object"}, {"required", req}, {"properties", props}}}}}}}};
  };
  json rules = json::array();
  rules.push_back(when_command("factor",
                           {{"f", {{"$ref", "#/definitions/series"}}},
                            {"g", {{"$ref", "#/definitions/series"}}},
                            {"fg", {{"$ref", "#/definitions/series"}}},
                            {"status", {{"enum", {"certified", "failed", "inconclusive"}}}}},
                           {"f", "g", "fg", "status", "verdict_g", "verdict_fg"}));
  rules.push_back(when_command("admissible",
                           {{"admissible", {{"type", "boolean"}}},
                            {"strongly_admissible", {{"type", "boolean"}}},
                            {"alpha_tilde", {{"$ref", "#/definitions/series"}}}},
                           {"admissible", "strongly_admissible"}));
  rules.push_back(when_command("member",
                           {{"verdict", {{"enum", {"member", "refuted", "inconclusive"}}}},
                            {"min_eigenvalue", nullable_number},
                            {"truncation_N", {{"type", "integer"}}},
                            {"spectral_ok", {{"type", "boolean"}}},
                            {"summability_ok", {{"type", "boolean"}}}},
                           {"verdict", "min_eigenvalue", "truncation_N", "series_tail", "spectral_ok",
                            "summability_ok"}));
  rules.push_back(when_command("renorm",
                           {{"G", {{"$ref", "#/definitions/matrix"}}},
                            {"W", {{"$ref", "#/definitions/matrix"}}},
                            {"contraction_norm", nullable_number},
                            {"residuals", {{"type", "object"}}}},
                           {"G", "W", "contraction_norm", "residuals"}));
  rules.push_back(when_command("decompose",
                           {{"H0", {{"$ref", "#/definitions/matrix"}}},
                            {"H1", {{"$ref", "#/definitions/matrix"}}}},
                           {"H0", "H1"}));
  rules.push_back(when_command(
      "model",
      {{"rows",
        {{"type", "array"},
         {"items",
          {{"type", "object"},
           {"required", {"z", "theta_norm", "det_abs"}},
           {"properties",
            {{"z", {{"type", "object"}, {"required", {"re", "im"}}}},
             {"theta_norm", nullable_number},
             {"det_abs", nullable_number}}}}}}},
       {"summary", {{"type", "object"}, {"required", {"max_theta_norm", "max_det"}}}}},
      {"rows", "summary"}));
  rules.push_back(when_command("include",
                           {{"status", {{"enum", {"included", "refuted", "inconclusive"}}}},
                            {"gamma_prefix", {{"type", "array"}, {"items", {{"$ref", "#/definitions/rational"}}}}},
                            {"counterexample",
                             {{"oneOf",
                               {{{"type", "null"}},
                                {{"type", "object"},
                                 {"required", {"Lambda"}},
                                 {"properties", {{"Lambda", {{"$ref", "#/definitions/sequence"}}}}}}}}}}},
                           {"status", "gamma_prefix", "counterexample"}));
  rules.push_back(when_command("limits",
                           {{"verdict", {{"enum", {"exists", "oscillates", "inconclusive"}}}},
                            {"value", nullable_number},
                            {"oscillation", nullable_number}},
                           {"verdict", "value", "oscillation"}));

  const json certificate = {
      {"type", "object"},
      {"required", {"schema_version", "command", "status", "exit_code", "result"}},
      {"properties",
       {{"schema_version", {{"const", kSchemaVersion}}},
        {"command",
         {{"enum", {"factor", "admissible", "member", "renorm", "decompose", "model", "include", "limits"}}}},
        {"status", {{"type", "string"}}},
        {"exit_code", {{"enum", {0, 1, 2}}}},
        {"config", {{"type", "object"}}},
        {"result", {{"type", "object"}}}}},
      {"allOf", rules}};

  return {{"$schema", "http://json-schema.org/draft-07/schema#"},
          {"$id", std::string("opcalc/v") + kSchemaVersion},
          {"title", "opcalc documents"},
          {"version", kSchemaVersion},
          {"definitions",
           {{"rational", rational},
            {"weight", weight},
            {"series", series},
            {"polynomial", polynomial},
            {"matrix", matrix},
            {"vector", vec},
            {"sequence", sequence},
            {"certificate", certificate}}},
          {"$ref", "#/definitions/certificate"}};
}

}  // namespace opcalc::io
