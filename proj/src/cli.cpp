#include "opcalc/cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "opcalc/error.hpp"
#include "opcalc/json_io.hpp"

namespace opcalc::cli {

namespace {

using io::json;

json read_json(const std::string& path, const char* what) {
  if (path.empty()) fail(ErrorKind::input, std::string("missing --") + what);
  std::ifstream in(path);
  if (!in) fail(ErrorKind::input, "cannot read " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    std::ostringstream os;
    os << path << ": malformed JSON at byte " << e.byte << ": " << e.what();
    fail(ErrorKind::input, os.str());
  }
}

// α̃ data: a polynomial α, or α̃ = num/den expanded to order N
AdmissibilityReport load_admissibility(const json& doc, bool strong, std::size_t N) {
  if (io::symbol_is_alpha(doc)) return check_admissible(io::series_from_json(doc), strong);
  const RationalSeries at = io::symbol_tilde_from_json(doc);
  if (at.is_polynomial()) {
    const RealPolynomial num = at.num() * (Rational(1) / at.den().coeff(0));
    return check_admissible_tilde(TruncatedSeries::from_polynomial(num), strong);
  }
  return check_admissible_tilde(expand_rational(at, N), strong);
}

TruncatedSeries load_alpha_polynomial(const json& doc) {
  if (io::symbol_is_alpha(doc)) return io::series_from_json(doc);
  const RationalSeries at = io::symbol_tilde_from_json(doc);
  if (!at.is_polynomial()) fail(ErrorKind::input, "this command needs a polynomial alpha");
  const RealPolynomial num = at.num() * (Rational(1) / at.den().coeff(0));
  return TruncatedSeries::from_polynomial(RealPolynomial{1, -1} * num);
}

json config_json(const RunConfig& c) {
  return {{"tol", c.tol}, {"N", c.N}, {"horizon", c.horizon}, {"grid", c.grid}};
}

struct Outcome {
  std::string status;
  int code = kHolds;
  json result;
};

Outcome run_factor(const RunConfig& c) {
  const TruncatedSeries f = io::series_from_json(read_json(c.series_path, "series"));
  const FactorizationCertificate cert = wiener_factorize(f, std::min(c.tol, 1e-10));
  Outcome o{to_string(cert.status), kHolds, io::to_json(cert)};
  if (cert.status == CertificateStatus::failed) o.code = kRefuted;
  if (cert.status == CertificateStatus::inconclusive) o.code = kInconclusive;
  return o;
}

Outcome run_admissible(const RunConfig& c) {
  const AdmissibilityReport r = load_admissibility(read_json(c.alpha_path, "alpha"), c.strong, c.N);
  const bool holds = c.strong ? r.strongly_admissible : r.admissible;
  std::string status = r.strongly_admissible ? "strongly_admissible"
                       : r.admissible        ? "admissible"
                                             : "not_admissible";
  return {status, holds ? kHolds : kRefuted, io::to_json(r)};
}

Outcome run_member(const RunConfig& c) {
  const OperatorMatrix T = io::matrix_from_json(read_json(c.matrix_path, "matrix"));
  const AdmissibilityReport adm = load_admissibility(read_json(c.alpha_path, "alpha"), false, c.N);
  if (!adm.admissible) fail(ErrorKind::input, "alpha is not admissible: " + adm.reason);
  const MembershipCertificate m = class_membership(T, adm, c.tol);
  const int code = m.verdict == MembershipVerdict::member    ? kHolds
                   : m.verdict == MembershipVerdict::refuted ? kRefuted
                                                             : kInconclusive;
  return {to_string(m.verdict), code, io::to_json(m)};
}

RenormModel renorm_of(const RunConfig& c, OperatorMatrix& T) {
  T = io::matrix_from_json(read_json(c.matrix_path, "matrix"));
  const AdmissibilityReport adm = load_admissibility(read_json(c.alpha_path, "alpha"), false, c.N);
  if (!adm.admissible) fail(ErrorKind::input, "alpha is not admissible: " + adm.reason);
  return build_renorm(T, adm, c.tol, c.horizon);
}

Outcome run_renorm(const RunConfig& c) {
  OperatorMatrix T;
  const RenormModel m = renorm_of(c, T);
  return {"constructed", kHolds, io::to_json(m)};
}

Outcome run_decompose(const RunConfig& c) {
  OperatorMatrix T;
  const RenormModel m = renorm_of(c, T);
  const DecompositionResult d = canonical_decomposition(m, T);
  return {"constructed", kHolds, io::to_json(d)};
}

Outcome run_model(const RunConfig& c) {
  OperatorMatrix T;
  const RenormModel m = renorm_of(c, T);
  const CharFnContext ctx(m, T);
  json result;
  if (ctx.empty() || !ctx.square()) {
    result = {{"rows", json::array()},
              {"summary", {{"max_theta_norm", nullptr}, {"max_det", nullptr}, {"samples", 0}}},
              {"reason", ctx.empty() ? "zero-dimensional defect spaces"
                                     : "defect spaces of different dimension"}};
    return {"unsupported", kRefuted, result};
  }
  const DetScan s = det_bound_scan(m, T, c.grid, c.radius, true);
  json rows = json::array();
  for (const auto& r : s.rows) rows.push_back(io::to_json(r));
  result = {{"rows", rows},
            {"summary",
             {{"max_theta_norm", s.max_theta_norm}, {"max_det", s.max_det}, {"samples", s.samples}}}};
  const bool holds = s.max_theta_norm <= 1.0 + 1e-10 && s.max_det <= 1.0 + 1e-10;
  return {holds ? "holds" : "violated", holds ? kHolds : kRefuted, result};
}

Outcome run_include(const RunConfig& c) {
  const RationalSeries at = io::symbol_tilde_from_json(read_json(c.alpha_path, "alpha"));
  const RationalSeries tt = io::symbol_tilde_from_json(read_json(c.tau_path, "tau"));
  InclusionVerdict v = inclusion_check(at, tt, c.N);
  if (!c.counterexample) v.counterexample.reset();
  const int code = v.status == InclusionStatus::included  ? kHolds
                   : v.status == InclusionStatus::refuted ? kRefuted
                                                          : kInconclusive;
  return {to_string(v.status), code, io::to_json(v)};
}

Outcome run_limits(const RunConfig& c) {
  const TruncatedSeries alpha = load_alpha_polynomial(read_json(c.alpha_path, "alpha"));
  LimitProbe p;
  if (!c.shift_path.empty()) {
    const ShiftSpec s = make_shift(io::sequence_from_json(read_json(c.shift_path, "shift")));
    const json hj = read_json(c.vector_path, "vector");
    std::vector<double> h;
    for (const auto& v : (hj.is_array() ? hj : hj.at("re"))) h.push_back(v.get<double>());
    p = limit_exists_probe(s, alpha, h, c.horizon);
  } else {
    const OperatorMatrix T = io::matrix_from_json(read_json(c.matrix_path, "matrix"));
    const Vec h = io::vector_from_json(read_json(c.vector_path, "vector"), T.dim());
    p = limit_exists_probe(T, alpha, h, c.horizon);
  }
  if (!c.csv_path.empty()) {
    std::ofstream csv(c.csv_path);
    if (!csv) fail(ErrorKind::input, "cannot write " + c.csv_path);
    csv.precision(17);
    csv << "n,a_n\n";
    for (std::size_t n = 0; n < p.trace.size(); ++n) csv << n << ',' << p.trace[n] << '\n';
  }
  const int code = p.verdict == LimitVerdict::exists       ? kHolds
                   : p.verdict == LimitVerdict::oscillates ? kRefuted
                                                           : kInconclusive;
  return {to_string(p.verdict), code, io::to_json(p)};
}

int exit_for(ErrorKind k) {
  switch (k) {
    case ErrorKind::input: return kInputError;
    case ErrorKind::numerical:
    case ErrorKind::summability: return kInconclusive;
    case ErrorKind::precondition:
    case ErrorKind::construction:
    case ErrorKind::unsupported: return kRefuted;
  }
  return kInputError;
}

void write_document(const RunConfig& c, const std::string& text, std::ostream& out) {
  if (c.output_path.empty()) {
    out << text << '\n';
    return;
  }
  std::ofstream f(c.output_path);
  if (!f) fail(ErrorKind::input, "cannot write " + c.output_path);
  f << text << '\n';
}

}  // namespace

std::string schema_dump() { return io::schema().dump(2); }

int dispatch(const RunConfig& c, std::ostream& out, std::ostream& err) {
  try {
    if (!(c.tol > 0.0)) fail(ErrorKind::input, "tol must be positive");
    if (c.N < 8) fail(ErrorKind::input, "N must be at least 8");
    if (c.subcommand == "schema") {
      write_document(c, schema_dump(), out);
      return kHolds;
    }
    Outcome o;
    if (c.subcommand == "factor") o = run_factor(c);
    else if (c.subcommand == "admissible") o = run_admissible(c);
    else if (c.subcommand == "member") o = run_member(c);
    else if (c.subcommand == "renorm") o = run_renorm(c);
    else if (c.subcommand == "decompose") o = run_decompose(c);
    else if (c.subcommand == "model") o = run_model(c);
    else if (c.subcommand == "include") o = run_include(c);
    else if (c.subcommand == "limits") o = run_limits(c);
    else fail(ErrorKind::input, "unknown subcommand \"" + c.subcommand + "\"");

    const json doc = {{"schema_version", io::kSchemaVersion},
                      {"command", c.subcommand},
                      {"status", o.status},
                      {"exit_code", o.code},
                      {"config", config_json(c)},
                      {"result", o.result}};
    // serialize fully before writing so nothing partial reaches the stream
    write_document(c, doc.dump(2), out);
    return o.code;
  } catch (const Error& e) {
    err << "opcalc " << c.subcommand << ": " << to_string(e.kind()) << " error: " << e.what() << '\n';
    return exit_for(e.kind());
  } catch (const json::exception& e) {
    err << "opcalc " << c.subcommand << ": input error: " << e.what() << '\n';
    return kInputError;
  }
}

namespace {

template <class T>
void env_override(const CLI::Option* opt, const char* name, T& value) {
  if (opt->count() > 0) return;
  const char* v = std::getenv(name);
  if (!v || !*v) return;
  std::istringstream is(v);
  T parsed{};
  if (!(is >> parsed) || !is.eof()) fail(ErrorKind::input, std::string("bad value in ") + name);
  value = parsed;
}

}  // namespace

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"Operator classes C_alpha: factorization certificates, membership, renorming and models"};
  app.require_subcommand(1);
  auto* tol = app.add_option("--tol", c.tol, "tolerance (default 1e-9)");
  auto* N = app.add_option("--N", c.N, "truncation order (default 256)");
  auto* horizon = app.add_option("--horizon", c.horizon, "power horizon (default 4096)");
  auto* grid = app.add_option("--grid", c.grid, "model grid size (default 64)");
  app.add_option("-o,--output", c.output_path, "write the JSON document here");

  auto* factor = app.add_subcommand("factor", "certified g with g > 0 and fg > 0");
  factor->add_option("--series", c.series_path)->required();
  auto* adm = app.add_subcommand("admissible", "admissibility of alpha");
  adm->add_option("--alpha", c.alpha_path)->required();
  adm->add_flag("--strong", c.strong, "require strong admissibility");
  for (const char* name : {"member", "renorm", "decompose", "model"}) {
    auto* s = app.add_subcommand(name);
    s->add_option("--matrix", c.matrix_path)->required();
    s->add_option("--alpha", c.alpha_path)->required();
    if (std::string(name) == "model") s->add_option("--radius", c.radius, "scan radius");
  }
  app.get_subcommand("member")->description("membership of T in C_alpha");
  app.get_subcommand("renorm")->description("equivalent norm making T a contraction");
  app.get_subcommand("decompose")->description("unitary / completely nonunitary splitting");
  app.get_subcommand("model")->description("characteristic function scan");
  auto* inc = app.add_subcommand("include", "C_alpha inside C_tau");
  inc->add_option("--alpha", c.alpha_path)->required();
  inc->add_option("--tau", c.tau_path)->required();
  inc->add_flag("--counterexample", c.counterexample, "attach the counterexample shift");
  auto* lim = app.add_subcommand("limits", "existence of lim ||T^n h||^2");
  lim->add_option("--alpha", c.alpha_path)->required();
  lim->add_option("--matrix", c.matrix_path);
  lim->add_option("--shift", c.shift_path, "weighted shift given by Lambda");
  lim->add_option("--vector", c.vector_path)->required();
  lim->add_option("--csv", c.csv_path, "write the a_n trace as CSV");
  app.add_subcommand("schema", "print the JSON schema");

  for (auto* s : app.get_subcommands({})) s->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kHolds;
  } catch (const CLI::ParseError& e) {
    err << "opcalc: input error: " << e.what() << '\n';
    return kInputError;
  }
  c.subcommand = app.get_subcommands().front()->get_name();
  try {
    env_override(tol, "OPCALC_TOL", c.tol);
    env_override(N, "OPCALC_N", c.N);
    env_override(horizon, "OPCALC_HORIZON", c.horizon);
    env_override(grid, "OPCALC_GRID", c.grid);
  } catch (const Error& e) {
    err << "opcalc: input error: " << e.what() << '\n';
    return kInputError;
  }
  if (c.subcommand == "limits" && c.matrix_path.empty() == c.shift_path.empty()) {
    err << "opcalc limits: input error: give exactly one of --matrix and --shift\n";
    return kInputError;
  }
  return dispatch(c, out, err);
}

}  // namespace opcalc::cli
