#pragma once

#include <cmath>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "enscribe/acceptance.hpp"
#include "enscribe/io.hpp"

namespace enscribe::cli {

using Json = nlohmann::json;

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitNegative = 2;

struct RunConfig {
  std::string command;
  std::string input_path;
  std::optional<std::string> output_path;
  std::optional<std::string> certificate_path;
  double tolerance = 1e-8;
  std::uint64_t seed = 0;
  int starts = 64;
  /// Real q; the fixed Q is 2q/(1+q^2).
  std::optional<double> q;
  double q_grid = 0.01;
  std::string only;
  bool search = false;
};

inline const std::vector<std::string>& commands() {
  static const std::vector<std::string> all = {"classify", "gram",  "solve",          "qrange",
                                               "build-procedure", "clone", "verify-theorems"};
  return all;
}

enum class LogLevel { Error = 0, Info = 1, Debug = 2 };

inline LogLevel log_level() {
  const char* env = std::getenv("ENSCRIBE_LOG");
  const std::string v = env ? env : "error";
  if (v == "debug") return LogLevel::Debug;
  if (v == "info") return LogLevel::Info;
  return LogLevel::Error;
}

class Logger {
 public:
  explicit Logger(std::ostream& err) : err_(err), level_(log_level()) {}
  void info(const std::string& msg) const { emit(LogLevel::Info, "info", msg); }
  void debug(const std::string& msg) const { emit(LogLevel::Debug, "debug", msg); }
  void error(const std::string& msg) const { err_ << "enscribe: error: " << msg << '\n'; }

 private:
  void emit(LogLevel at, const char* tag, const std::string& msg) const {
    if (static_cast<int>(level_) >= static_cast<int>(at)) err_ << "enscribe: " << tag << ": " << msg << '\n';
  }
  std::ostream& err_;
  LogLevel level_;
};

inline void validate(const RunConfig& c) {
  auto bad = [](const std::string& m) { throw Error(ErrorKind::ParseError, m); };
  if (std::find(commands().begin(), commands().end(), c.command) == commands().end()) {
    bad("unknown command '" + c.command + "'");
  }
  if (!(c.tolerance > 0.0)) bad("--tolerance must be positive");
  if (c.starts < 1) bad("--starts must be at least 1");
  if (!(c.q_grid > 0.0 && c.q_grid < 0.5)) bad("--q-grid must lie in (0, 0.5)");
  if (c.command != "verify-theorems" && c.input_path.empty()) bad(c.command + " needs --input");
  if ((c.command == "build-procedure" || c.command == "clone") && !c.certificate_path) {
    bad(c.command + " needs --certificate");
  }
  if (c.q && !std::isfinite(*c.q)) bad("--q must be finite");
}

inline SearchOptions search_options(const RunConfig& c) {
  SearchOptions s;
  s.seed = c.seed;
  s.starts = c.starts;
  s.accept_tol = c.tolerance;
  return s;
}

inline Json classification_json(const TextClassification& c) {
  return {{"classical", c.classical},
          {"fully_quantum", c.fully_quantum},
          {"efficient", c.efficient},
          {"thick", c.thick},
          {"dialect_dimension", c.dialect_dimension}};
}

inline Json screen_json(const IllegibilityReport& r) {
  Json j = {{"efficient_ok", r.efficient_ok},
            {"overlap_pattern_ok", r.overlap_pattern_ok},
            {"eigen_sign_ok", r.eigen_sign_ok},
            {"eigen_sign", r.eigen_sign ? Json(*r.eigen_sign) : Json()},
            {"uniform_threshold_ok", r.uniform_threshold_ok ? Json(*r.uniform_threshold_ok) : Json()},
            {"verdict", r.verdict()}};
  return j;
}

inline Json interval_json(const QInterval& iv) {
  return {{"lo", iv.lo},
          {"hi", iv.hi},
          {"lo_closed", iv.lo_closed},
          {"hi_closed", iv.hi_closed},
          {"lo_kind", to_string(iv.lo_kind)},
          {"hi_kind", to_string(iv.hi_kind)}};
}

namespace detail {

struct Outcome {
  Json report;
  int code = kExitOk;
};

inline Outcome cmd_gram(const QuantumText& text) {
  const Matrix g = gram(text);
  return {{{"gram", io::matrix_to_json(g)}, {"psd", is_psd(g)}, {"rank", hermitian_rank(g)}}};
}

inline Outcome cmd_classify(const QuantumText& text) {
  const IllegibilityReport rep = illegibility_screen(text);
  Outcome o;
  o.report = {{"classification", classification_json(classify(text))},
              {"gram", io::matrix_to_json(gram(text))},
              {"illegibility", screen_json(rep)}};
  o.code = rep.possibly_enscribable() ? kExitOk : kExitNegative;
  return o;
}

inline Outcome certificate_or_search(const SearchResult& s) {
  if (s.certificate) return {io::certificate_to_json(*s.certificate)};
  Outcome o;
  o.report = {{"verdict", to_string(s.verdict)},
              {"best_residual", s.best_residual},
              {"best", io::certificate_to_json(s.best)}};
  o.code = kExitNegative;
  return o;
}

inline Outcome cmd_solve(const QuantumText& text, const RunConfig& c, const Logger& log) {
  const std::optional<double> fixed = c.q ? std::optional<double>(q_to_Q(Complex(*c.q, 0.0))) : std::nullopt;
  const SearchOptions opts = search_options(c);
  auto search = [&] {
    log.info("running feasibility search");
    return certificate_or_search(feasibility_search(text, fixed, opts));
  };
  if (c.search) return search();

  auto accept = [&](const EnscriptionCertificate& cert) -> std::optional<Outcome> {
    if (cert.residual < c.tolerance && (!fixed || std::abs(cert.params.Q - *fixed) < 1e-12)) {
      return Outcome{io::certificate_to_json(cert)};
    }
    return std::nullopt;
  };

  const TextClassification cls = classify(text);
  if (cls.classical) {
    log.info("classical text: closed form");
    const EnscriptionCertificate cert =
        certify(text, EnscriptionParams::from_Q(fixed.value_or(0.0), text.state(0), trivial_phases(text.size())));
    if (auto o = accept(cert)) return *o;
  } else if (text.size() == 2) {
    log.info("2-text: central closed form");
    if (auto o = accept(solve_two_text(text))) return *o;
  } else if (as_real_uniform(gram(text))) {
    log.info("uniform text: central closed form");
    try {
      if (auto o = accept(solve_uniform_central(text, opts))) return *o;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::IllegibleText) throw;
      log.info(e.what());
    }
  }
  return search();
}

inline Json sweep_intervals(const QuantumText& text, const RunConfig& c, const Logger& log) {
  // Grid sweep over [-1, 1]; consecutive feasible points are merged.
  const int steps = static_cast<int>(std::ceil(2.0 / c.q_grid));
  Json intervals = Json::array();
  Json points = Json::array();
  std::optional<double> start, last;
  for (int k = 0; k <= steps; ++k) {
    const double big_q = std::min(1.0, -1.0 + k * c.q_grid);
    const SearchResult s = feasibility_search(text, big_q, search_options(c));
    log.debug("Q = " + std::to_string(big_q) + " residual " + std::to_string(s.best_residual));
    points.push_back({{"Q", big_q}, {"best_residual", s.best_residual}, {"verdict", to_string(s.verdict)}});
    if (s.certificate) {
      if (!start) start = big_q;
      last = big_q;
    } else if (start) {
      intervals.push_back({{"lo", *start}, {"hi", *last}});
      start.reset();
    }
  }
  if (start) intervals.push_back({{"lo", *start}, {"hi", *last}});
  return {{"method", "sweep"}, {"q_grid", c.q_grid}, {"intervals", intervals}, {"samples", points}};
}

inline Outcome cmd_qrange(const QuantumText& text, const RunConfig& c, const Logger& log) {
  const Matrix g = gram(text);
  auto formula = [](const QRangeResult& r) {
    Json iv = Json::array();
    for (const auto& i : r.intervals) iv.push_back(interval_json(i));
    return iv;
  };
  Outcome o;
  if (!c.search && text.size() == 2 && classify(text).thick) {
    o.report = {{"method", "two_text_formula"}, {"intervals", formula(q_range_two_text(std::abs(g(0, 1))))}};
  } else if (const auto uni = c.search || text.size() < 3 ? std::nullopt : as_real_uniform(g)) {
    const int n = static_cast<int>(text.size());
    if (!classify(text).efficient) {
      o.report = {{"method", "uniform_formula"}, {"intervals", Json::array()}};
    } else {
      o.report = {{"method", "uniform_formula"}, {"intervals", formula(q_range_real_uniform(n, uni->z))}};
    }
  } else {
    o.report = sweep_intervals(text, c, log);
  }
  o.code = o.report["intervals"].empty() ? kExitNegative : kExitOk;
  return o;
}

inline EnscriptionCertificate load_certificate(const QuantumText& text, const RunConfig& c) {
  EnscriptionCertificate cert = io::certificate_from_json(io::read_json_file(*c.certificate_path));
  if (cert.params.tablet.size() != text.dimension() ||
      static_cast<Eigen::Index>(cert.params.output_phases.size()) != text.size()) {
    throw Error(ErrorKind::DimensionMismatch, "certificate does not match the text");
  }
  const double res = enscription_residual(text, cert.params);
  if (res >= c.tolerance) {
    throw Error(ErrorKind::InvalidCertificate, "certificate residual " + std::to_string(res) + " above tolerance");
  }
  return cert;
}

inline Outcome cmd_build_procedure(const QuantumText& text, const RunConfig& c) {
  const EnscriptionCertificate cert = load_certificate(text, c);
  return {io::procedure_to_json(build_procedure(text, cert, c.tolerance))};
}

inline Outcome cmd_clone(const QuantumText& text, const RunConfig& c) {
  const EnscriptionCertificate cert = load_certificate(text, c);
  const Matrix u = build_procedure(text, cert, c.tolerance);
  Json reports = Json::array();
  for (Eigen::Index i = 0; i < text.size(); ++i) {
    reports.push_back(io::clone_report_to_json(text, cert, run_clone(text, cert, i, u)));
  }
  return {{{"reports", reports}}};
}

inline Outcome cmd_verify(const RunConfig& c, const Logger& log) {
  acceptance::Options opt;
  opt.seed = c.seed;
  opt.starts = c.starts;
  Json criteria = Json::array();
  bool all = true;
  for (const auto& r : acceptance::run_all(opt, c.only)) {
    log.info(std::string(r.passed ? "PASS " : "FAIL ") + r.key);
    all = all && r.passed;
    criteria.push_back(acceptance::to_json(r));
  }
  return {{{"criteria", criteria}, {"all_passed", all}}, all ? kExitOk : kExitNegative};
}

}  // namespace detail

/// Runs one command; the JSON report goes to --output or `out`. Errors are
/// printed to `err` and yield exit code 1.
inline int run_command(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const Logger log(err);
  try {
    validate(c);
    detail::Outcome o;
    if (c.command == "verify-theorems") {
      o = detail::cmd_verify(c, log);
    } else {
      const QuantumText text = io::text_from_json(io::read_json_file(c.input_path));
      log.info("loaded " + std::to_string(text.size()) + " states in dimension " +
               std::to_string(text.dimension()));
      if (c.command == "classify") o = detail::cmd_classify(text);
      else if (c.command == "gram") o = detail::cmd_gram(text);
      else if (c.command == "solve") o = detail::cmd_solve(text, c, log);
      else if (c.command == "qrange") o = detail::cmd_qrange(text, c, log);
      else if (c.command == "build-procedure") o = detail::cmd_build_procedure(text, c);
      else o = detail::cmd_clone(text, c);
    }
    if (c.output_path) io::write_json_file(*c.output_path, o.report);
    else out << o.report.dump(2) << '\n';
    return o.code;
  } catch (const std::exception& e) {
    log.error(e.what());
    return kExitError;
  }
}

}  // namespace enscribe::cli
