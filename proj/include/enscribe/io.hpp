#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "enscribe/cloning.hpp"
#include "enscribe/params.hpp"

namespace enscribe::io {

using Json = nlohmann::json;

inline Json to_json(Complex c) { return Json::array({c.real(), c.imag()}); }

inline Complex complex_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw Error(ErrorKind::ParseError, "complex numbers are [re, im] arrays");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

inline Json to_json(const Vector& v) {
  Json out = Json::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) out.push_back(to_json(v(k)));
  return out;
}

inline Vector vector_from_json(const Json& j) {
  if (!j.is_array()) throw Error(ErrorKind::ParseError, "expected an array of complex numbers");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t k = 0; k < j.size(); ++k) v(static_cast<Eigen::Index>(k)) = complex_from_json(j[k]);
  return v;
}

/// Rows of [re, im] pairs.
inline Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) rows.push_back(to_json(Vector(m.row(r).transpose())));
  return rows;
}

// Text: { "dimension": d, "states": [[[re, im], ...], ...] }

inline Json text_to_json(const QuantumText& text) {
  Json states = Json::array();
  for (Eigen::Index i = 0; i < text.size(); ++i) states.push_back(to_json(Vector(text.state(i))));
  return {{"dimension", text.dimension()}, {"states", states}};
}

inline QuantumText text_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("dimension") || !j.contains("states") ||
      !j["dimension"].is_number_integer() || !j["states"].is_array()) {
    throw Error(ErrorKind::ParseError, "text needs integer 'dimension' and array 'states'");
  }
  const auto d = j["dimension"].get<long long>();
  if (d < 1) throw Error(ErrorKind::ParseError, "dimension must be positive");
  std::vector<std::vector<Complex>> raw;
  for (const auto& s : j["states"]) {
    const Vector v = vector_from_json(s);
    raw.emplace_back(v.data(), v.data() + v.size());
  }
  return make_text(static_cast<Eigen::Index>(d), raw);
}

// Certificate: { "Q", "q": [re, im], "tablet", "phases", "residual", "flavor" }

inline Json certificate_to_json(const EnscriptionCertificate& c) {
  Json phases = Json::array();
  for (const auto& a : c.params.output_phases) phases.push_back(to_json(a));
  return {{"Q", c.params.Q},
          {"q", to_json(c.params.q)},
          {"tablet", to_json(c.params.tablet)},
          {"phases", phases},
          {"residual", c.residual},
          {"flavor", to_string(c.flavor)}};
}

inline EnscriptionCertificate certificate_from_json(const Json& j) {
  for (const char* key : {"Q", "q", "tablet", "phases", "residual", "flavor"}) {
    if (!j.is_object() || !j.contains(key)) {
      throw Error(ErrorKind::ParseError, std::string("certificate is missing '") + key + "'");
    }
  }
  if (!j["Q"].is_number() || !j["residual"].is_number() || !j["flavor"].is_string() ||
      !j["phases"].is_array()) {
    throw Error(ErrorKind::ParseError, "certificate field has the wrong type");
  }
  EnscriptionCertificate c;
  c.params.Q = j["Q"].get<double>();
  c.params.q = complex_from_json(j["q"]);
  c.params.tablet = vector_from_json(j["tablet"]);
  for (const auto& a : j["phases"]) c.params.output_phases.push_back(complex_from_json(a));
  c.residual = j["residual"].get<double>();
  c.flavor = flavor_from_string(j["flavor"].get<std::string>());
  return c;
}

// Procedure: { "dim": D, "matrix": [[[re, im], ...], ...] } row-major

inline Json procedure_to_json(const Matrix& u) {
  return {{"dim", u.rows()}, {"matrix", matrix_to_json(u)}};
}

inline Matrix procedure_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("dim") || !j.contains("matrix") || !j["dim"].is_number_integer()) {
    throw Error(ErrorKind::ParseError, "procedure needs 'dim' and 'matrix'");
  }
  const auto dim = j["dim"].get<long long>();
  const Json& rows = j["matrix"];
  if (dim < 1 || !rows.is_array() || static_cast<long long>(rows.size()) != dim) {
    throw Error(ErrorKind::ParseError, "procedure matrix must have 'dim' rows");
  }
  Matrix u(dim, dim);
  for (long long r = 0; r < dim; ++r) {
    const Vector row = vector_from_json(rows[static_cast<std::size_t>(r)]);
    if (row.size() != dim) throw Error(ErrorKind::ParseError, "procedure rows must have 'dim' entries");
    u.row(r) = row.transpose();
  }
  return u;
}

// Clone report: { "i", "p_success", "p_formula_real_q", "fidelity", "failure_symmetry" }

inline Json clone_report_to_json(const QuantumText& text, const EnscriptionCertificate& cert,
                                 const CloneOutcome& outcome) {
  Json j;
  j["i"] = outcome.index;
  j["p_success"] = outcome.success_probability;
  const bool real_q = cert.params.q.imag() == 0.0;
  j["p_formula_real_q"] = real_q ? Json(success_probability_real_q(text, outcome.index, cert.params)) : Json();
  j["fidelity"] = outcome.fidelity;
  std::string sym = "n/a";
  if (real_q) {
    const FailureSymmetryReport rep = failure_state_symmetry_check(text, cert, outcome.index);
    if (rep.parity) sym = *rep.parity > 0 ? "+1" : "-1";
  }
  j["failure_symmetry"] = sym;
  return j;
}

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::FileNotFound, "cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return Json::parse(buf.str());
  } catch (const Json::parse_error& e) {
    throw Error(ErrorKind::ParseError, path + ": " + e.what());
  }
}

inline void write_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::FileNotFound, "cannot write '" + path + "'");
  out << j.dump(2) << '\n';
}

}  // namespace enscribe::io
