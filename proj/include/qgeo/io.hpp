#pragma once

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "qgeo/spin.hpp"

namespace qgeo::io {

using nlohmann::json;

/// {"rows": r, "cols": c, "re": [[...]], "im": [[...]]}; "im" may be omitted
/// on input and is always written.
inline json matrix_to_json(const ComplexMatrix& m) {
  json re = json::array();
  json im = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json rr = json::array();
    json ii = json::array();
    for (Index j = 0; j < m.cols(); ++j) {
      rr.push_back(m(i, j).real());
      ii.push_back(m(i, j).imag());
    }
    re.push_back(std::move(rr));
    im.push_back(std::move(ii));
  }
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"re", std::move(re)}, {"im", std::move(im)}};
}

inline ComplexMatrix matrix_from_json(const json& j, const std::string& label = "matrix") {
  try {
    const auto rows = j.at("rows").get<Index>();
    const auto cols = j.at("cols").get<Index>();
    if (rows < 1 || cols < 1) throw Error(ErrorKind::BadDims, label + ": rows and cols must be positive");
    const json& re = j.at("re");
    const bool has_im = j.contains("im");
    const json& im = has_im ? j.at("im") : json();
    auto check_shape = [&](const json& part, const char* name) {
      if (!part.is_array() || static_cast<Index>(part.size()) != rows) {
        throw Error(ErrorKind::BadDims, label + ": '" + name + "' must have " + std::to_string(rows) + " rows");
      }
      for (const json& row : part)
        if (!row.is_array() || static_cast<Index>(row.size()) != cols) {
          throw Error(ErrorKind::BadDims, label + ": '" + name + "' rows must have " + std::to_string(cols) + " entries");
        }
    };
    check_shape(re, "re");
    if (has_im) check_shape(im, "im");
    ComplexMatrix m(rows, cols);
    for (Index r = 0; r < rows; ++r)
      for (Index c = 0; c < cols; ++c)
        m(r, c) = Complex(re[r][c].get<double>(), has_im ? im[r][c].get<double>() : 0.0);
    return m;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ParseError, label + ": " + e.what());
  }
}

inline json spectrum_to_json(const Spectrum& s) { return {{"values", s.distinct_values()}, {"mults", s.mults()}}; }

inline Spectrum spectrum_from_json(const json& j, const Tolerances& tol = {}) {
  try {
    return Spectrum::make(j.at("values").get<std::vector<double>>(), j.at("mults").get<std::vector<int>>(), tol);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string("spectrum: ") + e.what());
  }
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ParseError, "cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ParseError, path + ": " + e.what());
  }
}

inline void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::ParseError, "cannot write " + path);
  out << j.dump(2) << '\n';
}

/// Contents of a state file: {"hbar": h, "rho": matrix, "spectrum": {...}}.
struct StateFile {
  double hbar = 1.0;
  ComplexMatrix rho;
  std::optional<Spectrum> spectrum;
};

inline StateFile parse_state(const json& j, const Tolerances& tol = {}) {
  StateFile s;
  try {
    if (j.contains("hbar")) s.hbar = j.at("hbar").get<double>();
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string("hbar: ") + e.what());
  }
  if (!j.contains("rho")) throw Error(ErrorKind::ParseError, "state file has no 'rho'");
  s.rho = matrix_from_json(j.at("rho"), "rho");
  if (j.contains("spectrum")) s.spectrum = spectrum_from_json(j.at("spectrum"), tol);
  return s;
}

inline json state_to_json(const DensityState& state, double hbar) {
  return {{"hbar", hbar}, {"rho", matrix_to_json(state.rho())}, {"spectrum", spectrum_to_json(state.sigma())}};
}

/// Observable files map names to matrices, either at top level or under
/// "observables". Each matrix must be Hermitian.
inline std::map<std::string, Observable> parse_observables(const json& j, const Tolerances& tol = {}) {
  const json& table = j.contains("observables") ? j.at("observables") : j;
  if (!table.is_object()) throw Error(ErrorKind::ParseError, "observable file must be a JSON object");
  std::map<std::string, Observable> out;
  for (const auto& [name, value] : table.items()) {
    ComplexMatrix m = matrix_from_json(value, "obs '" + name + "'");
    try {
      out.emplace(name, Observable(std::move(m), tol.herm, "obs '" + name + "'"));
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::NotHermitian) throw Error(ErrorKind::NotHermitian, "obs '" + name + "'");
      throw;
    }
  }
  return out;
}

/// FNV-1a over the IEEE-754 bytes of the entries; identifies inputs in reports.
inline std::string matrix_hash(const ComplexMatrix& m) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto feed = [&h](const void* data, std::size_t n) {
    const auto* bytes = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
      h ^= bytes[i];
      h *= 0x100000001b3ULL;
    }
  };
  const std::int64_t dims[2] = {static_cast<std::int64_t>(m.rows()), static_cast<std::int64_t>(m.cols())};
  feed(dims, sizeof dims);
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) {
      const double parts[2] = {m(i, j).real(), m(i, j).imag()};
      feed(parts, sizeof parts);
    }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

inline json tolerances_to_json(const Tolerances& t) {
  return {{"herm", t.herm},         {"eig", t.eig},       {"unitary", t.unitary},
          {"spec", t.spec},         {"trace", t.trace},   {"psd", t.psd},
          {"normalization", t.normalization},             {"frame", t.frame},
          {"gauge", t.gauge},       {"tangent", t.tangent}, {"classify", t.classify},
          {"tie", t.tie},           {"identity", t.identity}, {"flow", t.flow},
          {"max_sweeps", t.max_sweeps}};
}

inline json bound_report_to_json(const BoundReport& r) {
  return {{"hbar", r.hbar},
          {"expA", r.expA},
          {"expB", r.expB},
          {"dA", r.dA},
          {"dB", r.dB},
          {"product", r.product()},
          {"rs_bound", r.rs_bound},
          {"geo_bound", r.geo_bound},
          {"combined_bound", r.combined_bound},
          {"g_bracket", r.g_bracket},
          {"w_bracket", r.w_bracket},
          {"gAA", r.gAA},
          {"gBB", r.gBB},
          {"xiAperp_xiBperp", r.xiAperp_xiBperp},
          {"xiAperp_sq", r.xiAperp_sq},
          {"xiBperp_sq", r.xiBperp_sq},
          {"covariance", r.covariance},
          {"commutator", r.commutator},
          {"difference_term", r.difference_term()},
          {"variance_product_residual", r.variance_product_residual},
          {"correlation_square_residual", r.correlation_square_residual},
          {"scale", r.scale},
          {"winner", std::string(to_string(r.winner))}};
}

/// Flat report plus hashes of the inputs and the tolerances used.
inline json bound_report_to_json(const BoundReport& r, const ComplexMatrix& a, const ComplexMatrix& b,
                                 const ComplexMatrix& rho, const Tolerances& tol) {
  json j = bound_report_to_json(r);
  j["input_hashes"] = {{"A", matrix_hash(a)}, {"B", matrix_hash(b)}, {"rho", matrix_hash(rho)}};
  j["tolerances"] = tolerances_to_json(tol);
  return j;
}

inline json spin_forms_to_json(const SpinForms& f) {
  return {{"sxsy_omega", f.sxsy_omega},
          {"sxsx_g", f.sxsx_g},
          {"xi_sz_perp_sq", f.xi_sz_perp_sq},
          {"sz_exp", f.sz_exp},
          {"sxsy_floor", f.sxsy_floor}};
}

inline json demo_report_to_json(const AbcdReport& r) {
  return {{"spec", {{"s", r.spec.s.value()}, {"m", r.spec.m}, {"p", r.spec.p}, {"eps", r.eps}, {"hbar", r.hbar}}},
          {"closed_forms", spin_forms_to_json(r.closed)},
          {"machine_forms", spin_forms_to_json(r.machine)},
          {"window", {{"lower", r.window_lower}, {"upper", r.window_upper}, {"holds", r.window_holds}}},
          {"pairs", {{"AB", bound_report_to_json(r.ab)}, {"CD", bound_report_to_json(r.cd)}}},
          {"sxsy", {{"lhs", r.sxsy_product}, {"rhs", r.sxsy_floor}, {"holds", r.sxsy_holds}}},
          {"winners_as_predicted", r.winners_as_predicted}};
}

}  // namespace qgeo::io
