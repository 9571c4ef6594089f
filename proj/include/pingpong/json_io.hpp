#pragma once

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "pingpong/projective.hpp"

namespace pingpong::io {

using Json = nlohmann::ordered_json;

/// Malformed or schema-violating input; `path` is a JSON pointer into the
/// offending document.
struct InputError : Error {
  std::string path;
  InputError(std::string p, const std::string& what) : Error(what + (p.empty() ? "" : " at " + p)), path(std::move(p)) {}
};

inline constexpr int kSchema = 1;

inline Json encode_field(const FieldSpec& f) {
  Json j;
  j["kind"] = to_string(f.kind);
  if (f.kind == FieldKind::Padic) {
    j["prime"] = f.prime;
    j["precision"] = f.precision;
  }
  return j;
}

inline FieldSpec parse_field(const Json& j, const std::string& path) {
  if (!j.is_object()) throw InputError(path, "field must be an object");
  if (!j.contains("kind") || !j["kind"].is_string()) throw InputError(path + "/kind", "missing field kind");
  const std::string kind = j["kind"];
  if (kind == "real") return FieldSpec::real();
  if (kind == "complex") return FieldSpec::complex();
  if (kind != "padic") throw InputError(path + "/kind", "unknown field kind '" + kind + "'");
  if (!j.contains("prime") || !j["prime"].is_number_integer()) throw InputError(path + "/prime", "missing prime");
  int precision = 20;
  if (j.contains("precision")) {
    if (!j["precision"].is_number_integer()) throw InputError(path + "/precision", "precision must be an integer");
    precision = j["precision"];
  }
  try {
    return FieldSpec::padic(j["prime"].get<std::int64_t>(), precision);
  } catch (const DomainError& e) {
    throw InputError(path, e.what());
  }
}

namespace detail {

inline std::int64_t parse_int(std::string_view s, const std::string& path) {
  std::int64_t v = 0;
  const char* b = s.data();
  const char* e = s.data() + s.size();
  if (!s.empty() && *b == '+') ++b;
  auto [ptr, ec] = std::from_chars(b, e, v);
  if (ec != std::errc() || ptr != e) throw InputError(path, "not an integer: '" + std::string(s) + "'");
  return v;
}

// "a/b" or "a"
inline std::pair<std::int64_t, std::int64_t> parse_rational(const std::string& s, const std::string& path) {
  const auto slash = s.find('/');
  if (slash == std::string::npos) return {parse_int(s, path), 1};
  const auto num = parse_int(std::string_view(s).substr(0, slash), path);
  const auto den = parse_int(std::string_view(s).substr(slash + 1), path);
  if (den == 0) throw InputError(path, "zero denominator");
  return {num, den};
}

inline double parse_real(const Json& j, const std::string& path) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto [a, b] = parse_rational(j.get<std::string>(), path);
    return static_cast<double>(a) / static_cast<double>(b);
  }
  throw InputError(path, "expected a real number");
}

}  // namespace detail

/// Scalars: a number (or "a/b") over R; a number or [re, im] over C; over
/// Q_p an integer, "a/b", {"rat": "a/b"}, {"val": j, "unit_digits": [...]}
/// (little-endian base-p digits) or {"zero": true[, "abs_prec": a]}.
template <class T>
T parse_scalar(const Json& j, const FieldSpec& f, const std::string& path) {
  if constexpr (std::is_same_v<T, double>) {
    return detail::parse_real(j, path);
  } else if constexpr (std::is_same_v<T, Complex>) {
    if (j.is_array()) {
      if (j.size() != 2) throw InputError(path, "complex scalar must be [re, im]");
      return {detail::parse_real(j[0], path + "/0"), detail::parse_real(j[1], path + "/1")};
    }
    return {detail::parse_real(j, path), 0.0};
  } else {
    try {
      if (j.is_number_integer()) return Padic::from_int(j.get<std::int64_t>(), f.prime, f.precision);
      if (j.is_string()) {
        const auto [a, b] = detail::parse_rational(j.get<std::string>(), path);
        return Padic::from_rational(a, b, f.prime, f.precision);
      }
      if (j.is_object()) {
        if (j.contains("rat")) {
          if (!j["rat"].is_string()) throw InputError(path + "/rat", "expected \"a/b\"");
          const auto [a, b] = detail::parse_rational(j["rat"].get<std::string>(), path + "/rat");
          return Padic::from_rational(a, b, f.prime, f.precision);
        }
        if (j.contains("zero")) {
          if (!j.contains("abs_prec")) return Padic::zero(f.prime, f.precision);
          if (!j["abs_prec"].is_number_integer()) throw InputError(path + "/abs_prec", "expected an integer");
          return Padic::inexact_zero(j["abs_prec"].get<int>(), f.prime, f.precision);
        }
        if (j.contains("val") && j.contains("unit_digits")) {
          if (!j["val"].is_number_integer()) throw InputError(path + "/val", "expected an integer");
          if (!j["unit_digits"].is_array()) throw InputError(path + "/unit_digits", "expected an array");
          std::vector<std::int64_t> digits;
          for (std::size_t i = 0; i < j["unit_digits"].size(); ++i) {
            const auto& d = j["unit_digits"][i];
            if (!d.is_number_integer()) throw InputError(path + "/unit_digits/" + std::to_string(i), "expected a digit");
            digits.push_back(d.get<std::int64_t>());
          }
          return Padic::from_digits(j["val"].get<int>(), digits, f.prime, f.precision);
        }
      }
    } catch (const InputError&) {
      throw;
    } catch (const Error& e) {
      throw InputError(path, e.what());
    }
    throw InputError(path, "expected a p-adic scalar");
  }
}

inline Json encode_scalar(double x) { return x; }
inline Json encode_scalar(const Complex& z) { return Json::array({z.real(), z.imag()}); }
inline Json encode_scalar(const Padic& x) {
  Json j;
  if (x.is_zero()) {
    j["zero"] = true;
    if (!x.is_exact_zero()) j["abs_prec"] = x.absolute_precision();
    return j;
  }
  j["val"] = x.valuation();
  j["unit_digits"] = x.unit_digits();
  return j;
}

template <class T>
Json encode_vector(const Vec<T>& v) {
  Json j = Json::array();
  for (const auto& x : v) j.push_back(encode_scalar(x));
  return j;
}

template <class T>
Json encode_matrix(const Matrix<T>& m) {
  Json j = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) j.push_back(encode_vector(m.row_vec(i)));
  return j;
}

template <class T>
Matrix<T> parse_matrix(const Json& j, const FieldSpec& f, const std::string& path) {
  if (!j.is_array() || j.empty()) throw InputError(path, "matrix must be a non-empty array of rows");
  const std::size_t n = j.size();
  Matrix<T> m(n, n, f);
  for (std::size_t i = 0; i < n; ++i) {
    const std::string rp = path + "/" + std::to_string(i);
    if (!j[i].is_array()) throw InputError(rp, "row must be an array");
    if (j[i].size() != n) throw InputError(rp, "matrix must be square");
    for (std::size_t k = 0; k < n; ++k) m(i, k) = parse_scalar<T>(j[i][k], f, rp + "/" + std::to_string(k));
  }
  return m;
}

/// Determinant one: exactly (to known precision) over Q_p, within the global
/// tolerance relative to ||g||^n over R and C.
template <class T>
void require_sl(const Matrix<T>& g, const std::string& path) {
  if (g.rows() < 2) throw InputError(path, "matrix must be at least 2 x 2");
  const T det = determinant(g);
  if constexpr (is_archimedean_v<T>) {
    const double scale = std::max(1.0, std::pow(g.max_abs(), static_cast<double>(g.rows())));
    if (std::abs(det - T(1.0)) > tolerance() * scale)
      throw InputError(path, "matrix is not in SL_n (det = " + std::to_string(std::abs(det)) + ")");
  } else {
    if (!(det - Padic::one(g.field().prime, g.field().precision)).is_zero())
      throw InputError(path, "matrix is not in SL_n");
  }
}

/// Input document: {"schema": 1, "field": {...}, "matrices": {name: rows},
/// optional "gens": [names], "set": {"elements": [names], "m": int, "r": real},
/// "gamma": name}.
struct Document {
  std::string source;  // file name, for messages
  std::string text;    // raw bytes, for the digest
  Json json;
  FieldSpec field;
};

inline Document parse_document(std::string text, std::string source = "<input>") {
  Document d;
  d.source = std::move(source);
  d.text = std::move(text);
  try {
    d.json = Json::parse(d.text);
  } catch (const Json::parse_error& e) {
    throw InputError("", d.source + ": malformed JSON: " + e.what());
  }
  const Json& j = d.json;
  if (!j.is_object()) throw InputError("", d.source + ": document must be an object");
  if (j.contains("schema") && !(j["schema"].is_number_integer() && j["schema"].get<int>() == kSchema))
    throw InputError("/schema", d.source + ": unsupported schema version");
  if (!j.contains("field")) throw InputError("/field", d.source + ": missing field");
  d.field = parse_field(j["field"], "/field");
  if (!j.contains("matrices") || !j["matrices"].is_object() || j["matrices"].empty())
    throw InputError("/matrices", d.source + ": missing matrices");
  return d;
}

inline Document load_document(const std::string& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw InputError("", "cannot read " + file);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_document(ss.str(), file);
}

template <class T>
Matrix<T> matrix(const Document& d, const std::string& name) {
  const auto& ms = d.json["matrices"];
  const std::string path = "/matrices/" + name;
  if (!ms.contains(name)) throw InputError(path, d.source + ": no matrix named '" + name + "'");
  auto g = parse_matrix<T>(ms[name], d.field, path);
  require_sl(g, path);
  return g;
}

inline std::vector<std::string> matrix_names(const Document& d) {
  std::vector<std::string> names;
  for (const auto& [k, v] : d.json["matrices"].items()) names.push_back(k);
  return names;
}

// Names listed under `key` (validated), or every matrix in document order.
inline std::vector<std::string> name_list(const Document& d, const Json& list, const std::string& path) {
  if (!list.is_array() || list.empty()) throw InputError(path, d.source + ": expected a non-empty list of names");
  std::vector<std::string> names;
  for (std::size_t i = 0; i < list.size(); ++i) {
    if (!list[i].is_string()) throw InputError(path + "/" + std::to_string(i), d.source + ": expected a name");
    names.push_back(list[i]);
  }
  return names;
}

/// The single matrix named `preferred` if present, else the only matrix.
inline std::string single_name(const Document& d, const std::string& preferred) {
  if (!preferred.empty() && d.json["matrices"].contains(preferred)) return preferred;
  const auto names = matrix_names(d);
  if (names.size() != 1)
    throw InputError("/matrices", d.source + ": expected one matrix or one named '" + preferred + "'");
  return names.front();
}

template <class T>
std::vector<std::pair<std::string, Matrix<T>>> generators(const Document& d) {
  const auto names = d.json.contains("gens") ? name_list(d, d.json["gens"], "/gens") : matrix_names(d);
  std::vector<std::pair<std::string, Matrix<T>>> out;
  for (const auto& n : names) out.emplace_back(n, matrix<T>(d, n));
  for (std::size_t i = 1; i < out.size(); ++i)
    if (out[i].second.rows() != out[0].second.rows())
      throw InputError("/matrices/" + out[i].first, d.source + ": generators differ in size");
  return out;
}

struct SetSpec {
  std::vector<std::string> names;
  std::optional<int> m;
  std::optional<double> r;
};

inline SetSpec set_spec(const Document& d) {
  SetSpec s;
  if (!d.json.contains("set")) {
    s.names = matrix_names(d);
    return s;
  }
  const Json& j = d.json["set"];
  if (!j.is_object()) throw InputError("/set", d.source + ": set must be an object");
  s.names = j.contains("elements") ? name_list(d, j["elements"], "/set/elements") : matrix_names(d);
  if (j.contains("m")) {
    if (!j["m"].is_number_integer() || j["m"].get<int>() < 1) throw InputError("/set/m", d.source + ": m must be a positive integer");
    s.m = j["m"].get<int>();
  }
  if (j.contains("r")) {
    const double r = detail::parse_real(j["r"], "/set/r");
    if (!(r > 0.0 && r <= 1.0)) throw InputError("/set/r", d.source + ": r must lie in (0, 1]");
    s.r = r;
  }
  return s;
}

template <class T>
Json encode_point(const ProjPoint<T>& p) {
  return encode_vector(p.rep());
}

template <class T>
Json encode_hyperplane(const ProjHyperplane<T>& h) {
  return encode_vector(h.form());
}

}  // namespace pingpong::io
