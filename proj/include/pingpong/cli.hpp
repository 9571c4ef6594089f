#pragma once

#include <openssl/evp.h>

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pingpong/json_io.hpp"
#include "pingpong/lie.hpp"
#include "pingpong/pingpong.hpp"

#ifndef PINGPONG_VERSION
#define PINGPONG_VERSION "0.0.0"
#endif

namespace pingpong::cli {

using io::Json;

enum Exit : int { kOk = 0, kRefuted = 1, kInputError = 2, kPrecondition = 3 };

inline std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw Error("SHA-256 digest failed");
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
  return os.str();
}

/// {"value": v, "provenance": p} with p one of "exact", "tolerance", "estimate".
inline Json tag(Json v, const char* provenance) {
  Json j;
  j["value"] = std::move(v);
  j["provenance"] = provenance;
  return j;
}

// Values computed in floating point carry the tolerance tag; over Q_p the
// same quantities are exact.
template <class T>
constexpr const char* computed() {
  return is_archimedean_v<T> ? "tolerance" : "exact";
}

struct Inputs {
  std::vector<std::pair<std::string, io::Document>> docs;  // (role, document)

  const io::Document& get(const std::string& role) const {
    for (const auto& [r, d] : docs)
      if (r == role) return d;
    throw Error("missing input " + role);
  }
  bool has(const std::string& role) const {
    for (const auto& [r, d] : docs)
      if (r == role) return true;
    return false;
  }
  std::string digest() const {
    std::string all;
    for (const auto& [r, d] : docs) {
      all += r;
      all.push_back('\0');
      all += d.text;
      all.push_back('\0');
    }
    return sha256_hex(all);
  }
  const FieldSpec& field() const {
    const FieldSpec& f = docs.front().second.field;
    for (const auto& [r, d] : docs)
      if (!(d.field == f)) throw io::InputError("/field", d.source + ": field differs from " + docs.front().second.source);
    return f;
  }
};

// Runs fn.template operator()<T>() for the scalar type of the field.
template <class Fn>
auto dispatch(const FieldSpec& f, Fn&& fn) {
  switch (f.kind) {
    case FieldKind::Real:
      return fn.template operator()<double>();
    case FieldKind::Complex:
      return fn.template operator()<Complex>();
    default:
      return fn.template operator()<Padic>();
  }
}

template <class T>
Json contraction_json(const ContractionCert<T>& c) {
  Json j;
  j["epsilon"] = tag(c.epsilon, computed<T>());
  j["ratio"] = tag(c.ratio, computed<T>());
  j["attracting"] = tag(io::encode_point(c.attracting), computed<T>());
  j["repulsive"] = tag(io::encode_hyperplane(c.repulsive), computed<T>());
  return j;
}

template <class T>
Json proximal_json(const ProximalCert<T>& p) {
  Json j;
  j["r"] = tag(p.r, computed<T>());
  j["epsilon"] = tag(p.epsilon, computed<T>());
  j["forward"] = contraction_json(p.forward);
  j["backward"] = p.backward ? contraction_json(*p.backward) : Json(nullptr);
  j["distance"] = tag(dist_to_hyperplane(p.forward.attracting, p.forward.repulsive), computed<T>());
  if (p.backward)
    j["distance_inverse"] = tag(dist_to_hyperplane(p.backward->attracting, p.backward->repulsive), computed<T>());
  return j;
}

template <class T>
Json numbers(const std::vector<T>& v) {
  Json j = Json::array();
  for (const auto& x : v) j.push_back(x);
  return j;
}

struct Outcome {
  Json parameters = Json::object();
  Json result = Json::object();
  bool pass = false;
};

template <class T>
Outcome cmd_cartan(const Inputs& in, const std::string& name) {
  const auto& doc = in.get("in");
  const std::string n = io::single_name(doc, name);
  const auto g = io::matrix<T>(doc, n);
  const auto c = cartan_decompose(g);
  Outcome o;
  o.parameters["matrix"] = n;
  o.result["n"] = tag(c.n(), "exact");
  o.result["k"] = tag(io::encode_matrix(c.k), computed<T>());
  o.result["a"] = tag(io::encode_vector(c.a), computed<T>());
  o.result["k_prime"] = tag(io::encode_matrix(c.k_prime), computed<T>());
  std::vector<double> abs_a, ratios;
  for (std::size_t i = 0; i < c.n(); ++i) abs_a.push_back(c.abs_a(i));
  for (double q : cartan_ratios(c)) ratios.push_back(1.0 / q);
  o.result["abs_a"] = tag(numbers(abs_a), computed<T>());
  o.result["ratio_table"] = tag(numbers(ratios), computed<T>());
  o.result["bilipschitz"] = tag(bilip_constant(c), computed<T>());
  if constexpr (is_archimedean_v<T>) {
    const auto diff = c.reconstruct() - g;
    o.result["reconstruction_error"] = tag(diff.max_abs() / g.max_abs(), "tolerance");
  } else {
    o.result["exponents"] = tag(numbers(c.exponents()), "exact");
    o.result["precision_loss"] = tag(c.precision_loss, "exact");
  }
  o.pass = true;
  return o;
}

template <class T>
Outcome cmd_contract(const Inputs& in, const std::string& name, std::size_t samples, std::uint64_t seed,
                     unsigned threads) {
  const auto& doc = in.get("in");
  const std::string n = io::single_name(doc, name);
  const auto g = io::matrix<T>(doc, n);
  const auto triple = cartan_decompose(g);
  const auto cert = cartan_certificate(triple);
  const auto check = check_contracting(cert, g, samples, seed, threads);
  const bool contracting = cert.epsilon < 0.25;
  Outcome o;
  o.parameters["matrix"] = n;
  o.parameters["samples"] = samples;
  o.result["certificate"] = contraction_json(cert);
  o.result["contracting"] = tag(contracting, computed<T>());
  o.result["bilipschitz"] = tag(bilip_constant(triple), computed<T>());
  const auto prox = proximal_cert(g);
  o.result["very_proximal"] = prox ? proximal_json(*prox) : Json(nullptr);
  Json emp;
  emp["samples"] = tag(check.samples, "exact");
  emp["tested"] = tag(check.tested, "exact");
  emp["violations"] = tag(check.violations, "exact");
  emp["worst_distance"] = tag(check.worst, "estimate");
  emp["passed"] = tag(check.passed, "estimate");
  o.result["empirical"] = emp;
  o.pass = contracting && check.passed;
  return o;
}

template <class T>
std::vector<Matrix<T>> set_elements(const io::Document& doc, const io::SetSpec& spec) {
  std::vector<Matrix<T>> out;
  for (const auto& n : spec.names) out.push_back(io::matrix<T>(doc, n));
  for (std::size_t i = 1; i < out.size(); ++i)
    if (out[i].rows() != out[0].rows()) throw io::InputError("/matrices/" + spec.names[i], doc.source + ": set elements differ in size");
  return out;
}

template <class T>
Outcome cmd_separate(const Inputs& in, std::optional<int> m_flag, std::size_t trials, std::uint64_t seed,
                     unsigned threads) {
  const auto& doc = in.get("set");
  const auto spec = io::set_spec(doc);
  const int m = m_flag ? *m_flag : spec.m.value_or(0);
  if (m < 1) throw io::InputError("/set/m", "m must be given by --m or the document");
  const auto elems = set_elements<T>(doc, spec);
  const auto est = estimate_radius<T>(elems, m, trials, seed, threads);
  Outcome o;
  o.parameters["m"] = m;
  o.parameters["trials"] = trials;
  o.result["r_estimate"] = tag(est.r, "estimate");
  o.result["separating"] = tag(est.separating, "estimate");
  o.result["worst_trial"] = tag(est.worst_trial, "exact");
  double C = 1.0;
  Json per = Json::array();
  for (std::size_t i = 0; i < elems.size(); ++i) {
    const double b = bilip_constant(elems[i]);
    C = std::max(C, b);
    Json e;
    e["name"] = spec.names[i];
    e["bilipschitz"] = tag(b, computed<T>());
    e["wins"] = tag(est.wins[i], "exact");
    per.push_back(e);
  }
  o.result["C"] = tag(C, computed<T>());
  o.result["elements"] = per;
  o.pass = est.separating;
  if (spec.r) {
    o.parameters["declared_r"] = *spec.r;
    const bool consistent = est.r > *spec.r;
    o.result["declared_r_consistent"] = tag(consistent, "estimate");
    o.pass = o.pass && consistent;
  }
  return o;
}

template <class T>
Json pingpong_json(const PingPongCert<T>& cert, const PingPongCheck& check) {
  Json j;
  Json gens = Json::array();
  for (const auto& g : cert.generators) gens.push_back(io::encode_matrix(g));
  j["generators"] = tag(gens, computed<T>());
  j["r"] = tag(cert.r, computed<T>());
  j["epsilon"] = tag(cert.epsilon, computed<T>());
  Json els = Json::array();
  for (const auto& e : cert.elements) els.push_back(proximal_json(e));
  j["elements"] = els;
  Json cross = Json::array();
  for (const auto& e : cert.cross) {
    Json c;
    c["from"] = {{"index", tag(e.i, "exact")}, {"sign", tag(e.si, "exact")}};
    c["to"] = {{"index", tag(e.j, "exact")}, {"sign", tag(e.sj, "exact")}};
    c["distance"] = tag(e.distance, computed<T>());
    cross.push_back(c);
  }
  j["cross"] = cross;
  if (!cert.h_choice.empty()) {
    Json con;
    con["c"] = tag(cert.c, computed<T>());
    con["r_set"] = tag(cert.r_set, "exact");
    con["epsilon_gamma"] = tag(cert.epsilon_gamma, computed<T>());
    con["h"] = tag(cert.h_choice, "exact");
    Json gc = Json::array();
    for (const auto& g : cert.g_choice) gc.push_back(g ? Json(*g) : Json(nullptr));
    con["g"] = tag(gc, "exact");
    j["construction"] = con;
  }
  j["warnings"] = cert.warnings;
  Json v;
  v["passed"] = tag(check.passed, computed<T>());
  v["gap"] = tag(check.gap, computed<T>());
  v["min_proximal_distance"] = tag(check.min_proximal_distance, computed<T>());
  v["min_cross_distance"] = tag(check.min_cross_distance, computed<T>());
  v["max_coefficient"] = tag(check.max_coefficient, computed<T>());
  v["failures"] = check.failures;
  j["verification"] = v;
  return j;
}

template <class T>
std::vector<Matrix<T>> only_matrices(const std::vector<std::pair<std::string, Matrix<T>>>& named) {
  std::vector<Matrix<T>> out;
  for (const auto& [n, g] : named) out.push_back(g);
  return out;
}

template <class T>
Outcome cmd_certify(const Inputs& in, bool build, std::optional<std::uint64_t> seed, bool gamma_ready,
                    std::size_t falsify_len) {
  const auto gens = io::generators<T>(in.get("gens"));
  Outcome o;
  o.parameters["mode"] = build ? "build" : "verify-only";
  PingPongCert<T> cert;
  if (build) {
    const auto& sdoc = in.get("sep");
    const auto spec = io::set_spec(sdoc);
    if (!spec.r) throw io::InputError("/set/r", sdoc.source + ": building needs the separation radius r");
    const int m = spec.m.value_or(static_cast<int>(gens.size()));
    const auto F = SeparatingSet<T>::make(set_elements<T>(sdoc, spec), m, *spec.r);
    const auto& gdoc = in.get("gamma");
    const auto gamma0 = io::matrix<T>(gdoc, io::single_name(gdoc, "gamma"));
    if (gamma0.rows() != F.dim() || gens.front().second.rows() != F.dim())
      throw io::InputError("/matrices", "gamma, the set and the generators differ in size");
    o.parameters["m"] = m;
    o.parameters["r"] = *spec.r;
    o.parameters["gamma_ready"] = gamma_ready;
    auto gamma = cartan_element(gamma0);
    if (!gamma_ready) {
      gamma = make_very_contracting(gamma, F, {*seed});
      o.result["gamma"] = {{"f", tag(gamma.choices.front(), "exact")},
                           {"epsilon", tag(gamma.epsilon(), computed<T>())},
                           {"matrix", tag(io::encode_matrix(gamma.g), computed<T>())}};
    }
    cert = build_pingpong_tuple(only_matrices(gens), F, gamma);
  } else {
    cert = pingpong_cert_from_generators(only_matrices(gens));
  }
  const auto check = verify_pingpong(cert);
  o.result["certificate"] = pingpong_json(cert, check);
  o.pass = check.passed;
  if (falsify_len > 0) {
    o.parameters["falsify_len"] = falsify_len;
    const auto w = freeness_falsifier(cert.generators, falsify_len);
    o.result["relation"] = w ? Json(w->to_string()) : Json(nullptr);
    if (w) o.pass = false;
  }
  return o;
}

template <class T>
Outcome cmd_falsify(const Inputs& in, std::size_t max_len) {
  const auto gens = io::generators<T>(in.get("gens"));
  Outcome o;
  o.parameters["max_len"] = max_len;
  Json names = Json::array();
  for (const auto& [n, g] : gens) names.push_back(n);
  o.parameters["generators"] = names;
  const auto w = freeness_falsifier(only_matrices(gens), max_len);
  o.result["word"] = w ? Json(w->to_string()) : Json(nullptr);
  o.result["word_ascii"] = w ? Json(w->to_ascii()) : Json(nullptr);
  o.result["length"] = tag(w ? Json(w->size()) : Json(nullptr), "exact");
  o.result["relation_found"] = tag(w.has_value(), computed<T>());
  o.pass = !w;
  return o;
}

template <class T>
Outcome cmd_dense(const Inputs& in) {
  if constexpr (!is_archimedean_v<T>) {
    throw PreconditionError("dense-check needs a real or complex field");
  } else {
    const auto gens = io::generators<T>(in.get("gens"));
    std::vector<LieMatrix<T>> logs;
    for (const auto& [n, g] : gens) logs.push_back(matrix_log<T>(g));
    const auto b = generated_subalgebra<T>(logs);
    const std::size_t n = gens.front().second.rows();
    Outcome o;
    o.result["generates_full"] = tag(b.dimension() == n * n - 1, "tolerance");
    o.result["dimension"] = tag(b.dimension(), "tolerance");
    o.result["target_dimension"] = tag(n * n - 1, "exact");
    o.result["warnings"] = b.warnings;
    o.pass = b.dimension() == n * n - 1;
    return o;
  }
}

/// Parses argv, runs one subcommand and writes the report. Returns the exit
/// code: 0 certified/true, 1 refuted/false, 2 input error, 3 precondition or
/// precision error.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Projective contraction and ping-pong certificates over R, C and Q_p", "pingpong"};
  app.set_version_flag("--version", PINGPONG_VERSION);
  app.require_subcommand(1);
  app.fallthrough();
  std::string out_file;
  unsigned threads = 0;
  app.add_option("--out", out_file, "write the report here instead of stdout");
  app.add_option("--threads", threads, "worker cap (0: all cores); does not change results");

  std::string in_file, matrix_name, gens_file, sep_file, gamma_file, set_file;
  std::uint64_t seed = 0;
  std::size_t samples = 10000, trials = 100000, max_len = 8, falsify_len = 0;
  int m = 0;
  bool build = false, verify_only = false, gamma_ready = false;

  auto* cartan = app.add_subcommand("cartan", "Cartan (KAK) decomposition of one matrix");
  cartan->add_option("--in", in_file, "input document")->required();
  cartan->add_option("--matrix", matrix_name, "matrix name in the document");

  auto* contract = app.add_subcommand("contract-analyze", "contraction certificate plus sampled verification");
  contract->add_option("--in", in_file, "input document")->required();
  contract->add_option("--matrix", matrix_name, "matrix name in the document");
  contract->add_option("--samples", samples, "sampled points")->check(CLI::PositiveNumber);
  contract->add_option("--seed", seed, "sampling seed")->required();

  auto* separate = app.add_subcommand("separate", "Monte-Carlo separation radius of a finite set");
  separate->add_option("--set", set_file, "set document")->required();
  auto* m_opt = separate->add_option("--m", m, "number of pairs (2m points and hyperplanes)")->check(CLI::PositiveNumber);
  separate->add_option("--trials", trials, "sampled configurations")->check(CLI::PositiveNumber);
  separate->add_option("--seed", seed, "sampling seed")->required();

  auto* certify = app.add_subcommand("certify-free", "build or verify a ping-pong certificate");
  certify->add_option("--gens", gens_file, "generators (verify) or a_i (build)")->required();
  certify->add_option("--sep", sep_file, "separating set document");
  certify->add_option("--gamma", gamma_file, "contracting element document");
  certify->add_flag("--build", build, "run the construction");
  certify->add_flag("--verify-only", verify_only, "certify the given generators as they are");
  certify->add_flag("--gamma-ready", gamma_ready, "gamma is already very contracting; skip the conjugation step");
  auto* seed_opt = certify->add_option("--seed", seed, "seed for probe points");
  certify->add_option("--falsify-len", falsify_len, "also search for relations up to this length");

  auto* falsify = app.add_subcommand("falsify", "search for a relation among short reduced words");
  falsify->add_option("--gens", gens_file, "generators document")->required();
  falsify->add_option("--max-len", max_len, "longest word")->check(CLI::PositiveNumber);

  auto* dense = app.add_subcommand("dense-check", "do the logarithms of the generators generate sl_n");
  dense->add_option("--gens", gens_file, "generators document")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }

  CLI::App* sub = app.get_subcommands().front();
  const std::string command = sub->get_name();
  Json report;
  report["schema"] = io::kSchema;
  report["command"] = command;
  report["tool_version"] = PINGPONG_VERSION;
  int code = kOk;
  try {
    Inputs in;
    if (sub == cartan || sub == contract) in.docs.emplace_back("in", io::load_document(in_file));
    if (sub == separate) in.docs.emplace_back("set", io::load_document(set_file));
    if (sub == certify || sub == falsify || sub == dense) in.docs.emplace_back("gens", io::load_document(gens_file));
    if (sub == certify) {
      if (build && verify_only) throw io::InputError("", "--build and --verify-only exclude each other");
      build = build || (!verify_only && !sep_file.empty());
      if (build) {
        if (sep_file.empty() || gamma_file.empty()) throw io::InputError("", "--build needs --sep and --gamma");
        if (seed_opt->count() == 0 && !gamma_ready) throw io::InputError("", "--build needs --seed");
        in.docs.emplace_back("sep", io::load_document(sep_file));
        in.docs.emplace_back("gamma", io::load_document(gamma_file));
      }
    }
    const FieldSpec field = in.field();
    report["field"] = io::encode_field(field);
    report["inputs_digest"] = in.digest();
    const bool seeded = sub == contract || sub == separate || (sub == certify && build && !gamma_ready);
    report["seed"] = seeded ? Json(seed) : Json(nullptr);

    const Outcome o = dispatch(field, [&]<class T>() {
      if (sub == cartan) return cmd_cartan<T>(in, matrix_name);
      if (sub == contract) return cmd_contract<T>(in, matrix_name, samples, seed, threads);
      if (sub == separate)
        return cmd_separate<T>(in, m_opt->count() ? std::optional<int>(m) : std::nullopt, trials, seed, threads);
      if (sub == certify)
        return cmd_certify<T>(in, build, seeded ? std::optional<std::uint64_t>(seed) : std::nullopt, gamma_ready,
                              falsify_len);
      if (sub == falsify) return cmd_falsify<T>(in, max_len);
      return cmd_dense<T>(in);
    });
    report["parameters"] = o.parameters;
    report["result"] = o.result;
    report["pass"] = o.pass;
    code = o.pass ? kOk : kRefuted;
  } catch (const io::InputError& e) {
    report["error"] = {{"kind", "input"}, {"message", e.what()}, {"path", e.path}};
    code = kInputError;
  } catch (const NoSeparator& e) {
    report["error"] = {{"kind", "selection"}, {"message", e.what()}};
    report["pass"] = false;
    code = kRefuted;
  } catch (const Error& e) {
    report["error"] = {{"kind", "precondition"}, {"message", e.what()}};
    code = kPrecondition;
  }
  if (report.contains("error")) err << "pingpong " << command << ": " << report["error"]["message"].get<std::string>() << "\n";

  const std::string text = report.dump(2) + "\n";
  if (out_file.empty()) {
    out << text;
  } else {
    std::ofstream f(out_file, std::ios::binary);
    if (!f) {
      err << "pingpong: cannot write " << out_file << "\n";
      return kInputError;
    }
    f << text;
  }
  return code;
}

}  // namespace pingpong::cli
