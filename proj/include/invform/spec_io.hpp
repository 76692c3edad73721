#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "invform/abstract.hpp"
#include "invform/homogeneous.hpp"

namespace invform {

using Json = nlohmann::ordered_json;

namespace io {

/// Scalar to its exact string form. Parameters print with a leading '$'.
inline std::string scalar_str(const Scalar& s, const std::vector<std::string>& params) {
  if (s.is_rational()) return s.rational().str();
  std::vector<std::string> names;
  for (const auto& p : params) names.push_back("$" + p);
  return s.str(names);
}

/// Parses "p/q", polynomial strings and "num/den" quotients of polynomials.
inline Scalar parse_scalar(std::string_view text, const std::vector<std::string>& params) {
  int depth = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (c == '(') ++depth;
    else if (c == ')') --depth;
    else if (c == '/' && depth == 0) {
      std::size_t j = i + 1;
      while (j < text.size() && text[j] == ' ') ++j;
      if (j < text.size() && !std::isdigit(static_cast<unsigned char>(text[j]))) {
        Poly num = Poly::parse(text.substr(0, i), params);
        Poly den = Poly::parse(text.substr(i + 1), params);
        if (den.is_zero()) throw std::invalid_argument("division by zero in '" + std::string(text) + "'");
        return Scalar(RatFunc(num, den));
      }
    }
  }
  Poly p = Poly::parse(text, params);
  if (p.is_constant() || p.is_zero()) return Scalar(p.is_zero() ? Rational(0) : p.constant_value());
  return Scalar(p);
}

/// JSON path context for error messages.
class Cursor {
 public:
  Cursor(const Json& j, std::string path) : j_(&j), path_(std::move(path)) {}

  [[nodiscard]] const Json& json() const { return *j_; }
  [[nodiscard]] const std::string& path() const { return path_; }

  [[noreturn]] void fail(const std::string& code, const std::string& msg) const {
    throw SpecError(code, path_ + ": " + msg);
  }

  [[nodiscard]] bool has(const std::string& key) const { return j_->is_object() && j_->contains(key); }

  [[nodiscard]] Cursor at(const std::string& key) const {
    if (!j_->is_object()) fail("E_FIELD", "expected an object");
    if (!j_->contains(key)) fail("E_FIELD", "missing field '" + key + "'");
    return Cursor(j_->at(key), path_ + "." + key);
  }
  [[nodiscard]] Cursor at(std::size_t i) const { return Cursor(j_->at(i), path_ + "[" + std::to_string(i) + "]"); }

  [[nodiscard]] std::size_t size() const {
    if (!j_->is_array()) fail("E_FIELD", "expected an array");
    return j_->size();
  }

  [[nodiscard]] std::string str() const {
    if (!j_->is_string()) fail("E_FIELD", "expected a string");
    return j_->get<std::string>();
  }

  [[nodiscard]] std::size_t index(std::size_t bound) const {
    if (!j_->is_number_integer()) fail("E_FIELD", "expected an integer index");
    auto v = j_->get<long long>();
    if (v < 0 || static_cast<std::size_t>(v) >= bound)
      fail("E_INDEX", "index " + std::to_string(v) + " out of range [0, " + std::to_string(bound) + ")");
    return static_cast<std::size_t>(v);
  }

  [[nodiscard]] long long integer() const {
    if (!j_->is_number_integer()) fail("E_FIELD", "expected an integer");
    return j_->get<long long>();
  }

  /// Exact rational: a string "p/q" or a JSON integer. Floats are rejected.
  [[nodiscard]] Rational rational() const {
    if (j_->is_number_float()) fail("E_RATIONAL", "floating-point value rejected; use an exact \"p/q\" string");
    if (j_->is_number_integer()) return Rational(j_->get<long>());
    if (!j_->is_string()) fail("E_RATIONAL", "expected an exact rational string");
    try {
      return Rational::parse(j_->get<std::string>());
    } catch (const std::exception&) {
      fail("E_RATIONAL", "malformed rational '" + j_->get<std::string>() + "'");
    }
  }

  [[nodiscard]] Scalar scalar(const std::vector<std::string>& params) const {
    if (j_->is_number_float()) fail("E_RATIONAL", "floating-point value rejected; use an exact \"p/q\" string");
    if (j_->is_number_integer()) return Scalar(Rational(j_->get<long>()));
    if (!j_->is_string()) fail("E_RATIONAL", "expected an exact scalar string");
    std::string s = j_->get<std::string>();
    try {
      return parse_scalar(s, params);
    } catch (const std::invalid_argument& e) {
      std::string m = e.what();
      if (m.find("undeclared parameter") != std::string::npos) fail("E_PARAM", m);
      fail("E_RATIONAL", "malformed scalar '" + s + "'");
    }
  }

  [[nodiscard]] RVec rvec(std::size_t n) const {
    if (size() != n) fail("E_FIELD", "expected " + std::to_string(n) + " entries, got " + std::to_string(size()));
    RVec v;
    for (std::size_t i = 0; i < n; ++i) v.push_back(at(i).rational());
    return v;
  }

  [[nodiscard]] std::vector<std::string> strings() const {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < size(); ++i) out.push_back(at(i).str());
    return out;
  }

 private:
  const Json* j_;
  std::string path_;
};

/// Parses JSON text; syntax errors report line and column.
inline Json parse_json_text(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    std::size_t byte = e.byte == 0 ? 0 : e.byte - 1;
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw SpecError("E_JSON", source + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + e.what());
  }
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SpecError("E_IO", path + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Json rvec_json(const RVec& v) {
  Json a = Json::array();
  for (const auto& x : v) a.push_back(x.str());
  return a;
}

inline Json rmatrix_json(const Matrix<Rational>& m) {
  Json a = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) a.push_back(rvec_json(m.row(i)));
  return a;
}

}  // namespace io

/// Structural parse of a spec document without validation.
inline HomogeneousSpaceSpec spec_from_json(const Json& j) {
  using io::Cursor;
  Cursor root(j, "$");
  HomogeneousSpaceSpec s;
  s.name = root.has("name") ? root.at("name").str() : "";
  if (root.has("parameters")) s.parameters = root.at("parameters").strings();
  Cursor alg = root.at("algebra");
  long long dim = alg.at("dim").integer();
  if (dim <= 0) alg.at("dim").fail("E_FIELD", "dimension must be positive");
  const auto n = static_cast<std::size_t>(dim);
  std::vector<std::string> labels;
  if (alg.has("labels")) {
    labels = alg.at("labels").strings();
    if (labels.size() != n) alg.at("labels").fail("E_FIELD", "label count differs from dim");
  }
  std::vector<BracketEntry> entries;
  if (alg.has("brackets")) {
    Cursor br = alg.at("brackets");
    for (std::size_t e = 0; e < br.size(); ++e) {
      Cursor t = br.at(e);
      if (t.size() != 3) t.fail("E_FIELD", "bracket entry must be [i, j, [[k, \"p/q\"], ...]]");
      BracketEntry be;
      be.i = t.at(0).index(n);
      be.j = t.at(1).index(n);
      Cursor val = t.at(2);
      for (std::size_t c = 0; c < val.size(); ++c) {
        Cursor term = val.at(c);
        if (term.size() != 2) term.fail("E_FIELD", "bracket term must be [k, \"p/q\"]");
        be.value.emplace_back(term.at(0).index(n), term.at(1).rational());
      }
      entries.push_back(std::move(be));
    }
  }
  s.algebra = LieAlgebra(n, labels, entries);
  Cursor q = root.at("q_form");
  if (q.json().is_string()) q.fail("E_FIELD", "keyword '" + q.str() + "' unsupported; give the Gram matrix");
  if (q.size() != n) q.fail("E_FIELD", "q_form must be a " + std::to_string(n) + "x" + std::to_string(n) + " matrix");
  s.q.gram = Matrix<Rational>(n, n);
  for (std::size_t r = 0; r < n; ++r) {
    RVec row = q.at(r).rvec(n);
    for (std::size_t c = 0; c < n; ++c) s.q.gram(r, c) = row[c];
  }
  if (root.has("h_basis")) {
    Cursor h = root.at("h_basis");
    for (std::size_t i = 0; i < h.size(); ++i) s.h_basis.push_back(h.at(i).rvec(n));
  }
  if (root.has("m_basis")) {
    Cursor m = root.at("m_basis");
    for (std::size_t i = 0; i < m.size(); ++i) s.m_basis.push_back(m.at(i).rvec(n));
  }
  if (root.has("m_labels")) s.m_labels = root.at("m_labels").strings();
  const std::size_t dim_m = s.m_basis.empty() ? n - s.h_basis.size() : s.m_basis.size();
  if (!s.m_labels.empty() && s.m_labels.size() != dim_m)
    root.at("m_labels").fail("E_FIELD", "label count differs from dim m = " + std::to_string(dim_m));
  if (root.has("blocks")) {
    Cursor b = root.at("blocks");
    for (std::size_t i = 0; i < b.size(); ++i) {
      std::vector<std::size_t> blk;
      Cursor bi = b.at(i);
      for (std::size_t k = 0; k < bi.size(); ++k) blk.push_back(bi.at(k).index(dim_m));
      s.blocks.push_back(std::move(blk));
    }
  }
  if (root.has("block_names")) {
    s.block_names = root.at("block_names").strings();
    if (s.block_names.size() != s.blocks.size())
      root.at("block_names").fail("E_FIELD", "block name count differs from block count");
  }
  if (root.has("metric")) {
    Cursor m = root.at("metric");
    if (m.has("kind")) {
      std::string k = m.at("kind").str();
      if (k == "gram") s.metric.kind = MetricKind::Gram;
      else if (k == "coform") s.metric.kind = MetricKind::Coform;
      else m.at("kind").fail("E_FIELD", "metric kind must be 'gram' or 'coform'");
    }
    if (m.has("gram")) {
      Cursor g = m.at("gram");
      if (g.size() != dim_m) g.fail("E_FIELD", "metric matrix must be square of size dim m");
      Matrix<Scalar> full(dim_m, dim_m);
      for (std::size_t r = 0; r < dim_m; ++r) {
        Cursor row = g.at(r);
        if (row.size() != dim_m) row.fail("E_FIELD", "metric matrix must be square of size dim m");
        for (std::size_t c = 0; c < dim_m; ++c) full(r, c) = row.at(c).scalar(s.parameters);
      }
      s.metric.full = full;
    } else if (m.has("weights")) {
      Cursor w = m.at("weights");
      if (!w.json().is_object()) w.fail("E_FIELD", "weights must map block names to scalars");
      std::vector<std::string> names = s.block_names;
      if (names.empty())
        for (std::size_t i = 0; i < s.blocks.size(); ++i) names.push_back(std::to_string(i));
      for (const auto& [key, value] : w.json().items()) {
        if (std::find(names.begin(), names.end(), key) == names.end())
          w.fail("E_BLOCKS", "weight given for unknown block '" + key + "'");
      }
      for (const auto& nm : names) {
        if (!w.has(nm)) w.fail("E_BLOCKS", "no weight for block '" + nm + "'");
        s.metric.block_weights.push_back(w.at(nm).scalar(s.parameters));
      }
    }
  }
  if (root.has("samples")) {
    Cursor sm = root.at("samples");
    for (std::size_t i = 0; i < sm.size(); ++i) s.samples.push_back(sm.at(i).rvec(s.parameters.size()));
  }
  return s;
}

/// Full validation: Lie algebra, Q, reductive split and metric.
inline ReductiveSplit validate_spec(const HomogeneousSpaceSpec& s) {
  auto alg = validate_algebra(s.algebra);
  if (!alg.ok()) {
    const std::string& f = alg.failures.front();
    throw SpecError(f.rfind("jacobi", 0) == 0 ? "E_JACOBI" : "E_ANTISYMMETRY", f);
  }
  auto q = validate_q(s.algebra, s.q);
  if (!q.ok()) throw SpecError("E_Q", q.failures.front());
  ReductiveSplit split = reductive_split(s);
  auto met = validate_metric(s, split, build_metric(s, split));
  if (!met.ok()) throw SpecError("E_METRIC", met.failures.front());
  return split;
}

inline HomogeneousSpaceSpec parse_spec_text(const std::string& text, const std::string& source = "<input>") {
  Json j = io::parse_json_text(text, source);
  HomogeneousSpaceSpec s = spec_from_json(j);
  validate_spec(s);
  return s;
}

inline HomogeneousSpaceSpec parse_spec(const std::string& path) { return parse_spec_text(io::read_file(path), path); }

inline Json spec_to_json(const HomogeneousSpaceSpec& s) {
  Json j;
  j["name"] = s.name;
  const std::size_t n = s.algebra.dim();
  Json alg;
  alg["dim"] = n;
  alg["labels"] = s.algebra.labels();
  Json br = Json::array();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = i + 1; k < n; ++k) {
      const RVec& v = s.algebra.bracket(i, k);
      if (is_zero_vec(v)) continue;
      Json terms = Json::array();
      for (std::size_t c = 0; c < n; ++c)
        if (!v[c].is_zero()) terms.push_back(Json::array({c, v[c].str()}));
      br.push_back(Json::array({i, k, terms}));
    }
  alg["brackets"] = br;
  j["algebra"] = alg;
  j["q_form"] = io::rmatrix_json(s.q.gram);
  Json h = Json::array();
  for (const auto& v : s.h_basis) h.push_back(io::rvec_json(v));
  j["h_basis"] = h;
  if (!s.m_basis.empty()) {
    Json m = Json::array();
    for (const auto& v : s.m_basis) m.push_back(io::rvec_json(v));
    j["m_basis"] = m;
  }
  if (!s.m_labels.empty()) j["m_labels"] = s.m_labels;
  j["blocks"] = s.blocks;
  if (!s.block_names.empty()) j["block_names"] = s.block_names;
  j["parameters"] = s.parameters;
  Json met;
  met["kind"] = metric_kind_name(s.metric.kind);
  if (s.metric.full) {
    Json g = Json::array();
    for (std::size_t r = 0; r < s.metric.full->rows(); ++r) {
      Json row = Json::array();
      for (std::size_t c = 0; c < s.metric.full->cols(); ++c)
        row.push_back(io::scalar_str((*s.metric.full)(r, c), s.parameters));
      g.push_back(row);
    }
    met["gram"] = g;
  } else if (!s.metric.block_weights.empty()) {
    Json w;
    for (std::size_t b = 0; b < s.metric.block_weights.size(); ++b) {
      std::string key = b < s.block_names.size() ? s.block_names[b] : std::to_string(b);
      w[key] = io::scalar_str(s.metric.block_weights[b], s.parameters);
    }
    met["weights"] = w;
  }
  j["metric"] = met;
  if (!s.samples.empty()) {
    Json sm = Json::array();
    for (const auto& p : s.samples) sm.push_back(io::rvec_json(p));
    j["samples"] = sm;
  }
  return j;
}

/// Fixes parameter values. Unset parameters remain symbolic.
inline HomogeneousSpaceSpec specialize_spec(const HomogeneousSpaceSpec& s,
                                            const std::vector<std::pair<std::string, Rational>>& values) {
  std::vector<std::optional<Rational>> fixed(s.parameters.size());
  for (const auto& [name, v] : values) {
    auto it = std::find(s.parameters.begin(), s.parameters.end(), name);
    if (it == s.parameters.end()) throw SpecError("E_PARAM", "--set names undeclared parameter '" + name + "'");
    if (v.sign() <= 0) throw SpecError("E_PARAM", "parameter '" + name + "' must be positive");
    fixed[static_cast<std::size_t>(it - s.parameters.begin())] = v;
  }
  std::vector<std::string> rest;
  std::vector<std::size_t> rest_idx;
  for (std::size_t i = 0; i < s.parameters.size(); ++i)
    if (!fixed[i]) {
      rest.push_back(s.parameters[i]);
      rest_idx.push_back(i);
    }
  // Substitute, then reindex the surviving parameters by name.
  auto sub = [&](const Scalar& x) {
    if (x.is_rational()) return x;
    Poly num = x.ratfunc().num(), den = x.ratfunc().den();
    for (std::size_t i = 0; i < s.parameters.size(); ++i)
      if (fixed[i]) {
        num = num.substitute(i, *fixed[i]);
        den = den.substitute(i, *fixed[i]);
      }
    if (den.is_zero()) throw SpecError("E_PARAM", "parameter values hit a pole of the metric");
    Scalar y = Scalar(RatFunc(num, den));
    return io::parse_scalar(io::scalar_str(y, s.parameters), rest);
  };
  HomogeneousSpaceSpec out = s;
  for (auto& w : out.metric.block_weights) w = sub(w);
  if (out.metric.full)
    for (std::size_t r = 0; r < out.metric.full->rows(); ++r)
      for (std::size_t c = 0; c < out.metric.full->cols(); ++c) (*out.metric.full)(r, c) = sub((*out.metric.full)(r, c));
  out.parameters = rest;
  out.samples.clear();
  for (const auto& p : s.samples) {
    std::vector<Rational> q;
    for (auto i : rest_idx) q.push_back(p[i]);
    out.samples.push_back(q);
  }
  if (rest.empty()) out.samples.clear();
  return out;
}

// Abstract DGA files.

inline AbstractDGA dga_from_json(const Json& j) {
  using io::Cursor;
  Cursor root(j, "$");
  AbstractDGA a;
  a.name = root.has("name") ? root.at("name").str() : "";
  Cursor basis = root.at("basis");
  const std::size_t n = basis.size();
  for (std::size_t i = 0; i < n; ++i) {
    a.names.push_back(basis.at(i).at("name").str());
    a.degrees.push_back(static_cast<int>(basis.at(i).at("degree").integer()));
  }
  if (root.has("generators")) {
    Cursor g = root.at("generators");
    for (std::size_t i = 0; i < g.size(); ++i) a.generators.push_back(g.at(i).index(n));
  }
  auto combo = [&](const Cursor& c) {
    RVec v = zero_vec(n);
    for (std::size_t t = 0; t < c.size(); ++t) {
      Cursor term = c.at(t);
      if (term.size() != 2) term.fail("E_FIELD", "term must be [k, \"p/q\"]");
      v[term.at(0).index(n)] += term.at(1).rational();
    }
    return v;
  };
  if (root.has("product")) {
    Cursor p = root.at("product");
    for (std::size_t e = 0; e < p.size(); ++e) {
      Cursor t = p.at(e);
      if (t.size() != 3) t.fail("E_FIELD", "product entry must be [i, j, [[k, \"p/q\"], ...]]");
      a.product[{t.at(0).index(n), t.at(1).index(n)}] = combo(t.at(2));
    }
  }
  a.differential.assign(n, zero_vec(n));
  if (root.has("differential")) {
    Cursor d = root.at("differential");
    for (std::size_t e = 0; e < d.size(); ++e) {
      Cursor t = d.at(e);
      if (t.size() != 2) t.fail("E_FIELD", "differential entry must be [i, [[k, \"p/q\"], ...]]");
      a.differential[t.at(0).index(n)] = combo(t.at(1));
    }
  }
  if (root.has("classes")) {
    Cursor c = root.at("classes");
    a.class_degree = static_cast<int>(c.at("degree").integer());
    a.classes = c.at("names").strings();
  }
  if (root.has("relations")) {
    Cursor r = root.at("relations");
    for (std::size_t i = 0; i < r.size(); ++i) {
      Cursor e = r.at(i);
      DGARelation rel;
      std::string type = e.at("type").str();
      rel.lhs = e.at("lhs").str();
      long long p = e.at("power").integer();
      if (p <= 0) e.at("power").fail("E_FIELD", "power must be positive");
      rel.power = static_cast<unsigned>(p);
      if (type == "proportional") {
        rel.rhs = e.at("rhs").str();
        rel.factor = e.at("factor").rational();
      } else if (type != "nilpotent") {
        e.at("type").fail("E_FIELD", "relation type must be 'nilpotent' or 'proportional'");
      }
      a.relations.push_back(rel);
    }
  }
  return a;
}

inline AbstractDGA parse_dga_text(const std::string& text, const std::string& source = "<input>") {
  AbstractDGA a = dga_from_json(io::parse_json_text(text, source));
  try {
    validate_dga(a);
  } catch (const DGAError& e) {
    throw SpecError("E_DGA", std::string(e.what()) + " (axiom: " + e.axiom + ")");
  }
  return a;
}

inline Json dga_to_json(const AbstractDGA& a) {
  Json j;
  j["name"] = a.name;
  j["kind"] = "abstract_dga";
  Json basis = Json::array();
  for (std::size_t i = 0; i < a.size(); ++i) basis.push_back(Json{{"name", a.names[i]}, {"degree", a.degrees[i]}});
  j["basis"] = basis;
  j["generators"] = a.generators;
  auto combo = [](const RVec& v) {
    Json t = Json::array();
    for (std::size_t k = 0; k < v.size(); ++k)
      if (!v[k].is_zero()) t.push_back(Json::array({k, v[k].str()}));
    return t;
  };
  Json p = Json::array();
  for (const auto& [ij, v] : a.product)
    if (!is_zero_vec(v)) p.push_back(Json::array({ij.first, ij.second, combo(v)}));
  j["product"] = p;
  Json d = Json::array();
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!is_zero_vec(a.differential[i])) d.push_back(Json::array({i, combo(a.differential[i])}));
  j["differential"] = d;
  j["classes"] = Json{{"degree", a.class_degree}, {"names", a.classes}};
  Json r = Json::array();
  for (const auto& rel : a.relations) {
    Json e;
    e["type"] = rel.rhs.empty() ? "nilpotent" : "proportional";
    e["lhs"] = rel.lhs;
    if (!rel.rhs.empty()) e["rhs"] = rel.rhs;
    e["power"] = rel.power;
    if (!rel.rhs.empty()) e["factor"] = rel.factor.str();
    r.push_back(e);
  }
  j["relations"] = r;
  return j;
}

/// Whether a parsed document describes an abstract DGA rather than a space.
inline bool is_dga_document(const Json& j) { return j.is_object() && j.value("kind", "") == "abstract_dga"; }

}  // namespace invform
