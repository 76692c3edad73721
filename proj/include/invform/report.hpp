#pragma once

#include <string>
#include <vector>

#include "invform/formality.hpp"
#include "invform/invariants.hpp"
#include "invform/spec_io.hpp"

namespace invform::report {

/// Names used when printing: m labels and '$'-prefixed parameters.
struct Context {
  std::vector<std::string> labels;
  std::vector<std::string> params;
};

inline Json poly_json(const Poly& p, const Context& c) { return io::scalar_str(Scalar(p), c.params); }

inline Poly poly_from(const Json& j, const Context& c) {
  Scalar s = io::Cursor(j, "poly").scalar(c.params);
  if (s.is_rational()) return Poly(s.rational(), c.params.size());
  if (!s.ratfunc().den().is_constant()) throw SpecError("E_FIELD", "expected a polynomial");
  return s.ratfunc().num() * s.ratfunc().den().constant_value().inverse();
}

inline Json form_json(const Form& f, const Context& c) {
  Json j;
  j["dim"] = f.dim();
  j["degree"] = f.degree();
  std::vector<std::string> names;
  for (const auto& p : c.params) names.push_back("$" + p);
  j["text"] = f.str(c.labels, names);
  Json terms = Json::array();
  for (const auto& [m, s] : f.terms()) terms.push_back(Json::array({mask_indices(m), io::scalar_str(s, c.params)}));
  j["terms"] = terms;
  return j;
}

inline Form form_from(const Json& j, const Context& c) {
  io::Cursor r(j, "form");
  Form f(static_cast<std::size_t>(r.at("dim").integer()), static_cast<std::size_t>(r.at("degree").integer()));
  io::Cursor t = r.at("terms");
  for (std::size_t i = 0; i < t.size(); ++i) {
    Mask m = 0;
    for (const auto& x : t.at(i).at(0).json()) m |= bit(x.get<std::size_t>());
    f.add_term(m, t.at(i).at(1).scalar(c.params));
  }
  return f;
}

inline Json space_json(const FormSpace& s, const Context& c) {
  Json j;
  j["degree"] = s.degree;
  j["role"] = s.role;
  j["dim"] = s.dim();
  Json b = Json::array();
  for (const auto& f : s.basis) b.push_back(form_json(f, c));
  j["basis"] = b;
  Json p = Json::array();
  for (Mask m : s.pivots) p.push_back(mask_indices(m));
  j["pivots"] = p;
  return j;
}

inline FormSpace space_from(const Json& j, const Context& c) {
  FormSpace s;
  s.degree = j.at("degree").get<std::size_t>();
  s.role = j.at("role").get<std::string>();
  for (const auto& f : j.at("basis")) s.basis.push_back(form_from(f, c));
  for (const auto& p : j.at("pivots")) {
    Mask m = 0;
    for (const auto& x : p) m |= bit(x.get<std::size_t>());
    s.pivots.push_back(m);
  }
  return s;
}

inline Json polys_json(const std::vector<Poly>& ps, const Context& c) {
  Json a = Json::array();
  for (const auto& p : ps) a.push_back(poly_json(p, c));
  return a;
}

inline std::vector<Poly> polys_from(const Json& j, const Context& c) {
  std::vector<Poly> out;
  for (const auto& p : j) out.push_back(poly_from(p, c));
  return out;
}

inline Json harmonic_json(const HarmonicSpace& h, const Context& c) {
  Json j = space_json(h.space, c);
  Json co = Json::array();
  for (const auto& v : h.coords) {
    Json row = Json::array();
    for (const auto& x : v) row.push_back(io::scalar_str(x, c.params));
    co.push_back(row);
  }
  j["closed_coordinates"] = co;
  Json cond = Json::array();
  for (std::size_t r = 0; r < h.conditions.rows(); ++r) {
    Json row = Json::array();
    for (std::size_t k = 0; k < h.conditions.cols(); ++k) row.push_back(io::scalar_str(h.conditions(r, k), c.params));
    cond.push_back(row);
  }
  j["conditions"] = cond;
  j["generic_pivots"] = polys_json(h.pivots, c);
  return j;
}

inline HarmonicSpace harmonic_from(const Json& j, const Context& c) {
  HarmonicSpace h;
  h.space = space_from(j, c);
  for (const auto& row : j.at("closed_coordinates")) {
    std::vector<Scalar> v;
    for (const auto& x : row) v.push_back(io::Cursor(x, "coord").scalar(c.params));
    h.coords.push_back(v);
  }
  const auto& cond = j.at("conditions");
  std::size_t cols = cond.empty() ? 0 : cond.at(0).size();
  h.conditions = ScalarMatrix(cond.size(), cols);
  for (std::size_t r = 0; r < cond.size(); ++r)
    for (std::size_t k = 0; k < cols; ++k) h.conditions(r, k) = io::Cursor(cond.at(r).at(k), "cond").scalar(c.params);
  h.pivots = polys_from(j.at("generic_pivots"), c);
  return h;
}

inline Verdict verdict_from(const std::string& s) {
  if (s == "formal") return Verdict::Formal;
  if (s == "not_formal") return Verdict::NotFormal;
  return Verdict::Undecided;
}

inline Json formality_json(const FormalityReport& r, const Context& c) {
  Json j;
  j["verdict"] = verdict_name(r.verdict);
  j["reason"] = r.reason;
  j["betti"] = r.betti;
  Json hd = Json::array();
  for (const auto& [k, d] : r.harmonic_dims) hd.push_back(Json::array({k, d}));
  j["harmonic_dims"] = hd;
  j["checked_degrees"] = r.checked_degrees;
  j["products_checked"] = r.products_checked;
  Json w = Json::array();
  for (const auto& x : r.witnesses) {
    Json e;
    e["degrees"] = x.degrees;
    e["factors"] = x.factors;
    if (x.product.dim() > 0) {
      e["product"] = form_json(x.product, c);
      e["exact_index"] = x.exact_index;
      e["exact_form"] = form_json(x.exact_form, c);
      e["pairing"] = io::scalar_str(x.pairing, c.params);
    }
    e["note"] = x.note;
    w.push_back(e);
  }
  j["witnesses"] = w;
  j["obstructions"] = polys_json(r.obstructions, c);
  j["assumptions"] = r.assumptions;
  return j;
}

inline FormalityReport formality_from(const Json& j, const Context& c) {
  FormalityReport r;
  r.verdict = verdict_from(j.at("verdict").get<std::string>());
  r.reason = j.at("reason").get<std::string>();
  r.betti = j.at("betti").get<std::vector<std::size_t>>();
  for (const auto& p : j.at("harmonic_dims")) r.harmonic_dims.emplace_back(p.at(0).get<std::size_t>(), p.at(1).get<std::size_t>());
  r.checked_degrees = j.at("checked_degrees").get<std::vector<std::vector<std::size_t>>>();
  r.products_checked = j.at("products_checked").get<std::size_t>();
  for (const auto& e : j.at("witnesses")) {
    FormalityWitness x;
    x.degrees = e.at("degrees").get<std::vector<std::size_t>>();
    x.factors = e.at("factors").get<std::vector<std::size_t>>();
    if (e.contains("product")) {
      x.product = form_from(e.at("product"), c);
      x.exact_index = e.at("exact_index").get<std::size_t>();
      x.exact_form = form_from(e.at("exact_form"), c);
      x.pairing = io::Cursor(e.at("pairing"), "pairing").scalar(c.params);
    }
    x.note = e.at("note").get<std::string>();
    r.witnesses.push_back(std::move(x));
  }
  r.obstructions = polys_from(j.at("obstructions"), c);
  r.assumptions = j.at("assumptions").get<std::vector<std::string>>();
  return r;
}

inline Json root_json(const RootInterval& r) {
  Json j;
  j["exact"] = r.exact;
  if (r.exact) {
    j["value"] = r.lo.str();
  } else {
    j["lo"] = r.lo.str();
    j["hi"] = r.hi.str();
  }
  return j;
}

inline RootInterval root_from(const Json& j) {
  RootInterval r;
  r.exact = j.at("exact").get<bool>();
  if (r.exact) {
    r.lo = r.hi = Rational::parse(j.at("value").get<std::string>());
  } else {
    r.lo = Rational::parse(j.at("lo").get<std::string>());
    r.hi = Rational::parse(j.at("hi").get<std::string>());
  }
  return r;
}

inline Json obstruction_json(const ObstructionReport& r, const Context& c) {
  Json j;
  j["degrees"] = Json::array({r.k1, r.k2});
  j["mode"] = r.mode;
  j["parameters"] = r.parameters;
  j["obstructions"] = polys_json(r.obstructions, c);
  j["generic_pivots"] = polys_json(r.pivots, c);
  if (r.variable) j["variable"] = r.parameters.at(*r.variable);
  if (r.common) j["common_factor"] = poly_json(*r.common, c);
  Json all = Json::array(), pos = Json::array();
  for (const auto& x : r.common_roots) all.push_back(root_json(x));
  for (const auto& x : r.positive_roots) pos.push_back(root_json(x));
  j["real_roots"] = all;
  j["positive_roots"] = pos;
  return j;
}

inline ObstructionReport obstruction_from(const Json& j, const Context& c) {
  ObstructionReport r;
  r.k1 = j.at("degrees").at(0).get<std::size_t>();
  r.k2 = j.at("degrees").at(1).get<std::size_t>();
  r.mode = j.at("mode").get<std::string>();
  r.parameters = j.at("parameters").get<std::vector<std::string>>();
  r.obstructions = polys_from(j.at("obstructions"), c);
  r.pivots = polys_from(j.at("generic_pivots"), c);
  if (j.contains("variable")) {
    auto name = j.at("variable").get<std::string>();
    r.variable = static_cast<std::size_t>(std::find(r.parameters.begin(), r.parameters.end(), name) -
                                          r.parameters.begin());
  }
  if (j.contains("common_factor")) r.common = poly_from(j.at("common_factor"), c);
  for (const auto& x : j.at("real_roots")) r.common_roots.push_back(root_from(x));
  for (const auto& x : j.at("positive_roots")) r.positive_roots.push_back(root_from(x));
  return r;
}

inline Json system_json(const PolySystem& s, const Context& c) {
  Json j;
  j["form_degree"] = s.form_degree;
  j["power"] = s.degree;
  j["basis_kind"] = s.basis_kind;
  j["variables"] = s.variables;
  Json g = Json::array();
  for (const auto& p : s.generators) g.push_back(p.str(s.variables));
  j["generators"] = g;
  Json b = Json::array();
  for (const auto& f : s.basis) b.push_back(form_json(f, c));
  j["basis"] = b;
  return j;
}

inline PolySystem system_from(const Json& j, const Context& c) {
  PolySystem s;
  s.form_degree = j.at("form_degree").get<std::size_t>();
  s.degree = j.at("power").get<unsigned>();
  s.basis_kind = j.at("basis_kind").get<std::string>();
  s.variables = j.at("variables").get<std::vector<std::string>>();
  for (const auto& g : j.at("generators")) s.generators.push_back(Poly::parse(g.get<std::string>(), s.variables));
  for (const auto& f : j.at("basis")) s.basis.push_back(form_from(f, c));
  return s;
}

inline Json triviality_json(const TrivialityReport& t, const PolySystem& s) {
  Json j;
  j["status"] = triviality_name(t.kind);
  j["method"] = t.method;
  if (!t.bound.empty()) j["search_bound"] = t.bound;
  Json w = Json::array();
  for (const auto& x : t.witness) w.push_back(x.str());
  j["witness"] = w;
  Json cert = Json::array(), deriv = Json::array();
  for (std::size_t i = 0; i < t.certificates.size(); ++i) {
    Json row = Json::array();
    std::string line = s.variables[i] + "^" + std::to_string(s.degree) + " =";
    bool first = true;
    for (std::size_t g = 0; g < t.certificates[i].size(); ++g) {
      row.push_back(t.certificates[i][g].str());
      if (t.certificates[i][g].is_zero()) continue;
      line += (first ? " " : " + ") + std::string("(") + t.certificates[i][g].str() + ")*g" + std::to_string(g + 1);
      first = false;
    }
    cert.push_back(row);
    deriv.push_back(line);
  }
  j["certificates"] = cert;
  j["derivation"] = deriv;
  return j;
}

inline TrivialityReport triviality_from(const Json& j) {
  TrivialityReport t;
  auto st = j.at("status").get<std::string>();
  t.kind = st == "trivial" ? TrivialityReport::Kind::Trivial
                           : (st == "nontrivial" ? TrivialityReport::Kind::Nontrivial : TrivialityReport::Kind::Undecided);
  t.method = j.at("method").get<std::string>();
  t.bound = j.value("search_bound", "");
  for (const auto& x : j.at("witness")) t.witness.push_back(Rational::parse(x.get<std::string>()));
  for (const auto& row : j.at("certificates")) {
    std::vector<Rational> v;
    for (const auto& x : row) v.push_back(Rational::parse(x.get<std::string>()));
    t.certificates.push_back(v);
  }
  return t;
}

}  // namespace invform::report
