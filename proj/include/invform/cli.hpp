#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "invform/abstract.hpp"
#include "invform/catalog_files.hpp"
#include "invform/formality.hpp"
#include "invform/invariants.hpp"
#include "invform/report.hpp"
#include "invform/spec_io.hpp"

#ifndef INVFORM_CATALOG_DIR
#define INVFORM_CATALOG_DIR "catalog"
#endif

namespace invform::cli {

struct Options {
  std::string command;
  std::string file;
  std::vector<std::string> set;
  std::string output;
  std::string degree;
  std::string basis = "closed";
  unsigned power = 2;
  std::optional<std::size_t> max_degree;
  bool parametric = false;
  bool strict = false;
};

/// A command result: the report document and whether it is a negative verdict.
struct Outcome {
  Json report;
  bool negative = false;
  std::string summary;
};

inline std::string catalog_dir() {
  if (const char* env = std::getenv("INVFORM_CATALOG_DIR")) return env;
  return INVFORM_CATALOG_DIR;
}

/// A path as given, or else the bundled catalog file of that name.
inline std::string resolve(const std::string& file) {
  namespace fs = std::filesystem;
  if (fs::exists(file)) return file;
  fs::path alt = fs::path(catalog_dir()) / file;
  if (fs::exists(alt)) return alt.string();
  alt = fs::path(catalog_dir()) / (file + ".json");
  if (fs::exists(alt)) return alt.string();
  throw SpecError("E_IO", file + ": no such file or catalog entry");
}

inline std::vector<std::pair<std::string, Rational>> parse_sets(const std::vector<std::string>& sets) {
  std::vector<std::pair<std::string, Rational>> out;
  for (const auto& s : sets) {
    auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0) throw SpecError("E_PARAM", "--set expects name=p/q, got '" + s + "'");
    try {
      out.emplace_back(s.substr(0, eq), Rational::parse(s.substr(eq + 1)));
    } catch (const std::exception&) {
      throw SpecError("E_RATIONAL", "--set " + s + ": malformed rational");
    }
  }
  return out;
}

inline std::vector<std::size_t> parse_degrees(const std::string& s) {
  std::vector<std::size_t> out;
  std::size_t pos = 0;
  while (pos <= s.size() && !s.empty()) {
    std::size_t comma = s.find(',', pos);
    std::string part = s.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    if (part.empty() || !std::all_of(part.begin(), part.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
      throw SpecError("E_FIELD", "--degree expects K or K1,K2, got '" + s + "'");
    out.push_back(std::stoul(part));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

/// Loaded and validated space with its complex.
struct Loaded {
  HomogeneousSpaceSpec spec;
  ReductiveSplit split;
  std::unique_ptr<InvariantComplex> cx;
  MetricOnM metric;
  report::Context ctx;
};

inline std::unique_ptr<Loaded> load(const Options& o) {
  auto l = std::make_unique<Loaded>();
  std::string path = resolve(o.file);
  Json j = io::parse_json_text(io::read_file(path), path);
  if (is_dga_document(j)) throw SpecError("E_FIELD", path + ": abstract DGA file; use the 'abstract' command");
  l->spec = spec_from_json(j);
  validate_spec(l->spec);
  if (!o.set.empty()) l->spec = specialize_spec(l->spec, parse_sets(o.set));
  l->split = validate_spec(l->spec);
  l->cx = std::make_unique<InvariantComplex>(l->spec, l->split);
  l->metric = build_metric(l->spec, l->split);
  l->ctx.params = l->spec.parameters;
  for (std::size_t i = 0; i < l->split.dim_m(); ++i)
    l->ctx.labels.push_back(i < l->spec.m_labels.size() ? l->spec.m_labels[i] : "e" + std::to_string(i));
  return l;
}

inline Json header(const Options& o, const Loaded* l) {
  Json j;
  j["command"] = o.command;
  j["input"] = o.file;
  if (l) {
    j["name"] = l->spec.name;
    j["parameters"] = l->spec.parameters;
  }
  Json s = Json::object();
  for (const auto& [k, v] : parse_sets(o.set)) s[k] = v.str();
  j["set"] = s;
  return j;
}

inline std::string join(const std::vector<std::size_t>& v, const char* sep = " ") {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? sep : "") + std::to_string(v[i]);
  return s;
}

inline Outcome cmd_validate(const Options& o) {
  std::string path = resolve(o.file);
  Json j = io::parse_json_text(io::read_file(path), path);
  Outcome out;
  if (is_dga_document(j)) {
    auto a = parse_dga_text(io::read_file(path), path);
    out.report = header(o, nullptr);
    out.report["name"] = a.name;
    out.report["kind"] = "abstract_dga";
    out.report["valid"] = true;
    out.report["basis_size"] = a.size();
    out.summary = a.name + ": valid abstract DGA";
    return out;
  }
  auto l = load(o);
  out.report = header(o, l.get());
  out.report["kind"] = "homogeneous_space";
  out.report["valid"] = true;
  out.report["dim_g"] = l->spec.algebra.dim();
  out.report["dim_h"] = l->spec.h_basis.size();
  out.report["dim_m"] = l->split.dim_m();
  std::vector<std::size_t> dims;
  for (const auto& b : l->spec.blocks) dims.push_back(b.size());
  out.report["block_dims"] = dims;
  out.report["metric_kind"] = metric_kind_name(l->spec.metric.kind);
  out.summary = l->spec.name + ": valid, dim g = " + std::to_string(l->spec.algebra.dim()) +
                ", dim m = " + std::to_string(l->split.dim_m()) + ", blocks " + join(dims, "+");
  return out;
}

inline Outcome cmd_betti(const Options& o) {
  auto l = load(o);
  Outcome out;
  out.report = header(o, l.get());
  std::vector<std::size_t> inv, cl, ex;
  for (std::size_t k = 0; k <= l->cx->dim_m(); ++k) {
    inv.push_back(l->cx->invariant(k).dim());
    cl.push_back(l->cx->closed(k).dim());
    ex.push_back(l->cx->exact(k).dim());
  }
  auto b = l->cx->betti_vector();
  out.report["betti"] = b;
  out.report["invariant_dims"] = inv;
  out.report["closed_dims"] = cl;
  out.report["exact_dims"] = ex;
  out.summary = l->spec.name + ": betti " + join(b);
  return out;
}

inline Outcome cmd_invariant(const Options& o) {
  auto l = load(o);
  Outcome out;
  out.report = header(o, l.get());
  std::vector<std::size_t> degs;
  if (o.degree.empty()) {
    for (std::size_t k = 0; k <= l->cx->dim_m(); ++k) degs.push_back(k);
  } else {
    degs = parse_degrees(o.degree);
  }
  Json arr = Json::array();
  for (auto k : degs) {
    Json e;
    e["degree"] = k;
    e["invariant"] = report::space_json(l->cx->invariant(k), l->ctx);
    e["closed"] = report::space_json(l->cx->closed(k), l->ctx);
    e["exact"] = report::space_json(l->cx->exact(k), l->ctx);
    Json d = Json::array();
    for (const auto& f : l->cx->d_images(k)) d.push_back(report::form_json(f, l->ctx));
    e["d_of_invariant_basis"] = d;
    arr.push_back(e);
  }
  out.report["degrees"] = arr;
  out.summary = l->spec.name + ": invariant forms in " + std::to_string(degs.size()) + " degree(s)";
  return out;
}

inline void require_numeric(const Loaded& l, const Options& o, const char* what) {
  if (!l.metric.is_rational() && !o.parametric)
    throw SpecError("E_PARAM", std::string(what) + ": metric has free parameters; give --set for each or --parametric");
}

inline Outcome cmd_harmonic(const Options& o) {
  auto l = load(o);
  require_numeric(*l, o, "harmonic");
  if (o.degree.empty()) throw SpecError("E_FIELD", "harmonic: --degree is required");
  Outcome out;
  out.report = header(o, l.get());
  Json arr = Json::array();
  std::string dims;
  for (auto k : parse_degrees(o.degree)) {
    auto h = harmonic_space(*l->cx, k, l->metric);
    Json e = report::harmonic_json(h, l->ctx);
    e["closed_basis"] = report::space_json(l->cx->closed(k), l->ctx);
    e["exact_basis"] = report::space_json(l->cx->exact(k), l->ctx);
    arr.push_back(e);
    dims += (dims.empty() ? "" : ", ") + std::string("degree ") + std::to_string(k) + ": dim " + std::to_string(h.space.dim());
  }
  out.report["harmonic"] = arr;
  out.summary = l->spec.name + ": harmonic " + dims;
  return out;
}

inline Outcome cmd_formality(const Options& o) {
  auto l = load(o);
  Outcome out;
  out.report = header(o, l.get());
  if (!l->metric.is_rational()) {
    if (!o.parametric)
      throw SpecError("E_PARAM", "formality: metric has free parameters; give --set for each or --parametric");
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    if (!o.degree.empty()) {
      auto d = parse_degrees(o.degree);
      pairs.emplace_back(d.at(0), d.size() > 1 ? d[1] : d[0]);
    } else {
      auto b = l->cx->betti_vector();
      const std::size_t n = l->cx->dim_m();
      for (std::size_t k1 = 1; k1 < n; ++k1)
        for (std::size_t k2 = k1; k1 + k2 <= n; ++k2)
          if (b[k1] && b[k2] && (!o.max_degree || k2 <= *o.max_degree)) pairs.emplace_back(k1, k2);
    }
    Json arr = Json::array();
    std::size_t nobs = 0;
    for (auto [a, b] : pairs) {
      auto r = parametric_obstruction(*l->cx, l->metric, a, b);
      nobs += r.obstructions.size();
      arr.push_back(report::obstruction_json(r, l->ctx));
    }
    out.report["mode"] = "parametric";
    out.report["obstructions"] = arr;
    out.report["note"] = "parametric runs report obstruction polynomials only; no verdict is issued";
    out.summary = l->spec.name + ": " + std::to_string(nobs) + " obstruction polynomial(s) over " +
                  std::to_string(pairs.size()) + " degree pair(s)";
    return out;
  }
  auto r = formality_check(*l->cx, l->metric, o.max_degree);
  out.report["mode"] = "numeric";
  out.report["formality"] = report::formality_json(r, l->ctx);
  out.negative = r.verdict != Verdict::Formal;
  out.summary = l->spec.name + ": " + verdict_name(r.verdict) + " (" + r.reason + ")";
  return out;
}

inline Outcome cmd_nilpotency(const Options& o) {
  auto l = load(o);
  Outcome out;
  out.report = header(o, l.get());
  std::size_t k = o.degree.empty() ? 2 : parse_degrees(o.degree).at(0);
  auto sys = nilpotency_analysis(*l->cx, k, o.power, o.basis);
  auto t = triviality(sys);
  out.report["system"] = report::system_json(sys, l->ctx);
  out.report["triviality"] = report::triviality_json(t, sys);
  out.negative = t.kind != TrivialityReport::Kind::Trivial;
  out.summary = l->spec.name + ": degree " + std::to_string(k) + " power " + std::to_string(o.power) + ", " +
                std::to_string(sys.generators.size()) + " generator(s), " + triviality_name(t.kind);
  return out;
}

inline Outcome cmd_abstract(const Options& o) {
  std::string path = resolve(o.file);
  auto a = parse_dga_text(io::read_file(path), path);
  auto r = abstract_check(a);
  Outcome out;
  out.report = header(o, nullptr);
  out.report["name"] = a.name;
  out.report["formality"] = report::formality_json(r, {});
  out.negative = r.verdict != Verdict::Formal;
  out.summary = a.name + ": " + verdict_name(r.verdict) + " (" + r.reason + ")";
  return out;
}

inline Outcome cmd_catalog(const Options& o) {
  namespace fs = std::filesystem;
  Outcome out;
  out.report = header(o, nullptr);
  std::string mpath = (fs::path(catalog_dir()) / "manifest.json").string();
  Json manifest = io::parse_json_text(io::read_file(mpath), mpath);
  Json arr = Json::array();
  std::size_t bad = 0;
  for (const auto& f : manifest.at("files")) {
    if (!o.file.empty() && f.at("name").get<std::string>() != o.file && f.at("file").get<std::string>() != o.file)
      continue;
    Json e = f;
    std::string p = (fs::path(catalog_dir()) / f.at("file").get<std::string>()).string();
    bool ok = fs::exists(p) && sha256_hex(io::read_file(p)) == f.at("sha256").get<std::string>();
    e["hash_ok"] = ok;
    bad += !ok;
    arr.push_back(e);
  }
  if (!o.file.empty() && arr.empty()) throw SpecError("E_IO", o.file + ": not in the catalog");
  out.report["files"] = arr;
  out.negative = bad > 0;
  out.summary = std::to_string(arr.size()) + " catalog file(s), " + std::to_string(bad) + " hash mismatch(es)";
  return out;
}

/// Runs one command line (without the program name). Returns the exit code.
inline int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Invariant forms, cohomology and geometric formality of homogeneous spaces", "invform"};
  app.require_subcommand(1);
  Options o;
  struct Sub {
    const char* name;
    const char* help;
  };
  const std::vector<Sub> subs = {{"validate", "parse and validate a spec or abstract DGA file"},
                                 {"betti", "Betti numbers of the invariant complex"},
                                 {"invariant", "invariant, closed and exact forms"},
                                 {"harmonic", "harmonic forms of the metric"},
                                 {"formality", "geometric formality verdict or parametric obstructions"},
                                 {"nilpotency", "vanishing-power analysis of closed forms"},
                                 {"abstract", "relation argument on an abstract DGA file"},
                                 {"catalog", "list bundled catalog files and check their hashes"}};
  for (const auto& s : subs) {
    auto* sc = app.add_subcommand(s.name, s.help);
    std::string cmd = s.name;
    sc->callback([&o, cmd] { o.command = cmd; });
    if (cmd == "catalog") sc->add_option("name", o.file, "catalog entry name");
    else sc->add_option("file", o.file, "spec file path or catalog entry name")->required();
    sc->add_option("--output", o.output, "write the report to this path");
    sc->add_flag("--strict", o.strict, "exit 1 on negative verdicts");
    if (cmd == "validate" || cmd == "abstract" || cmd == "catalog") continue;
    sc->add_option("--set", o.set, "fix a parameter: name=p/q")->allow_extra_args(false);
    if (cmd != "betti") sc->add_option("--degree", o.degree, "form degree K, or a degree pair K1,K2");
    if (cmd == "nilpotency") {
      sc->add_option("--power", o.power, "power p")->check(CLI::PositiveNumber);
      sc->add_option("--basis", o.basis, "coordinates on 'closed' or 'invariant' forms")
          ->check(CLI::IsMember({"closed", "invariant"}));
    }
    if (cmd == "formality") sc->add_option("--max-degree", o.max_degree, "largest factor degree tested");
    if (cmd == "harmonic" || cmd == "formality") sc->add_flag("--parametric", o.parametric, "keep parameters symbolic");
  }
  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return 2;
  }
  Outcome res;
  try {
    if (o.command == "validate") res = cmd_validate(o);
    else if (o.command == "betti") res = cmd_betti(o);
    else if (o.command == "invariant") res = cmd_invariant(o);
    else if (o.command == "harmonic") res = cmd_harmonic(o);
    else if (o.command == "formality") res = cmd_formality(o);
    else if (o.command == "nilpotency") res = cmd_nilpotency(o);
    else if (o.command == "abstract") res = cmd_abstract(o);
    else res = cmd_catalog(o);
  } catch (const SpecError& e) {
    Json j;
    j["command"] = o.command;
    j["input"] = o.file;
    j["error"] = Json{{"code", e.code()}, {"message", e.what()}};
    out << j.dump(2) << "\n";
    err << "error [" << e.code() << "]: " << e.what() << "\n";
    return 2;
  } catch (const DGAError& e) {
    Json j;
    j["command"] = o.command;
    j["input"] = o.file;
    j["error"] = Json{{"code", "E_DGA"}, {"message", std::string(e.what()) + " (axiom: " + e.axiom + ")"}};
    out << j.dump(2) << "\n";
    err << "error [E_DGA]: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    Json j;
    j["command"] = o.command;
    j["input"] = o.file;
    j["error"] = Json{{"code", "E_INPUT"}, {"message", e.what()}};
    out << j.dump(2) << "\n";
    err << "error [E_INPUT]: " << e.what() << "\n";
    return 2;
  }
  std::string text = res.report.dump(2) + "\n";
  if (!o.output.empty()) {
    std::ofstream f(o.output, std::ios::binary);
    if (!f) {
      err << "error [E_IO]: cannot write " << o.output << "\n";
      return 2;
    }
    f << text;
  } else {
    out << text;
  }
  err << res.summary << "\n";
  return (o.strict && res.negative) ? 1 : 0;
}

}  // namespace invform::cli
