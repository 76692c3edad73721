#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "invform/catalog.hpp"
#include "invform/catalog_files.hpp"
#include "invform/cli.hpp"
#include "invform/report.hpp"

using namespace invform;

namespace {

std::string catalog_path(const std::string& file) { return cli::catalog_dir() + "/" + file; }

Json catalog_json(const std::string& file) {
  return io::parse_json_text(io::read_file(catalog_path(file)), file);
}

std::string error_code(const Json& doc) {
  try {
    validate_spec(spec_from_json(doc));
  } catch (const SpecError& e) {
    return e.code();
  }
  return "";
}

std::string error_code_text(const std::string& text) {
  try {
    validate_spec(parse_spec_text(text, "<test>"));
  } catch (const SpecError& e) {
    return e.code();
  }
  return "";
}

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  int c = cli::run_command(args, out, err);
  return {c, out.str(), err.str()};
}

Json abelian_doc() {
  return Json::parse(R"({
    "name": "torus3",
    "algebra": {"dim": 3, "labels": ["x", "y", "z"]},
    "q_form": [["1","0","0"],["0","1","0"],["0","0","1"]],
    "blocks": [[0, 1, 2]],
    "block_names": ["T"],
    "metric": {"kind": "gram", "weights": {"T": "1"}}
  })");
}

std::filesystem::path temp_file(const std::string& name, const std::string& text) {
  auto p = std::filesystem::temp_directory_path() / ("invform_test_" + name);
  std::ofstream(p, std::ios::binary) << text;
  return p;
}

}  // namespace

TEST(SpecIO, CatalogDimensions) {
  auto aw = parse_spec(catalog_path("aloff_wallach.json"));
  auto split = validate_spec(aw);
  EXPECT_EQ(aw.algebra.dim(), 8u);
  EXPECT_EQ(split.dim_m(), 7u);
  EXPECT_EQ(aw.blocks.size(), 4u);

  auto b = parse_spec(catalog_path("berger13.json"));
  auto bs = validate_spec(b);
  EXPECT_EQ(b.algebra.dim(), 24u);
  EXPECT_EQ(bs.dim_m(), 13u);
  ASSERT_EQ(b.blocks.size(), 2u);
  EXPECT_EQ(b.blocks[0].size(), 5u);
  EXPECT_EQ(b.blocks[1].size(), 8u);
}

TEST(SpecIO, RoundTripAllSpecs) {
  for (const auto& e : catalog::catalog_entries()) {
    if (is_dga_document(e.document)) {
      auto a = dga_from_json(e.document);
      EXPECT_EQ(dga_to_json(a), e.document) << e.name;
      continue;
    }
    auto s = spec_from_json(e.document);
    Json again = spec_to_json(s);
    EXPECT_EQ(again, e.document) << e.name;
    EXPECT_EQ(spec_to_json(spec_from_json(again)), again) << e.name;
    EXPECT_NO_THROW(validate_spec(s)) << e.name;
  }
}

TEST(SpecIO, AbelianWithoutBrackets) {
  auto s = spec_from_json(abelian_doc());
  auto split = validate_spec(s);
  EXPECT_EQ(split.dim_m(), 3u);
  InvariantComplex cx(s, split);
  EXPECT_EQ(cx.betti_vector(), (std::vector<std::size_t>{1, 3, 3, 1}));
}

TEST(SpecIO, ErrorCodes) {
  Json d = abelian_doc();
  d["q_form"][0][0] = 1.5;
  EXPECT_EQ(error_code(d), "E_RATIONAL");

  d = abelian_doc();
  d["q_form"][0][0] = "1/x";
  EXPECT_EQ(error_code(d), "E_RATIONAL");

  d = abelian_doc();
  d["algebra"]["brackets"] = Json::parse(R"([[0, 7, [[2, "1"]]]])");
  EXPECT_EQ(error_code(d), "E_INDEX");

  d = abelian_doc();
  d.erase("q_form");
  EXPECT_EQ(error_code(d), "E_FIELD");

  d = abelian_doc();
  d["metric"]["weights"] = Json::parse(R"({"T": "$s"})");
  EXPECT_EQ(error_code(d), "E_PARAM");

  d = abelian_doc();
  d["metric"]["weights"] = Json::parse(R"({"U": "1"})");
  EXPECT_EQ(error_code(d), "E_BLOCKS");

  d = abelian_doc();
  d["q_form"][0][0] = "-1";
  EXPECT_EQ(error_code(d), "E_Q");

  EXPECT_EQ(error_code_text("{\"name\": 1,,}"), "E_JSON");
}

TEST(SpecIO, JsonErrorHasPosition) {
  try {
    parse_spec_text("{\n  \"name\": ,\n}", "bad.json");
    FAIL();
  } catch (const SpecError& e) {
    EXPECT_EQ(e.code(), "E_JSON");
    EXPECT_NE(std::string(e.what()).find("bad.json:2:"), std::string::npos) << e.what();
  }
}

TEST(SpecIO, BrokenJacobi) {
  Json d = catalog_json("aloff_wallach.json");
  auto& br = d["algebra"]["brackets"];
  ASSERT_FALSE(br.empty());
  // Double [E1, E2] and its antisymmetric partner, if present.
  std::size_t i0 = br[0][0], j0 = br[0][1];
  for (auto& e : br) {
    bool same = (e[0] == i0 && e[1] == j0) || (e[0] == j0 && e[1] == i0);
    if (!same) continue;
    for (auto& t : e[2]) t[1] = (Rational::parse(t[1].get<std::string>()) * Rational(2)).str();
  }
  EXPECT_EQ(error_code(d), "E_JACOBI");
}

TEST(SpecIO, BlockNotInvariant) {
  Json d = catalog_json("s5.json");
  d["blocks"] = Json::parse("[[0, 1, 2], [3, 4]]");
  EXPECT_EQ(error_code(d), "E_BLOCK_NOT_INVARIANT");
}

TEST(SpecIO, Specialize) {
  auto s = parse_spec(catalog_path("cp3.json"));
  ASSERT_EQ(s.parameters.size(), 1u);
  auto f = specialize_spec(s, {{"t", Rational(1, 2)}});
  EXPECT_TRUE(f.parameters.empty());
  auto split = validate_spec(f);
  EXPECT_TRUE(build_metric(f, split).is_rational());
  EXPECT_THROW(specialize_spec(s, {{"u", Rational(1)}}), SpecError);
}

TEST(Catalog, HashesMatchManifest) {
  auto entries = catalog::catalog_entries();
  Json manifest = catalog_json("manifest.json");
  EXPECT_EQ(manifest, catalog::catalog_manifest(entries));
  ASSERT_EQ(manifest["files"].size(), entries.size());
  for (const auto& f : manifest["files"]) {
    std::string bytes = io::read_file(catalog_path(f["file"].get<std::string>()));
    EXPECT_EQ(sha256_hex(bytes), f["sha256"].get<std::string>()) << f["file"];
  }
}

TEST(Catalog, RegeneratedBytesEqualFiles) {
  for (const auto& e : catalog::catalog_entries())
    EXPECT_EQ(catalog::catalog_text(e.document), io::read_file(catalog_path(e.file))) << e.file;
}

TEST(Catalog, Sha256KnownVector) {
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  EXPECT_EQ(sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST(Report, FormalityRoundTrip) {
  auto s = parse_spec(catalog_path("cp3.json"));
  auto f = specialize_spec(s, {{"t", Rational(1, 2)}});
  auto split = validate_spec(f);
  InvariantComplex cx(f, split);
  auto g = build_metric(f, split);
  report::Context c;
  c.labels = f.m_labels;
  auto rep = formality_check(cx, g);
  Json j = report::formality_json(rep, c);
  EXPECT_EQ(report::formality_json(report::formality_from(j, c), c), j);

  auto h = harmonic_space(cx, 2, g);
  Json hj = report::harmonic_json(h, c);
  EXPECT_EQ(report::harmonic_json(report::harmonic_from(hj, c), c), hj);
}

TEST(Report, ObstructionRoundTrip) {
  auto s = parse_spec(catalog_path("cp3.json"));
  auto split = validate_spec(s);
  InvariantComplex cx(s, split);
  auto g = build_metric(s, split);
  report::Context c{s.m_labels, s.parameters};
  auto rep = parametric_obstruction(cx, g, 2, 2);
  Json j = report::obstruction_json(rep, c);
  EXPECT_EQ(report::obstruction_json(report::obstruction_from(j, c), c), j);

  auto h = harmonic_space(cx, 2, g);
  Json hj = report::harmonic_json(h, c);
  EXPECT_EQ(report::harmonic_json(report::harmonic_from(hj, c), c), hj);
}

TEST(Report, NilpotencyRoundTrip) {
  auto s = catalog::aloff_wallach(1, 2, -3);
  auto split = reductive_split(s);
  InvariantComplex cx(s, split);
  report::Context c{s.m_labels, {}};
  auto sys = nilpotency_analysis(cx, 2, 2, "closed");
  Json j = report::system_json(sys, c);
  auto back = report::system_from(j, c);
  EXPECT_EQ(report::system_json(back, c), j);
  auto tr = triviality(sys);
  Json tj = report::triviality_json(tr, sys);
  EXPECT_EQ(report::triviality_json(report::triviality_from(tj), sys), tj);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run({"validate", "aloff_wallach.json"}).code, 0);
  EXPECT_EQ(run({"formality", "w6.json"}).code, 0);
  EXPECT_EQ(run({"formality", "w6.json", "--strict"}).code, 1);
  EXPECT_EQ(run({"formality", "cp3.json", "--set", "t=1", "--strict"}).code, 0);
  EXPECT_EQ(run({}).code, 2);
  auto bad = run({"betti", "aloff_wallach.json", "--bogus"});
  EXPECT_EQ(bad.code, 2);
  EXPECT_NE(bad.err.find("Usage"), std::string::npos);
  EXPECT_EQ(run({"validate", "no_such_file.json"}).code, 2);
  EXPECT_EQ(run({"formality", "cp3.json", "--set", "u=1"}).code, 2);
}

TEST(Cli, ErrorReport) {
  Json d = catalog_json("aloff_wallach.json");
  d["algebra"]["brackets"][0][2][0][1] = "5";
  auto p = temp_file("jacobi.json", d.dump());
  auto r = run({"validate", p.string()});
  std::filesystem::remove(p);
  EXPECT_EQ(r.code, 2);
  Json j = Json::parse(r.out);
  std::string code = j["error"]["code"];
  EXPECT_TRUE(code == "E_JACOBI" || code == "E_ANTISYMMETRY") << code;
  EXPECT_FALSE(j["error"]["message"].get<std::string>().empty());

  auto q = temp_file("float.json", R"({"algebra": {"dim": 1}, "q_form": [[1.0]]})");
  auto r2 = run({"validate", q.string()});
  std::filesystem::remove(q);
  EXPECT_EQ(r2.code, 2);
  EXPECT_EQ(Json::parse(r2.out)["error"]["code"], "E_RATIONAL");
}

TEST(Cli, Reports) {
  auto v = Json::parse(run({"validate", "berger13.json"}).out);
  EXPECT_EQ(v["command"], "validate");
  EXPECT_EQ(v["dim_g"], 24);
  EXPECT_EQ(v["dim_m"], 13);

  auto b = Json::parse(run({"betti", "berger13.json"}).out);
  EXPECT_EQ(b["betti"], Json::parse("[1,0,1,0,1,0,0,0,0,1,0,1,0,1]"));

  auto h = Json::parse(run({"harmonic", "cp3.json", "--set", "t=1", "--degree", "4"}).out);
  ASSERT_EQ(h["harmonic"].size(), 1u);
  EXPECT_EQ(h["harmonic"][0]["dim"], 1);
  EXPECT_EQ(h["harmonic"][0]["basis"][0]["text"], "e2^e3^Y1^Y1_1 - e2^e3^Y1_2^Y1_3 + Y1^Y1_1^Y1_2^Y1_3");

  auto f = Json::parse(run({"formality", "flag_6.json"}).out);
  EXPECT_EQ(f["command"], "formality");
  auto a = Json::parse(run({"abstract", "flag_6.json"}).out);
  EXPECT_EQ(a["formality"]["verdict"], "not_formal");

  auto c = Json::parse(run({"catalog"}).out);
  EXPECT_EQ(c["files"].size(), catalog::catalog_entries().size());
  for (const auto& e : c["files"]) EXPECT_TRUE(e["hash_ok"].get<bool>()) << e["name"];
}

TEST(Cli, Deterministic) {
  std::vector<std::vector<std::string>> cmds = {{"betti", "aloff_wallach.json"},
                                                {"harmonic", "cp3.json", "--parametric", "--degree", "2"},
                                                {"formality", "cp3.json", "--parametric"},
                                                {"nilpotency", "aloff_wallach_1_2_-3.json", "--degree", "2"}};
  for (const auto& c : cmds) {
    auto a = run(c), b = run(c);
    EXPECT_EQ(a.code, 0) << c[0] << a.err;
    EXPECT_EQ(a.out, b.out) << c[0];
  }
}

TEST(Cli, OutputFile) {
  auto p = std::filesystem::temp_directory_path() / "invform_test_out.json";
  auto r = run({"betti", "s5.json", "--output", p.string()});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(io::read_file(p.string()), run({"betti", "s5.json"}).out);
  std::filesystem::remove(p);
}

TEST(Cli, Binary) {
  const char* bin = std::getenv("INVFORM_CLI");
  if (bin == nullptr) GTEST_SKIP() << "INVFORM_CLI not set";
  auto status = [&](const std::string& args) {
    int s = std::system((std::string(bin) + " " + args + " >/dev/null 2>&1").c_str());
    return WIFEXITED(s) ? WEXITSTATUS(s) : -1;
  };
  EXPECT_EQ(status("betti s5.json"), 0);
  EXPECT_EQ(status("formality w6.json --strict"), 1);
  EXPECT_EQ(status("validate"), 2);
  EXPECT_EQ(status(""), 2);

  std::string cmd = std::string(bin) + " betti aloff_wallach.json 2>/dev/null";
  std::FILE* pipe = popen(cmd.c_str(), "r");
  ASSERT_NE(pipe, nullptr);
  std::string text;
  char buf[4096];
  while (std::size_t n = std::fread(buf, 1, sizeof buf, pipe)) text.append(buf, n);
  pclose(pipe);
  EXPECT_EQ(text, run({"betti", "aloff_wallach.json"}).out);
}
