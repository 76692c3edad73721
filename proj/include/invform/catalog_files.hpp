#pragma once

#include <string>
#include <vector>

#include "invform/abstract.hpp"
#include "invform/catalog.hpp"
#include "invform/sha256.hpp"
#include "invform/spec_io.hpp"

namespace invform::catalog {

/// One bundled data file and the generator output it must equal.
struct CatalogEntry {
  std::string name;
  std::string file;
  std::string description;
  Json document;
};

/// Aloff-Wallach space of distinct weights with Gram weights t_i^2 on V_i.
inline HomogeneousSpaceSpec aloff_wallach_parametric(long k1, long k2, long k3) {
  auto s = aloff_wallach(k1, k2, k3);
  s.name += "_param";
  s.parameters = {"t0", "t1", "t2", "t3"};
  s.metric.block_weights.clear();
  for (std::size_t i = 0; i < 4; ++i) s.metric.block_weights.push_back(Scalar(Poly::var(i, 4).pow(2)));
  auto r = [](long p, long q = 1) { return Rational(p, q); };
  s.samples = {{r(1), r(1), r(1), r(1)},
               {r(1), r(2), r(3), r(4)},
               {r(1, 2), r(1), r(2), r(3)},
               {r(3), r(1), r(2), r(1, 3)},
               {r(2), r(3), r(1), r(1, 2)}};
  return s;
}

inline std::vector<CatalogEntry> catalog_entries() {
  std::vector<CatalogEntry> out;
  auto add = [&](std::string name, std::string file, std::string desc, Json doc) {
    out.push_back({std::move(name), std::move(file), std::move(desc), std::move(doc)});
  };
  {
    auto s = aloff_wallach(-2, 1, 1);
    s.name = "aloff_wallach";
    add("aloff_wallach", "aloff_wallach.json", "SU(3)/S^1 with k = (-2, 1, 1), eps = H3", spec_to_json(s));
  }
  add("aloff_wallach_1_-1_0", "aloff_wallach_1_-1_0.json", "SU(3)/S^1 with k = (1, -1, 0)",
      spec_to_json(aloff_wallach(1, -1, 0)));
  add("aloff_wallach_1_2_-3", "aloff_wallach_1_2_-3.json", "SU(3)/S^1 with k = (1, 2, -3)",
      spec_to_json(aloff_wallach(1, 2, -3)));
  add("aloff_wallach_1_2_-3_param", "aloff_wallach_1_2_-3_param.json",
      "SU(3)/S^1 with k = (1, 2, -3), diagonal Gram weights t_i^2", spec_to_json(aloff_wallach_parametric(1, 2, -3)));
  add("w6", "w6.json", "SU(3)/T^2", spec_to_json(w6()));
  add("s5", "s5.json", "SU(3)/SU(2) = S^5", spec_to_json(s5()));
  add("cp3", "cp3.json", "Sp(2)/Sp(1)U(1) = CP^3 with fiber parameter t", spec_to_json(cp(1)));
  add("berger13", "berger13.json", "SU(5)/Sp(2)U(1)", spec_to_json(berger13()));
  for (int k : {1, 2, 4})
    add("flag_" + std::to_string(6 * k), "flag_" + std::to_string(6 * k) + ".json",
        "abstract model of the invariant algebra of W^" + std::to_string(6 * k), dga_to_json(flag_dga(k)));
  return out;
}

/// Exact bytes written for a catalog document.
inline std::string catalog_text(const Json& doc) { return doc.dump(2) + "\n"; }

inline Json catalog_manifest(const std::vector<CatalogEntry>& entries) {
  Json m;
  Json files = Json::array();
  for (const auto& e : entries) {
    Json f;
    f["name"] = e.name;
    f["file"] = e.file;
    f["description"] = e.description;
    f["sha256"] = sha256_hex(catalog_text(e.document));
    files.push_back(f);
  }
  m["files"] = files;
  return m;
}

}  // namespace invform::catalog
