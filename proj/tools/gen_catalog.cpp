// Regenerates the bundled catalog from the matrix-representation builders.
// Usage: gen_catalog [output_dir]   (default: the repository catalog/)
#include <filesystem>
#include <fstream>
#include <iostream>

#include "invform/catalog_files.hpp"

int main(int argc, char** argv) {
  namespace fs = std::filesystem;
  fs::path dir = argc > 1 ? fs::path(argv[1]) : fs::path(INVFORM_CATALOG_DIR);
  fs::create_directories(dir);
  auto entries = invform::catalog::catalog_entries();
  for (const auto& e : entries) {
    std::ofstream f(dir / e.file, std::ios::binary);
    f << invform::catalog::catalog_text(e.document);
    std::cout << e.file << "\n";
  }
  std::ofstream m(dir / "manifest.json", std::ios::binary);
  m << invform::catalog::catalog_manifest(entries).dump(2) << "\n";
  std::cout << "manifest.json\n";
  return 0;
}
