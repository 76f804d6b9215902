// Writes the bundled synthetic panels and their metadata into a directory.

#include "hdlp/io.hpp"
#include "hdlp/synthetic.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>

namespace {

void save(const std::filesystem::path& dir, const std::string& stem, const hdlp::Dataset& d) {
  std::ofstream csv(dir / (stem + ".csv"), std::ios::binary);
  hdlp::write_dataset_csv(csv, d);
  std::ofstream meta(dir / (stem + "_meta.csv"), std::ios::binary);
  hdlp::write_metadata_csv(meta, d);
  if (!csv || !meta) throw hdlp::IoError("cannot write " + stem + " files in " + dir.string());
  std::cout << stem << ": " << d.rows() << " x " << d.cols() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: make_panels OUTPUT_DIR\n";
    return 2;
  }
  try {
    const std::filesystem::path dir(argv[1]);
    std::filesystem::create_directories(dir);
    save(dir, "toy", hdlp::toy_panel());
    save(dir, "macro", hdlp::synthetic_macro_panel());
    save(dir, "fiscal", hdlp::synthetic_fiscal_panel());
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 4;
  }
  return 0;
}
