//
// solvo - polymer solubility prediction from SMILES
// SPDX-License-Identifier: Apache-2.0
//

#include "solvo/data_files.h"

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "solvo/hash.h"

#ifndef SOLVO_DEFAULT_DATA_DIR
#define SOLVO_DEFAULT_DATA_DIR "data"
#endif

namespace solvo {
std::filesystem::path default_data_dir() {
  if (const char *env = std::getenv("SOLVO_DATA_DIR"); env && *env)
    return env;
  return SOLVO_DEFAULT_DATA_DIR;
}

std::string read_text_file(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw std::runtime_error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::uint64_t content_checksum(const std::string &bytes) {
  return fnv1a(bytes);
}
}  // namespace solvo
