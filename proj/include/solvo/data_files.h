//
// solvo - polymer solubility prediction from SMILES
// SPDX-License-Identifier: Apache-2.0
//

#ifndef SOLVO_DATA_FILES_H_
#define SOLVO_DATA_FILES_H_

#include <cstdint>
#include <filesystem>
#include <string>

namespace solvo {
// $SOLVO_DATA_DIR when set, otherwise the data/ directory of the source
// tree this library was built from.
std::filesystem::path default_data_dir();

// Whole file as bytes; throws std::runtime_error naming the path.
std::string read_text_file(const std::filesystem::path &path);

// FNV-1a digest of a table file's bytes, logged when tables are loaded.
std::uint64_t content_checksum(const std::string &bytes);
}  // namespace solvo

#endif  // SOLVO_DATA_FILES_H_
