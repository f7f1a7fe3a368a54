//
// solvo - polymer solubility prediction from SMILES
// SPDX-License-Identifier: Apache-2.0
//

#ifndef SOLVO_DATAIO_H_
#define SOLVO_DATAIO_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "solvo/features.h"
#include "solvo/mlp.h"

namespace solvo {
class FileError: public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class HeaderError: public std::runtime_error {
public:
  explicit HeaderError(const std::string &column)
      : std::runtime_error("missing column '" + column + "'"), column_(column) { }

  const std::string &column() const { return column_; }

private:
  std::string column_;
};

struct RowError {
  std::size_t line;  // 1-based file line; the header is line 1
  std::string reason;
};

class RowErrors: public std::runtime_error {
public:
  RowErrors(std::vector<RowError> errors, std::size_t total_rows);

  const std::vector<RowError> &errors() const { return errors_; }

private:
  std::vector<RowError> errors_;
};

class TooFewSamples: public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Malformed binary container; offset is where reading failed.
class FormatError: public std::runtime_error {
public:
  FormatError(std::size_t offset, const std::string &reason)
      : std::runtime_error("offset " + std::to_string(offset) + ": " + reason),
        offset_(offset) { }

  std::size_t offset() const { return offset_; }

private:
  std::size_t offset_;
};

class ChecksumMismatch: public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class VersionMismatch: public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct PairRecord {
  std::string polymer_smiles;
  std::string solvent_smiles;
  std::optional<double> wt_percent;
  std::optional<double> temperature_c;
  std::optional<double> pressure_atm;
};

struct Dataset {
  std::vector<PairRecord> records;
  std::string source;
  std::size_t rows_read = 0;  // data rows before rejection
  std::vector<RowError> skipped;

  bool has_targets() const;
  std::vector<double> targets() const;  // throws if any row lacks one
};

// Splits delimited text into rows of fields. The delimiter is a tab when
// the first line contains one, otherwise a comma. Double quotes follow the
// usual CSV escaping. Blank lines are skipped but counted.
struct CsvRow {
  std::size_t line;
  std::vector<std::string> fields;
};
std::vector<CsvRow> parse_delimited(std::string_view text);

enum class TargetColumn { kRequired, kOptional };

// Rows with unparseable SMILES or a bad wt_percent are rejected. When more
// than 1% of rows fail the whole load throws RowErrors; otherwise they are
// skipped, logged and listed in Dataset::skipped.
Dataset parse_pairs(std::string_view text, std::string source,
                    TargetColumn target = TargetColumn::kRequired);
Dataset load_pairs(const std::filesystem::path &path,
                   TargetColumn target = TargetColumn::kRequired);

struct ReplicateRecord {
  std::string polymer_smiles;
  std::string solvent_smiles;
  double mass_fraction;
  double pressure_atm;
};

// Needs polymer_smiles, solvent_smiles, mass_fraction, pressure_atm.
// Same rejection rule as load_pairs.
std::vector<ReplicateRecord> parse_replicates(std::string_view text,
                                              std::vector<RowError> *skipped = nullptr);
std::vector<ReplicateRecord> load_replicates(const std::filesystem::path &path,
                                             std::vector<RowError> *skipped = nullptr);

inline constexpr double kPressureLow = 0.95;
inline constexpr double kPressureHigh = 1.05;
inline constexpr std::size_t kMinReplicates = 5;

struct ExternalSet {
  Dataset dataset;  // sorted by (polymer, solvent)
  std::size_t dropped_pressure = 0;
  std::size_t excluded_groups = 0;
  std::size_t excluded_rows = 0;
};

// Keeps rows at atmospheric pressure, groups by pair, drops groups with
// fewer than five rows and averages the rest into wt% = mean * 100.
ExternalSet prepare_external(std::span<const ReplicateRecord> rows);

struct Split {
  std::vector<std::size_t> train;
  std::vector<std::size_t> validation;
};

inline constexpr double kDefaultValFraction = 0.2;
inline constexpr std::uint64_t kDefaultSeed = 20240607;

// Seeded shuffle, then the first n - round(n * f) indices train. Throws
// std::invalid_argument unless 0 < f < 1 and TooFewSamples when a side
// would be empty.
Split split_indices(std::size_t n, double val_fraction, std::uint64_t seed);

// Feature matrix file; see docs/model_format.md.
void save_features(const std::filesystem::path &path, const FeatureMatrix &x,
                   std::span<const double> targets = {});
struct FeatureFile {
  FeatureMatrix x;
  std::vector<double> targets;  // empty when the file has none
};
FeatureFile load_features(const std::filesystem::path &path);
FeatureFile decode_features(std::span<const std::uint8_t> bytes);
bool is_feature_file(const std::filesystem::path &path);

// Model container; see docs/model_format.md. config is an opaque text
// snapshot of the training configuration.
inline constexpr std::uint32_t kModelFormatVersion = 1;

std::vector<std::uint8_t> encode_model(const MLPModel &model,
                                       std::string_view config = {});
void save_model(const std::filesystem::path &path, const MLPModel &model,
                std::string_view config = {});

struct LoadedModel {
  MLPModel model;
  std::string config;
};
// Throws FormatError, ChecksumMismatch, VersionMismatch.
LoadedModel decode_model(std::span<const std::uint8_t> bytes);
LoadedModel load_model(const std::filesystem::path &path);

std::vector<std::uint8_t> read_binary_file(const std::filesystem::path &path);
void write_binary_file(const std::filesystem::path &path,
                       std::span<const std::uint8_t> bytes);
}  // namespace solvo

#endif  // SOLVO_DATAIO_H_
