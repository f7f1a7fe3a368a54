//
// solvo - polymer solubility prediction from SMILES
// SPDX-License-Identifier: Apache-2.0
//

#include "solvo/dataio.h"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <set>

#include <spdlog/spdlog.h>

#include "solvo/data_files.h"
#include "solvo/hash.h"
#include "solvo/molecule.h"

namespace solvo {
namespace {
std::string trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\r'))
    s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\r'))
    s.remove_suffix(1);
  return std::string(s);
}

std::optional<double> parse_number(std::string_view s) {
  double v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc {} || ptr != s.data() + s.size())
    return std::nullopt;
  return v;
}

// Column positions by header name.
class Header {
public:
  explicit Header(const CsvRow &row) {
    for (std::size_t i = 0; i < row.fields.size(); ++i)
      index_.emplace(row.fields[i], i);
  }

  std::size_t require(const std::string &name) const {
    auto it = index_.find(name);
    if (it == index_.end())
      throw HeaderError(name);
    return it->second;
  }

  std::optional<std::size_t> find(const std::string &name) const {
    auto it = index_.find(name);
    if (it == index_.end())
      return std::nullopt;
    return it->second;
  }

private:
  std::map<std::string, std::size_t> index_;
};

// Validates SMILES once per distinct string.
class SmilesCheck {
public:
  std::optional<std::string> error(const std::string &smiles) {
    if (smiles.empty())
      return "empty SMILES";
    if (good_.contains(smiles))
      return std::nullopt;
    try {
      parse_smiles(smiles);
    } catch (const SmilesError &e) {
      return std::string("bad SMILES '") + smiles + "': " + e.what();
    }
    good_.insert(smiles);
    return std::nullopt;
  }

private:
  std::set<std::string> good_;
};

// Applies the skip-or-fail rule to collected row errors.
void settle(std::vector<RowError> &errors, std::size_t total,
            const std::string &source) {
  if (errors.empty())
    return;
  if (static_cast<double>(errors.size()) > 0.01 * static_cast<double>(total))
    throw RowErrors(errors, total);
  for (const RowError &e: errors)
    spdlog::warn("{} line {}: {} (row skipped)", source, e.line, e.reason);
}

const std::string &field(const CsvRow &row, std::size_t i) {
  static const std::string empty;
  return i < row.fields.size() ? row.fields[i] : empty;
}

// Little-endian primitives for the binary containers.
class Writer {
public:
  void u8(std::uint8_t v) { bytes_.push_back(v); }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i)
      bytes_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i)
      bytes_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  void f64s(const double *v, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i)
      f64(v[i]);
  }
  void raw(std::string_view s) {
    bytes_.insert(bytes_.end(), s.begin(), s.end());
  }
  void patch_u64(std::size_t offset, std::uint64_t v) {
    for (int i = 0; i < 8; ++i)
      bytes_[offset + i] = static_cast<std::uint8_t>(v >> (8 * i));
  }
  std::size_t size() const { return bytes_.size(); }

  // Patches the total length at length_offset and appends the checksum.
  std::vector<std::uint8_t> finish(std::size_t length_offset) {
    patch_u64(length_offset, bytes_.size() + 8);
    Fnv1a h;
    h.add_bytes(bytes_);
    u64(h.digest());
    return std::move(bytes_);
  }

private:
  std::vector<std::uint8_t> bytes_;
};

class Reader {
public:
  explicit Reader(std::span<const std::uint8_t> bytes): bytes_(bytes) { }

  std::size_t offset() const { return pos_; }
  std::size_t remaining() const { return bytes_.size() - pos_; }

  void need(std::size_t n, const char *what) const {
    if (remaining() < n)
      throw FormatError(pos_, std::string("truncated while reading ") + what);
  }
  std::uint8_t u8(const char *what) {
    need(1, what);
    return bytes_[pos_++];
  }
  std::uint32_t u32(const char *what) {
    need(4, what);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i)
      v |= std::uint32_t { bytes_[pos_ + i] } << (8 * i);
    pos_ += 4;
    return v;
  }
  std::uint64_t u64(const char *what) {
    need(8, what);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i)
      v |= std::uint64_t { bytes_[pos_ + i] } << (8 * i);
    pos_ += 8;
    return v;
  }
  double f64(const char *what) { return std::bit_cast<double>(u64(what)); }
  void f64s(double *out, std::size_t n, const char *what) {
    if (n > remaining() / 8)
      throw FormatError(pos_, std::string("truncated while reading ") + what);
    for (std::size_t i = 0; i < n; ++i)
      out[i] = f64(what);
  }
  std::string text(std::size_t n, const char *what) {
    need(n, what);
    std::string s(reinterpret_cast<const char *>(bytes_.data() + pos_), n);
    pos_ += n;
    return s;
  }

private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

// Shared preamble: magic, format version, declared length, checksum.
void check_container(std::span<const std::uint8_t> bytes,
                     std::string_view magic, std::uint32_t version,
                     Reader &r) {
  if (bytes.size() < magic.size()
      || !std::equal(magic.begin(), magic.end(), bytes.begin()))
    throw FormatError(0, "bad magic, expected " + std::string(magic));
  r.text(magic.size(), "magic");
  const std::uint32_t found = r.u32("format version");
  if (found != version)
    throw VersionMismatch("container format version " + std::to_string(found)
                          + ", this build reads version "
                          + std::to_string(version));
  const std::size_t length_at = r.offset();
  const std::uint64_t length = r.u64("declared length");
  if (length != bytes.size())
    throw FormatError(length_at, "declared length " + std::to_string(length)
                                     + " but file has "
                                     + std::to_string(bytes.size())
                                     + " bytes");
  if (bytes.size() < r.offset() + 8)
    throw FormatError(r.offset(), "no room for checksum");
  Fnv1a h;
  h.add_bytes(bytes.first(bytes.size() - 8));
  Reader tail(bytes.last(8));
  if (h.digest() != tail.u64("checksum"))
    throw ChecksumMismatch("container checksum does not match its contents");
}

constexpr std::string_view kFeatureMagic = "SOLVOFEA";
constexpr std::string_view kModelMagic = "SOLVOMDL";
constexpr std::uint32_t kFeatureFormatVersion = 1;
constexpr std::uint8_t kHasStandardizer = 1;
constexpr std::uint8_t kHasScaler = 2;
}  // namespace

RowErrors::RowErrors(std::vector<RowError> errors, std::size_t total_rows)
    : std::runtime_error([&] {
        std::string msg = std::to_string(errors.size()) + " of "
                        + std::to_string(total_rows) + " rows rejected";
        for (std::size_t i = 0; i < errors.size() && i < 10; ++i)
          msg += "\n  line " + std::to_string(errors[i].line) + ": "
               + errors[i].reason;
        if (errors.size() > 10)
          msg += "\n  ...";
        return msg;
      }()),
      errors_(std::move(errors)) { }

bool Dataset::has_targets() const {
  return std::all_of(records.begin(), records.end(),
                     [](const PairRecord &r) { return r.wt_percent.has_value(); });
}

std::vector<double> Dataset::targets() const {
  std::vector<double> y;
  y.reserve(records.size());
  for (const PairRecord &r: records) {
    if (!r.wt_percent)
      throw std::logic_error("dataset row has no wt_percent");
    y.push_back(*r.wt_percent);
  }
  return y;
}

std::vector<CsvRow> parse_delimited(std::string_view text) {
  const std::size_t first_nl = text.find('\n');
  const char delim =
      text.substr(0, first_nl).find('\t') != std::string_view::npos ? '\t' : ',';
  std::vector<CsvRow> rows;
  CsvRow row { 1, {} };
  std::string cell;
  bool quoted = false;
  bool any = false;
  std::size_t line = 1;
  auto end_row = [&] {
    row.fields.push_back(trim(cell));
    cell.clear();
    const bool blank = row.fields.size() == 1 && row.fields[0].empty() && !any;
    if (!blank)
      rows.push_back(std::move(row));
    row = CsvRow { line + 1, {} };
    any = false;
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          cell += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        if (c == '\n')
          ++line;
        cell += c;
      }
    } else if (c == '"') {
      quoted = true;
      any = true;
    } else if (c == delim) {
      row.fields.push_back(trim(cell));
      cell.clear();
      any = true;
    } else if (c == '\n') {
      end_row();
      ++line;
    } else {
      cell += c;
    }
  }
  if (!cell.empty() || !row.fields.empty() || any)
    end_row();
  return rows;
}

Dataset parse_pairs(std::string_view text, std::string source,
                    TargetColumn target) {
  std::vector<CsvRow> rows = parse_delimited(text);
  if (rows.empty())
    throw HeaderError("polymer_smiles");
  const Header header(rows.front());
  const std::size_t c_poly = header.require("polymer_smiles");
  const std::size_t c_solv = header.require("solvent_smiles");
  std::optional<std::size_t> c_wt = header.find("wt_percent");
  if (!c_wt && target == TargetColumn::kRequired)
    throw HeaderError("wt_percent");
  const auto c_temp = header.find("temperature_c");
  const auto c_pres = header.find("pressure_atm");

  Dataset ds;
  ds.source = std::move(source);
  SmilesCheck smiles;
  std::vector<RowError> errors;
  for (std::size_t k = 1; k < rows.size(); ++k) {
    const CsvRow &row = rows[k];
    ++ds.rows_read;
    PairRecord rec;
    rec.polymer_smiles = field(row, c_poly);
    rec.solvent_smiles = field(row, c_solv);
    std::optional<std::string> err = smiles.error(rec.polymer_smiles);
    if (!err)
      err = smiles.error(rec.solvent_smiles);
    if (!err && c_wt) {
      const std::string &s = field(row, *c_wt);
      if (!s.empty() || target == TargetColumn::kRequired) {
        rec.wt_percent = parse_number(s);
        if (!rec.wt_percent || !std::isfinite(*rec.wt_percent)
            || *rec.wt_percent < 0)
          err = "bad wt_percent '" + s + "'";
      }
    }
    auto optional_number = [&](std::optional<std::size_t> col,
                               const char *name) -> std::optional<double> {
      if (!col || field(row, *col).empty())
        return std::nullopt;
      auto v = parse_number(field(row, *col));
      if (!v || !std::isfinite(*v)) {
        if (!err)
          err = std::string("bad ") + name + " '" + field(row, *col) + "'";
        return std::nullopt;
      }
      return v;
    };
    rec.temperature_c = optional_number(c_temp, "temperature_c");
    rec.pressure_atm = optional_number(c_pres, "pressure_atm");
    if (err) {
      errors.push_back({ row.line, *err });
      continue;
    }
    ds.records.push_back(std::move(rec));
  }
  settle(errors, ds.rows_read, ds.source);
  ds.skipped = std::move(errors);
  return ds;
}

Dataset load_pairs(const std::filesystem::path &path, TargetColumn target) {
  std::string text;
  try {
    text = read_text_file(path);
  } catch (const std::exception &e) {
    throw FileError(e.what());
  }
  return parse_pairs(text, path.string(), target);
}

std::vector<ReplicateRecord> parse_replicates(std::string_view text,
                                              std::vector<RowError> *skipped) {
  std::vector<CsvRow> rows = parse_delimited(text);
  if (rows.empty())
    throw HeaderError("polymer_smiles");
  const Header header(rows.front());
  const std::size_t c_poly = header.require("polymer_smiles");
  const std::size_t c_solv = header.require("solvent_smiles");
  const std::size_t c_frac = header.require("mass_fraction");
  const std::size_t c_pres = header.require("pressure_atm");

  std::vector<ReplicateRecord> out;
  SmilesCheck smiles;
  std::vector<RowError> errors;
  for (std::size_t k = 1; k < rows.size(); ++k) {
    const CsvRow &row = rows[k];
    ReplicateRecord rec { field(row, c_poly), field(row, c_solv), 0, 0 };
    std::optional<std::string> err = smiles.error(rec.polymer_smiles);
    if (!err)
      err = smiles.error(rec.solvent_smiles);
    const auto frac = parse_number(field(row, c_frac));
    const auto pres = parse_number(field(row, c_pres));
    if (!err && (!frac || !std::isfinite(*frac) || *frac < 0 || *frac > 1))
      err = "bad mass_fraction '" + field(row, c_frac) + "'";
    if (!err && (!pres || !std::isfinite(*pres) || *pres < 0))
      err = "bad pressure_atm '" + field(row, c_pres) + "'";
    if (err) {
      errors.push_back({ row.line, *err });
      continue;
    }
    rec.mass_fraction = *frac;
    rec.pressure_atm = *pres;
    out.push_back(std::move(rec));
  }
  settle(errors, rows.size() - 1, "replicates");
  if (skipped)
    *skipped = std::move(errors);
  return out;
}

std::vector<ReplicateRecord> load_replicates(const std::filesystem::path &path,
                                             std::vector<RowError> *skipped) {
  std::string text;
  try {
    text = read_text_file(path);
  } catch (const std::exception &e) {
    throw FileError(e.what());
  }
  return parse_replicates(text, skipped);
}

ExternalSet prepare_external(std::span<const ReplicateRecord> rows) {
  ExternalSet out;
  std::map<std::pair<std::string, std::string>, std::vector<double>> groups;
  for (const ReplicateRecord &r: rows) {
    if (r.pressure_atm < kPressureLow || r.pressure_atm > kPressureHigh) {
      ++out.dropped_pressure;
      continue;
    }
    groups[{ r.polymer_smiles, r.solvent_smiles }].push_back(r.mass_fraction);
  }
  out.dataset.source = "external";
  out.dataset.rows_read = rows.size();
  for (auto &[key, fractions]: groups) {
    if (fractions.size() < kMinReplicates) {
      ++out.excluded_groups;
      out.excluded_rows += fractions.size();
      continue;
    }
    // Summing in sorted order keeps the mean independent of row order.
    std::sort(fractions.begin(), fractions.end());
    const double mean = std::accumulate(fractions.begin(), fractions.end(), 0.0)
                      / static_cast<double>(fractions.size());
    PairRecord rec;
    rec.polymer_smiles = key.first;
    rec.solvent_smiles = key.second;
    rec.wt_percent = mean * 100.0;
    out.dataset.records.push_back(std::move(rec));
  }
  return out;
}

Split split_indices(std::size_t n, double val_fraction, std::uint64_t seed) {
  if (!(val_fraction > 0 && val_fraction < 1))
    throw std::invalid_argument("validation fraction must be in (0, 1)");
  const auto n_val = static_cast<std::size_t>(
      std::llround(static_cast<double>(n) * val_fraction));
  if (n_val == 0 || n_val >= n)
    throw TooFewSamples("cannot split " + std::to_string(n)
                        + " samples with validation fraction "
                        + std::to_string(val_fraction));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  rng.shuffle(std::span<std::size_t>(order));
  Split s;
  s.train.assign(order.begin(), order.end() - n_val);
  s.validation.assign(order.end() - n_val, order.end());
  return s;
}

std::vector<std::uint8_t> read_binary_file(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw FileError("cannot open " + path.string());
  return { std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>() };
}

void write_binary_file(const std::filesystem::path &path,
                       std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw FileError("cannot write " + path.string());
  out.write(reinterpret_cast<const char *>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out)
    throw FileError("write failed for " + path.string());
}

void save_features(const std::filesystem::path &path, const FeatureMatrix &x,
                   std::span<const double> targets) {
  if (!targets.empty() && targets.size() != x.rows)
    throw std::invalid_argument("target count does not match feature rows");
  Writer w;
  w.raw(kFeatureMagic);
  w.u32(kFeatureFormatVersion);
  const std::size_t length_at = w.size();
  w.u64(0);
  w.u32(x.layout_version);
  w.u64(x.rows);
  w.u64(x.cols);
  w.u8(targets.empty() ? 0 : 1);
  w.f64s(x.values.data(), x.values.size());
  w.f64s(targets.data(), targets.size());
  write_binary_file(path, w.finish(length_at));
}

FeatureFile decode_features(std::span<const std::uint8_t> bytes) {
  Reader r(bytes);
  check_container(bytes, kFeatureMagic, kFeatureFormatVersion, r);
  FeatureFile f;
  f.x.layout_version = r.u32("layout version");
  f.x.rows = r.u64("row count");
  f.x.cols = r.u64("column count");
  const std::uint8_t has_targets = r.u8("target flag");
  if (has_targets > 1)
    throw FormatError(r.offset() - 1, "bad target flag");
  const std::size_t body = r.remaining() - 8;
  const std::size_t need_values = f.x.cols == 0 ? 0 : f.x.rows;
  if (f.x.cols != 0 && f.x.rows > body / 8 / f.x.cols)
    throw FormatError(r.offset(), "matrix larger than file");
  const std::size_t expect =
      8 * (need_values * f.x.cols + (has_targets ? f.x.rows : 0));
  if (expect != body)
    throw FormatError(r.offset(), "body has " + std::to_string(body)
                                      + " bytes, header implies "
                                      + std::to_string(expect));
  f.x.values.resize(f.x.rows * f.x.cols);
  r.f64s(f.x.values.data(), f.x.values.size(), "feature values");
  if (has_targets) {
    f.targets.resize(f.x.rows);
    r.f64s(f.targets.data(), f.targets.size(), "targets");
  }
  return f;
}

FeatureFile load_features(const std::filesystem::path &path) {
  return decode_features(read_binary_file(path));
}

bool is_feature_file(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  char magic[8] = {};
  return in.read(magic, 8)
      && std::string_view(magic, 8) == kFeatureMagic;
}

// Reads the private parts of an MLPModel.
class ModelReader {
public:
  static LoadedModel decode(std::span<const std::uint8_t> bytes);
};

LoadedModel ModelReader::decode(std::span<const std::uint8_t> bytes) {
  Reader r(bytes);
  check_container(bytes, kModelMagic, kModelFormatVersion, r);
  LoadedModel out;
  MLPModel &m = out.model;
  m.layout_version = r.u32("layout version");
  const std::size_t head_at = r.offset();
  const std::uint8_t head = r.u8("head");
  const std::uint8_t order = r.u8("layer order");
  const std::uint8_t bn = r.u8("batch-norm flag");
  const std::uint8_t flags = r.u8("flags");
  if (head > 1 || order > 1 || bn > 1 || flags > (kHasStandardizer | kHasScaler))
    throw FormatError(head_at, "bad model options");
  m.options_.head = static_cast<Head>(head);
  m.options_.order = static_cast<LayerOrder>(order);
  m.options_.batch_norm = bn != 0;
  m.options_.bn_eps = r.f64("batch-norm epsilon");
  const std::size_t dims_at = r.offset();
  const std::uint32_t n_dims = r.u32("dimension count");
  if (n_dims < 2 || n_dims > 64)
    throw FormatError(dims_at, "bad dimension count");
  for (std::uint32_t i = 0; i < n_dims; ++i) {
    const std::uint32_t d = r.u32("dimension");
    if (d == 0 || d > (1U << 24))
      throw FormatError(r.offset() - 4, "bad layer width");
    m.dims_.push_back(static_cast<int>(d));
  }
  if (m.dims_.back() != 1)
    throw FormatError(dims_at, "output width must be 1");

  const std::size_t n_layers = m.dims_.size() - 1;
  for (std::size_t l = 0; l < n_layers; ++l) {
    const int in = m.dims_[l];
    const int outw = m.dims_[l + 1];
    DenseLayer layer;
    std::vector<double> w(static_cast<std::size_t>(in) * outw);
    r.f64s(w.data(), w.size(), "weights");
    layer.weight.resize(outw, in);
    for (int i = 0; i < outw; ++i) {
      for (int j = 0; j < in; ++j)
        layer.weight(i, j) = w[static_cast<std::size_t>(i) * in + j];
    }
    auto vec = [&](Eigen::VectorXd &v, const char *what) {
      v.resize(outw);
      r.f64s(v.data(), outw, what);
    };
    vec(layer.bias, "bias");
    if (m.options_.batch_norm && l + 1 < n_layers) {
      vec(layer.gamma, "gamma");
      vec(layer.beta, "beta");
      vec(layer.running_mean, "running mean");
      vec(layer.running_var, "running variance");
    }
    m.layers_.push_back(std::move(layer));
  }

  if (flags & kHasStandardizer) {
    const std::size_t at = r.offset();
    const double mean = r.f64("standardizer mean");
    const double sd = r.f64("standardizer std");
    try {
      m.standardizer = TargetStandardizer(mean, sd);
    } catch (const DegenerateTarget &) {
      throw FormatError(at, "bad standardizer");
    }
  }
  if (flags & kHasScaler) {
    std::vector<double> mean(m.dims_.front()), scale(m.dims_.front());
    r.f64s(mean.data(), mean.size(), "scaler mean");
    r.f64s(scale.data(), scale.size(), "scaler scale");
    m.input_scaler = FeatureScaler(std::move(mean), std::move(scale));
  }
  const std::uint32_t config_len = r.u32("config length");
  out.config = r.text(config_len, "config");
  if (r.remaining() != 8)
    throw FormatError(r.offset(), "trailing bytes before checksum");
  return out;
}

std::vector<std::uint8_t> encode_model(const MLPModel &model,
                                       std::string_view config) {
  Writer w;
  w.raw(kModelMagic);
  w.u32(kModelFormatVersion);
  const std::size_t length_at = w.size();
  w.u64(0);
  w.u32(model.layout_version);
  const ModelOptions &opt = model.options();
  w.u8(static_cast<std::uint8_t>(opt.head));
  w.u8(static_cast<std::uint8_t>(opt.order));
  w.u8(opt.batch_norm ? 1 : 0);
  w.u8((model.standardizer ? kHasStandardizer : 0)
       | (model.input_scaler ? kHasScaler : 0));
  w.f64(opt.bn_eps);
  w.u32(static_cast<std::uint32_t>(model.dims().size()));
  for (int d: model.dims())
    w.u32(static_cast<std::uint32_t>(d));
  for (const DenseLayer &layer: model.layers()) {
    for (Eigen::Index i = 0; i < layer.weight.rows(); ++i) {
      for (Eigen::Index j = 0; j < layer.weight.cols(); ++j)
        w.f64(layer.weight(i, j));
    }
    w.f64s(layer.bias.data(), layer.bias.size());
    w.f64s(layer.gamma.data(), layer.gamma.size());
    w.f64s(layer.beta.data(), layer.beta.size());
    w.f64s(layer.running_mean.data(), layer.running_mean.size());
    w.f64s(layer.running_var.data(), layer.running_var.size());
  }
  if (model.standardizer) {
    w.f64(model.standardizer->mean());
    w.f64(model.standardizer->std());
  }
  if (model.input_scaler) {
    if (model.input_scaler->mean().size() != model.input_width())
      throw ShapeMismatch("input scaler width does not match the model");
    w.f64s(model.input_scaler->mean().data(), model.input_scaler->mean().size());
    w.f64s(model.input_scaler->scale().data(), model.input_scaler->scale().size());
  }
  w.u32(static_cast<std::uint32_t>(config.size()));
  w.raw(config);
  return w.finish(length_at);
}

void save_model(const std::filesystem::path &path, const MLPModel &model,
                std::string_view config) {
  write_binary_file(path, encode_model(model, config));
}

LoadedModel decode_model(std::span<const std::uint8_t> bytes) {
  return ModelReader::decode(bytes);
}

LoadedModel load_model(const std::filesystem::path &path) {
  return decode_model(read_binary_file(path));
}
}  // namespace solvo
