//
// solvo - polymer solubility prediction from SMILES
// SPDX-License-Identifier: Apache-2.0
//

#include <set>
#include <sstream>
#include <string>
#include <thread>

#include <gtest/gtest.h>

#include "panels.h"
#include "solvo/data_files.h"
#include "solvo/fingerprints.h"
#include "solvo/molecule.h"

namespace solvo {
namespace {
constexpr std::size_t kAromaticKey = 162;
constexpr std::size_t kHalogenKey = 134;

const std::filesystem::path kKeyFile =
    std::filesystem::path(SOLVO_TEST_DATA_DIR) / "maccs_keys.txt";

class StructuralKeyTest: public ::testing::Test {
protected:
  static void SetUpTestSuite() {
    keys_ = new StructuralKeys(StructuralKeys::load(kKeyFile));
  }
  static void TearDownTestSuite() {
    delete keys_;
    keys_ = nullptr;
  }

  static StructuralKeys *keys_;
};

StructuralKeys *StructuralKeyTest::keys_ = nullptr;

TEST(MorganTest, HandEnumeratedPopcounts) {
  EXPECT_EQ(morgan_fingerprint(parse_smiles("C")).popcount(), 1);
  EXPECT_EQ(morgan_fingerprint(parse_smiles("CC")).popcount(), 2);
}

TEST(MorganTest, RenderingInvariant) {
  EXPECT_EQ(morgan_fingerprint(parse_smiles("OCC")),
            morgan_fingerprint(parse_smiles("CCO")));
  for (const auto &entry: testing::kRenderingPanel) {
    const BitVector first = morgan_fingerprint(parse_smiles(entry.smiles[0]));
    for (auto smi: entry.smiles)
      EXPECT_EQ(morgan_fingerprint(parse_smiles(smi)), first) << smi;
  }
}

TEST(MorganTest, FoldingAndBounds) {
  for (const auto &entry: testing::kRenderingPanel) {
    const Molecule mol = parse_smiles(entry.smiles[0]);
    const auto envs = morgan_environments(mol);
    std::set<std::uint64_t> ids;
    std::set<std::size_t> folded;
    for (const auto &env: envs) {
      ids.insert(env.id);
      folded.insert(static_cast<std::size_t>(env.id % kMorganBits));
      EXPECT_LE(env.radius, kMorganRadius);
    }
    const BitVector fp = morgan_fingerprint(mol);
    const auto bits = fp.set_bits();
    EXPECT_EQ(std::set<std::size_t>(bits.begin(), bits.end()), folded)
        << entry.name;
    EXPECT_LE(fp.popcount(), ids.size());
    EXPECT_LE(ids.size(), mol.num_atoms() * (kMorganRadius + 1));
  }
}

TEST(MorganTest, ThreadIndependent) {
  std::vector<BitVector> serial;
  for (const auto &entry: testing::kRenderingPanel)
    serial.push_back(morgan_fingerprint(parse_smiles(entry.smiles[0])));
  std::vector<BitVector> parallel(serial.size());
  {
    std::vector<std::jthread> pool;
    for (std::size_t i = 0; i < serial.size(); ++i) {
      pool.emplace_back([&, i] {
        parallel[i] = morgan_fingerprint(
            parse_smiles(testing::kRenderingPanel[i].smiles[0]));
      });
    }
  }
  EXPECT_EQ(parallel, serial);
}

TEST(BitVectorTest, SetAndCount) {
  BitVector v(130);
  v.set(0);
  v.set(64);
  v.set(129);
  EXPECT_EQ(v.popcount(), 3);
  EXPECT_EQ(v.set_bits(), (std::vector<std::size_t> { 0, 64, 129 }));
  EXPECT_TRUE(v.test(129));
  EXPECT_FALSE(v.test(128));
}

TEST_F(StructuralKeyTest, ShippedFile) {
  EXPECT_EQ(keys_->keys().size(), kNumStructuralKeys);
}

TEST_F(StructuralKeyTest, Benzene) {
  const BitVector fp = keys_->compute(parse_smiles("c1ccccc1"));
  EXPECT_EQ(fp.size(), kNumStructuralKeys);
  EXPECT_TRUE(fp.test(kAromaticKey));
  EXPECT_FALSE(fp.test(kHalogenKey));
}

TEST_F(StructuralKeyTest, Methane) {
  EXPECT_LE(keys_->compute(parse_smiles("C")).popcount(), 3);
}

TEST_F(StructuralKeyTest, ReservedBitUnset) {
  for (const auto &entry: testing::kKeyPanel)
    EXPECT_FALSE(keys_->compute(parse_smiles(entry.smiles)).test(0));
  for (const auto &entry: testing::kRenderingPanel)
    EXPECT_FALSE(keys_->compute(parse_smiles(entry.smiles[0])).test(0));
}

TEST_F(StructuralKeyTest, ReferencePanel) {
  for (const auto &entry: testing::kKeyPanel) {
    const BitVector fp = keys_->compute(parse_smiles(entry.smiles));
    EXPECT_EQ(fp.set_bits(), entry.bits) << entry.smiles;
  }
}

TEST_F(StructuralKeyTest, RenderingInvariant) {
  for (const auto &entry: testing::kRenderingPanel) {
    const BitVector first = keys_->compute(parse_smiles(entry.smiles[0]));
    for (auto smi: entry.smiles)
      EXPECT_EQ(keys_->compute(parse_smiles(smi)), first) << smi;
  }
}

std::string drop_line_for_index(const std::string &text, int index) {
  std::istringstream in(text);
  std::string out, line;
  const std::string prefix = std::to_string(index) + "\t";
  while (std::getline(in, line)) {
    if (line.rfind(prefix, 0) != 0)
      out += line + "\n";
  }
  return out;
}

TEST(KeyFileTest, MissingEntry) {
  const std::string text = read_text_file(kKeyFile);
  EXPECT_EQ(parse_key_file(text).size(), kNumStructuralKeys);
  EXPECT_THROW(parse_key_file(drop_line_for_index(text, 57)), KeyFileError);
}

TEST(KeyFileTest, DuplicateIndex) {
  std::string text = read_text_file(kKeyFile);
  text = drop_line_for_index(text, 57) + "56\t1\tC\tduplicate\n";
  EXPECT_THROW(parse_key_file(text), KeyFileError);
}

TEST(KeyFileTest, BadPattern) {
  std::string text = read_text_file(kKeyFile);
  text = drop_line_for_index(text, 57) + "57\t1\t[C\tbroken\n";
  EXPECT_THROW(parse_key_file(text), KeyFileError);
}
}  // namespace
}  // namespace solvo
