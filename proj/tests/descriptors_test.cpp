//
// solvo - polymer solubility prediction from SMILES
// SPDX-License-Identifier: Apache-2.0
//

#include <cmath>

#include <gtest/gtest.h>

#include "panels.h"
#include "solvo/descriptors.h"
#include "solvo/molecule.h"

namespace solvo {
namespace {
class DescriptorTest: public ::testing::Test {
protected:
  static void SetUpTestSuite() {
    calc_ = new DescriptorCalculator(
        DescriptorCalculator::load(SOLVO_TEST_DATA_DIR));
  }
  static void TearDownTestSuite() {
    delete calc_;
    calc_ = nullptr;
  }

  static DescriptorVector compute(std::string_view smiles) {
    return calc_->compute(parse_smiles(smiles));
  }

  static DescriptorCalculator *calc_;
};

DescriptorCalculator *DescriptorTest::calc_ = nullptr;

TEST_F(DescriptorTest, MolWeight) {
  EXPECT_NEAR(mol_weight(parse_smiles("O")), 18.015, 0.01);
  EXPECT_NEAR(mol_weight(parse_smiles("C")), 16.043, 0.01);
  EXPECT_NEAR(mol_weight(parse_smiles("[2H]O[2H]")), 20.03, 0.03);
}

TEST_F(DescriptorTest, MolWeightIsAdditiveOverFragments) {
  const double a = mol_weight(parse_smiles("CCO"));
  const double b = mol_weight(parse_smiles("c1ccccc1"));
  EXPECT_NEAR(mol_weight(parse_smiles("CCO.c1ccccc1")), a + b, 1e-9);
}

TEST_F(DescriptorTest, Logp) {
  EXPECT_NEAR(compute("C").logp, 0.636, 0.01);
  EXPECT_NEAR(compute("c1ccccc1").logp, 1.69, 0.05);
}

TEST_F(DescriptorTest, EthaneIsTwiceOneCarbonEnvironment) {
  const Molecule ethane = add_hydrogens(parse_smiles("CC"));
  const ContributionTable &table = calc_->crippen();
  const int carbon_rule = table.classify(ethane, 0);
  ASSERT_GE(carbon_rule, 0);
  EXPECT_EQ(table.classify(ethane, 1), carbon_rule);
  double per_carbon = table.rules()[carbon_rule].value;
  for (const Neighbor &n: ethane.neighbors(0)) {
    if (ethane.atom(n.atom).atomic_number == 1)
      per_carbon += table.rules()[table.classify(ethane, n.atom)].value;
  }
  EXPECT_DOUBLE_EQ(compute("CC").logp, 2 * per_carbon);
}

TEST_F(DescriptorTest, Tpsa) {
  EXPECT_EQ(compute("c1ccccc1").tpsa, 0.0);
  EXPECT_NEAR(compute("CCO").tpsa, 20.23, 0.01);
  EXPECT_NEAR(compute("COC").tpsa, 9.23, 0.01);
}

TEST_F(DescriptorTest, HydrocarbonTpsaIsZero) {
  for (auto smi: { "C", "CCCC", "c1ccccc1", "C=Cc1ccccc1", "C1CCCCC1",
                   "c1ccc2ccccc2c1", "CC(C)(C)C", "C#CC" })
    EXPECT_EQ(compute(smi).tpsa, 0.0) << smi;
}

TEST_F(DescriptorTest, Counts) {
  const DescriptorVector ethanol = compute("CCO");
  EXPECT_EQ(ethanol.hbd, 1);
  EXPECT_EQ(ethanol.hba, 1);
  EXPECT_EQ(ethanol.rot_bonds, 0);
  EXPECT_EQ(compute("CCCC").rot_bonds, 1);
  const DescriptorVector water = compute("O");
  EXPECT_EQ(water.hbd, 1);
  EXPECT_EQ(water.hba, 1);
  EXPECT_EQ(water.rot_bonds, 0);
}

TEST_F(DescriptorTest, AmideBondIsNotRotatable) {
  EXPECT_EQ(compute("CNC(C)=O").rot_bonds, 0);
  EXPECT_EQ(compute("CCNC(C)=O").rot_bonds, 1);
}

TEST_F(DescriptorTest, Vectors) {
  const auto benzene = compute("c1ccccc1").values();
  EXPECT_NEAR(benzene[0], 78.11, 0.01);
  EXPECT_NEAR(benzene[1], 1.69, 0.05);
  EXPECT_EQ(benzene[2], 0.0);
  EXPECT_EQ(benzene[3], 0.0);
  EXPECT_EQ(benzene[4], 0.0);
  EXPECT_EQ(benzene[5], 0.0);
  const auto methane = compute("C").values();
  EXPECT_NEAR(methane[0], 16.04, 0.01);
  EXPECT_NEAR(methane[1], 0.636, 0.01);
  EXPECT_EQ(methane[2], 0.0);
}

TEST_F(DescriptorTest, ReferencePanel) {
  ASSERT_GE(testing::kDescriptorPanel.size(), 20);
  for (const auto &ref: testing::kDescriptorPanel) {
    const DescriptorVector d = compute(ref.smiles);
    EXPECT_NEAR(d.mol_weight, ref.mol_weight, testing::kMolWeightTol) << ref.name;
    EXPECT_NEAR(d.logp, ref.logp, testing::kLogpTol) << ref.name;
    EXPECT_NEAR(d.tpsa, ref.tpsa, testing::kTpsaTol) << ref.name;
    EXPECT_EQ(d.hbd, ref.hbd) << ref.name;
    EXPECT_EQ(d.hba, ref.hba) << ref.name;
    EXPECT_EQ(d.rot_bonds, ref.rot_bonds) << ref.name;
  }
}

TEST_F(DescriptorTest, RenderingInvariance) {
  for (const auto &entry: testing::kRenderingPanel) {
    const auto first = compute(entry.smiles[0]).values();
    for (auto smi: entry.smiles) {
      const auto v = compute(smi).values();
      for (std::size_t k = 0; k < v.size(); ++k)
        EXPECT_NEAR(v[k], first[k], 1e-9) << smi << " descriptor " << k;
    }
  }
}

TEST(ContributionTableTest, ParseErrors) {
  EXPECT_THROW(ContributionTable::parse("# only comments\n"), TableError);
  EXPECT_THROW(ContributionTable::parse("[OH]\tnot-a-number\tX\n"), TableError);
  EXPECT_THROW(ContributionTable::parse("[O\t1.0\tX\n"), std::exception);
}

TEST(ContributionTableTest, FirstMatchWins) {
  const ContributionTable table =
      ContributionTable::parse("[OH]\t1.5\tA\nO\t2.5\tB\n*\t0\tC\n");
  const Molecule mol = parse_smiles("COC.CO");
  EXPECT_EQ(table.classify(mol, 1), 1);
  EXPECT_EQ(table.classify(mol, 4), 0);
  EXPECT_EQ(table.classify(mol, 0), 2);
}
}  // namespace
}  // namespace solvo
