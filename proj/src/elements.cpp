//
// solvo - polymer solubility prediction from SMILES
// SPDX-License-Identifier: Apache-2.0
//

#include "solvo/elements.h"

#include <array>
#include <cmath>

namespace solvo {
namespace {
struct ElementInfo {
  std::string_view symbol;
  double weight;  // 0 = not tabulated
};

// IUPAC conventional atomic weights; for elements without stable isotopes
// the mass number of the longest-lived isotope.
constexpr std::array<ElementInfo, kMaxAtomicNumber + 1> kElements = { {
    { "*", 0.0 },      { "H", 1.008 },     { "He", 4.003 },    { "Li", 6.941 },
    { "Be", 9.012 },   { "B", 10.812 },    { "C", 12.011 },    { "N", 14.007 },
    { "O", 15.999 },   { "F", 18.998 },    { "Ne", 20.180 },   { "Na", 22.990 },
    { "Mg", 24.305 },  { "Al", 26.982 },   { "Si", 28.086 },   { "P", 30.974 },
    { "S", 32.067 },   { "Cl", 35.453 },   { "Ar", 39.948 },   { "K", 39.098 },
    { "Ca", 40.078 },  { "Sc", 44.956 },   { "Ti", 47.867 },   { "V", 50.942 },
    { "Cr", 51.996 },  { "Mn", 54.938 },   { "Fe", 55.845 },   { "Co", 58.933 },
    { "Ni", 58.693 },  { "Cu", 63.546 },   { "Zn", 65.390 },   { "Ga", 69.723 },
    { "Ge", 72.610 },  { "As", 74.922 },   { "Se", 78.960 },   { "Br", 79.904 },
    { "Kr", 83.800 },  { "Rb", 85.468 },   { "Sr", 87.620 },   { "Y", 88.906 },
    { "Zr", 91.224 },  { "Nb", 92.906 },   { "Mo", 95.940 },   { "Tc", 98.0 },
    { "Ru", 101.070 }, { "Rh", 102.906 },  { "Pd", 106.420 },  { "Ag", 107.868 },
    { "Cd", 112.411 }, { "In", 114.818 },  { "Sn", 118.710 },  { "Sb", 121.760 },
    { "Te", 127.600 }, { "I", 126.904 },   { "Xe", 131.290 },  { "Cs", 132.905 },
    { "Ba", 137.328 }, { "La", 138.906 },  { "Ce", 140.116 },  { "Pr", 140.908 },
    { "Nd", 144.240 }, { "Pm", 145.0 },    { "Sm", 150.360 },  { "Eu", 151.964 },
    { "Gd", 157.250 }, { "Tb", 158.925 },  { "Dy", 162.500 },  { "Ho", 164.930 },
    { "Er", 167.260 }, { "Tm", 168.934 },  { "Yb", 173.040 },  { "Lu", 174.967 },
    { "Hf", 178.490 }, { "Ta", 180.948 },  { "W", 183.840 },   { "Re", 186.207 },
    { "Os", 190.230 }, { "Ir", 192.217 },  { "Pt", 195.078 },  { "Au", 196.967 },
    { "Hg", 200.590 }, { "Tl", 204.383 },  { "Pb", 207.200 },  { "Bi", 208.980 },
    { "Po", 209.0 },   { "At", 210.0 },    { "Rn", 222.0 },    { "Fr", 223.0 },
    { "Ra", 226.0 },   { "Ac", 227.0 },    { "Th", 232.038 },  { "Pa", 231.036 },
    { "U", 238.029 },  { "Np", 237.0 },    { "Pu", 244.0 },    { "Am", 243.0 },
    { "Cm", 247.0 },   { "Bk", 247.0 },    { "Cf", 251.0 },    { "Es", 252.0 },
    { "Fm", 257.0 },   { "Md", 258.0 },    { "No", 259.0 },    { "Lr", 262.0 },
    { "Rf", 0.0 },     { "Db", 0.0 },      { "Sg", 0.0 },      { "Bh", 0.0 },
    { "Hs", 0.0 },     { "Mt", 0.0 },      { "Ds", 0.0 },      { "Rg", 0.0 },
    { "Cn", 0.0 },     { "Nh", 0.0 },      { "Fl", 0.0 },      { "Mc", 0.0 },
    { "Lv", 0.0 },     { "Ts", 0.0 },      { "Og", 0.0 },
} };

struct IsotopeInfo {
  int atomic_number;
  int mass_number;
  double mass;
};

constexpr IsotopeInfo kIsotopes[] = {
  { 1, 1, 1.00782503 },   { 1, 2, 2.01410178 },   { 1, 3, 3.01604928 },
  { 5, 10, 10.0129370 },  { 5, 11, 11.0093054 },  { 6, 11, 11.0114336 },
  { 6, 12, 12.0 },        { 6, 13, 13.0033548 },  { 6, 14, 14.0032420 },
  { 7, 14, 14.0030740 },  { 7, 15, 15.0001089 },  { 8, 16, 15.9949146 },
  { 8, 17, 16.9991317 },  { 8, 18, 17.9991596 },  { 9, 18, 18.0009380 },
  { 9, 19, 18.9984032 },  { 15, 31, 30.9737620 }, { 15, 32, 31.9739072 },
  { 16, 32, 31.9720711 }, { 16, 34, 33.9678669 }, { 16, 35, 34.9690322 },
  { 17, 35, 34.9688527 }, { 17, 37, 36.9659026 }, { 35, 79, 78.9183371 },
  { 35, 81, 80.9162906 }, { 53, 123, 122.905589 }, { 53, 125, 124.904630 },
  { 53, 127, 126.904473 }, { 53, 131, 130.906125 },
};

constexpr int kValH[] = { 1 };
constexpr int kValB[] = { 3 };
constexpr int kValC[] = { 4 };
constexpr int kValN[] = { 3, 5 };
constexpr int kValO[] = { 2 };
constexpr int kValP[] = { 3, 5 };
constexpr int kValS[] = { 2, 4, 6 };
constexpr int kValHalogen[] = { 1 };
}  // namespace

int atomic_number_of(std::string_view symbol) {
  for (int z = 1; z <= kMaxAtomicNumber; ++z) {
    if (kElements[z].symbol == symbol)
      return z;
  }
  return 0;
}

std::string_view element_symbol(int atomic_number) {
  if (atomic_number < 0 || atomic_number > kMaxAtomicNumber)
    return "?";
  return kElements[atomic_number].symbol;
}

std::optional<double> standard_atomic_weight(int atomic_number) {
  if (atomic_number < 1 || atomic_number > kMaxAtomicNumber)
    return std::nullopt;
  double w = kElements[atomic_number].weight;
  if (w <= 0.0)
    return std::nullopt;
  return w;
}

double isotope_mass(int atomic_number, int mass_number) {
  for (const auto &iso: kIsotopes) {
    if (iso.atomic_number == atomic_number && iso.mass_number == mass_number)
      return iso.mass;
  }
  return static_cast<double>(mass_number);
}

std::span<const int> standard_valences(int atomic_number) {
  switch (atomic_number) {
  case 1:
    return kValH;
  case 5:
    return kValB;
  case 6:
    return kValC;
  case 7:
    return kValN;
  case 8:
    return kValO;
  case 15:
    return kValP;
  case 16:
    return kValS;
  case 9:
  case 17:
  case 35:
  case 53:
    return kValHalogen;
  default:
    return {};
  }
}

bool is_organic_subset(int atomic_number) {
  return atomic_number != 1 && !standard_valences(atomic_number).empty();
}
}  // namespace solvo
