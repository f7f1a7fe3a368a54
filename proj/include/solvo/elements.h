//
// solvo - polymer solubility prediction from SMILES
// SPDX-License-Identifier: Apache-2.0
//

#ifndef SOLVO_ELEMENTS_H_
#define SOLVO_ELEMENTS_H_

#include <optional>
#include <span>
#include <string_view>

namespace solvo {
inline constexpr int kMaxAtomicNumber = 118;

// Returns 0 when the symbol is not an element. Case sensitive ("Cl", not
// "CL").
int atomic_number_of(std::string_view symbol);

std::string_view element_symbol(int atomic_number);

// Standard atomic weight in g/mol; empty for elements without a tabulated
// weight (superheavy elements).
std::optional<double> standard_atomic_weight(int atomic_number);

// Exact isotopic mass when tabulated, otherwise the mass number itself.
double isotope_mass(int atomic_number, int mass_number);

// Standard valences in ascending order for the SMILES organic subset (and
// hydrogen). Empty for everything else.
std::span<const int> standard_valences(int atomic_number);

bool is_organic_subset(int atomic_number);
}  // namespace solvo

#endif  // SOLVO_ELEMENTS_H_
