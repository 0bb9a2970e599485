//
// Project smiself - Copyright 2026 The smiself Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef SMISELF_SRC_ELEMENTS_H_
#define SMISELF_SRC_ELEMENTS_H_

#include <algorithm>
#include <iterator>
#include <string_view>

namespace smiself::internal {

inline constexpr std::string_view kElementSymbols[] = {
  "H",  "He", "Li", "Be", "B",  "C",  "N",  "O",  "F",  "Ne", "Na", "Mg",
  "Al", "Si", "P",  "S",  "Cl", "Ar", "K",  "Ca", "Sc", "Ti", "V",  "Cr",
  "Mn", "Fe", "Co", "Ni", "Cu", "Zn", "Ga", "Ge", "As", "Se", "Br", "Kr",
  "Rb", "Sr", "Y",  "Zr", "Nb", "Mo", "Tc", "Ru", "Rh", "Pd", "Ag", "Cd",
  "In", "Sn", "Sb", "Te", "I",  "Xe", "Cs", "Ba", "La", "Ce", "Pr", "Nd",
  "Pm", "Sm", "Eu", "Gd", "Tb", "Dy", "Ho", "Er", "Tm", "Yb", "Lu", "Hf",
  "Ta", "W",  "Re", "Os", "Ir", "Pt", "Au", "Hg", "Tl", "Pb", "Bi", "Po",
  "At", "Rn", "Fr", "Ra", "Ac", "Th", "Pa", "U",  "Np", "Pu", "Am", "Cm",
  "Bk", "Cf", "Es", "Fm", "Md", "No", "Lr", "Rf", "Db", "Sg", "Bh", "Hs",
  "Mt", "Ds", "Rg", "Cn", "Nh", "Fl", "Mc", "Lv", "Ts", "Og",
};

inline bool is_element_symbol(std::string_view s) {
  return std::find(std::begin(kElementSymbols), std::end(kElementSymbols), s)
         != std::end(kElementSymbols);
}

// Lowercase forms allowed inside brackets.
inline constexpr std::string_view kAromaticBracketSymbols[] = {
  "se", "as", "te", "b", "c", "n", "o", "p", "s",
};

}  // namespace smiself::internal

#endif  // SMISELF_SRC_ELEMENTS_H_
