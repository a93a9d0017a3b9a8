#pragma once

#include <array>
#include <map>

#include "metrise/rational.hpp"

namespace metrise {

/// sl3 weights in fundamental-weight coordinates (Dynkin labels when dominant).
using Sl3Weight = std::array<int, 2>;
using Sl3Decomposition = std::map<Sl3Weight, long long>;

long long sl3_dim(const Sl3Weight& hw); // (a+1)(b+1)(a+b+2)/2

/// Full weight multiset of the irrep with the given highest weight (Freudenthal).
std::map<Sl3Weight, long long> sl3_irrep_weights(const Sl3Weight& hw);

/// Highest weights with multiplicities of the k-th symmetric power.
Sl3Decomposition sl3_sym_decompose(int k, const Sl3Weight& hw);

/// Restriction along the principal sl2 ((m1,m2) -> 2 m1 + 2 m2) decomposed
/// into irreducible strings, keyed by the sl2 highest weight.
std::map<int, long long> sl2_branch(const Sl3Weight& hw);

/// deg = -(3k + 2l + m)/4 for the bundle labelled (k, l, m).
Rat bundle_degree(long k, long l, long m);

} // namespace metrise
