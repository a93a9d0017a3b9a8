#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "metrise/covariants.hpp"

namespace metrise {

/// One degree-d contraction pattern: the lower index of each V-copy is
/// matched injectively to an upper slot (vertex, slot) of another copy; the
/// d unmatched uppers are symmetrized. Stored in canonical form (minimum
/// lexicographic encoding over vertex relabelings and per-vertex slot swaps).
struct ContractionScheme {
    int degree = 0;
    std::vector<std::pair<int, int>> matching; // vertex -> (target vertex, slot)

    bool operator<(const ContractionScheme& o) const { return matching < o.matching; }
    bool operator==(const ContractionScheme& o) const { return matching == o.matching; }
};

/// Complete duplicate-free list in deterministic order, 2 <= d <= 6.
std::vector<ContractionScheme> enumerate_schemes(int d);

/// Product of d copies of V contracted per the scheme, free uppers
/// symmetrized; weight -4d.
Tensor evaluate_scheme(const ContractionScheme& s, const WeylV& v);

struct SpanReport {
    int degree = 0;
    int scheme_count = 0;
    int span_dim = 0;
    int vanishing_dim = 0;
    /// combinations over the scheme list spanning the subspace that vanishes
    /// on the metric family
    std::vector<std::vector<Rat>> vanishing_basis;
    bool vanishing_certified = false; // symbolic certificate on the metric family
    /// multiplicity of (0,d) in Sym^d of the V-module: an independent upper
    /// bound for span_dim; `complete` records that the two bounds meet.
    long long rep_multiplicity = 0;
    bool complete = false;
    std::uint64_t generic_seed = 0, metric_seed = 0;
};

/// Rank of the evaluation span at random integer V (fraction-free exact
/// elimination), the dimension vanishing on the metric family, and the
/// certified vanishing basis. Every vanishing basis element is certified by
/// symbolic substitution of the family (identically zero in the 6 R-variables).
SpanReport span_analysis(int d, bool certify_symbolic = true);

} // namespace metrise
