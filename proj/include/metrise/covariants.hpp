#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "metrise/geometry.hpp"
#include "metrise/linalg.hpp"

namespace metrise {

/// The named covariants of V with an index formula. The diagram-only
/// quintic/sextic covariants (E, G, H, I, M) carry no reliable formula and
/// are represented through the contraction-scheme enumerator instead.
enum class Cov { A, B, C, D, F, J, K, L, N, Q, Y, Z, S, T };

Cov covariant_from_name(const std::string& name);
std::string covariant_name(Cov c);

/// Evaluate one named covariant; weights come out of the bookkeeping
/// (A: -8, Q: -4, S: -8, T: -24, Z: 0, ...).
Tensor named_covariant(Cov c, const WeylV& v);

/// Xi^{abc}_{de} = V^{(ab}_{(d} delta_{e)}^{c)} together with its 10x6
/// matrix in the monomial Sym^3/Sym^2 bases (d<=e columns, a<=b<=c rows).
struct ConstraintMap {
    Tensor xi; // slots (U,U,U,D,D)
    std::vector<std::vector<Poly>> matrix; // 10 x 6
};

ConstraintMap constraint_map(const WeylV& v);

struct KernelResult {
    int dim = 0;
    std::vector<std::vector<Rat>> basis; // vectors in the sigma^{de} basis, d<=e
};

/// Exact kernel of the 10x6 matrix; entries must be constants, or a point
/// must be supplied for evaluation.
KernelResult constraint_kernel(const ConstraintMap& cm,
                               const std::map<std::string, Rat>& point = {});

enum class TMethod { Combination, Determinant, Traces };
TMethod t_method_from_name(const std::string& name);

/// The sextic obstruction by any of the three routes. Route proportions
/// (combination = 5832 x determinant, traces = -144 x determinant) are
/// calibrated in the test suite.
Tensor t_tensor(const WeylV& v, TMethod method);

/// X_a...X_f T^{abcdef} as a polynomial in three fresh variables.
Poly sextic_of(const Tensor& t6, const std::array<std::string, 3>& xyz);

/// C-2B, F-2D, J-2L, 3J-2C(.)C, J-4K+4A(.)D
std::vector<Tensor> theorem2_tensors(const WeylV& v);
std::vector<std::string> theorem2_names();

/// V^{ab}_c = 2 R^{d(a} g^{b)e} eps_{edc} for a symmetric form R.
WeylV metric_form_v(const Tensor& r, const Tensor& g);

/// The symbolic metric family: g = identity, R symmetric in 6 variables
/// r11..r33 (testing this family is sound for all metrics by complexification).
struct MetricFamily {
    VarsPtr vars;
    Tensor r;
    WeylV v;
};
MetricFamily metric_form_family();

/// V with the 15 preferred components as free variables v112..v332.
WeylV generic_symbolic_v();

/// Uniform integer components in [-9,9], resampled until nonzero.
WeylV random_integer_v(std::mt19937_64& rng);
/// Metric-form V at a random integer symmetric R with g = identity.
WeylV random_metric_form_v(std::mt19937_64& rng);

struct VanishingVerdict {
    bool vanishes_on_metric_family = false;
    bool witness_found = false; // generic nonvanishing witness
    std::string witness;        // component + value at the witness point
};

/// expr is a linear combination of covariant names; '*' between names is the
/// symmetrized product for all-upper operands and the full contraction for
/// dual valences (so "S + V*Q" is the scalar identity check).
VanishingVerdict check_metric_vanishing(const std::string& expr, std::uint64_t seed = 20240811u);

struct RelationReport {
    bool s_identity = false;          // S = -V^{ab}_c Q_{ab}^c
    bool qv_identity = false;         // 2 eps^{pq(a} Q_pr^b V^{c)r}_q = C - 2B
    bool t_recombination = false;     // T rebuilt from the theorem-2 set
    Rat s_constant{1};                // recorded per-identity constants
    Rat qv_constant{1};
    Rat t_constant{1};
};

/// Checks the displayed identities symbolically at generic V.
RelationReport relation_suite();

struct EWObstructions {
    Tensor phi, faraday, f;
    Tensor v_direct, v_closed;
    Tensor q_direct, q_closed;
    std::optional<Rat> v_ratio; // v_direct = ratio * v_closed
    std::optional<Rat> q_ratio;
    bool phi_zero = false;
    bool f_zero = false;
};

/// Direct curvature pipeline vs the closed Einstein-Weyl formulas for V and Q.
EWObstructions einstein_weyl_obstructions(const WeylStructure& ws);

/// componentwise constant ratio a = c * b, if one exists (nullopt otherwise;
/// Rat(0) only when both vanish).
std::optional<Rat> proportionality_constant(const Tensor& a, const Tensor& b);

} // namespace metrise
