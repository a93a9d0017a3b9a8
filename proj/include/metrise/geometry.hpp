#pragma once

#include <array>

#include "metrise/tensor.hpp"

namespace metrise {

/// Symmetric christoffel symbols Gamma_{bc}^a, slots (Down b, Down c, Up a).
struct ProjectiveStructure {
    std::array<std::string, 3> coords;
    Tensor gamma;
};

ProjectiveStructure make_projective_structure(std::array<std::string, 3> coords, Tensor gamma);

struct ProjectiveChange {
    Tensor upsilon; // one Down slot
};

struct CurvatureDecomposition {
    Tensor riemann;  // R_{ab}^c_d, slots (D,D,U,D)
    Tensor weyl;     // totally trace-free part
    Tensor schouten; // P_{ab}
    Tensor beta;     // beta_{ab} = -2 P_{[ab]}
};

/// Reduced Weyl tensor V^{ab}_c = eps^{dea} W_{de}^b_c: pair-symmetric,
/// trace-free, projective weight -4.
struct WeylV {
    Tensor v; // slots (U,U,D)
};

WeylV make_weyl_v(Tensor v);

struct WeylStructure {
    std::array<std::string, 3> coords;
    Tensor metric;   // g_{ab}, slots (D,D)
    Tensor one_form; // omega_a
};

struct EinsteinWeylData {
    Tensor phi;     // symmetrised trace-free Ricci of the Weyl connection
    Tensor faraday; // F_{ab} = nabla_[a omega_b]
    Tensor f;       // f^a with F_{ab} = eps_{abc} f^c (coordinate-scale epsilon)
};

/// Gamma_{bc}^a + delta_b^a Y_c + delta_c^a Y_b
ProjectiveStructure apply_projective_change(const ProjectiveStructure& ps,
                                            const ProjectiveChange& change);

/// Full curvature pipeline; the decomposition invariants are asserted.
CurvatureDecomposition curvature(const ProjectiveStructure& ps);

/// Throws precondition_error unless W has the projective Weyl symmetries
/// (skew pair, vanishing skew part over the three down slots, all traces zero).
void check_weyl_symmetries(const Tensor& w);

WeylV v_from_weyl(const Tensor& w);
Tensor weyl_from_v(const WeylV& v);

WeylV weyl_v_of(const ProjectiveStructure& ps);

Poly metric_det(const Tensor& g);
/// g^{ab} = adjugate/det, exact; throws when degenerate or outside the
/// polynomial-inverse class.
Tensor inverse_metric(const Tensor& g);

ProjectiveStructure levi_civita(const std::array<std::string, 3>& coords, const Tensor& g);

ProjectiveStructure weyl_connection(const WeylStructure& ws);

/// The connection Gamma_{bd}^c = (2/3) x^a W_{a(b}^c_{d)} realising a given
/// constant Weyl tensor at the origin.
ProjectiveStructure connection_with_given_weyl(const Tensor& w0,
                                               const std::array<std::string, 3>& coords);

EinsteinWeylData einstein_weyl_data(const WeylStructure& ws);

} // namespace metrise
