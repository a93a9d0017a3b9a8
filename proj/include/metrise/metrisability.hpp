#pragma once

#include "metrise/geometry.hpp"

namespace metrise {

/// sigma^{bc}: symmetric, two up slots, projective weight -2.
void check_sigma(const Tensor& sigma);

/// (nabla_a sigma^{bc})_o = nabla_a sigma^{bc} - 1/2 delta_a^{(b} nabla_d sigma^{c)d};
/// zero exactly when sigma solves the metrisability equation.
Tensor metrisability_residual(const ProjectiveStructure& ps, const Tensor& sigma);

/// det sigma = (1/6) sigma^{ad} sigma^{be} sigma^{cf} eps_{abc} eps_{def},
/// a projective density of weight 2 (returned as a weighted scalar).
Tensor det_sigma(const Tensor& sigma);

/// sigma^{ab} nabla_b tau - 1/2 tau nabla_b sigma^{ab} for a weight-2 scalar tau.
Tensor pairing(const ProjectiveStructure& ps, const Tensor& sigma, const Tensor& tau);

/// V^{(ab}_d sigma^{c)d}; vanishing is necessary for the metrisability equation.
Tensor constraint_residual(const WeylV& v, const Tensor& sigma);

/// g^{ab} = (det sigma) sigma^{ab}; requires det sigma not identically zero.
Tensor metric_from_sigma(const Tensor& sigma);

/// sigma^{ab} = |det g|^{1/4} g^{ab} from a covariant metric whose determinant
/// is a rational constant with |det g| a fourth power.
Tensor sigma_from_metric(const Tensor& g);

} // namespace metrise
