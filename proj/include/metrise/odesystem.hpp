#pragma once

#include "metrise/geometry.hpp"

namespace metrise {

/// y'' = F2, z'' = F3 with F^i polynomial in (x, y, z, p2, p3), p2 = y', p3 = z'.
struct ODESystem {
    Poly f2, f3;
};

ODESystem make_ode_system(Poly f2, Poly f3);

/// S^i_{(jkl)} with i,j,k,l in {2,3}: the third-velocity-derivative
/// obstruction whose vanishing characterises projective path geometries.
struct FelsResidual {
    std::array<Poly, 16> s; // [i][j][k][l], both indices 0-based over {2,3}
    const Poly& at(int i, int j, int k, int l) const {
        return s[static_cast<std::size_t>(((i * 2 + j) * 2 + k) * 2 + l)];
    }
    Poly& at(int i, int j, int k, int l) {
        return s[static_cast<std::size_t>(((i * 2 + j) * 2 + k) * 2 + l)];
    }
    bool is_zero() const;
};

FelsResidual fels_residual(const ODESystem& sys);

/// Eliminate the affine parameter from the geodesic equations:
/// F^i = A_{jk} p^i p^j p^k + B^i_{jk} p^j p^k + C^i_j p^j + D^i.
ODESystem system_from_connection(const ProjectiveStructure& ps);

/// Invert the cubic shape in the gauge Gamma_{11}^1 = Gamma_{1j}^1 = 0.
/// Requires the Fels conditions and the exact cubic shape.
ProjectiveStructure connection_from_system(const ODESystem& sys);

} // namespace metrise
