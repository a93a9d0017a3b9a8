#pragma once

#include <random>

#include "metrise/geometry.hpp"
#include "metrise/parse.hpp"

namespace metrise::testfix {

inline const std::array<std::string, 3> kCoords{"x1", "x2", "x3"};

inline VarsPtr xvars() { return make_vars({"x1", "x2", "x3"}); }

/// The submaximal-symmetry structure: Gamma_23^1 = Gamma_32^1 = x2.
inline ProjectiveStructure egorov() {
    auto v = xvars();
    Tensor gamma({Variance::Down, Variance::Down, Variance::Up}, Rat(0), v);
    gamma({1, 2, 0}) = Poly::variable("x2", v);
    gamma({2, 1, 0}) = Poly::variable("x2", v);
    return make_projective_structure(kCoords, std::move(gamma));
}

inline ProjectiveStructure newtonian(const std::string& f_text) {
    auto v = xvars();
    Poly f = parse_poly(f_text, v);
    Tensor gamma({Variance::Down, Variance::Down, Variance::Up}, Rat(0), v);
    gamma({2, 2, 0}) = f.derivative("x1") * Rat(-1, 2);
    gamma({2, 2, 1}) = f.derivative("x2") * Rat(-1, 2);
    return make_projective_structure(kCoords, std::move(gamma));
}

inline Tensor heisenberg_metric(const VarsPtr& v) {
    Tensor g({Variance::Down, Variance::Down}, Rat(0), v);
    g({0, 0}) = parse_poly("1", v);
    g({1, 1}) = parse_poly("x1^2 - 1", v);
    g({1, 2}) = parse_poly("-x1", v);
    g({2, 1}) = parse_poly("-x1", v);
    g({2, 2}) = parse_poly("1", v);
    return g;
}

/// g = dx1^2 - dx2^2 + (dx3 - x1 dx2)^2, omega = 2(dx3 - x1 dx2).
inline WeylStructure heisenberg() {
    auto v = xvars();
    Tensor om({Variance::Down}, Rat(0), v);
    om({1}) = parse_poly("-2*x1", v);
    om({2}) = parse_poly("2", v);
    return {kCoords, heisenberg_metric(v), std::move(om)};
}

inline Tensor random_gamma(std::mt19937_64& rng, const VarsPtr& vars) {
    std::uniform_int_distribution<int> coeff(-3, 3);
    std::uniform_int_distribution<int> pick(0, 3);
    Tensor g({Variance::Down, Variance::Down, Variance::Up}, Rat(0), vars);
    const std::array<std::string, 3> names{"x1", "x2", "x3"};
    for (int b = 0; b < 3; ++b)
        for (int c = b; c < 3; ++c)
            for (int a = 0; a < 3; ++a) {
                Poly p = Poly::constant(Rat(coeff(rng)), vars);
                int k = pick(rng);
                if (k < 3) p = p * Poly::variable(names[static_cast<std::size_t>(k)], vars);
                g({b, c, a}) = p;
                g({c, b, a}) = p;
            }
    return g;
}

inline Tensor random_upsilon(std::mt19937_64& rng, const VarsPtr& vars) {
    std::uniform_int_distribution<int> coeff(-3, 3);
    std::uniform_int_distribution<int> pick(0, 3);
    Tensor u({Variance::Down}, Rat(0), vars);
    const std::array<std::string, 3> names{"x1", "x2", "x3"};
    for (int a = 0; a < 3; ++a) {
        Poly p = Poly::constant(Rat(coeff(rng)), vars);
        int k = pick(rng);
        if (k < 3) p = p * Poly::variable(names[static_cast<std::size_t>(k)], vars);
        u({a}) = p;
    }
    return u;
}

/// The general egorov solution family over constants A, B, C.
inline Tensor egorov_sigma() {
    auto vars = make_vars({"x1", "x2", "x3", "A", "B", "C"});
    Tensor s({Variance::Up, Variance::Up}, Rat(-2), vars);
    s({0, 0}) = parse_poly("A - B*x2^2 + C*x2^4", vars);
    s({0, 2}) = parse_poly("B - 2*C*x2^2", vars);
    s({2, 0}) = s({0, 2});
    s({2, 2}) = parse_poly("4*C", vars);
    return s;
}

/// The constant Newtonian solution family over A, B, C.
inline Tensor newtonian_sigma() {
    auto vars = make_vars({"x1", "x2", "x3", "A", "B", "C"});
    Tensor s({Variance::Up, Variance::Up}, Rat(-2), vars);
    s({0, 0}) = parse_poly("A", vars);
    s({0, 1}) = parse_poly("B", vars);
    s({1, 0}) = parse_poly("B", vars);
    s({1, 1}) = parse_poly("C", vars);
    return s;
}

} // namespace metrise::testfix
