#include "metrise/geometry.hpp"

#include <algorithm>

#include "metrise/errors.hpp"

namespace metrise {

namespace {

VarsPtr with_coords(const VarsPtr& vars, const std::array<std::string, 3>& coords) {
    VarList names = *vars;
    for (const auto& c : coords)
        if (std::find(names.begin(), names.end(), c) == names.end()) names.push_back(c);
    if (names == *vars) return vars;
    return make_vars(std::move(names));
}

} // namespace

ProjectiveStructure make_projective_structure(std::array<std::string, 3> coords, Tensor gamma) {
    check_internal(gamma.rank() == 3 && gamma.valence()[0] == Variance::Down &&
                       gamma.valence()[1] == Variance::Down && gamma.valence()[2] == Variance::Up,
                   "christoffel valence");
    for (int b = 0; b < 3; ++b)
        for (int c = 0; c < b; ++c)
            for (int a = 0; a < 3; ++a)
                if (gamma({b, c, a}) != gamma({c, b, a}))
                    throw precondition_error("christoffel symbols not symmetric (torsion)");
    return {std::move(coords), std::move(gamma)};
}

ProjectiveStructure apply_projective_change(const ProjectiveStructure& ps,
                                            const ProjectiveChange& change) {
    Tensor gamma = ps.gamma;
    Tensor ups = change.upsilon;
    if (!(gamma.vars() == ups.vars() || *gamma.vars() == *ups.vars())) {
        auto [pa, pb] = aligned(Poly(gamma.vars()), Poly(ups.vars()));
        gamma = gamma.remapped(pa.vars());
        ups = ups.remapped(pa.vars());
    }
    for (int b = 0; b < 3; ++b)
        for (int c = 0; c < 3; ++c) {
            gamma({b, c, b}) += ups({c});
            gamma({b, c, c}) += ups({b});
        }
    return {ps.coords, std::move(gamma)};
}

CurvatureDecomposition curvature(const ProjectiveStructure& ps) {
    const Tensor& g = ps.gamma;
    const VarsPtr& vars = g.vars();
    const auto& x = ps.coords;

    Tensor R({Variance::Down, Variance::Down, Variance::Up, Variance::Down}, Rat(0), vars);
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            for (int c = 0; c < 3; ++c)
                for (int d = 0; d < 3; ++d) {
                    Poly v = g({b, d, c}).derivative(x[static_cast<std::size_t>(a)]) -
                             g({a, d, c}).derivative(x[static_cast<std::size_t>(b)]);
                    for (int e = 0; e < 3; ++e)
                        v += g({a, e, c}) * g({b, d, e}) - g({b, e, c}) * g({a, d, e});
                    R({a, b, c, d}) = std::move(v);
                }

    Tensor ric({Variance::Down, Variance::Down}, Rat(0), vars);
    Tensor beta({Variance::Down, Variance::Down}, Rat(0), vars);
    for (int b = 0; b < 3; ++b)
        for (int d = 0; d < 3; ++d) {
            Poly r(vars), bt(vars);
            for (int a = 0; a < 3; ++a) r += R({a, b, a, d});
            for (int c = 0; c < 3; ++c) bt += R({b, d, c, c});
            ric({b, d}) = std::move(r);
            beta({b, d}) = bt * Rat(1, 4);
        }

    Tensor P({Variance::Down, Variance::Down}, Rat(0), vars);
    for (int b = 0; b < 3; ++b)
        for (int d = 0; d < 3; ++d)
            P({b, d}) = (ric({b, d}) + ric({d, b})) * Rat(1, 4) - beta({b, d}) * Rat(1, 2);

    Tensor W = R;
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            for (int c = 0; c < 3; ++c)
                for (int d = 0; d < 3; ++d) {
                    Poly corr(vars);
                    if (a == c) corr += P({b, d});
                    if (b == c) corr -= P({a, d});
                    if (d == c) corr += beta({a, b});
                    if (!corr.is_zero()) W({a, b, c, d}) -= corr;
                }

    // decomposition invariants
    for (int b = 0; b < 3; ++b)
        for (int d = 0; d < 3; ++d) {
            Poly t1(vars), t2(vars), t3(vars);
            for (int a = 0; a < 3; ++a) {
                t1 += W({a, b, a, d});
                t2 += W({b, a, a, d});
                t3 += W({b, d, a, a});
            }
            check_internal(t1.is_zero() && t2.is_zero() && t3.is_zero(), "weyl tensor not trace-free");
            check_internal((beta({b, d}) + P({b, d}) - P({d, b})).is_zero(), "beta != -2P_[ab]");
        }
    check_internal(antisymmetrize(W, {0, 1, 3}).is_zero(), "W_[ab^c_d] != 0");
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            for (int c = 0; c < 3; ++c)
                for (int d = 0; d < 3; ++d) {
                    Poly back = W({a, b, c, d});
                    if (a == c) back += P({b, d});
                    if (b == c) back -= P({a, d});
                    if (c == d) back += beta({a, b});
                    check_internal(back == R({a, b, c, d}), "decomposition does not reassemble");
                }

    return {std::move(R), std::move(W), std::move(P), std::move(beta)};
}

void check_weyl_symmetries(const Tensor& w) {
    const std::vector<Variance> want{Variance::Down, Variance::Down, Variance::Up, Variance::Down};
    if (w.valence() != want)
        throw precondition_error("symmetry violation: weyl tensor must have slots (down,down,up,down)");
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b <= a; ++b)
            for (int c = 0; c < 3; ++c)
                for (int d = 0; d < 3; ++d)
                    if (!(w({a, b, c, d}) + w({b, a, c, d})).is_zero())
                        throw precondition_error("symmetry violation: W_ab^c_d not skew in ab");
    if (!antisymmetrize(w, {0, 1, 3}).is_zero())
        throw precondition_error("symmetry violation: W_[ab^c_d] != 0");
    for (int b = 0; b < 3; ++b)
        for (int d = 0; d < 3; ++d) {
            Poly t1(w.vars()), t2(w.vars());
            for (int a = 0; a < 3; ++a) {
                t1 += w({a, b, a, d});
                t2 += w({b, d, a, a});
            }
            if (!t1.is_zero() || !t2.is_zero())
                throw precondition_error("symmetry violation: weyl tensor has a nonzero trace");
        }
}

WeylV make_weyl_v(Tensor v) {
    const std::vector<Variance> want{Variance::Up, Variance::Up, Variance::Down};
    check_internal(v.valence() == want, "V valence must be (up,up,down)");
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < a; ++b)
            for (int c = 0; c < 3; ++c)
                if (v({a, b, c}) != v({b, a, c}))
                    throw precondition_error("V^ab_c not symmetric in the upper pair");
    for (int b = 0; b < 3; ++b) {
        Poly tr(v.vars());
        for (int a = 0; a < 3; ++a) tr += v({a, b, a});
        if (!tr.is_zero()) throw precondition_error("V^ab_a != 0");
    }
    check_internal(v.weight() == Rat(-4), "V must carry projective weight -4");
    return {std::move(v)};
}

WeylV v_from_weyl(const Tensor& w) {
    check_weyl_symmetries(w);
    Tensor epsU = Tensor::eps_up(w.vars());
    Tensor v = nsum("dea,debc->abc", {&epsU, &w});
    return make_weyl_v(std::move(v));
}

Tensor weyl_from_v(const WeylV& v) {
    Tensor epsD = Tensor::eps_down(v.v.vars());
    return nsum("eab,ecd->abcd", {&epsD, &v.v}).scaled(Rat(1, 2));
}

WeylV weyl_v_of(const ProjectiveStructure& ps) {
    return v_from_weyl(curvature(ps).weyl);
}

Poly metric_det(const Tensor& g) {
    auto m = [&](int i, int j) { return g({i, j}); };
    return m(0,0)*m(1,1)*m(2,2) + m(0,1)*m(1,2)*m(2,0) + m(0,2)*m(1,0)*m(2,1)
         - m(0,2)*m(1,1)*m(2,0) - m(0,1)*m(1,0)*m(2,2) - m(0,0)*m(1,2)*m(2,1);
}

namespace {

// adjugate of a 3x3 component matrix read from a rank-2 tensor
std::array<std::array<Poly, 3>, 3> adjugate3(const Tensor& g) {
    auto m = [&](int i, int j) { return g({i, j}); };
    std::array<std::array<Poly, 3>, 3> adj;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            int r1 = (j + 1) % 3, r2 = (j + 2) % 3;
            int c1 = (i + 1) % 3, c2 = (i + 2) % 3;
            adj[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                m(r1, c1) * m(r2, c2) - m(r1, c2) * m(r2, c1);
        }
    return adj;
}

void check_metric(const Tensor& g) {
    check_internal(g.rank() == 2 && g.valence()[0] == Variance::Down &&
                       g.valence()[1] == Variance::Down,
                   "metric must have two down slots");
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < i; ++j)
            if (g({i, j}) != g({j, i})) throw precondition_error("metric not symmetric");
}

} // namespace

Tensor inverse_metric(const Tensor& g) {
    check_metric(g);
    Poly det = metric_det(g);
    if (det.is_zero()) throw precondition_error("degenerate metric: det g = 0");
    auto adj = adjugate3(g);
    Tensor inv({Variance::Up, Variance::Up}, Rat(0), g.vars());
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            auto q = divide_exact(adj[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)], det);
            if (!q)
                throw precondition_error(
                    "inexact division: metric outside the supported class (non-polynomial inverse)");
            inv({i, j}) = std::move(*q);
        }
    return inv;
}

ProjectiveStructure levi_civita(const std::array<std::string, 3>& coords, const Tensor& g0) {
    check_metric(g0);
    Tensor g = g0.remapped(with_coords(g0.vars(), coords));
    const VarsPtr& vars = g.vars();
    Poly det = metric_det(g);
    if (det.is_zero()) throw precondition_error("degenerate metric: det g = 0");
    auto adj = adjugate3(g);
    Tensor gamma({Variance::Down, Variance::Down, Variance::Up}, Rat(0), vars);
    for (int b = 0; b < 3; ++b)
        for (int c = 0; c < 3; ++c)
            for (int a = 0; a < 3; ++a) {
                Poly num(vars);
                for (int d = 0; d < 3; ++d) {
                    Poly bracket = g({d, c}).derivative(coords[static_cast<std::size_t>(b)])
                                 + g({b, d}).derivative(coords[static_cast<std::size_t>(c)])
                                 - g({b, c}).derivative(coords[static_cast<std::size_t>(d)]);
                    if (!bracket.is_zero())
                        num += adj[static_cast<std::size_t>(a)][static_cast<std::size_t>(d)] * bracket;
                }
                auto q = divide_exact(num, det);
                if (!q)
                    throw precondition_error(
                        "inexact division: christoffel symbols are not polynomial for this metric");
                gamma({b, c, a}) = *q * Rat(1, 2);
            }
    ProjectiveStructure ps{coords, std::move(gamma)};
    check_internal(covariant_derivative(g, ps.gamma, coords).is_zero(), "nabla g != 0");
    return ps;
}

ProjectiveStructure weyl_connection(const WeylStructure& ws) {
    ProjectiveStructure lc = levi_civita(ws.coords, ws.metric);
    Tensor g = ws.metric.remapped(lc.gamma.vars());
    Tensor om = ws.one_form.remapped(lc.gamma.vars());
    Tensor ginv = inverse_metric(g);
    const VarsPtr& vars = lc.gamma.vars();
    Tensor gamma = lc.gamma;
    for (int b = 0; b < 3; ++b)
        for (int c = 0; c < 3; ++c) {
            for (int a = 0; a < 3; ++a) {
                Poly corr(vars);
                if (b == a) corr += om({c});
                if (c == a) corr += om({b});
                Poly gw(vars);
                for (int d = 0; d < 3; ++d) gw += ginv({a, d}) * om({d});
                corr -= g({b, c}) * gw;
                if (!corr.is_zero()) gamma({b, c, a}) -= corr * Rat(1, 2);
            }
        }
    ProjectiveStructure ps{ws.coords, std::move(gamma)};
    // D_a g_bc = omega_a g_bc
    Tensor dg = covariant_derivative(g, ps.gamma, ps.coords);
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            for (int c = 0; c < 3; ++c)
                check_internal(dg({a, b, c}) == om({a}) * g({b, c}), "D g != omega x g");
    return ps;
}

ProjectiveStructure connection_with_given_weyl(const Tensor& w0,
                                               const std::array<std::string, 3>& coords) {
    check_weyl_symmetries(w0);
    VarsPtr vars = with_coords(w0.vars(), coords);
    Tensor w = w0.remapped(vars);
    Tensor wsym = symmetrize(w, {1, 3}); // W_{a(b}^c_{d)}
    std::array<Poly, 3> x{Poly::variable(coords[0], vars), Poly::variable(coords[1], vars),
                          Poly::variable(coords[2], vars)};
    Tensor gamma({Variance::Down, Variance::Down, Variance::Up}, Rat(0), vars);
    for (int b = 0; b < 3; ++b)
        for (int d = 0; d < 3; ++d)
            for (int c = 0; c < 3; ++c) {
                Poly v(vars);
                for (int a = 0; a < 3; ++a) {
                    const Poly& wc = wsym({a, b, c, d});
                    if (!wc.is_zero()) v += x[static_cast<std::size_t>(a)] * wc;
                }
                gamma({b, d, c}) = v * Rat(2, 3);
            }
    return make_projective_structure(coords, std::move(gamma));
}

EinsteinWeylData einstein_weyl_data(const WeylStructure& ws) {
    ProjectiveStructure d = weyl_connection(ws);
    const VarsPtr& vars = d.gamma.vars();
    Tensor g = ws.metric.remapped(vars);
    Tensor om = ws.one_form.remapped(vars);
    Tensor ginv = inverse_metric(g);

    CurvatureDecomposition dec = curvature(d);
    Tensor ric({Variance::Down, Variance::Down}, Rat(0), vars);
    for (int b = 0; b < 3; ++b)
        for (int dd = 0; dd < 3; ++dd) {
            Poly r(vars);
            for (int a = 0; a < 3; ++a) r += dec.riemann({a, b, a, dd});
            ric({b, dd}) = std::move(r);
        }
    Tensor ricsym = symmetrize(ric, {0, 1});
    Poly scal(vars);
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) scal += ginv({a, b}) * ricsym({a, b});
    Tensor phi = ricsym;
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) phi({a, b}) -= scal * g({a, b}) * Rat(1, 3);

    Tensor faraday({Variance::Down, Variance::Down}, Rat(0), vars);
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            faraday({a, b}) = (om({b}).derivative(d.coords[static_cast<std::size_t>(a)]) -
                               om({a}).derivative(d.coords[static_cast<std::size_t>(b)])) * Rat(1, 2);

    // F_{ab} = eps_{abc} f^c with the unit alternating symbol of the
    // coordinate scale; overall constants are absorbed by calibration.
    Tensor f({Variance::Up}, Rat(0), vars);
    f({0}) = faraday({1, 2});
    f({1}) = faraday({2, 0});
    f({2}) = faraday({0, 1});

    return {std::move(phi), std::move(faraday), std::move(f)};
}

} // namespace metrise
