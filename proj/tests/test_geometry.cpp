#include <doctest.h>

#include "fixtures.hpp"
#include "metrise/geometry.hpp"

using namespace metrise;
using namespace metrise::testfix;

TEST_CASE("projective change: zero upsilon is the identity") {
    ProjectiveStructure ps = egorov();
    Tensor u({Variance::Down}, Rat(0), xvars());
    CHECK(apply_projective_change(ps, {u}).gamma == ps.gamma);
}

TEST_CASE("projective change of the flat connection by dx1") {
    auto v = xvars();
    Tensor flat({Variance::Down, Variance::Down, Variance::Up}, Rat(0), v);
    Tensor u({Variance::Down}, Rat(0), v);
    u({0}) = parse_poly("1", v);
    Tensor got = apply_projective_change({kCoords, flat}, {u}).gamma;
    CHECK(got({0, 0, 0}) == parse_poly("2", v));
    CHECK(got({0, 1, 1}) == parse_poly("1", v));
    CHECK(got({1, 0, 1}) == parse_poly("1", v));
    CHECK(got({0, 2, 2}) == parse_poly("1", v));
    CHECK(got({1, 1, 0}).is_zero());
    CHECK(got({1, 2, 0}).is_zero());
}

TEST_CASE("egorov curvature: support, trace parts, V") {
    // Gamma_23^1 = Gamma_32^1 = x2 gives R_23^1_2 = +1 under the commutator
    // convention [nabla_a,nabla_b]X^c = R_ab^c_d X^d, the same convention the
    // Newtonian fixtures below pin down. Some published tables carry the
    // opposite sign for this structure; the values here are the ones the
    // convention forces.
    CurvatureDecomposition dec = curvature(egorov());
    auto v = xvars();
    CHECK(dec.riemann({1, 2, 0, 1}) == parse_poly("1", v));
    CHECK(dec.riemann({2, 1, 0, 1}) == parse_poly("-1", v));
    int nonzero = 0;
    for (std::size_t lin = 0; lin < dec.riemann.size(); ++lin)
        if (!dec.riemann.at(lin).is_zero()) ++nonzero;
    CHECK(nonzero == 2);
    CHECK(dec.schouten.is_zero());
    CHECK(dec.beta.is_zero());
    CHECK(dec.weyl == dec.riemann);

    WeylV w = v_from_weyl(dec.weyl);
    CHECK(w.v({0, 0, 1}) == parse_poly("2", v));
    int vn = 0;
    for (std::size_t lin = 0; lin < w.v.size(); ++lin)
        if (!w.v.at(lin).is_zero()) ++vn;
    CHECK(vn == 1);
    CHECK(w.v.weight() == Rat(-4));
}

TEST_CASE("flat connection has vanishing curvature") {
    auto v = xvars();
    Tensor flat({Variance::Down, Variance::Down, Variance::Up}, Rat(0), v);
    CurvatureDecomposition dec = curvature({kCoords, flat});
    CHECK(dec.riemann.is_zero());
    CHECK(dec.weyl.is_zero());
    CHECK(dec.schouten.is_zero());
    CHECK(dec.beta.is_zero());
}

TEST_CASE("newtonian curvature: P_33 = -1/4 laplacian f, V matches the matrix") {
    auto v = xvars();
    SUBCASE("f = x1*x2") {
        CurvatureDecomposition dec = curvature(newtonian("x1*x2"));
        CHECK(dec.schouten.is_zero()); // harmonic f
        WeylV w = v_from_weyl(dec.weyl);
        CHECK(w.v({0, 0, 2}) == parse_poly("-1", v)); // -d1 d2 f
        CHECK(w.v({1, 1, 2}) == parse_poly("1", v));
        CHECK(w.v({0, 1, 2}).is_zero());
    }
    SUBCASE("f = x1^2") {
        CurvatureDecomposition dec = curvature(newtonian("x1^2"));
        CHECK(dec.schouten({2, 2}) == parse_poly("-1/2", v));
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b)
                if (a != 2 || b != 2) CHECK(dec.schouten({a, b}).is_zero());
        WeylV w = v_from_weyl(dec.weyl);
        CHECK(w.v({0, 1, 2}) == parse_poly("1", v)); // (1/2)(d1^2 - d2^2) f
        CHECK(w.v({0, 0, 2}).is_zero());
        CHECK(w.v({1, 1, 2}).is_zero());
    }
    SUBCASE("general polynomial f") {
        CurvatureDecomposition dec = curvature(newtonian("x1^3 + x1*x2^2"));
        Poly f = parse_poly("x1^3 + x1*x2^2", v);
        Poly p33 = (f.derivative("x1").derivative("x1") +
                    f.derivative("x2").derivative("x2")) * Rat(-1, 4);
        CHECK(dec.schouten({2, 2}) == p33);
    }
}

TEST_CASE("special connections have beta = 0") {
    for (const ProjectiveStructure& ps : {egorov(), newtonian("x1^2")}) {
        Poly tr(ps.gamma.vars());
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) tr += ps.gamma({a, b, b});
        CHECK(tr.is_zero());
        CHECK(curvature(ps).beta.is_zero());
    }
}

TEST_CASE("weyl tensor is projectively invariant") {
    std::mt19937_64 rng(2024);
    auto v = xvars();
    for (int trial = 0; trial < 10; ++trial) {
        ProjectiveStructure ps{kCoords, random_gamma(rng, v)};
        ProjectiveChange ch{random_upsilon(rng, v)};
        CurvatureDecomposition a = curvature(ps);
        CurvatureDecomposition b = curvature(apply_projective_change(ps, ch));
        CHECK(a.weyl == b.weyl);
    }
}

TEST_CASE("schouten change law P^ = P - nabla Y + Y x Y") {
    std::mt19937_64 rng(77);
    auto v = xvars();
    for (int trial = 0; trial < 10; ++trial) {
        ProjectiveStructure ps{kCoords, random_gamma(rng, v)};
        Tensor ups = random_upsilon(rng, v);
        CurvatureDecomposition a = curvature(ps);
        CurvatureDecomposition b = curvature(apply_projective_change(ps, {ups}));
        Tensor dU = covariant_derivative(ups, ps.gamma, kCoords);
        CHECK(b.schouten == a.schouten - dU + outer(ups, ups));
    }
}

TEST_CASE("v_from_weyl / weyl_from_v round trip") {
    std::mt19937_64 rng(31);
    auto v = xvars();
    for (int trial = 0; trial < 10; ++trial) {
        Tensor w = curvature({kCoords, random_gamma(rng, v)}).weyl;
        CHECK(weyl_from_v(v_from_weyl(w)) == w);
    }
    Tensor zero({Variance::Down, Variance::Down, Variance::Up, Variance::Down}, Rat(0), v);
    CHECK(v_from_weyl(zero).v.is_zero());
}

TEST_CASE("v_from_weyl rejects tensors without the weyl symmetries") {
    auto v = xvars();
    Tensor bad({Variance::Down, Variance::Down, Variance::Up, Variance::Down}, Rat(0), v);
    bad({0, 1, 2, 1}) = parse_poly("1", v); // not skew in ab
    CHECK_THROWS_AS(v_from_weyl(bad), precondition_error);
}

TEST_CASE("levi-civita of constant diagonal metrics is flat") {
    auto v = xvars();
    Tensor g({Variance::Down, Variance::Down}, Rat(0), v);
    g({0, 0}) = parse_poly("1", v);
    g({1, 1}) = parse_poly("4", v);
    g({2, 2}) = parse_poly("9", v);
    CHECK(levi_civita(kCoords, g).gamma.is_zero());
}

TEST_CASE("levi-civita rejects degenerate metrics") {
    auto v = xvars();
    Tensor g({Variance::Down, Variance::Down}, Rat(0), v);
    g({0, 0}) = parse_poly("1", v);
    g({1, 1}) = parse_poly("1", v);
    CHECK_THROWS_AS(levi_civita(kCoords, g), precondition_error);
}

TEST_CASE("heisenberg levi-civita: det g = -1, exact inverse, nabla g = 0") {
    auto v = xvars();
    Tensor g = heisenberg_metric(v);
    CHECK(metric_det(g) == parse_poly("-1", v));
    ProjectiveStructure lc = levi_civita(kCoords, g);
    CHECK(covariant_derivative(g.remapped(lc.gamma.vars()), lc.gamma, kCoords).is_zero());
    Tensor ginv = inverse_metric(g);
    CHECK(ginv({0, 0}) == parse_poly("1", v));
    CHECK(ginv({1, 1}) == parse_poly("-1", v));
    CHECK(ginv({1, 2}) == parse_poly("-x1", v));
    CHECK(ginv({2, 2}) == parse_poly("1 - x1^2", v));
}

TEST_CASE("weyl connection compatibility and rescaling") {
    WeylStructure ws = heisenberg();
    ProjectiveStructure d = weyl_connection(ws); // asserts D g = omega x g internally
    SUBCASE("omega = 0 reduces to levi-civita") {
        WeylStructure plain{kCoords, ws.metric, Tensor({Variance::Down}, Rat(0), ws.metric.vars())};
        CHECK(weyl_connection(plain).gamma == levi_civita(kCoords, ws.metric).gamma);
    }
    SUBCASE("constant rescaling g -> c^2 g leaves the connection unchanged") {
        WeylStructure scaled{kCoords, ws.metric.scaled(Rat(9)), ws.one_form};
        CHECK(weyl_connection(scaled).gamma == d.gamma);
    }
}

TEST_CASE("connection with prescribed weyl curvature at the origin") {
    std::mt19937_64 rng(9001);
    auto v = xvars();
    for (int trial = 0; trial < 20; ++trial) {
        Tensor w0full = curvature({kCoords, random_gamma(rng, v)}).weyl;
        std::map<std::string, Rat> pt{{"x1", Rat(1)}, {"x2", Rat(-2)}, {"x3", Rat(1, 2)}};
        Tensor w0 = w0full.substituted(pt);
        ProjectiveStructure ps = connection_with_given_weyl(w0, kCoords);
        Tensor wat0 = curvature(ps).weyl.substituted(
            {{"x1", Rat(0)}, {"x2", Rat(0)}, {"x3", Rat(0)}});
        CHECK(wat0 == w0);
    }
    Tensor zero({Variance::Down, Variance::Down, Variance::Up, Variance::Down}, Rat(0), v);
    CHECK(connection_with_given_weyl(zero, kCoords).gamma.is_zero());

    // the egorov weyl tensor is constant, so it can be prescribed directly
    Tensor w_eg = curvature(egorov()).weyl;
    ProjectiveStructure rec = connection_with_given_weyl(w_eg, kCoords);
    CHECK(curvature(rec).weyl.substituted({{"x1", Rat(0)}, {"x2", Rat(0)}, {"x3", Rat(0)}}) == w_eg);
}

TEST_CASE("einstein-weyl data for the heisenberg structure") {
    EinsteinWeylData data = einstein_weyl_data(heisenberg());
    auto v = data.phi.vars();
    CHECK(data.phi.is_zero()); // Einstein-Weyl
    CHECK(data.faraday({0, 1}) == Poly::constant(Rat(-1), v));
    CHECK(data.faraday({1, 0}) == Poly::constant(Rat(1), v));
    CHECK(data.f({2}) == Poly::constant(Rat(-1), v));
    CHECK(data.f({0}).is_zero());
    CHECK(data.f({1}).is_zero());
}

TEST_CASE("exact one-forms on flat metrics have zero faraday form") {
    auto v = xvars();
    Tensor g({Variance::Down, Variance::Down}, Rat(0), v);
    for (int i = 0; i < 3; ++i) g({i, i}) = parse_poly("1", v);
    Tensor om({Variance::Down}, Rat(0), v);
    om({0}) = parse_poly("3", v); // omega = d(3 x1 - 2 x3)
    om({2}) = parse_poly("-2", v);
    EinsteinWeylData data = einstein_weyl_data({kCoords, g, om});
    CHECK(data.faraday.is_zero());
    CHECK(data.f.is_zero());
}
