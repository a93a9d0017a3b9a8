#include "metrise/metrisability.hpp"

#include "metrise/errors.hpp"

namespace metrise {

void check_sigma(const Tensor& sigma) {
    check_internal(sigma.rank() == 2 && sigma.valence()[0] == Variance::Up &&
                       sigma.valence()[1] == Variance::Up,
                   "sigma must have two up slots");
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < i; ++j)
            if (sigma({i, j}) != sigma({j, i}))
                throw precondition_error("sigma^{bc} not symmetric");
    check_internal(sigma.weight() == Rat(-2), "sigma must carry projective weight -2");
}

Tensor metrisability_residual(const ProjectiveStructure& ps, const Tensor& sigma0) {
    check_sigma(sigma0);
    Tensor sigma = sigma0;
    if (!(sigma.vars() == ps.gamma.vars() || *sigma.vars() == *ps.gamma.vars())) {
        auto [pa, pb] = aligned(Poly(sigma.vars()), Poly(ps.gamma.vars()));
        sigma = sigma.remapped(pa.vars());
    }
    Tensor nab = covariant_derivative(sigma, ps.gamma, ps.coords); // (D a, U b, U c)
    Tensor tracepart = contract(nab, 1, 0);                        // nabla_d sigma^{cd} -> (U c)
    Tensor out = nab;
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            for (int c = 0; c < 3; ++c) {
                Poly corr(out.vars());
                if (a == b) corr += tracepart({c});
                if (a == c) corr += tracepart({b});
                if (!corr.is_zero()) out({a, b, c}) -= corr * Rat(1, 4);
            }
    return out;
}

Tensor det_sigma(const Tensor& sigma) {
    check_sigma(sigma);
    auto m = [&](int i, int j) { return sigma({i, j}); };
    Poly det = m(0,0)*m(1,1)*m(2,2) + m(0,1)*m(1,2)*m(2,0) + m(0,2)*m(1,0)*m(2,1)
             - m(0,2)*m(1,1)*m(2,0) - m(0,1)*m(1,0)*m(2,2) - m(0,0)*m(1,2)*m(2,1);
    return Tensor::scalar(std::move(det), Rat(2));
}

Tensor pairing(const ProjectiveStructure& ps, const Tensor& sigma0, const Tensor& tau0) {
    check_sigma(sigma0);
    check_internal(tau0.rank() == 0 && tau0.weight() == Rat(2), "tau must be a weight-2 scalar");
    auto [pa, pb] = aligned(Poly(sigma0.vars()), Poly(ps.gamma.vars()));
    auto [pc, pd] = aligned(Poly(pa.vars()), Poly(tau0.vars()));
    const VarsPtr& vars0 = pc.vars();
    Tensor sigma = sigma0.remapped(vars0);
    Tensor tau = tau0.remapped(vars0);
    Tensor dtau = covariant_derivative(tau, ps.gamma, ps.coords);   // (D b)
    Tensor dsig = covariant_derivative(sigma, ps.gamma, ps.coords); // (D d, U b, U c)
    Tensor divsig = contract(dsig, 1, 0);                           // (U c)
    Tensor out({Variance::Up}, sigma.weight() + tau.weight(), sigma.vars());
    for (int a = 0; a < 3; ++a) {
        Poly acc(out.vars());
        for (int b = 0; b < 3; ++b) acc += sigma({a, b}) * dtau({b});
        acc -= tau.at(0) * divsig({a}) * Rat(1, 2);
        out({a}) = std::move(acc);
    }
    return out;
}

Tensor constraint_residual(const WeylV& v, const Tensor& sigma0) {
    check_sigma(sigma0);
    Tensor sigma = sigma0;
    if (!(sigma.vars() == v.v.vars() || *sigma.vars() == *v.v.vars())) {
        auto [pa, pb] = aligned(Poly(sigma.vars()), Poly(v.v.vars()));
        sigma = sigma.remapped(pa.vars());
    }
    Tensor raw = nsum("abd,cd->abc", {&v.v, &sigma});
    return symmetrize_all(raw);
}

Tensor metric_from_sigma(const Tensor& sigma) {
    Tensor det = det_sigma(sigma);
    if (det.at(0).is_zero())
        throw precondition_error("degenerate sigma: det sigma = 0");
    return outer(det, sigma); // weight 2 + (-2) = 0
}

Tensor sigma_from_metric(const Tensor& g) {
    Tensor ginv = inverse_metric(g);
    Poly det = metric_det(g);
    if (!det.is_constant())
        throw precondition_error("unsupported determinant: det g must be a rational constant");
    Rat d = det.constant_value();
    if (d < 0) d = -d;
    auto num = exact_root(rat_num(d), 4);
    auto den = exact_root(rat_den(d), 4);
    if (!num || !den)
        throw precondition_error("unsupported determinant: |det g| is not a rational fourth power");
    Rat c(*num, *den);
    Tensor sigma = ginv.scaled(c);
    sigma.set_weight(Rat(-2));
    return sigma;
}

} // namespace metrise
