#include "metrise/odesystem.hpp"

#include <algorithm>

#include "metrise/errors.hpp"

namespace metrise {

namespace {

VarsPtr ode_vars() {
    static const VarsPtr v = make_vars({"x", "y", "z", "p2", "p3"});
    return v;
}

VarsPtr ode_vars_for(const Poly& f2, const Poly& f3) {
    VarList names{"x", "y", "z", "p2", "p3"};
    for (const Poly* p : {&f2, &f3})
        for (const auto& n : *p->vars())
            if (std::find(names.begin(), names.end(), n) == names.end()) names.push_back(n);
    if (names.size() == 5) return ode_vars();
    return make_vars(std::move(names));
}

} // namespace

ODESystem make_ode_system(Poly f2, Poly f3) {
    VarsPtr vars = ode_vars_for(f2, f3);
    return {f2.remap(vars), f3.remap(vars)};
}

bool FelsResidual::is_zero() const {
    return std::all_of(s.begin(), s.end(), [](const Poly& p) { return p.is_zero(); });
}

FelsResidual fels_residual(const ODESystem& sys) {
    const std::array<const Poly*, 2> f{&sys.f2, &sys.f3};
    const std::array<std::string, 2> p{"p2", "p3"};
    // third derivatives T[i][j][k][l] = d^3 F^i / dp^j dp^k dp^l
    Poly t3[2][2][2][2];
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            Poly dj = f[static_cast<std::size_t>(i)]->derivative(p[static_cast<std::size_t>(j)]);
            for (int k = 0; k < 2; ++k) {
                Poly djk = dj.derivative(p[static_cast<std::size_t>(k)]);
                for (int l = 0; l < 2; ++l)
                    t3[i][j][k][l] = djk.derivative(p[static_cast<std::size_t>(l)]);
            }
        }
    FelsResidual out;
    VarsPtr vars = sys.f2.vars();
    for (auto& q : out.s) q = Poly(vars);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k)
                for (int l = 0; l < 2; ++l) {
                    Poly v = t3[i][j][k][l];
                    if (l == i) {
                        Poly tr = t3[0][0][j][k] + t3[1][1][j][k];
                        v -= tr * Rat(3, 4);
                    }
                    out.at(i, j, k, l) = std::move(v);
                }
    // symmetrize over (j,k,l)
    FelsResidual symd;
    for (auto& q : symd.s) q = Poly(vars);
    const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k)
                for (int l = 0; l < 2; ++l) {
                    int jkl[3] = {j, k, l};
                    Poly acc(vars);
                    for (const auto& pm : perms)
                        acc += out.at(i, jkl[pm[0]], jkl[pm[1]], jkl[pm[2]]);
                    symd.at(i, j, k, l) = acc * Rat(1, 6);
                }
    return symd;
}

ODESystem system_from_connection(const ProjectiveStructure& ps) {
    // rename coordinates to (x, y, z)
    std::map<std::string, std::string> ren{
        {ps.coords[0], "x"}, {ps.coords[1], "y"}, {ps.coords[2], "z"}};
    VarList names{"x", "y", "z", "p2", "p3"};
    for (const auto& n : *ps.gamma.vars()) {
        bool is_coord = n == ps.coords[0] || n == ps.coords[1] || n == ps.coords[2];
        if (!is_coord && std::find(names.begin(), names.end(), n) == names.end())
            names.push_back(n);
    }
    VarsPtr vars = make_vars(std::move(names));
    auto G = [&](int b, int c, int a) { return ps.gamma({b, c, a}).rename_vars(ren, vars); };
    Poly pvar[2] = {Poly::variable("p2", vars), Poly::variable("p3", vars)};

    ODESystem out{Poly(vars), Poly(vars)};
    Poly* f[2] = {&out.f2, &out.f3};
    for (int i = 0; i < 2; ++i) {
        Poly acc(vars);
        // A_{jk} p^i p^j p^k with A_{jk} = Gamma_{jk}^1
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k)
                acc += G(j + 1, k + 1, 0) * pvar[i] * pvar[j] * pvar[k];
        // B^i_{jk} p^j p^k = (Gamma_{1j}^1 delta_k^i + Gamma_{1k}^1 delta_j^i - Gamma_{jk}^i) p^j p^k
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k) {
                Poly b(vars);
                if (k == i) b += G(0, j + 1, 0);
                if (j == i) b += G(0, k + 1, 0);
                b -= G(j + 1, k + 1, i + 1);
                if (!b.is_zero()) acc += b * pvar[j] * pvar[k];
            }
        // C^i_j p^j = (Gamma_{11}^1 delta_j^i - 2 Gamma_{1j}^i) p^j
        for (int j = 0; j < 2; ++j) {
            Poly c(vars);
            if (j == i) c += G(0, 0, 0);
            c -= G(0, j + 1, i + 1) * Rat(2);
            if (!c.is_zero()) acc += c * pvar[j];
        }
        // D^i = -Gamma_{11}^i
        acc -= G(0, 0, i + 1);
        *f[i] = std::move(acc);
    }
    return out;
}

ProjectiveStructure connection_from_system(const ODESystem& sys) {
    FelsResidual fr = fels_residual(sys);
    if (!fr.is_zero())
        throw precondition_error("fels conditions fail: the system is not projective");

    VarsPtr vars = sys.f2.vars();
    // split by p-degree
    std::array<int, 2> ppos{-1, -1};
    for (std::size_t i = 0; i < vars->size(); ++i) {
        if ((*vars)[i] == "p2") ppos[0] = static_cast<int>(i);
        if ((*vars)[i] == "p3") ppos[1] = static_cast<int>(i);
    }
    // coefficient of p2^e2 p3^e3 in f, with p-degree key
    auto pcoeffs = [&](const Poly& f) {
        std::map<std::pair<unsigned, unsigned>, std::map<Expvec, Rat>> groups;
        for (const auto& t : f.terms()) {
            unsigned e2 = ppos[0] >= 0 ? t.mono[static_cast<std::size_t>(ppos[0])] : 0;
            unsigned e3 = ppos[1] >= 0 ? t.mono[static_cast<std::size_t>(ppos[1])] : 0;
            Expvec rest = t.mono;
            if (ppos[0] >= 0) rest[static_cast<std::size_t>(ppos[0])] = 0;
            if (ppos[1] >= 0) rest[static_cast<std::size_t>(ppos[1])] = 0;
            groups[{e2, e3}][rest] += t.coeff;
        }
        std::map<std::pair<unsigned, unsigned>, Poly> out;
        for (auto& [k, acc] : groups) {
            Poly q = Poly::from_terms(vars, std::move(acc));
            if (!q.is_zero()) out.emplace(k, std::move(q));
        }
        return out;
    };
    auto c2 = pcoeffs(sys.f2);
    auto c3 = pcoeffs(sys.f3);
    for (const auto& [k, p] : c2)
        if (k.first + k.second > 3)
            throw precondition_error("shape mismatch: F2 has p-degree above 3");
    for (const auto& [k, p] : c3)
        if (k.first + k.second > 3)
            throw precondition_error("shape mismatch: F3 has p-degree above 3");
    auto get = [&](std::map<std::pair<unsigned, unsigned>, Poly>& m, unsigned a, unsigned b) {
        auto it = m.find({a, b});
        return it == m.end() ? Poly(vars) : it->second;
    };

    // cubic part must be p^i A_{jk} p^j p^k with one common symmetric A
    if (!get(c2, 0, 3).is_zero() || !get(c3, 3, 0).is_zero())
        throw precondition_error("shape mismatch: cubic part is not p^i A_{jk} p^j p^k");
    Poly a22 = get(c2, 3, 0);
    Poly a23 = get(c2, 2, 1) * Rat(1, 2);
    Poly a33 = get(c2, 1, 2);
    Poly a33b = get(c3, 0, 3);
    Poly a23b = get(c3, 1, 2) * Rat(1, 2);
    Poly a22b = get(c3, 2, 1);
    if (a22 != a22b || a23 != a23b || a33 != a33b)
        throw precondition_error("inconsistent A: the two cubics disagree");

    Tensor gamma({Variance::Down, Variance::Down, Variance::Up}, Rat(0), vars);
    Poly a[2][2] = {{a22, a23}, {a23, a33}};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) gamma({i + 1, j + 1, 0}) = a[i][j];
    // Gamma_{jk}^i = -B^i_{jk}
    auto& cf2 = c2;
    auto& cf3 = c3;
    std::array<std::map<std::pair<unsigned, unsigned>, Poly>*, 2> cf{&cf2, &cf3};
    for (int i = 0; i < 2; ++i) {
        Poly b22 = get(*cf[static_cast<std::size_t>(i)], 2, 0);
        Poly b23 = get(*cf[static_cast<std::size_t>(i)], 1, 1) * Rat(1, 2);
        Poly b33 = get(*cf[static_cast<std::size_t>(i)], 0, 2);
        gamma({1, 1, i + 1}) = -b22;
        gamma({1, 2, i + 1}) = -b23;
        gamma({2, 1, i + 1}) = -b23;
        gamma({2, 2, i + 1}) = -b33;
        // Gamma_{1j}^i = -C^i_j / 2
        Poly ci2 = get(*cf[static_cast<std::size_t>(i)], 1, 0);
        Poly ci3 = get(*cf[static_cast<std::size_t>(i)], 0, 1);
        gamma({0, 1, i + 1}) = -ci2 * Rat(1, 2);
        gamma({1, 0, i + 1}) = gamma({0, 1, i + 1});
        gamma({0, 2, i + 1}) = -ci3 * Rat(1, 2);
        gamma({2, 0, i + 1}) = gamma({0, 2, i + 1});
        // Gamma_{11}^i = -D^i
        gamma({0, 0, i + 1}) = -get(*cf[static_cast<std::size_t>(i)], 0, 0);
    }

    // back to coordinate names x1, x2, x3; p2/p3 must no longer appear
    std::map<std::string, std::string> ren{{"x", "x1"}, {"y", "x2"}, {"z", "x3"}};
    VarList names{"x1", "x2", "x3"};
    for (const auto& n : *vars)
        if (n != "x" && n != "y" && n != "z" && n != "p2" && n != "p3") names.push_back(n);
    VarsPtr cvars = make_vars(std::move(names));
    Tensor out({Variance::Down, Variance::Down, Variance::Up}, Rat(0), cvars);
    for (std::size_t lin = 0; lin < gamma.size(); ++lin)
        out.at(lin) = gamma.at(lin).rename_vars(ren, cvars);
    return make_projective_structure({"x1", "x2", "x3"}, std::move(out));
}

} // namespace metrise
