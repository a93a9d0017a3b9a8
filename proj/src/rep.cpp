#include "metrise/rep.hpp"

#include <algorithm>
#include <vector>

#include "metrise/errors.hpp"

namespace metrise {

namespace {

const Sl3Weight kAlpha1{2, -1};
const Sl3Weight kAlpha2{-1, 2};
const Sl3Weight kAlpha12{1, 1};
const std::array<Sl3Weight, 3> kPositiveRoots{kAlpha1, kAlpha2, kAlpha12};
const Sl3Weight kRho{1, 1};

Sl3Weight add(const Sl3Weight& a, const Sl3Weight& b) { return {a[0] + b[0], a[1] + b[1]}; }
Sl3Weight sub(const Sl3Weight& a, const Sl3Weight& b) { return {a[0] - b[0], a[1] - b[1]}; }

// three times the invariant form in fundamental-weight coordinates
long long ip3(const Sl3Weight& l, const Sl3Weight& m) {
    return 2LL * l[0] * m[0] + l[0] * m[1] + l[1] * m[0] + 2LL * l[1] * m[1];
}

bool dominant(const Sl3Weight& w) { return w[0] >= 0 && w[1] >= 0; }

Sl3Weight dominant_of(Sl3Weight w) {
    for (;;) {
        if (w[0] < 0) w = {-w[0], w[0] + w[1]};
        else if (w[1] < 0) w = {w[0] + w[1], -w[1]};
        else return w;
    }
}

// hw - w = c1 alpha1 + c2 alpha2 with nonnegative integers, else nullopt
bool below(const Sl3Weight& hw, const Sl3Weight& w, long long* c1o = nullptr, long long* c2o = nullptr) {
    Sl3Weight u = sub(hw, w);
    long long n1 = 2LL * u[0] + u[1];
    long long n2 = u[0] + 2LL * u[1];
    if (n1 % 3 || n2 % 3) return false;
    long long c1 = n1 / 3, c2 = n2 / 3;
    if (c1 < 0 || c2 < 0) return false;
    if (c1o) *c1o = c1;
    if (c2o) *c2o = c2;
    return true;
}

std::vector<Sl3Weight> weyl_orbit(const Sl3Weight& w) {
    std::vector<Sl3Weight> orbit{w};
    for (std::size_t i = 0; i < orbit.size(); ++i) {
        Sl3Weight v = orbit[i];
        for (Sl3Weight u : {Sl3Weight{-v[0], v[0] + v[1]}, Sl3Weight{v[0] + v[1], -v[1]}})
            if (std::find(orbit.begin(), orbit.end(), u) == orbit.end()) orbit.push_back(u);
    }
    return orbit;
}

using Char = std::map<Sl3Weight, long long>;

Char char_mul(const Char& a, const Char& b) {
    Char out;
    for (const auto& [wa, ma] : a)
        for (const auto& [wb, mb] : b) out[add(wa, wb)] += ma * mb;
    for (auto it = out.begin(); it != out.end();)
        it = it->second == 0 ? out.erase(it) : std::next(it);
    return out;
}

Char adams(const Char& c, int k) {
    Char out;
    for (const auto& [w, m] : c) out[{k * w[0], k * w[1]}] += m;
    return out;
}

} // namespace

long long sl3_dim(const Sl3Weight& hw) {
    return static_cast<long long>(hw[0] + 1) * (hw[1] + 1) * (hw[0] + hw[1] + 2) / 2;
}

std::map<Sl3Weight, long long> sl3_irrep_weights(const Sl3Weight& hw) {
    check_internal(dominant(hw), "highest weight must be dominant");
    // dominant weights below hw, sorted by height of hw - w
    std::vector<std::pair<long long, Sl3Weight>> doms;
    for (long long c1 = 0; c1 <= hw[0] + hw[1] + 2; ++c1)
        for (long long c2 = 0; c2 <= hw[0] + hw[1] + 2; ++c2) {
            Sl3Weight w{static_cast<int>(hw[0] - 2 * c1 + c2), static_cast<int>(hw[1] + c1 - 2 * c2)};
            if (dominant(w) && below(hw, w)) doms.emplace_back(c1 + c2, w);
        }
    std::sort(doms.begin(), doms.end());

    std::map<Sl3Weight, long long> dommult;
    const long long chw = ip3(add(hw, kRho), add(hw, kRho));
    for (const auto& [height, lam] : doms) {
        if (height == 0) {
            dommult[lam] = 1;
            continue;
        }
        long long num = 0;
        for (const auto& alpha : kPositiveRoots) {
            for (long long k = 1;; ++k) {
                Sl3Weight mu = add(lam, {static_cast<int>(k * alpha[0]), static_cast<int>(k * alpha[1])});
                Sl3Weight dom = dominant_of(mu);
                if (!below(hw, dom)) break; // moving up in root order keeps it outside
                auto it = dommult.find(dom);
                long long m = it == dommult.end() ? 0 : it->second;
                if (m) num += m * ip3(mu, alpha);
            }
        }
        long long den = chw - ip3(add(lam, kRho), add(lam, kRho));
        check_internal(den > 0, "Freudenthal denominator must be positive");
        check_internal((2 * num) % den == 0, "Freudenthal division not exact");
        dommult[lam] = 2 * num / den;
    }

    std::map<Sl3Weight, long long> full;
    for (const auto& [lam, m] : dommult) {
        if (m == 0) continue;
        for (const auto& w : weyl_orbit(lam)) full[w] = m;
    }
    long long total = 0;
    for (const auto& [w, m] : full) total += m;
    check_internal(total == sl3_dim(hw), "weight multiset does not sum to the irrep dimension");
    return full;
}

Sl3Decomposition sl3_sym_decompose(int k, const Sl3Weight& hw) {
    if (k < 0 || k > 8 || sl3_dim(hw) > 64)
        throw precondition_error("symmetric-power input too large");
    Char base = sl3_irrep_weights(hw);
    std::vector<Char> sym(static_cast<std::size_t>(k) + 1);
    sym[0] = Char{{{0, 0}, 1}};
    for (int n = 1; n <= k; ++n) {
        Char acc;
        for (int i = 1; i <= n; ++i) {
            Char t = char_mul(adams(base, i), sym[static_cast<std::size_t>(n - i)]);
            for (const auto& [w, m] : t) acc[w] += m;
        }
        Char& target = sym[static_cast<std::size_t>(n)];
        for (const auto& [w, m] : acc) {
            check_internal(m % n == 0, "symmetric power recursion not divisible");
            if (m / n) target[w] = m / n;
        }
    }

    // peel highest weights greedily in dominance height order
    Char c = sym[static_cast<std::size_t>(k)];
    Sl3Decomposition out;
    while (!c.empty()) {
        auto best = c.begin();
        for (auto it = c.begin(); it != c.end(); ++it) {
            auto key = [](const Sl3Weight& w) { return std::pair<int, Sl3Weight>(w[0] + w[1], w); };
            if (key(it->first) > key(best->first)) best = it;
        }
        Sl3Weight lam = best->first;
        long long mult = best->second;
        check_internal(dominant(lam) && mult > 0, "peeling hit a non-dominant maximal weight");
        out[lam] += mult;
        for (const auto& [w, m] : sl3_irrep_weights(lam)) {
            long long nm = c[w] - mult * m;
            if (nm) c[w] = nm;
            else c.erase(w);
        }
    }
    long long total = 0;
    for (const auto& [w, m] : out) total += m * sl3_dim(w);
    long long n = sl3_dim(hw);
    long long expect = 1;
    for (int i = 0; i < k; ++i) expect = expect * (n + i) / (i + 1);
    check_internal(total == expect, "decomposition dimensions do not sum to dim Sym^k");
    return out;
}

std::map<int, long long> sl2_branch(const Sl3Weight& hw) {
    std::map<int, long long> weights;
    for (const auto& [w, m] : sl3_irrep_weights(hw)) weights[2 * (w[0] + w[1])] += m;
    std::map<int, long long> out;
    while (!weights.empty()) {
        int n = weights.rbegin()->first;
        long long m = weights.rbegin()->second;
        check_internal(n >= 0 && m > 0, "sl2 string peeling failed");
        out[n] += m;
        for (int w = -n; w <= n; w += 2) {
            long long nm = weights[w] - m;
            if (nm) weights[w] = nm;
            else weights.erase(w);
        }
    }
    return out;
}

Rat bundle_degree(long k, long l, long m) { return Rat(-(3 * k + 2 * l + m), 4); }

} // namespace metrise
