#include "metrise/tensor.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

#include "metrise/errors.hpp"

namespace metrise {

namespace {

std::size_t pow3(int k) {
    std::size_t n = 1;
    while (k-- > 0) n *= 3;
    return n;
}

int perm_sign(std::vector<int> p) {
    int sign = 1;
    for (std::size_t i = 0; i < p.size(); ++i) {
        while (p[i] != static_cast<int>(i)) {
            std::swap(p[i], p[static_cast<std::size_t>(p[i])]);
            sign = -sign;
        }
    }
    return sign;
}

} // namespace

Tensor::Tensor(std::vector<Variance> valence, Rat weight, VarsPtr vars)
    : valence_(std::move(valence)), weight_(std::move(weight)), vars_(std::move(vars)) {
    comp_.assign(pow3(rank()), Poly(vars_));
}

Tensor Tensor::scalar(Poly value, Rat weight) {
    Tensor t({}, std::move(weight), value.vars());
    t.comp_[0] = std::move(value);
    return t;
}

Tensor Tensor::zero(std::vector<Variance> valence, Rat weight, VarsPtr vars) {
    return Tensor(std::move(valence), std::move(weight), std::move(vars));
}

Tensor Tensor::delta(VarsPtr vars) {
    Tensor t({Variance::Down, Variance::Up}, Rat(0), vars);
    for (int i = 0; i < 3; ++i) t({i, i}) = Poly::constant(Rat(1), vars);
    return t;
}

namespace {
Tensor eps_impl(VarsPtr vars, Variance v, Rat w) {
    Tensor t({v, v, v}, std::move(w), vars);
    const int plus[3][3] = {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}};
    const int minus[3][3] = {{2, 1, 0}, {1, 0, 2}, {0, 2, 1}};
    for (auto& p : plus) t({p[0], p[1], p[2]}) = Poly::constant(Rat(1), vars);
    for (auto& p : minus) t({p[0], p[1], p[2]}) = Poly::constant(Rat(-1), vars);
    return t;
}
} // namespace

Tensor Tensor::eps_down(VarsPtr vars) { return eps_impl(std::move(vars), Variance::Down, Rat(4)); }
Tensor Tensor::eps_up(VarsPtr vars) { return eps_impl(std::move(vars), Variance::Up, Rat(-4)); }

std::size_t Tensor::encode(const std::vector<int>& idx) const {
    check_internal(idx.size() == valence_.size(), "index arity mismatch");
    std::size_t lin = 0;
    for (int v : idx) {
        check_internal(v >= 0 && v < 3, "index out of range");
        lin = lin * 3 + static_cast<std::size_t>(v);
    }
    return lin;
}

std::vector<int> Tensor::decode(std::size_t lin) const {
    std::vector<int> idx(valence_.size());
    for (int i = rank() - 1; i >= 0; --i) {
        idx[static_cast<std::size_t>(i)] = static_cast<int>(lin % 3);
        lin /= 3;
    }
    return idx;
}

bool Tensor::is_zero() const {
    return std::all_of(comp_.begin(), comp_.end(), [](const Poly& p) { return p.is_zero(); });
}

bool Tensor::operator==(const Tensor& o) const {
    if (valence_ != o.valence_ || weight_ != o.weight_) return false;
    for (std::size_t i = 0; i < comp_.size(); ++i)
        if (comp_[i] != o.comp_[i]) return false;
    return true;
}

Tensor Tensor::operator-() const {
    Tensor t = *this;
    for (auto& p : t.comp_) p = -p;
    return t;
}

Tensor operator+(const Tensor& a, const Tensor& b) {
    if (a.valence_ != b.valence_)
        throw precondition_error("tensor addition with mismatched valences");
    if (a.weight_ != b.weight_)
        throw precondition_error("tensor addition with mismatched weights");
    Tensor t = a;
    for (std::size_t i = 0; i < t.comp_.size(); ++i) t.comp_[i] += b.comp_[i];
    return t;
}

Tensor operator-(const Tensor& a, const Tensor& b) { return a + (-b); }

Tensor Tensor::scaled(const Rat& c) const {
    Tensor t = *this;
    for (auto& p : t.comp_) p = p * c;
    return t;
}

Tensor Tensor::scaled(const Poly& p) const {
    Tensor t = *this;
    for (auto& q : t.comp_) q = q * p;
    return t;
}

Tensor Tensor::substituted(const std::map<std::string, Rat>& point) const {
    Tensor t = *this;
    for (auto& p : t.comp_) p = p.substitute(point);
    return t;
}

Tensor Tensor::remapped(const VarsPtr& vars) const {
    Tensor t = *this;
    t.vars_ = vars;
    for (auto& p : t.comp_) p = p.remap(vars);
    return t;
}

std::string Tensor::str(const std::string& name) const {
    std::ostringstream os;
    bool any = false;
    for (std::size_t lin = 0; lin < comp_.size(); ++lin) {
        if (comp_[lin].is_zero()) continue;
        auto idx = decode(lin);
        os << name << "[";
        for (std::size_t i = 0; i < idx.size(); ++i)
            os << (i ? "," : "") << idx[i] + 1;
        os << "] = " << comp_[lin].str() << "\n";
        any = true;
    }
    if (!any) os << name << " = 0\n";
    return os.str();
}

Tensor outer(const Tensor& a, const Tensor& b) { return mul_contract(a, b, {}); }

Tensor contract(const Tensor& t, int i, int j) {
    if (i < 0 || j < 0 || i >= t.rank() || j >= t.rank() || i == j)
        throw precondition_error("contraction slots out of range");
    if (t.valence()[static_cast<std::size_t>(i)] != Variance::Up ||
        t.valence()[static_cast<std::size_t>(j)] != Variance::Down)
        throw precondition_error("contraction requires an (up, down) slot pair");
    std::vector<Variance> val;
    std::vector<int> keep;
    for (int s = 0; s < t.rank(); ++s)
        if (s != i && s != j) {
            val.push_back(t.valence()[static_cast<std::size_t>(s)]);
            keep.push_back(s);
        }
    Tensor out(val, t.weight(), t.vars());
    std::vector<int> idx(static_cast<std::size_t>(t.rank()), 0);
    for (std::size_t lin = 0; lin < out.size(); ++lin) {
        auto oidx = out.decode(lin);
        for (std::size_t s = 0; s < keep.size(); ++s)
            idx[static_cast<std::size_t>(keep[s])] = oidx[s];
        Poly sum(t.vars());
        for (int v = 0; v < 3; ++v) {
            idx[static_cast<std::size_t>(i)] = v;
            idx[static_cast<std::size_t>(j)] = v;
            sum += t(idx);
        }
        out.at(lin) = std::move(sum);
    }
    return out;
}

Tensor mul_contract(const Tensor& a, const Tensor& b,
                    const std::vector<std::pair<int, int>>& pairs) {
    std::vector<bool> aBound(static_cast<std::size_t>(a.rank()), false);
    std::vector<bool> bBound(static_cast<std::size_t>(b.rank()), false);
    for (auto [i, j] : pairs) {
        if (i < 0 || i >= a.rank() || j < 0 || j >= b.rank())
            throw precondition_error("contraction slot out of range");
        if (a.valence()[static_cast<std::size_t>(i)] == b.valence()[static_cast<std::size_t>(j)])
            throw precondition_error("contraction requires opposite variances");
        check_internal(!aBound[static_cast<std::size_t>(i)] && !bBound[static_cast<std::size_t>(j)],
                       "slot contracted twice");
        aBound[static_cast<std::size_t>(i)] = true;
        bBound[static_cast<std::size_t>(j)] = true;
    }
    std::vector<int> aFree, bFree;
    std::vector<Variance> val;
    for (int s = 0; s < a.rank(); ++s)
        if (!aBound[static_cast<std::size_t>(s)]) {
            aFree.push_back(s);
            val.push_back(a.valence()[static_cast<std::size_t>(s)]);
        }
    for (int s = 0; s < b.rank(); ++s)
        if (!bBound[static_cast<std::size_t>(s)]) {
            bFree.push_back(s);
            val.push_back(b.valence()[static_cast<std::size_t>(s)]);
        }
    VarsPtr vars = a.vars();
    if (!(vars == b.vars() || *vars == *b.vars())) {
        auto [pa, pb] = aligned(Poly(a.vars()), Poly(b.vars()));
        vars = pa.vars();
        return mul_contract(a.remapped(vars), b.remapped(vars), pairs);
    }

    Tensor out(val, a.weight() + b.weight(), vars);
    const std::size_t nb = pairs.size();
    std::vector<int> ia(static_cast<std::size_t>(a.rank()), 0);
    std::vector<int> ib(static_cast<std::size_t>(b.rank()), 0);
    std::vector<int> bound(nb, 0);
    for (std::size_t lin = 0; lin < out.size(); ++lin) {
        auto oidx = out.decode(lin);
        for (std::size_t s = 0; s < aFree.size(); ++s)
            ia[static_cast<std::size_t>(aFree[s])] = oidx[s];
        for (std::size_t s = 0; s < bFree.size(); ++s)
            ib[static_cast<std::size_t>(bFree[s])] = oidx[aFree.size() + s];
        Poly sum(vars);
        std::fill(bound.begin(), bound.end(), 0);
        for (;;) {
            for (std::size_t k = 0; k < nb; ++k) {
                ia[static_cast<std::size_t>(pairs[k].first)] = bound[k];
                ib[static_cast<std::size_t>(pairs[k].second)] = bound[k];
            }
            const Poly& pa = a(ia);
            if (!pa.is_zero()) {
                const Poly& pb = b(ib);
                if (!pb.is_zero()) sum += pa * pb;
            }
            std::size_t k = 0;
            for (; k < nb; ++k) {
                if (++bound[k] < 3) break;
                bound[k] = 0;
            }
            if (k == nb) break;
        }
        out.at(lin) = std::move(sum);
    }
    return out;
}

namespace {

// Shared core: average (signed for antisymmetric) over permutations of the
// given slots, computed once per sorted key and fanned out.
Tensor sym_impl(const Tensor& t, const std::vector<int>& slots, bool anti) {
    const std::size_t n = slots.size();
    if (n < 2) return t;
    Variance v = t.valence()[static_cast<std::size_t>(slots[0])];
    for (int s : slots) {
        if (s < 0 || s >= t.rank()) throw precondition_error("symmetrization slot out of range");
        if (t.valence()[static_cast<std::size_t>(s)] != v)
            throw precondition_error("symmetrization over mixed variances");
    }
    std::vector<std::vector<int>> perms;
    std::vector<int> p(n);
    std::iota(p.begin(), p.end(), 0);
    do { perms.push_back(p); } while (std::next_permutation(p.begin(), p.end()));
    const Rat norm = Rat(1, static_cast<long>(perms.size()));

    Tensor out(t.valence(), t.weight(), t.vars());
    // memo over (index with slot-values sorted) -> averaged value
    std::map<std::vector<int>, Poly> memo;
    std::vector<int> work(static_cast<std::size_t>(t.rank()));
    for (std::size_t lin = 0; lin < out.size(); ++lin) {
        auto idx = out.decode(lin);
        std::vector<int> sub(n);
        for (std::size_t k = 0; k < n; ++k) sub[k] = idx[static_cast<std::size_t>(slots[k])];
        std::vector<int> sorted = sub;
        std::sort(sorted.begin(), sorted.end());
        int outer_sign = 1;
        if (anti) {
            // sign of the arrangement relative to sorted; zero on repeats
            bool repeat = false;
            for (std::size_t k = 1; k < n; ++k)
                if (sorted[k] == sorted[k - 1]) repeat = true;
            if (repeat) continue; // leaves zero
            std::vector<int> arr(n);
            for (std::size_t k = 0; k < n; ++k)
                arr[k] = static_cast<int>(std::find(sorted.begin(), sorted.end(), sub[k]) - sorted.begin());
            outer_sign = perm_sign(arr);
        }
        std::vector<int> key = idx;
        for (std::size_t k = 0; k < n; ++k) key[static_cast<std::size_t>(slots[k])] = sorted[k];
        auto it = memo.find(key);
        if (it == memo.end()) {
            Poly acc(t.vars());
            for (const auto& perm : perms) {
                work = key;
                for (std::size_t k = 0; k < n; ++k)
                    work[static_cast<std::size_t>(slots[k])] = sorted[static_cast<std::size_t>(perm[k])];
                const Poly& val = t(work);
                if (val.is_zero()) continue;
                if (anti && perm_sign(perm) < 0) acc -= val;
                else acc += val;
            }
            it = memo.emplace(key, acc * norm).first;
        }
        out.at(lin) = outer_sign < 0 ? -it->second : it->second;
    }
    return out;
}

} // namespace

Tensor symmetrize(const Tensor& t, const std::vector<int>& slots) { return sym_impl(t, slots, false); }
Tensor antisymmetrize(const Tensor& t, const std::vector<int>& slots) { return sym_impl(t, slots, true); }

Tensor symmetrize_all(const Tensor& t) {
    std::vector<int> slots(static_cast<std::size_t>(t.rank()));
    std::iota(slots.begin(), slots.end(), 0);
    return sym_impl(t, slots, false);
}

Tensor permute_slots(const Tensor& t, const std::vector<int>& perm) {
    check_internal(perm.size() == t.valence().size(), "permutation arity mismatch");
    std::vector<Variance> val(perm.size());
    for (std::size_t i = 0; i < perm.size(); ++i)
        val[i] = t.valence()[static_cast<std::size_t>(perm[i])];
    Tensor out(val, t.weight(), t.vars());
    std::vector<int> src(perm.size());
    for (std::size_t lin = 0; lin < out.size(); ++lin) {
        auto idx = out.decode(lin);
        for (std::size_t i = 0; i < perm.size(); ++i)
            src[static_cast<std::size_t>(perm[i])] = idx[i];
        out.at(lin) = t(src);
    }
    return out;
}

Tensor covariant_derivative(const Tensor& t, const Tensor& gamma,
                            const std::array<std::string, 3>& coords) {
    check_internal(gamma.rank() == 3 &&
                       gamma.valence()[0] == Variance::Down &&
                       gamma.valence()[1] == Variance::Down &&
                       gamma.valence()[2] == Variance::Up,
                   "christoffel valence");
    VarsPtr vars = t.vars();
    Tensor tt = t;
    Tensor gg = gamma;
    if (!(vars == gamma.vars() || *vars == *gamma.vars())) {
        auto [pa, pb] = aligned(Poly(t.vars()), Poly(gamma.vars()));
        vars = pa.vars();
        tt = t.remapped(vars);
        gg = gamma.remapped(vars);
    }
    // contracted christoffel Gamma_ab^b per direction a
    std::array<Poly, 3> gtrace{Poly(vars), Poly(vars), Poly(vars)};
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) gtrace[static_cast<std::size_t>(a)] += gg({a, b, b});

    std::vector<Variance> val;
    val.push_back(Variance::Down);
    for (auto v : tt.valence()) val.push_back(v);
    Tensor out(val, tt.weight(), vars);
    const Rat w4 = tt.weight() / 4;
    std::vector<int> src(static_cast<std::size_t>(tt.rank()));
    for (std::size_t lin = 0; lin < out.size(); ++lin) {
        auto idx = out.decode(lin);
        const int a = idx[0];
        for (std::size_t i = 0; i < src.size(); ++i) src[i] = idx[i + 1];
        Poly acc = tt(src).derivative(coords[static_cast<std::size_t>(a)]);
        for (int s = 0; s < tt.rank(); ++s) {
            const int is = src[static_cast<std::size_t>(s)];
            std::vector<int> alt = src;
            if (tt.valence()[static_cast<std::size_t>(s)] == Variance::Up) {
                for (int e = 0; e < 3; ++e) {
                    const Poly& g = gg({a, e, is});
                    if (g.is_zero()) continue;
                    alt[static_cast<std::size_t>(s)] = e;
                    const Poly& val2 = tt(alt);
                    if (!val2.is_zero()) acc += g * val2;
                }
            } else {
                for (int e = 0; e < 3; ++e) {
                    const Poly& g = gg({a, is, e});
                    if (g.is_zero()) continue;
                    alt[static_cast<std::size_t>(s)] = e;
                    const Poly& val2 = tt(alt);
                    if (!val2.is_zero()) acc -= g * val2;
                }
            }
        }
        if (w4 != 0 && !gtrace[static_cast<std::size_t>(a)].is_zero())
            acc += gtrace[static_cast<std::size_t>(a)] * tt(src) * w4;
        out.at(lin) = std::move(acc);
    }
    return out;
}

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= s.size(); ++i) {
        if (i == s.size() || s[i] == sep) {
            out.push_back(s.substr(start, i - start));
            start = i + 1;
        }
    }
    return out;
}

} // namespace

Tensor nsum(const std::string& spec, const std::vector<const Tensor*>& factors) {
    auto arrow = spec.find("->");
    check_internal(arrow != std::string::npos, "nsum spec needs '->'");
    auto lhs = split(spec.substr(0, arrow), ',');
    std::string want = spec.substr(arrow + 2);
    check_internal(lhs.size() == factors.size(), "nsum arity mismatch");

    // one label per slot in slot order; the variance comes from the tensor
    struct Slot { char label; Variance v; };
    std::vector<std::vector<Slot>> labels(lhs.size());
    for (std::size_t f = 0; f < lhs.size(); ++f) {
        check_internal(static_cast<int>(lhs[f].size()) == factors[f]->rank(),
                       "nsum factor rank mismatch");
        for (std::size_t s = 0; s < lhs[f].size(); ++s)
            labels[f].push_back({lhs[f][s], factors[f]->valence()[s]});
    }

    Tensor acc = *factors[0];
    std::vector<Slot> open = labels[0];
    for (std::size_t f = 1; f < lhs.size(); ++f) {
        std::vector<std::pair<int, int>> pairs;
        for (std::size_t i = 0; i < open.size(); ++i)
            for (std::size_t j = 0; j < labels[f].size(); ++j)
                if (open[i].label == labels[f][j].label) {
                    check_internal(open[i].v != labels[f][j].v,
                                   std::string("nsum label '") + open[i].label +
                                       "' contracts equal variances");
                    pairs.emplace_back(static_cast<int>(i), static_cast<int>(j));
                }
        acc = mul_contract(acc, *factors[f], pairs);
        std::vector<Slot> next;
        std::vector<bool> aB(open.size(), false), bB(labels[f].size(), false);
        for (auto [i, j] : pairs) {
            aB[static_cast<std::size_t>(i)] = true;
            bB[static_cast<std::size_t>(j)] = true;
        }
        for (std::size_t i = 0; i < open.size(); ++i)
            if (!aB[i]) next.push_back(open[i]);
        for (std::size_t j = 0; j < labels[f].size(); ++j)
            if (!bB[j]) next.push_back(labels[f][j]);
        open = std::move(next);
    }

    check_internal(open.size() == want.size(), "nsum output arity mismatch");
    std::vector<int> perm;
    for (char c : want) {
        auto it = std::find_if(open.begin(), open.end(), [c](const Slot& s) { return s.label == c; });
        check_internal(it != open.end(), std::string("nsum output label '") + c + "' not free");
        perm.push_back(static_cast<int>(it - open.begin()));
    }
    return permute_slots(acc, perm);
}

} // namespace metrise
