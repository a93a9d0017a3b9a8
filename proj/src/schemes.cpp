#include "metrise/schemes.hpp"

#include <algorithm>
#include <future>
#include <thread>
#include <numeric>
#include <set>

#include "metrise/errors.hpp"
#include "metrise/rep.hpp"

namespace metrise {

namespace {

// strided worker pool: item i is handled by thread i % nthreads, so results
// written at index i are independent of the thread count
template <typename Fn>
void run_indexed(std::size_t n, Fn&& fn) {
    unsigned nthreads = std::min<unsigned>(std::thread::hardware_concurrency(), 4u);
    if (nthreads < 2 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::future<void>> workers;
    for (unsigned t = 0; t < nthreads; ++t)
        workers.push_back(std::async(std::launch::async, [&, t]() {
            for (std::size_t i = t; i < n; i += nthreads) fn(i);
        }));
    for (auto& w : workers) w.get();
}

// minimum lexicographic encoding over vertex permutations x per-vertex slot
// swaps; the encoding lists (target, slot) by source vertex
std::vector<std::pair<int, int>> canonical_matching(int d, const std::vector<std::pair<int, int>>& m) {
    std::vector<int> perm(static_cast<std::size_t>(d));
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<std::pair<int, int>> best;
    std::vector<std::pair<int, int>> cand(static_cast<std::size_t>(d));
    do {
        for (unsigned flips = 0; flips < (1u << d); ++flips) {
            // perm maps old vertex -> new vertex; flip bit v swaps slots at new vertex v
            for (int vsrc = 0; vsrc < d; ++vsrc) {
                auto [w, s] = m[static_cast<std::size_t>(vsrc)];
                int nw = perm[static_cast<std::size_t>(w)];
                int ns = (flips >> nw) & 1u ? 1 - s : s;
                cand[static_cast<std::size_t>(perm[static_cast<std::size_t>(vsrc)])] = {nw, ns};
            }
            if (best.empty() || cand < best) best = cand;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

} // namespace

std::vector<ContractionScheme> enumerate_schemes(int d) {
    if (d < 2 || d > 6) throw precondition_error("scheme degree must be between 2 and 6");
    // Per-vertex slot swaps never change the evaluated covariant (V is
    // symmetric in its upper pair), so matchings are first grouped by the
    // underlying functional digraph and the full-group canonical encoding is
    // computed once per class.
    std::set<std::vector<int>> digraphs;
    std::vector<int> m(static_cast<std::size_t>(d), 0);
    std::vector<int> indeg(static_cast<std::size_t>(d));
    for (;;) {
        bool ok = true;
        std::fill(indeg.begin(), indeg.end(), 0);
        for (int v = 0; v < d && ok; ++v) {
            if (m[static_cast<std::size_t>(v)] == v) ok = false; // trace-free: no self-match
            else if (++indeg[static_cast<std::size_t>(m[static_cast<std::size_t>(v)])] > 2) ok = false;
        }
        if (ok) {
            // canonicalise the digraph by vertex relabeling
            std::vector<int> perm(static_cast<std::size_t>(d));
            std::iota(perm.begin(), perm.end(), 0);
            std::vector<int> best, cand(static_cast<std::size_t>(d));
            do {
                for (int v = 0; v < d; ++v)
                    cand[static_cast<std::size_t>(perm[static_cast<std::size_t>(v)])] =
                        perm[static_cast<std::size_t>(m[static_cast<std::size_t>(v)])];
                if (best.empty() || cand < best) best = cand;
            } while (std::next_permutation(perm.begin(), perm.end()));
            digraphs.insert(best);
        }
        int k = 0;
        for (; k < d; ++k) {
            if (++m[static_cast<std::size_t>(k)] < d) break;
            m[static_cast<std::size_t>(k)] = 0;
        }
        if (k == d) break;
    }

    std::vector<ContractionScheme> out;
    for (const auto& g : digraphs) {
        // assign slots first-come per target, then canonicalise over the full group
        std::vector<int> used(static_cast<std::size_t>(d), 0);
        std::vector<std::pair<int, int>> match(static_cast<std::size_t>(d));
        for (int v = 0; v < d; ++v) {
            int w = g[static_cast<std::size_t>(v)];
            match[static_cast<std::size_t>(v)] = {w, used[static_cast<std::size_t>(w)]++};
        }
        ContractionScheme s{d, canonical_matching(d, match)};
        out.push_back(std::move(s));
    }
    std::sort(out.begin(), out.end());
    return out;
}

Tensor evaluate_scheme(const ContractionScheme& s, const WeylV& v) {
    const int d = s.degree;
    // labels: vertex k uppers are letters 2k, 2k+1; its lower contracts the
    // matched upper slot
    auto up_label = [](int vertex, int slot) { return static_cast<char>('a' + 2 * vertex + slot); };
    std::vector<bool> matched(static_cast<std::size_t>(2 * d), false);
    std::string spec;
    for (int k = 0; k < d; ++k) {
        auto [w, slot] = s.matching[static_cast<std::size_t>(k)];
        matched[static_cast<std::size_t>(2 * w + slot)] = true;
    }
    for (int k = 0; k < d; ++k) {
        auto [w, slot] = s.matching[static_cast<std::size_t>(k)];
        if (k) spec += ",";
        spec += up_label(k, 0);
        spec += up_label(k, 1);
        spec += up_label(w, slot);
    }
    spec += "->";
    for (int k = 0; k < d; ++k)
        for (int slot = 0; slot < 2; ++slot)
            if (!matched[static_cast<std::size_t>(2 * k + slot)]) spec += up_label(k, slot);
    std::vector<const Tensor*> factors(static_cast<std::size_t>(d), &v.v);
    return symmetrize_all(nsum(spec, factors));
}

namespace {

// sorted multi-indices of length d over {0,1,2}
std::vector<std::vector<int>> sorted_indices(int d) {
    std::vector<std::vector<int>> out;
    std::vector<int> idx(static_cast<std::size_t>(d), 0);
    for (;;) {
        if (std::is_sorted(idx.begin(), idx.end())) out.push_back(idx);
        int k = d - 1;
        for (; k >= 0; --k) {
            if (++idx[static_cast<std::size_t>(k)] < 3) break;
            idx[static_cast<std::size_t>(k)] = 0;
        }
        if (k < 0) break;
    }
    return out;
}

// row of distinct symmetrized components (as integers) at an integer V
std::vector<Int> integer_row(const ContractionScheme& s, const WeylV& v,
                             const std::vector<std::vector<int>>& keys) {
    Tensor t = evaluate_scheme(s, v);
    std::vector<Int> row;
    row.reserve(keys.size());
    for (const auto& k : keys) {
        const Poly& p = t(k);
        Rat val = p.is_zero() ? Rat(0) : p.constant_value();
        // symmetrized values of integer schemes are rationals with a d!
        // denominator; rescale to integers for the fraction-free elimination
        Rat scaled = val * Rat(720);
        check_internal(rat_den(scaled) == 1, "scheme evaluation not integral after rescale");
        row.push_back(rat_num(scaled));
    }
    return row;
}

} // namespace

SpanReport span_analysis(int d, bool certify_symbolic) {
    SpanReport rep;
    rep.degree = d;
    rep.generic_seed = 0x9e3779b97f4a7c15ull + static_cast<std::uint64_t>(d);
    rep.metric_seed = 0xc2b2ae3d27d4eb4full + static_cast<std::uint64_t>(d);

    std::vector<ContractionScheme> schemes = enumerate_schemes(d);
    rep.scheme_count = static_cast<int>(schemes.size());
    auto keys = sorted_indices(d);
    const int npts = 6;

    std::mt19937_64 grng(rep.generic_seed);
    std::vector<WeylV> gpts;
    for (int i = 0; i < npts; ++i) gpts.push_back(random_integer_v(grng));
    std::mt19937_64 mrng(rep.metric_seed);
    std::vector<WeylV> mpts;
    for (int i = 0; i < npts; ++i) mpts.push_back(random_metric_form_v(mrng));

    // per-scheme evaluation is embarrassingly parallel; results land at
    // fixed indices, so the merge is deterministic whatever the thread count
    IntMatrix mg(schemes.size()), mm(schemes.size());
    run_indexed(schemes.size(), [&](std::size_t i) {
        std::vector<Int> rowg, rowm;
        for (const auto& v : gpts) {
            auto r = integer_row(schemes[i], v, keys);
            rowg.insert(rowg.end(), r.begin(), r.end());
        }
        for (const auto& v : mpts) {
            auto r = integer_row(schemes[i], v, keys);
            rowm.insert(rowm.end(), r.begin(), r.end());
        }
        mg[i] = std::move(rowg);
        mm[i] = std::move(rowm);
    });
    rep.span_dim = bareiss_rank(mg);
    int metric_rank = bareiss_rank(mm);
    rep.vanishing_dim = rep.span_dim - metric_rank;

    // rank at sample points bounds the span from below; the multiplicity of
    // (0,d) in Sym^d of the 15-dimensional module bounds it from above
    auto dec = sl3_sym_decompose(d, {1, 2});
    auto it = dec.find({0, d});
    rep.rep_multiplicity = it == dec.end() ? 0 : it->second;
    rep.complete = rep.span_dim == rep.rep_multiplicity;
    check_internal(rep.span_dim <= rep.rep_multiplicity,
                   "span rank exceeds the representation-theoretic multiplicity");

    // kernel of the transposed evaluation maps: combinations over schemes
    auto transpose_rat = [](const IntMatrix& m) {
        RatMatrix t(m.empty() ? 0 : m[0].size(), std::vector<Rat>(m.size()));
        for (std::size_t i = 0; i < m.size(); ++i)
            for (std::size_t j = 0; j < m[i].size(); ++j) t[j][i] = Rat(m[i][j]);
        return t;
    };
    auto kg = kernel_basis(transpose_rat(mg), static_cast<int>(schemes.size())); // relations
    auto km = kernel_basis(transpose_rat(mm), static_cast<int>(schemes.size()));

    // representatives of ker(metric)/ker(generic): reduce km against kg
    RatMatrix red;
    for (const auto& row : kg) red.push_back(row);
    rref(red);
    auto reduce = [&](std::vector<Rat> vec) {
        for (const auto& row : red) {
            int pivot = -1;
            for (std::size_t j = 0; j < row.size(); ++j)
                if (row[j] != 0) { pivot = static_cast<int>(j); break; }
            if (pivot < 0) continue;
            const Rat f = vec[static_cast<std::size_t>(pivot)];
            if (f == 0) continue;
            for (std::size_t j = 0; j < vec.size(); ++j) vec[j] -= f * row[j];
        }
        return vec;
    };
    RatMatrix quot;
    for (const auto& vec : km) {
        auto r = reduce(vec);
        if (std::any_of(r.begin(), r.end(), [](const Rat& x) { return x != 0; }))
            quot.push_back(std::move(r));
    }
    rref(quot);
    quot.erase(std::remove_if(quot.begin(), quot.end(),
                              [](const std::vector<Rat>& r) {
                                  return std::all_of(r.begin(), r.end(),
                                                     [](const Rat& x) { return x == 0; });
                              }),
               quot.end());
    rep.vanishing_basis = quot;
    check_internal(static_cast<int>(quot.size()) == rep.vanishing_dim,
                   "vanishing basis dimension mismatch");

    if (certify_symbolic) {
        MetricFamily fam = metric_form_family();
        std::vector<bool> needed(schemes.size(), false);
        for (const auto& combo : rep.vanishing_basis)
            for (std::size_t i = 0; i < combo.size(); ++i)
                if (combo[i] != 0) needed[i] = true;
        std::vector<Tensor> symbolic(schemes.size());
        run_indexed(schemes.size(), [&](std::size_t i) {
            if (needed[i]) symbolic[i] = evaluate_scheme(schemes[i], fam.v);
        });
        rep.vanishing_certified = true;
        for (const auto& combo : rep.vanishing_basis) {
            Tensor acc;
            bool first = true;
            for (std::size_t i = 0; i < combo.size(); ++i) {
                if (combo[i] == 0) continue;
                Tensor part = symbolic[i].scaled(combo[i]);
                acc = first ? part : acc + part;
                first = false;
            }
            if (first || !acc.is_zero()) rep.vanishing_certified = false;
        }
        check_internal(rep.vanishing_certified, "vanishing basis failed symbolic certification");
    }
    return rep;
}

} // namespace metrise
