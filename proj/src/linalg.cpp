#include "metrise/linalg.hpp"

#include <algorithm>

#include "metrise/errors.hpp"

namespace metrise {

std::vector<int> rref(RatMatrix& m) {
    std::vector<int> pivots;
    if (m.empty()) return pivots;
    const std::size_t rows = m.size(), cols = m[0].size();
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t p = r;
        while (p < rows && m[p][c] == 0) ++p;
        if (p == rows) continue;
        std::swap(m[p], m[r]);
        const Rat inv = Rat(1) / m[r][c];
        for (std::size_t j = c; j < cols; ++j) m[r][j] *= inv;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || m[i][c] == 0) continue;
            const Rat f = m[i][c];
            for (std::size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
        }
        pivots.push_back(static_cast<int>(c));
        ++r;
    }
    return pivots;
}

int rank(RatMatrix m) { return static_cast<int>(rref(m).size()); }

int bareiss_rank(IntMatrix m) {
    if (m.empty()) return 0;
    const std::size_t rows = m.size(), cols = m[0].size();
    Int prev = 1;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t p = r;
        while (p < rows && m[p][c] == 0) ++p;
        if (p == rows) continue;
        std::swap(m[p], m[r]);
        for (std::size_t i = r + 1; i < rows; ++i) {
            for (std::size_t j = c + 1; j < cols; ++j) {
                Int v = m[i][j] * m[r][c] - m[i][c] * m[r][j];
                m[i][j] = v / prev; // exact by the Bareiss identity
            }
            m[i][c] = 0;
        }
        prev = m[r][c];
        ++r;
    }
    return static_cast<int>(r);
}

std::vector<std::vector<Rat>> kernel_basis(const RatMatrix& m0, int ncols) {
    RatMatrix m = m0;
    for (auto& row : m) row.resize(static_cast<std::size_t>(ncols), Rat(0));
    std::vector<int> pivots = rref(m);
    std::vector<bool> is_pivot(static_cast<std::size_t>(ncols), false);
    for (int p : pivots) is_pivot[static_cast<std::size_t>(p)] = true;
    std::vector<std::vector<Rat>> basis;
    for (int c = 0; c < ncols; ++c) {
        if (is_pivot[static_cast<std::size_t>(c)]) continue;
        std::vector<Rat> v(static_cast<std::size_t>(ncols), Rat(0));
        v[static_cast<std::size_t>(c)] = 1;
        for (std::size_t r = 0; r < pivots.size(); ++r)
            v[static_cast<std::size_t>(pivots[r])] = -m[r][static_cast<std::size_t>(c)];
        basis.push_back(std::move(v));
    }
    return basis;
}

Poly poly_det(PolyMatrix m) {
    const std::size_t n = m.size();
    for (const auto& row : m) check_internal(row.size() == n, "poly_det needs a square matrix");
    if (n == 0) return Poly::constant(Rat(1));
    VarsPtr vars = m[0][0].vars();
    Poly prev = Poly::constant(Rat(1), vars);
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        std::size_t p = k;
        while (p < n && m[p][k].is_zero()) ++p;
        if (p == n) return Poly(vars); // singular
        if (p != k) {
            std::swap(m[p], m[k]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                Poly v = m[i][j] * m[k][k] - m[i][k] * m[k][j];
                if (k == 0) {
                    m[i][j] = std::move(v);
                } else {
                    auto q = divide_exact(v, prev);
                    check_internal(q.has_value(), "Bareiss division not exact");
                    m[i][j] = std::move(*q);
                }
            }
            m[i][k] = Poly(vars);
        }
        prev = m[k][k];
    }
    Poly det = m[n - 1][n - 1];
    return sign < 0 ? -det : det;
}

} // namespace metrise
