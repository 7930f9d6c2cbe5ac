#pragma once

// Exact integer lattice tools: Hermite normal form, membership tests, and
// LLL reduction with integral Gram-Schmidt data (Cohen, Alg. 2.6.7), so the
// Gram-Schmidt coefficients are exact rationals d_j^{-1} * lambda_ij.

#include "fmzv/modmath.hpp"

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

namespace fmzv {

using IntVector = std::vector<BigInt>;
using IntMatrix = std::vector<IntVector>;  // row vectors

namespace detail {

inline BigInt floor_div(const BigInt& a, const BigInt& b) {
    BigInt q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

/// Nearest integer to a / b (b > 0), ties rounded up.
inline BigInt round_div(const BigInt& a, const BigInt& b) { return floor_div(2 * a + b, 2 * b); }

inline BigInt dot(const IntVector& a, const IntVector& b) {
    BigInt s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

}  // namespace detail

/// Row Hermite normal form: nonzero rows in echelon form, positive pivots,
/// entries above each pivot reduced into [0, pivot). Zero rows are dropped.
inline IntMatrix hermite_normal_form(IntMatrix rows) {
    if (rows.empty()) return rows;
    const std::size_t ncols = rows.front().size();
    std::size_t top = 0;
    for (std::size_t col = 0; col < ncols && top < rows.size(); ++col) {
        // Euclid on column `col` over rows [top, end)
        while (true) {
            std::size_t best = rows.size();
            for (std::size_t i = top; i < rows.size(); ++i) {
                if (rows[i][col] != 0 && (best == rows.size() || abs(rows[i][col]) < abs(rows[best][col]))) best = i;
            }
            if (best == rows.size()) break;
            std::swap(rows[top], rows[best]);
            bool done = true;
            for (std::size_t i = top + 1; i < rows.size(); ++i) {
                if (rows[i][col] == 0) continue;
                BigInt q = detail::floor_div(rows[i][col], rows[top][col]);
                for (std::size_t c = col; c < ncols; ++c) rows[i][c] -= q * rows[top][c];
                if (rows[i][col] != 0) done = false;
            }
            if (done) break;
        }
        if (top >= rows.size() || rows[top][col] == 0) continue;
        if (rows[top][col] < 0) {
            for (auto& x : rows[top]) x = -x;
        }
        for (std::size_t i = 0; i < top; ++i) {
            BigInt q = detail::floor_div(rows[i][col], rows[top][col]);
            if (q != 0) {
                for (std::size_t c = col; c < ncols; ++c) rows[i][c] -= q * rows[top][c];
            }
        }
        ++top;
    }
    rows.resize(top);
    return rows;
}

/// Whether v is an integer combination of the rows of an HNF basis.
inline bool lattice_contains(const IntMatrix& hnf, IntVector v) {
    std::size_t col = 0;
    for (const auto& row : hnf) {
        while (col < row.size() && row[col] == 0) {
            if (v[col] != 0) return false;
            ++col;
        }
        if (col == row.size()) break;
        if (v[col] % row[col] != 0) return false;
        BigInt x = v[col] / row[col];
        for (std::size_t c = col; c < v.size(); ++c) v[c] -= x * row[c];
        ++col;
    }
    return std::all_of(v.begin(), v.end(), [](const BigInt& x) { return x == 0; });
}

/// LLL-reduces linearly independent rows in place with parameter
/// delta = delta_num / delta_den.
inline void lll_reduce(IntMatrix& b, long delta_num = 99, long delta_den = 100) {
    const std::size_t n = b.size();
    if (n <= 1) return;
    // 1-based Gram-Schmidt data; d[0] = 1.
    std::vector<BigInt> d(n + 1, 0);
    std::vector<std::vector<BigInt>> lambda(n + 1, std::vector<BigInt>(n + 1, 0));
    d[0] = 1;
    d[1] = detail::dot(b[0], b[0]);
    if (d[1] == 0) throw std::invalid_argument("lll_reduce: zero basis vector");

    auto vec = [&](std::size_t k) -> IntVector& { return b[k - 1]; };

    auto reduce_pair = [&](std::size_t k, std::size_t l) {
        if (2 * abs(lambda[k][l]) <= d[l]) return;
        BigInt q = detail::round_div(lambda[k][l], d[l]);
        IntVector& bk = vec(k);
        const IntVector& bl = vec(l);
        for (std::size_t c = 0; c < bk.size(); ++c) bk[c] -= q * bl[c];
        lambda[k][l] -= q * d[l];
        for (std::size_t i = 1; i < l; ++i) lambda[k][i] -= q * lambda[l][i];
    };

    auto swap_pair = [&](std::size_t k, std::size_t kmax) {
        std::swap(vec(k), vec(k - 1));
        for (std::size_t j = 1; j + 1 < k; ++j) std::swap(lambda[k][j], lambda[k - 1][j]);
        const BigInt lam = lambda[k][k - 1];
        const BigInt big_b = (d[k - 2] * d[k] + lam * lam) / d[k - 1];
        for (std::size_t i = k + 1; i <= kmax; ++i) {
            BigInt t = lambda[i][k];
            lambda[i][k] = (d[k] * lambda[i][k - 1] - lam * t) / d[k - 1];
            lambda[i][k - 1] = (big_b * t + lam * lambda[i][k]) / d[k];
        }
        d[k - 1] = big_b;
    };

    std::size_t k = 2, kmax = 1;
    while (k <= n) {
        if (k > kmax) {
            kmax = k;
            for (std::size_t j = 1; j <= k; ++j) {
                BigInt u = detail::dot(vec(k), vec(j));
                for (std::size_t i = 1; i < j; ++i) u = (d[i] * u - lambda[k][i] * lambda[j][i]) / d[i - 1];
                if (j < k) {
                    lambda[k][j] = u;
                } else {
                    d[k] = u;
                    if (u == 0) throw std::invalid_argument("lll_reduce: basis vectors are linearly dependent");
                }
            }
        }
        reduce_pair(k, k - 1);
        if (delta_den * d[k] * d[k - 2] < delta_num * d[k - 1] * d[k - 1] - delta_den * lambda[k][k - 1] * lambda[k][k - 1]) {
            swap_pair(k, kmax);
            k = std::max<std::size_t>(2, k - 1);
            continue;
        }
        for (std::size_t l = k - 1; l-- > 1;) reduce_pair(k, l);
        ++k;
    }
}

inline BigInt max_norm(const IntVector& v) {
    BigInt m = 0;
    for (const auto& x : v) m = std::max(m, BigInt(abs(x)));
    return m;
}

}  // namespace fmzv
