#pragma once

// Finite multiple zeta values (level one and two), the level-two star
// values, finite Euler sums, and the even/odd rewrites of level two.
//
// Every evaluator streams the summation variable upward once and keeps r
// running accumulators: after processing n, acc[j] holds the nested sum
// over the first j entries with all variables <= n. Inverses are produced
// in blocks with one modular inversion per block.

#include "fmzv/index.hpp"
#include "fmzv/modmath.hpp"

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <vector>

namespace fmzv {

namespace detail {

inline constexpr std::uint64_t kInverseBlock = 4096;

/// Arithmetic progression first, first + step, ... of `count` terms, all in [1, p).
struct Progression {
    std::uint64_t first;
    std::uint64_t step;
    std::uint64_t count;
};

/// Nested sum over n_1 < ... < n_r (strict) or n_1 <= ... <= n_r drawn from
/// `range`, of prod_j sign_j(n_j) * n_j^(-k_j) mod p.
inline Residue nested_sum(const std::vector<int>& exponents, const std::vector<int>& signs, Progression range,
                          std::uint64_t p, bool strict) {
    const std::size_t r = exponents.size();
    if (r == 0) return 1;
    const int max_k = *std::max_element(exponents.begin(), exponents.end());

    std::vector<Residue> acc(r + 1, 0);
    acc[0] = 1;
    std::vector<Residue> block;
    std::vector<Residue> powers(static_cast<std::size_t>(max_k) + 1);
    block.reserve(kInverseBlock);

    for (std::uint64_t start = 0; start < range.count; start += kInverseBlock) {
        const std::uint64_t len = std::min(kInverseBlock, range.count - start);
        block.clear();
        for (std::uint64_t t = 0; t < len; ++t) block.push_back(range.first + (start + t) * range.step);
        const std::vector<Residue> inverses = batch_inv(block, p);

        for (std::uint64_t t = 0; t < len; ++t) {
            const std::uint64_t n = block[t];
            powers[0] = 1;
            for (int e = 1; e <= max_k; ++e) powers[e] = mul_mod(powers[e - 1], inverses[t], p);
            auto factor = [&](std::size_t j) {
                Residue f = powers[static_cast<std::size_t>(exponents[j])];
                if (!signs.empty() && signs[j] < 0 && (n & 1)) f = neg_mod(f, p);
                return f;
            };
            if (strict) {
                for (std::size_t j = r; j >= 1; --j) acc[j] = add_mod(acc[j], mul_mod(acc[j - 1], factor(j - 1), p), p);
            } else {
                for (std::size_t j = 1; j <= r; ++j) acc[j] = add_mod(acc[j], mul_mod(acc[j - 1], factor(j - 1), p), p);
            }
        }
    }
    return acc[r];
}

inline std::uint64_t half_bound(const Prime& p) { return (p.value() - 1) / 2; }

}  // namespace detail

/// Level one: sum over 0 < m_1 < ... < m_r < p.
inline Residue eval_zeta(const Index& index, const Prime& p) {
    return detail::nested_sum(index.entries(), {}, {1, 1, p.value() - 1}, p, true);
}

/// Level two: sum over 0 < m_1 < ... < m_r <= (p-1)/2.
inline Residue eval_zeta2(const Index& index, const Prime& p) {
    return detail::nested_sum(index.entries(), {}, {1, 1, detail::half_bound(p)}, p, true);
}

/// Level two with non-strict inequalities.
inline Residue eval_zeta2_star(const Index& index, const Prime& p) {
    return detail::nested_sum(index.entries(), {}, {1, 1, detail::half_bound(p)}, p, false);
}

/// Finite Euler sum with numerators eps_1^m_1 ... eps_r^m_r.
inline Residue eval_euler(const Index& index, const SignVector& signs, const Prime& p) {
    if (signs.size() != static_cast<std::size_t>(index.depth())) {
        throw std::invalid_argument("sign vector length " + std::to_string(signs.size()) + " does not match depth " +
                                    std::to_string(index.depth()));
    }
    return detail::nested_sum(index.entries(), signs.signs(), {1, 1, p.value() - 1}, p, true);
}

/// 2^k times the sum over even 0 < n_1 < ... < n_r < p.
inline Residue eval_even_form(const Index& index, const Prime& p) {
    Residue s = detail::nested_sum(index.entries(), {}, {2, 2, detail::half_bound(p)}, p, true);
    return mul_mod(mod_pow(2, static_cast<std::uint64_t>(index.weight()), p), s, p);
}

/// (-2)^k times the sum over odd 0 < n_r < ... < n_1 < p, where n_i carries k_i.
inline Residue eval_odd_form(const Index& index, const Prime& p) {
    Residue s = detail::nested_sum(index.reversed().entries(), {}, {1, 2, detail::half_bound(p)}, p, true);
    return mul_mod(mod_pow(-2, static_cast<std::uint64_t>(index.weight()), p), s, p);
}

/// Dispatch on variant. Euler sums require signs; the others reject them.
inline Residue evaluate(Variant variant, const Index& index, const std::optional<SignVector>& signs, const Prime& p) {
    if ((variant == Variant::euler) != signs.has_value()) {
        throw std::invalid_argument(variant == Variant::euler ? "euler variant requires a sign vector"
                                                              : "sign vector given for an unsigned variant");
    }
    switch (variant) {
        case Variant::zeta: return eval_zeta(index, p);
        case Variant::zeta2: return eval_zeta2(index, p);
        case Variant::zeta2star: return eval_zeta2_star(index, p);
        case Variant::euler: return eval_euler(index, *signs, p);
    }
    throw std::logic_error("unreachable variant");
}

}  // namespace fmzv
