#pragma once

// The harmonic (stuffle) algebra of formal indices with exact rational
// coefficients, and the symbolic identities checked inside it.

#include "fmzv/evaluator.hpp"
#include "fmzv/index.hpp"
#include "fmzv/modmath.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace fmzv {

/// Finitely supported Q-linear combination of indices. Keys are kept in the
/// canonical index order and zero coefficients are never stored, so two
/// combinations are equal iff their term maps are equal.
class IndexCombination {
public:
    using Terms = std::map<Index, Rational>;

    IndexCombination() = default;
    explicit IndexCombination(const Index& idx, Rational coeff = 1) { add(idx, std::move(coeff)); }

    static IndexCombination unit() { return IndexCombination(Index{}); }

    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }

    Rational coefficient(const Index& idx) const {
        auto it = terms_.find(idx);
        return it == terms_.end() ? Rational(0) : it->second;
    }

    void add(const Index& idx, const Rational& coeff) {
        if (coeff == 0) return;
        auto [it, inserted] = terms_.try_emplace(idx, coeff);
        if (!inserted) {
            it->second += coeff;
            if (it->second == 0) terms_.erase(it);
        }
    }

    IndexCombination& operator+=(const IndexCombination& o) {
        for (const auto& [idx, c] : o.terms_) add(idx, c);
        return *this;
    }
    IndexCombination& operator-=(const IndexCombination& o) {
        for (const auto& [idx, c] : o.terms_) add(idx, -c);
        return *this;
    }
    IndexCombination& operator*=(const Rational& s) {
        if (s == 0) {
            terms_.clear();
        } else {
            for (auto& [idx, c] : terms_) c *= s;
        }
        return *this;
    }

    friend IndexCombination operator+(IndexCombination a, const IndexCombination& b) { return a += b; }
    friend IndexCombination operator-(IndexCombination a, const IndexCombination& b) { return a -= b; }
    friend IndexCombination operator*(const Rational& s, IndexCombination a) { return a *= s; }
    friend bool operator==(const IndexCombination&, const IndexCombination&) = default;

    /// e.g. "[2,3] + [3,2] + [5]", "-1/2[1,2]", "0"
    std::string str() const {
        if (terms_.empty()) return "0";
        std::string s;
        bool first = true;
        for (const auto& [idx, c] : terms_) {
            Rational mag = abs(c);
            s += first ? (c < 0 ? "-" : "") : (c < 0 ? " - " : " + ");
            if (mag != 1) s += mag.str();
            s += "[" + idx.str() + "]";
            first = false;
        }
        return s;
    }

private:
    Terms terms_;
};

namespace detail {

inline void stuffle_words(const std::vector<int>& a, std::size_t i, const std::vector<int>& b, std::size_t j,
                          std::vector<int>& prefix, std::map<std::vector<int>, long long>& out) {
    if (i == a.size() || j == b.size()) {
        std::vector<int> word = prefix;
        word.insert(word.end(), a.begin() + static_cast<std::ptrdiff_t>(i), a.end());
        word.insert(word.end(), b.begin() + static_cast<std::ptrdiff_t>(j), b.end());
        ++out[word];
        return;
    }
    prefix.push_back(a[i]);
    stuffle_words(a, i + 1, b, j, prefix, out);
    prefix.back() = b[j];
    stuffle_words(a, i, b, j + 1, prefix, out);
    prefix.back() = a[i] + b[j];
    stuffle_words(a, i + 1, b, j + 1, prefix, out);
    prefix.pop_back();
}

}  // namespace detail

/// Stuffle product of two indices.
inline IndexCombination stuffle(const Index& a, const Index& b) {
    std::map<std::vector<int>, long long> words;
    std::vector<int> prefix;
    detail::stuffle_words(a.entries(), 0, b.entries(), 0, prefix, words);
    IndexCombination out;
    for (const auto& [w, n] : words) out.add(Index(w), Rational(n));
    return out;
}

/// Bilinear extension; the empty index is the unit.
inline IndexCombination stuffle(const IndexCombination& a, const IndexCombination& b) {
    IndexCombination out;
    for (const auto& [ia, ca] : a.terms()) {
        for (const auto& [ib, cb] : b.terms()) {
            IndexCombination prod = stuffle(ia, ib);
            prod *= ca * cb;
            out += prod;
        }
    }
    return out;
}

/// Expansion of a non-strict (star) sum into strict sums: every way of
/// merging runs of consecutive entries, each with coefficient 1.
inline IndexCombination star_expand(const Index& index) {
    const int r = index.depth();
    if (r == 0) return IndexCombination::unit();
    IndexCombination out;
    for (unsigned mask = 0; mask < (1u << (r - 1)); ++mask) {
        std::vector<int> merged{index[0]};
        for (int g = 0; g < r - 1; ++g) {
            if (mask & (1u << g)) {
                merged.back() += index[static_cast<std::size_t>(g + 1)];
            } else {
                merged.push_back(index[static_cast<std::size_t>(g + 1)]);
            }
        }
        out.add(Index(std::move(merged)), 1);
    }
    return out;
}

/// sum_{j=0}^{r} (-1)^j [k_j, ..., k_1] * star(k_{j+1}, ..., k_r), with the
/// star side expanded into strict symbols. Zero for every nonempty index.
inline IndexCombination antipode_sum(const Index& index) {
    const int r = index.depth();
    IndexCombination out;
    for (int j = 0; j <= r; ++j) {
        IndexCombination term = stuffle(IndexCombination(index.slice(0, static_cast<std::size_t>(j)).reversed()),
                                        star_expand(index.slice(static_cast<std::size_t>(j), static_cast<std::size_t>(r))));
        if (j % 2) term *= Rational(-1);
        out += term;
    }
    return out;
}

namespace detail {

inline IndexCombination gen_g_impl(int k, int r, int a, int min_part) {
    IndexCombination out;
    if (r < 1 || k < 1 || a < 0 || a > r) return out;
    for_each_composition(k, r, [&](const Index& idx) {
        int evens = static_cast<int>(std::count_if(idx.begin(), idx.end(), [](int e) { return e % 2 == 0; }));
        if (evens == a) out.add(idx, 1);
    }, min_part);
    return out;
}

/// Both sides of sum_i [(2i)] * g(k-2i, r, a) = c g(k, r, a) + (a+1) g(k, r+1, a+1),
/// where c = (k - r - a)/2 for g and (k - 3r + a)/2 for g1.
inline std::pair<IndexCombination, IndexCombination> lemma_g_sides(int k, int r, int a, bool restricted) {
    const int min_part = restricted ? 2 : 1;
    const Rational c = restricted ? Rational(k - 3 * r + a, 2) : Rational(k - r - a, 2);
    IndexCombination lhs;
    for (int i = 1; Rational(i) <= c; ++i) {
        lhs += stuffle(IndexCombination(Index{2 * i}), gen_g_impl(k - 2 * i, r, a, min_part));
    }
    IndexCombination rhs = c * gen_g_impl(k, r, a, min_part);
    rhs += Rational(a + 1) * gen_g_impl(k, r + 1, a + 1, min_part);
    return {lhs, rhs};
}

}  // namespace detail

/// Sum of all indices of weight k, depth r with exactly a even entries.
inline IndexCombination gen_g(int k, int r, int a) { return detail::gen_g_impl(k, r, a, 1); }

/// As gen_g, restricted to entries >= 2.
inline IndexCombination gen_g1(int k, int r, int a) { return detail::gen_g_impl(k, r, a, 2); }

/// Checks both the g and the g1 identity at (k, r, a).
inline bool lemma_g_check(int k, int r, int a) {
    if (r < 1 || r > k || a < 0 || a > r) throw std::invalid_argument("lemma_g_check: need 1 <= r <= k, 0 <= a <= r");
    auto [lhs, rhs] = detail::lemma_g_sides(k, r, a, false);
    auto [lhs1, rhs1] = detail::lemma_g_sides(k, r, a, true);
    return lhs == rhs && lhs1 == rhs1;
}

/// sum over permutations s of (r + 1 - 2 s^{-1}(r)) [k_s(1), ..., k_s(r)].
inline IndexCombination gen_R(const Index& index) {
    const int r = index.depth();
    if (r < 1) throw std::invalid_argument("gen_R: depth must be >= 1");
    std::vector<int> perm(static_cast<std::size_t>(r));
    std::iota(perm.begin(), perm.end(), 0);
    IndexCombination out;
    std::vector<int> entries(static_cast<std::size_t>(r));
    do {
        int last_pos = 0;
        for (int pos = 0; pos < r; ++pos) {
            entries[static_cast<std::size_t>(pos)] = index[static_cast<std::size_t>(perm[static_cast<std::size_t>(pos)])];
            if (perm[static_cast<std::size_t>(pos)] == r - 1) last_pos = pos + 1;
        }
        out.add(Index(entries), Rational(r + 1 - 2 * last_pos));
    } while (std::next_permutation(perm.begin(), perm.end()));
    return out;
}

namespace detail {

inline std::vector<int> without(const std::vector<int>& v, std::initializer_list<std::size_t> drop) {
    std::vector<int> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (std::find(drop.begin(), drop.end(), i) == drop.end()) out.push_back(v[i]);
    }
    return out;
}

inline std::pair<IndexCombination, IndexCombination> lemma_R_sides(const Index& index) {
    const std::size_t r = static_cast<std::size_t>(index.depth());
    const std::vector<int>& k = index.entries();
    IndexCombination lhs;
    for (std::size_t i = 0; i + 1 < r; ++i) {
        lhs += stuffle(IndexCombination(Index{k[i]}), gen_R(Index(without(k, {i}))));
    }
    IndexCombination rhs = Rational(static_cast<long long>(r) - 2) * gen_R(index);
    for (std::size_t i = 0; i + 1 < r; ++i) {
        std::vector<int> e = without(k, {i});
        e.back() += k[i];
        rhs += gen_R(Index(e));
    }
    for (std::size_t i = 0; i + 1 < r; ++i) {
        for (std::size_t j = i + 1; j + 1 < r; ++j) {
            std::vector<int> e{k[i] + k[j]};
            std::vector<int> rest = without(k, {i, j});
            e.insert(e.end(), rest.begin(), rest.end());
            rhs += Rational(2) * gen_R(Index(e));
        }
    }
    return {lhs, rhs};
}

}  // namespace detail

/// Symbolic check of the permutation-weighted stuffle identity for R.
inline bool lemma_R_check(const Index& index) {
    if (index.depth() < 2) throw std::invalid_argument("lemma_R_check: depth must be >= 2");
    auto [lhs, rhs] = detail::lemma_R_sides(index);
    return lhs == rhs;
}

/// Linear extension of an evaluator. The empty index evaluates to 1.
inline Residue evaluate_combination(const IndexCombination& comb, Variant variant, const Prime& p) {
    if (variant == Variant::euler) throw std::invalid_argument("evaluate_combination: euler sums need signs");
    Residue s = 0;
    for (const auto& [idx, c] : comb.terms()) {
        Residue coeff;
        try {
            coeff = rational_mod(c, p);
        } catch (const std::domain_error&) {
            throw std::domain_error("coefficient " + c.str() + " of [" + idx.str() + "] is not invertible modulo " +
                                    std::to_string(p.value()));
        }
        s = add_mod(s, mul_mod(coeff, evaluate(variant, idx, std::nullopt, p), p), p);
    }
    return s;
}

}  // namespace fmzv
