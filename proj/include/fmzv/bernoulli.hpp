#pragma once

// Bernoulli numbers and polynomials mod p, and the elements Z(k), L(2).

#include "fmzv/modmath.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

namespace fmzv {

/// B_0, ..., B_n mod p from the inverse of the truncated series (e^x - 1)/x.
class BernoulliTable {
public:
    BernoulliTable(const Prime& p, std::uint64_t n) : p_(p.value()) {
        if (n > p_ - 2) {
            throw std::domain_error("Bernoulli index " + std::to_string(n) + " exceeds p-2 for p=" + std::to_string(p_));
        }
        // inv_fact[j] = 1/j! for j <= n+1
        std::vector<Residue> fact(n + 2, 1);
        for (std::uint64_t j = 1; j <= n + 1; ++j) fact[j] = mul_mod(fact[j - 1], j, p_);
        std::vector<Residue> inv_fact(n + 2);
        inv_fact[n + 1] = mod_inv(fact[n + 1], p_);
        for (std::uint64_t j = n + 1; j > 0; --j) inv_fact[j - 1] = mul_mod(inv_fact[j], j, p_);

        // series coefficients a_j = 1/(j+1)!, inverse b with b_0 = 1
        std::vector<Residue> b(n + 1, 0);
        b[0] = 1;
        for (std::uint64_t m = 1; m <= n; ++m) {
            Residue s = 0;
            for (std::uint64_t j = 1; j <= m; ++j) s = add_mod(s, mul_mod(inv_fact[j + 1], b[m - j], p_), p_);
            b[m] = neg_mod(s, p_);
        }
        values_.resize(n + 1);
        for (std::uint64_t m = 0; m <= n; ++m) values_[m] = mul_mod(b[m], fact[m], p_);
        fact_ = std::move(fact);
        inv_fact_ = std::move(inv_fact);
    }

    std::uint64_t prime() const { return p_; }
    std::uint64_t max_index() const { return values_.size() - 1; }

    Residue operator[](std::uint64_t n) const {
        if (n >= values_.size()) throw std::domain_error("Bernoulli index beyond table: " + std::to_string(n));
        return values_[n];
    }

    Residue binomial(std::uint64_t n, std::uint64_t k) const {
        if (k > n) return 0;
        return mul_mod(fact_[n], mul_mod(inv_fact_[k], inv_fact_[n - k], p_), p_);
    }

    /// Full table (n = p-2) for p, built once per prime and shared.
    static std::shared_ptr<const BernoulliTable> full(const Prime& p) {
        static std::mutex mutex;
        static std::map<std::uint64_t, std::shared_ptr<const BernoulliTable>> tables;
        std::lock_guard lock(mutex);
        auto& slot = tables[p.value()];
        if (!slot) slot = std::make_shared<const BernoulliTable>(p, p.value() - 2);
        return slot;
    }

private:
    std::uint64_t p_;
    std::vector<Residue> values_;
    std::vector<Residue> fact_;
    std::vector<Residue> inv_fact_;
};

inline Residue bernoulli_mod(std::uint64_t n, const Prime& p) {
    if (n > p.value() - 2) {
        throw std::domain_error("bernoulli_mod: n=" + std::to_string(n) + " > p-2 for p=" + std::to_string(p.value()));
    }
    return (*BernoulliTable::full(p))[n];
}

/// B_n(x) = sum_j C(n, j) B_j x^(n-j) mod p.
inline Residue bernoulli_poly_mod(std::uint64_t n, Residue x, const Prime& p) {
    if (n > p.value() - 2) {
        throw std::domain_error("bernoulli_poly_mod: n=" + std::to_string(n) + " > p-2 for p=" +
                                std::to_string(p.value()));
    }
    auto table = BernoulliTable::full(p);
    Residue s = 0;
    Residue xpow = 1;  // x^(n-j), built from j = n downward
    for (std::uint64_t j = n + 1; j-- > 0;) {
        s = add_mod(s, mul_mod(table->binomial(n, j), mul_mod((*table)[j], xpow, p), p), p);
        xpow = mul_mod(xpow, x % p, p);
    }
    return s;
}

/// Z(k) = B_{p-k} / k mod p, defined for 2 <= k < p.
inline Residue Zk(int k, const Prime& p) {
    if (k < 2 || static_cast<std::uint64_t>(k) >= p.value()) {
        throw std::domain_error("Z(k) needs 2 <= k < p; got k=" + std::to_string(k) + ", p=" + std::to_string(p.value()));
    }
    return mul_mod(bernoulli_mod(p.value() - static_cast<std::uint64_t>(k), p), mod_inv(static_cast<Residue>(k), p), p);
}

/// Fermat quotient (2^(p-1) - 1)/p mod p.
inline Residue L2(const Prime& p) {
    const std::uint64_t q = p.value();
    if (q > (std::uint64_t{1} << 31)) throw std::domain_error("L2: p^2 must fit the word-sized modulus");
    Residue t = mod_pow(2, q - 1, q * q);
    return ((t + q * q - 1) % (q * q)) / q;
}

/// Direct sum_{m=1}^{M-1} m^n mod p.
inline Residue power_sum_oracle(std::uint64_t M, std::uint64_t n, const Prime& p) {
    Residue s = 0;
    for (std::uint64_t m = 1; m < M; ++m) s = add_mod(s, mod_pow(static_cast<std::int64_t>(m), n, p), p);
    return s;
}

}  // namespace fmzv
