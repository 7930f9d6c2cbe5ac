#pragma once

// Word-sized modular arithmetic, prime generation, CRT and rational
// reconstruction. Residues are plain std::uint64_t values kept in [0, m).

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace fmzv {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;
using Residue = std::uint64_t;

/// Largest modulus accepted by the word-sized routines.
inline constexpr std::uint64_t kMaxModulus = std::uint64_t{1} << 62;

inline Residue mul_mod(Residue a, Residue b, std::uint64_t m) {
    return static_cast<Residue>(static_cast<unsigned __int128>(a) * b % m);
}

inline Residue add_mod(Residue a, Residue b, std::uint64_t m) {
    Residue s = a + b;
    return s >= m ? s - m : s;
}

inline Residue sub_mod(Residue a, Residue b, std::uint64_t m) {
    return a >= b ? a - b : a + m - b;
}

inline Residue neg_mod(Residue a, std::uint64_t m) { return a == 0 ? 0 : m - a; }

/// Reduces a signed integer into [0, m).
inline Residue reduce(std::int64_t a, std::uint64_t m) {
    std::int64_t r = a % static_cast<std::int64_t>(m);
    return static_cast<Residue>(r < 0 ? r + static_cast<std::int64_t>(m) : r);
}

inline Residue reduce(const BigInt& a, std::uint64_t m) {
    BigInt r = a % m;
    if (r < 0) r += m;
    return static_cast<Residue>(r);
}

/// a^e mod m by square-and-multiply; a may be negative.
inline Residue mod_pow(std::int64_t a, std::uint64_t e, std::uint64_t m) {
    if (m < 2) throw std::invalid_argument("mod_pow: modulus must be >= 2");
    Residue base = reduce(a, m);
    Residue result = 1;
    while (e > 0) {
        if (e & 1) result = mul_mod(result, base, m);
        base = mul_mod(base, base, m);
        e >>= 1;
    }
    return result;
}

namespace detail {

inline bool miller_rabin_witness(std::uint64_t n, std::uint64_t a, std::uint64_t d, int s) {
    Residue x = 1, base = a % n;
    for (std::uint64_t e = d; e > 0; e >>= 1) {
        if (e & 1) x = mul_mod(x, base, n);
        base = mul_mod(base, base, n);
    }
    if (x == 1 || x == n - 1) return false;
    for (int i = 1; i < s; ++i) {
        x = mul_mod(x, x, n);
        if (x == n - 1) return false;
    }
    return true;
}

}  // namespace detail

/// Deterministic for all 64-bit inputs.
inline bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t q : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (n % q == 0) return n == q;
    }
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (detail::miller_rabin_witness(n, a, d, s)) return false;
    }
    return true;
}

/// A prime p >= 5. The primes 2 and 3 are excluded everywhere.
class Prime {
public:
    explicit Prime(std::uint64_t value) : value_(value) {
        if (value < 5 || value >= kMaxModulus || !is_prime(value)) {
            throw std::invalid_argument("not an admissible prime (need prime >= 5): " + std::to_string(value));
        }
    }

    std::uint64_t value() const { return value_; }
    operator std::uint64_t() const { return value_; }

    friend auto operator<=>(const Prime&, const Prime&) = default;

private:
    std::uint64_t value_;
};

/// All primes in [lo, hi], ascending.
inline std::vector<Prime> sieve_primes(std::uint64_t lo, std::uint64_t hi) {
    if (lo < 5 || lo > hi) throw std::invalid_argument("sieve_primes: need 5 <= lo <= hi");
    if (hi >= (std::uint64_t{1} << 32)) throw std::invalid_argument("sieve_primes: range too large");
    std::vector<bool> composite(hi + 1, false);
    for (std::uint64_t i = 2; i * i <= hi; ++i) {
        if (composite[i]) continue;
        for (std::uint64_t j = i * i; j <= hi; j += i) composite[j] = true;
    }
    std::vector<Prime> out;
    for (std::uint64_t n = lo; n <= hi; ++n) {
        if (!composite[n]) out.emplace_back(n);
    }
    return out;
}

/// Inverse of a modulo m (m need not be prime); throws if gcd(a, m) != 1.
inline Residue mod_inv(Residue a, std::uint64_t m) {
    std::int64_t t = 0, new_t = 1;
    std::int64_t r = static_cast<std::int64_t>(m), new_r = static_cast<std::int64_t>(a % m);
    while (new_r != 0) {
        std::int64_t q = r / new_r;
        std::tie(t, new_t) = std::pair{new_t, t - q * new_t};
        std::tie(r, new_r) = std::pair{new_r, r - q * new_r};
    }
    if (r != 1) {
        throw std::domain_error("mod_inv: " + std::to_string(a) + " is not invertible modulo " + std::to_string(m));
    }
    return reduce(t, m);
}

/// Elementwise inverses with a single modular inversion (Montgomery's trick).
inline std::vector<Residue> batch_inv(std::span<const Residue> values, std::uint64_t p) {
    std::vector<Residue> prefix(values.size());
    Residue acc = 1;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (values[i] % p == 0) {
            throw std::domain_error("batch_inv: entry " + std::to_string(i) + " is zero modulo " + std::to_string(p));
        }
        prefix[i] = acc;
        acc = mul_mod(acc, values[i] % p, p);
    }
    std::vector<Residue> out(values.size());
    Residue inv = values.empty() ? 1 : mod_inv(acc, p);
    for (std::size_t i = values.size(); i-- > 0;) {
        out[i] = mul_mod(inv, prefix[i], p);
        inv = mul_mod(inv, values[i] % p, p);
    }
    return out;
}

/// Rational number reduced modulo p; throws if the denominator vanishes mod p.
inline Residue rational_mod(const Rational& q, std::uint64_t p) {
    Residue den = reduce(BigInt(boost::multiprecision::denominator(q)), p);
    if (den == 0) {
        throw std::domain_error("denominator of " + q.str() + " vanishes modulo " + std::to_string(p));
    }
    return mul_mod(reduce(BigInt(boost::multiprecision::numerator(q)), p), mod_inv(den, p), p);
}

struct CrtResult {
    BigInt residue;
    BigInt modulus;
};

/// Unique R mod prod(p_i) with R = r_i mod p_i.
inline CrtResult crt_combine(std::span<const std::pair<Residue, Prime>> pairs) {
    CrtResult acc{0, 1};
    std::vector<std::uint64_t> seen;
    for (const auto& [r, p] : pairs) {
        if (std::find(seen.begin(), seen.end(), p.value()) != seen.end()) {
            throw std::invalid_argument("crt_combine: duplicate prime " + std::to_string(p.value()));
        }
        seen.push_back(p.value());
        // acc.residue + acc.modulus * t = r (mod p)
        Residue cur = reduce(acc.residue, p);
        Residue m_mod = reduce(acc.modulus, p);
        Residue t = mul_mod(sub_mod(r % p, cur, p), mod_inv(m_mod, p), p);
        acc.residue += acc.modulus * t;
        acc.modulus *= p.value();
    }
    return acc;
}

/// Wang's rational reconstruction with symmetric bound sqrt(M/2).
inline std::optional<Rational> rat_reconstruct(const BigInt& residue, const BigInt& modulus) {
    if (residue < 0 || residue >= modulus) throw std::invalid_argument("rat_reconstruct: residue out of range");
    BigInt bound = boost::multiprecision::sqrt(BigInt(modulus / 2));
    BigInt r0 = modulus, r1 = residue;
    BigInt t0 = 0, t1 = 1;
    while (r1 > bound) {
        BigInt q = r0 / r1;
        std::tie(r0, r1) = std::pair{r1, BigInt(r0 - q * r1)};
        std::tie(t0, t1) = std::pair{t1, BigInt(t0 - q * t1)};
    }
    if (t1 == 0 || abs(t1) > bound) return std::nullopt;
    if (boost::multiprecision::gcd(t1, modulus) != 1) return std::nullopt;
    BigInt num = r1, den = t1;
    if (den < 0) {
        num = -num;
        den = -den;
    }
    return Rational(num, den);
}

}  // namespace fmzv
