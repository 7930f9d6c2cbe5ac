#pragma once

// Integer-relation detection among residue columns over finite prime sets.
//
// The relation lattice of a prime set S is
//     L(S) = { c in Z^n : sum_i c_i v_i(p) = 0 mod p for every p in S }.
// It is built one prime at a time: given a basis B of L(S), the map
// x -> phi_p(x B) mod p has a kernel with basis {e_i - w_i/w_j e_j, p e_j}
// (j a pivot with w_j != 0), and the new basis is that kernel basis times B,
// LLL-reduced. True relations survive every prime with small coefficients;
// the remaining directions grow with the product of the primes. A finite
// prime set never proves a relation: "verified" means the congruence holds
// at every training and every held-out prime.

#include "fmzv/cache.hpp"
#include "fmzv/harmonic.hpp"
#include "fmzv/lattice.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fmzv {

/// One column: a variant evaluated at an index (and signs for euler).
struct Descriptor {
    Variant variant = Variant::zeta2;
    Index index;
    std::optional<SignVector> signs;

    friend auto operator<=>(const Descriptor& a, const Descriptor& b) {
        if (auto c = a.index <=> b.index; c != 0) return c;
        if (auto c = a.variant <=> b.variant; c != 0) return c;
        return a.signs <=> b.signs;
    }
    friend bool operator==(const Descriptor&, const Descriptor&) = default;

    std::string str() const {
        std::string s = std::string(to_string(variant)) + "(" + index.str();
        if (signs) s += ";" + signs->str();
        return s + ")";
    }
};

struct ValueMatrix {
    std::vector<Descriptor> columns;
    std::vector<Prime> primes;
    std::vector<std::vector<Residue>> cells;  // cells[row][col], row = prime

    std::vector<Residue> row(std::size_t i) const { return cells[i]; }
};

enum class RelationStatus { candidate, verified, refuted };

inline std::string_view to_string(RelationStatus s) {
    switch (s) {
        case RelationStatus::candidate: return "candidate";
        case RelationStatus::verified: return "verified";
        case RelationStatus::refuted: return "refuted";
    }
    return "?";
}

struct RelationCandidate {
    IntVector coefficients;
    BigInt height;
    std::vector<std::uint64_t> verified_on;  // held-out primes where the congruence holds
    RelationStatus status = RelationStatus::candidate;
};

/// Thrown when a basis expression is not unique (the basis is dependent).
class AmbiguityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline const BigInt kDefaultHeightBound = BigInt(1000000);

/// Fills one row per prime; columns are put in canonical order (duplicates kept).
inline ValueMatrix build_matrix(std::vector<Descriptor> descriptors, const std::vector<Prime>& primes,
                                ResidueCache* cache = nullptr, unsigned jobs = 1) {
    if (descriptors.empty()) throw std::invalid_argument("build_matrix: no columns");
    if (primes.empty()) throw std::invalid_argument("build_matrix: empty prime list");
    std::stable_sort(descriptors.begin(), descriptors.end());
    int max_weight = 0;
    for (const auto& d : descriptors) max_weight = std::max(max_weight, d.index.weight());
    for (const auto& p : primes) {
        if (p.value() <= static_cast<std::uint64_t>(max_weight) + 2) {
            throw std::invalid_argument("build_matrix: prime " + std::to_string(p.value()) +
                                        " does not exceed max weight + 2");
        }
    }
    ValueMatrix m{descriptors, primes, std::vector<std::vector<Residue>>(primes.size(), std::vector<Residue>(descriptors.size()))};
    for (std::size_t c = 0; c < descriptors.size(); ++c) {
        const auto& d = descriptors[c];
        ResidueTable t = eval_table(d.variant, d.index, d.signs, primes, cache, jobs);
        for (std::size_t r = 0; r < primes.size(); ++r) m.cells[r][c] = t.rows.at(primes[r].value());
    }
    return m;
}

/// Deterministic training / held-out split: every third prime is held out.
struct PrimeSplit {
    std::vector<Prime> training;
    std::vector<Prime> held_out;
};

inline PrimeSplit split_training(const std::vector<Prime>& primes) {
    PrimeSplit s;
    for (std::size_t i = 0; i < primes.size(); ++i) (i % 3 == 2 ? s.held_out : s.training).push_back(primes[i]);
    return s;
}

/// Two disjoint halves (alternating) of a prime list.
inline std::pair<std::vector<Prime>, std::vector<Prime>> split_disjoint(const std::vector<Prime>& primes) {
    std::pair<std::vector<Prime>, std::vector<Prime>> out;
    for (std::size_t i = 0; i < primes.size(); ++i) (i % 2 == 0 ? out.first : out.second).push_back(primes[i]);
    return out;
}

/// Lattice of integer vectors annihilating the columns at every added prime.
class RelationLattice {
public:
    explicit RelationLattice(std::size_t columns) : basis_(columns, IntVector(columns, 0)) {
        for (std::size_t i = 0; i < columns; ++i) basis_[i][i] = 1;
    }

    const IntMatrix& basis() const { return basis_; }
    std::size_t dimension() const { return basis_.size(); }

    /// Intersects with the kernel of c -> sum c_i values_i mod p.
    void add_prime(const std::vector<Residue>& values, const Prime& p) {
        const std::size_t n = basis_.size();
        if (values.size() != n) throw std::invalid_argument("RelationLattice: row length mismatch");
        std::vector<Residue> w(n);
        for (std::size_t i = 0; i < n; ++i) {
            Residue s = 0;
            for (std::size_t c = 0; c < n; ++c) s = add_mod(s, mul_mod(reduce(basis_[i][c], p), values[c] % p, p), p);
            w[i] = s;
        }
        // pivot: shortest basis vector with nonzero image
        std::size_t pivot = n;
        for (std::size_t i = 0; i < n; ++i) {
            if (w[i] != 0 && (pivot == n || max_norm(basis_[i]) < max_norm(basis_[pivot]))) pivot = i;
        }
        if (pivot == n) return;
        const Residue inv = mod_inv(w[pivot], p);
        const std::int64_t half = static_cast<std::int64_t>(p.value() / 2);
        for (std::size_t i = 0; i < n; ++i) {
            if (i == pivot || w[i] == 0) continue;
            std::int64_t c = static_cast<std::int64_t>(mul_mod(w[i], inv, p));
            if (c > half) c -= static_cast<std::int64_t>(p.value());
            for (std::size_t col = 0; col < n; ++col) basis_[i][col] -= c * basis_[pivot][col];
        }
        for (auto& x : basis_[pivot]) x *= p.value();
        lll_reduce(basis_);
    }

private:
    IntMatrix basis_;
};

/// Direct dot product mod p, independent of the lattice code.
inline bool relation_holds(const IntVector& coeffs, const std::vector<Residue>& values, std::uint64_t p) {
    Residue s = 0;
    for (std::size_t i = 0; i < coeffs.size(); ++i) s = add_mod(s, mul_mod(reduce(coeffs[i], p), values[i] % p, p), p);
    return s == 0;
}

namespace detail {

inline void normalize_relation(IntVector& v) {
    BigInt g = 0;
    for (const auto& x : v) g = boost::multiprecision::gcd(g, BigInt(abs(x)));
    if (g > 1) {
        for (auto& x : v) x /= g;
    }
    auto first = std::find_if(v.begin(), v.end(), [](const BigInt& x) { return x != 0; });
    if (first != v.end() && *first < 0) {
        for (auto& x : v) x = -x;
    }
}

}  // namespace detail

/// Short relations among the matrix columns. Training primes build the
/// lattice; each short vector is then re-checked on every prime and marked
/// verified (holds everywhere, with at least one held-out prime) or refuted.
inline std::vector<RelationCandidate> relation_lattice(const ValueMatrix& matrix, const BigInt& height_bound = kDefaultHeightBound) {
    if (matrix.columns.empty() || matrix.primes.empty()) throw std::invalid_argument("relation_lattice: empty matrix");
    std::vector<std::size_t> training_rows, held_rows;
    for (std::size_t i = 0; i < matrix.primes.size(); ++i) (i % 3 == 2 ? held_rows : training_rows).push_back(i);

    RelationLattice lattice(matrix.columns.size());
    for (std::size_t r : training_rows) lattice.add_prime(matrix.cells[r], matrix.primes[r]);

    std::vector<RelationCandidate> out;
    for (IntVector v : lattice.basis()) {
        if (max_norm(v) > height_bound) continue;
        detail::normalize_relation(v);
        RelationCandidate cand{v, max_norm(v), {}, RelationStatus::candidate};
        bool ok = true;
        for (std::size_t r : training_rows) ok = ok && relation_holds(v, matrix.cells[r], matrix.primes[r]);
        for (std::size_t r : held_rows) {
            if (relation_holds(v, matrix.cells[r], matrix.primes[r])) {
                cand.verified_on.push_back(matrix.primes[r].value());
            } else {
                ok = false;
            }
        }
        if (!ok) {
            cand.status = RelationStatus::refuted;
        } else if (!held_rows.empty()) {
            cand.status = RelationStatus::verified;
        }
        out.push_back(std::move(cand));
    }
    std::sort(out.begin(), out.end(), [](const RelationCandidate& a, const RelationCandidate& b) {
        if (a.height != b.height) return a.height < b.height;
        return a.coefficients < b.coefficients;
    });
    return out;
}

struct BasisExpression {
    std::vector<Descriptor> basis;          // as given
    std::vector<Rational> coefficients;     // target = sum coefficients[i] * basis[i]
    RelationCandidate relation;             // over the canonical column order
    std::vector<Descriptor> columns;        // canonical column order of `relation`
};

/// Expresses `target` as a rational combination of `basis` using a verified
/// relation with nonzero target coefficient; nullopt when none is found.
inline std::optional<BasisExpression> express_in_basis(const Descriptor& target, const std::vector<Descriptor>& basis,
                                                       const std::vector<Prime>& primes,
                                                       const BigInt& height_bound = kDefaultHeightBound,
                                                       ResidueCache* cache = nullptr, unsigned jobs = 1) {
    if (std::find(basis.begin(), basis.end(), target) != basis.end()) {
        throw std::invalid_argument("express_in_basis: target " + target.str() + " is a basis element");
    }
    std::vector<Descriptor> cols{target};
    cols.insert(cols.end(), basis.begin(), basis.end());
    ValueMatrix m = build_matrix(cols, primes, cache, jobs);
    const auto target_col = static_cast<std::size_t>(
        std::find(m.columns.begin(), m.columns.end(), target) - m.columns.begin());

    // Any second verified relation, with or without the target, combines with
    // a target relation into a non-proportional one, so the expression is not unique.
    std::vector<RelationCandidate> hits;
    std::size_t verified = 0;
    for (auto& c : relation_lattice(m, height_bound)) {
        if (c.status != RelationStatus::verified) continue;
        ++verified;
        if (c.coefficients[target_col] != 0) hits.push_back(std::move(c));
    }
    if (hits.empty()) return std::nullopt;
    if (verified > 1) {
        throw AmbiguityError("express_in_basis: " + std::to_string(verified) + " independent verified relations among " +
                             target.str() + " and the basis; the basis is dependent");
    }
    BasisExpression e{basis, {}, hits.front(), m.columns};
    const BigInt& ct = e.relation.coefficients[target_col];
    for (const auto& b : basis) {
        auto col = static_cast<std::size_t>(std::find(m.columns.begin(), m.columns.end(), b) - m.columns.begin());
        e.coefficients.emplace_back(Rational(-e.relation.coefficients[col]) / Rational(ct));
    }
    return e;
}

struct DimensionEstimate {
    int weight = 0;
    std::size_t columns = 0;
    std::size_t relations = 0;
    std::size_t dimension = 0;
};

/// Every descriptor of the given weight for a variant (all sign choices for euler).
inline std::vector<Descriptor> all_descriptors(int weight, Variant variant) {
    std::vector<Descriptor> out;
    for (const Index& idx : indices_of_weight(weight)) {
        if (variant != Variant::euler) {
            out.push_back({variant, idx, std::nullopt});
            continue;
        }
        const int r = idx.depth();
        for (unsigned mask = 0; mask < (1u << r); ++mask) {
            std::vector<int> s;
            for (int i = 0; i < r; ++i) s.push_back((mask >> (r - 1 - i)) & 1 ? -1 : 1);
            out.push_back({variant, idx, SignVector(s)});
        }
    }
    return out;
}

/// Counts verified independent relations among all values of weight k.
inline DimensionEstimate dimension_estimate(int k, Variant variant, const std::vector<Prime>& primes,
                                            const BigInt& height_bound = kDefaultHeightBound,
                                            ResidueCache* cache = nullptr, unsigned jobs = 1) {
    if (k < 1) throw std::invalid_argument("dimension_estimate: weight must be >= 1");
    std::vector<Descriptor> cols = all_descriptors(k, variant);
    ValueMatrix m = build_matrix(cols, primes, cache, jobs);
    std::size_t verified = 0;
    for (const auto& c : relation_lattice(m, height_bound)) verified += c.status == RelationStatus::verified;
    return {k, cols.size(), verified, cols.size() - verified};
}

/// F_1 = F_2 = 1, F_k = F_{k-1} + F_{k-2}; F_0 = 0.
inline std::uint64_t fib(int k) {
    if (k < 0) throw std::invalid_argument("fib: k must be >= 0");
    std::uint64_t a = 0, b = 1;
    for (int i = 0; i < k; ++i) std::tie(a, b) = std::pair{b, a + b};
    return a;
}

/// d_0 = 1, d_1 = 0, d_2 = 1, d_k = d_{k-2} + d_{k-3}.
inline std::uint64_t dseq(int k) {
    if (k < 0) throw std::invalid_argument("dseq: k must be >= 0");
    std::vector<std::uint64_t> d{1, 0, 1};
    for (int i = 3; i <= k; ++i) d.push_back(d[static_cast<std::size_t>(i - 2)] + d[static_cast<std::size_t>(i - 3)]);
    return d[static_cast<std::size_t>(k)];
}

/// Level-two basis candidates: all entries odd.
inline std::vector<Descriptor> odd_basis(int weight) {
    std::vector<Descriptor> out;
    for (const Index& idx : indices_of_weight(weight, all_entries_odd)) out.push_back({Variant::zeta2, idx, std::nullopt});
    return out;
}

/// Level-one basis candidates: all entries odd and >= 3.
inline std::vector<Descriptor> odd3_basis(int weight) {
    std::vector<Descriptor> out;
    for (const Index& idx : indices_of_weight(weight, [](const Index& i) {
             return all_entries_odd(i) && std::all_of(i.begin(), i.end(), [](int k) { return k >= 3; });
         })) {
        out.push_back({Variant::zeta2, idx, std::nullopt});
    }
    return out;
}

}  // namespace fmzv
