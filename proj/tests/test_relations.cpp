#include "fmzv/relations.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace fmzv;

namespace {

IntVector iv(std::initializer_list<long> xs) {
    IntVector v;
    for (long x : xs) v.emplace_back(x);
    return v;
}

// Same lattice iff each basis lies in the other's span.
bool same_lattice(const IntMatrix& a, const IntMatrix& b) {
    IntMatrix ha = hermite_normal_form(a), hb = hermite_normal_form(b);
    for (const auto& v : a) {
        if (!lattice_contains(hb, v)) return false;
    }
    for (const auto& v : b) {
        if (!lattice_contains(ha, v)) return false;
    }
    return true;
}

// Exact Gram-Schmidt check of the LLL conditions with delta = 99/100.
bool is_lll_reduced(const IntMatrix& b) {
    const std::size_t n = b.size();
    std::vector<std::vector<Rational>> bstar(n);
    std::vector<std::vector<Rational>> mu(n, std::vector<Rational>(n));
    std::vector<Rational> norm(n);
    auto dotq = [](const std::vector<Rational>& x, const std::vector<Rational>& y) {
        Rational s = 0;
        for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
        return s;
    };
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<Rational> bi(b[i].begin(), b[i].end());
        bstar[i] = bi;
        for (std::size_t j = 0; j < i; ++j) {
            mu[i][j] = dotq(bi, bstar[j]) / norm[j];
            for (std::size_t c = 0; c < bi.size(); ++c) bstar[i][c] -= mu[i][j] * bstar[j][c];
        }
        norm[i] = dotq(bstar[i], bstar[i]);
    }
    for (std::size_t i = 1; i < n; ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            if (abs(mu[i][j]) > Rational(1, 2)) return false;
        }
        if (norm[i] < (Rational(99, 100) - mu[i][i - 1] * mu[i][i - 1]) * norm[i - 1]) return false;
    }
    return true;
}

std::vector<Prime> above(int weight, std::uint64_t hi) {
    return sieve_primes(std::max<std::uint64_t>(5, static_cast<std::uint64_t>(weight) + 3), hi);
}

}  // namespace

TEST(Lattice, HermiteNormalForm) {
    IntMatrix m{iv({2, 4, 6}), iv({1, 3, 5}), iv({0, 0, 0})};
    IntMatrix h = hermite_normal_form(m);
    ASSERT_EQ(h.size(), 2u);
    EXPECT_EQ(h[0], iv({1, 1, 1}));
    EXPECT_EQ(h[1], iv({0, 2, 4}));
    EXPECT_TRUE(lattice_contains(h, iv({3, 7, 11})));
    EXPECT_FALSE(lattice_contains(h, iv({0, 1, 2})));
    EXPECT_FALSE(lattice_contains(h, iv({0, 0, 1})));
}

TEST(Lattice, LllPreservesLatticeAndReduces) {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 2 + trial % 5;
        IntMatrix b(n, IntVector(n + 1));
        for (std::size_t i = 0; i < n; ++i) {
            for (auto& x : b[i]) x = static_cast<long>(rng() % 2001) - 1000;
        }
        IntMatrix r = b;
        lll_reduce(r);
        ASSERT_TRUE(same_lattice(b, r)) << trial;
        ASSERT_TRUE(is_lll_reduced(r)) << trial;
    }
}

TEST(Lattice, LllRejectsDependentRows) {
    IntMatrix b{iv({1, 2}), iv({2, 4})};
    EXPECT_THROW(lll_reduce(b), std::invalid_argument);
}

TEST(RelationLatticeTest, MonotoneUnderAddedPrimes) {
    auto cols = odd_basis(5);
    for (const auto& d : all_descriptors(5, Variant::zeta2)) {
        if (std::find(cols.begin(), cols.end(), d) == cols.end() && cols.size() < 9) cols.push_back(d);
    }
    const auto primes = above(5, 150);
    ValueMatrix m = build_matrix(cols, primes);
    RelationLattice lat(m.columns.size());
    for (std::size_t r = 0; r < primes.size(); ++r) {
        IntMatrix before = hermite_normal_form(lat.basis());
        lat.add_prime(m.cells[r], m.primes[r]);
        for (const auto& v : lat.basis()) {
            ASSERT_TRUE(lattice_contains(before, v)) << "prime " << primes[r].value();
            ASSERT_TRUE(relation_holds(v, m.cells[r], m.primes[r].value()));
        }
    }
}

TEST(RelationLatticeTest, SyntheticRelation) {
    // column 1 = 2 * column 0 + 3 * column 2 everywhere; column 3 independent
    std::mt19937_64 rng(3);
    ValueMatrix m;
    for (int i = 0; i < 4; ++i) m.columns.push_back({Variant::zeta2, Index{i + 1}, std::nullopt});
    m.primes = sieve_primes(1000, 1400);
    for (const auto& p : m.primes) {
        Residue a = rng() % p, c = rng() % p, d = rng() % p;
        m.cells.push_back({a, add_mod(mul_mod(2, a, p), mul_mod(3, c, p), p), c, d});
    }
    std::vector<RelationCandidate> verified;
    for (auto& c : relation_lattice(m)) {
        if (c.status == RelationStatus::verified) verified.push_back(c);
    }
    ASSERT_EQ(verified.size(), 1u);
    EXPECT_EQ(verified[0].coefficients, iv({2, -1, 3, 0}));
    EXPECT_EQ(verified[0].height, 3);
    EXPECT_FALSE(verified[0].verified_on.empty());
}

TEST(RelationLatticeTest, VerifiedCandidatesHoldEverywhere) {
    const auto primes = above(4, 300);
    ValueMatrix m = build_matrix(all_descriptors(4, Variant::zeta2), primes);
    for (const auto& c : relation_lattice(m)) {
        if (c.status != RelationStatus::verified) continue;
        for (std::size_t r = 0; r < primes.size(); ++r) {
            ASSERT_TRUE(relation_holds(c.coefficients, m.cells[r], primes[r].value()));
        }
        EXPECT_LE(c.height, kDefaultHeightBound);
    }
}

TEST(Relations, BuildMatrixGuards) {
    EXPECT_THROW(build_matrix({}, sieve_primes(11, 20)), std::invalid_argument);
    EXPECT_THROW(build_matrix(odd_basis(3), {}), std::invalid_argument);
    EXPECT_THROW(build_matrix(odd_basis(3), sieve_primes(5, 20)), std::invalid_argument);
    ValueMatrix m = build_matrix({{Variant::zeta2, {3}, std::nullopt}, {Variant::zeta2, {1, 2}, std::nullopt}}, {Prime(7)});
    EXPECT_EQ(m.columns[0].str(), "zeta2(3)");
    EXPECT_EQ(m.cells[0][0], 1u);
    EXPECT_EQ(m.cells[0][1], 1u);
}

TEST(Relations, Splits) {
    auto ps = sieve_primes(5, 100);
    PrimeSplit s = split_training(ps);
    EXPECT_EQ(s.training.size() + s.held_out.size(), ps.size());
    EXPECT_EQ(s.held_out.front().value(), 11u);
    auto [a, b] = split_disjoint(ps);
    for (const auto& p : a) EXPECT_EQ(std::count(b.begin(), b.end(), p), 0);
    EXPECT_EQ(a.size() + b.size(), ps.size());
}

TEST(Relations, ExpressAnchors) {
    const auto primes = above(3, 199);
    auto e = express_in_basis({Variant::zeta2, {2, 1}, std::nullopt}, odd_basis(3), primes);
    ASSERT_TRUE(e.has_value());
    ASSERT_EQ(e->basis.size(), 2u);
    EXPECT_EQ(e->basis[0].str(), "zeta2(3)");
    EXPECT_EQ(e->coefficients[0], Rational(-1, 4));
    EXPECT_EQ(e->coefficients[1], 0);
    auto f = express_in_basis({Variant::zeta2, {1, 2}, std::nullopt}, odd_basis(3), primes);
    ASSERT_TRUE(f.has_value());
    EXPECT_EQ(f->coefficients[0], Rational(-3, 4));
    EXPECT_EQ(f->coefficients[1], 0);
    // -1/4 at p = 7 is 5 = zeta2(2,1)_7 since zeta2(3)_7 = 1
    EXPECT_EQ(rational_mod(Rational(-1, 4), 7), oracle::zeta2({2, 1}, 7));
}

TEST(Relations, ExpressErrors) {
    const auto primes = above(3, 199);
    EXPECT_THROW(express_in_basis({Variant::zeta2, {3}, std::nullopt}, {{Variant::zeta2, {3}, std::nullopt}}, primes),
                 std::invalid_argument);
    std::vector<Descriptor> dependent{{Variant::zeta2, {3}, std::nullopt}, {Variant::zeta2, {1, 1, 1}, std::nullopt},
                                      {Variant::zeta2, {1, 2}, std::nullopt}};
    EXPECT_THROW(express_in_basis({Variant::zeta2, {2, 1}, std::nullopt}, dependent, primes), AmbiguityError);
    // zeta2(1) has no relation with zeta2(3) at all
    EXPECT_FALSE(express_in_basis({Variant::zeta2, {1}, std::nullopt}, {{Variant::zeta2, {3}, std::nullopt}},
                                  above(3, 199)).has_value());
}

TEST(Relations, ExpressStableOnDisjointSets) {
    for (int w = 3; w <= 4; ++w) {
        auto [a, b] = split_disjoint(above(w, 400));
        for (const auto& d : all_descriptors(w, Variant::zeta2)) {
            auto basis = odd_basis(w);
            if (std::find(basis.begin(), basis.end(), d) != basis.end()) continue;
            auto ea = express_in_basis(d, basis, a), eb = express_in_basis(d, basis, b);
            ASSERT_TRUE(ea && eb) << d.str();
            ASSERT_EQ(ea->coefficients, eb->coefficients) << d.str();
        }
    }
}

TEST(Relations, DimensionsFollowFibonacci) {
    for (int k = 1; k <= 5; ++k) {
        DimensionEstimate e = dimension_estimate(k, Variant::zeta2, above(k, 400));
        EXPECT_EQ(e.columns, std::size_t{1} << (k - 1));
        EXPECT_EQ(e.dimension, fib(k)) << k;
    }
    EXPECT_EQ(dimension_estimate(3, Variant::zeta2, above(3, 400)).relations, 2u);
}

TEST(Relations, LevelOneDimensions) {
    for (int k = 1; k <= 5; ++k) {
        DimensionEstimate e = dimension_estimate(k, Variant::zeta, above(k, 400));
        EXPECT_EQ(e.dimension, k >= 3 ? dseq(k - 3) : 0u) << k;
    }
}

TEST(Relations, Sequences) {
    std::vector<std::uint64_t> f, d;
    for (int k = 1; k <= 6; ++k) f.push_back(fib(k));
    for (int k = 0; k <= 5; ++k) d.push_back(dseq(k));
    EXPECT_EQ(f, (std::vector<std::uint64_t>{1, 1, 2, 3, 5, 8}));
    EXPECT_EQ(d, (std::vector<std::uint64_t>{1, 0, 1, 1, 1, 2}));
    EXPECT_EQ(fib(10), 55u);
    EXPECT_THROW(dseq(-1), std::invalid_argument);
}

TEST(Relations, BasisSizesMatchCounts) {
    for (int k = 1; k <= 12; ++k) {
        std::size_t odd = 0, odd3 = 0;
        for (const auto& idx : oracle::compositions(k)) {
            bool all_odd = std::all_of(idx.begin(), idx.end(), [](int e) { return e % 2 == 1; });
            odd += all_odd;
            odd3 += all_odd && std::all_of(idx.begin(), idx.end(), [](int e) { return e >= 3; });
        }
        EXPECT_EQ(odd, fib(k));
        EXPECT_EQ(odd_basis(k).size(), fib(k));
        if (k >= 3) {
            EXPECT_EQ(odd3, dseq(k - 3));
            EXPECT_EQ(odd3_basis(k).size(), dseq(k - 3));
        }
        EXPECT_EQ(all_descriptors(k, Variant::zeta2).size(), std::size_t{1} << (k - 1));
    }
    EXPECT_EQ(all_descriptors(3, Variant::euler).size(), 2u + 2 * 4 + 8);
}

TEST(Relations, DescriptorFormat) {
    EXPECT_EQ((Descriptor{Variant::euler, {1}, SignVector{-1}}).str(), "euler(1;-)");
    EXPECT_EQ((Descriptor{Variant::zeta2, {1, 2}, std::nullopt}).str(), "zeta2(1,2)");
}
