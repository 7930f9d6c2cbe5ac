#pragma once

// Numeric and symbolic verification suites for the level-two identities,
// sum formulas and the weighted-sum conjecture. Every numeric case of
// weight k is checked at the primes p > k + 2 of the given list; equality
// is exact in Z/pZ.

#include "fmzv/bernoulli.hpp"
#include "fmzv/harmonic.hpp"
#include "fmzv/parallel.hpp"
#include "fmzv/relations.hpp"
#include "fmzv/report.hpp"

#include <bit>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace fmzv {

/// Binomial coefficient with binom(n, m) = 0 unless 0 <= m <= n.
inline BigInt binom(long n, long m) {
    if (m < 0 || n < 0 || m > n) return 0;
    BigInt r = 1;
    for (long i = 1; i <= m; ++i) r = r * (n - m + i) / i;
    return r;
}

/// C(k_1..k_r) = sum_{j=1}^{r-1} (-1)^{k_1+..+k_j} binom(k, k_1+..+k_j).
inline Rational coeff_C(const Index& index) {
    if (index.depth() < 1) throw std::invalid_argument("coeff_C: depth must be >= 1");
    const int k = index.weight();
    BigInt total = 0;
    int partial = 0;
    for (int j = 0; j + 1 < index.depth(); ++j) {
        partial += index[static_cast<std::size_t>(j)];
        BigInt b = binom(k, partial);
        total += partial % 2 ? BigInt(-b) : b;
    }
    return Rational(total);
}

namespace detail {

struct NumericCase {
    std::string name;
    int weight = 0;
    std::function<std::pair<Residue, Residue>(const Prime&)> sides;
};

inline Report run_numeric(std::string suite, const std::vector<NumericCase>& cases, const std::vector<Prime>& primes,
                          unsigned jobs) {
    std::vector<std::pair<std::size_t, Prime>> work;
    for (std::size_t c = 0; c < cases.size(); ++c) {
        for (const auto& p : primes) {
            if (p.value() > static_cast<std::uint64_t>(cases[c].weight) + 2) work.emplace_back(c, p);
        }
    }
    Report report{std::move(suite), std::vector<ReportCase>(work.size())};
    parallel_for(work.size(), jobs, [&](std::size_t w) {
        const auto& [c, p] = work[w];
        auto [lhs, rhs] = cases[c].sides(p);
        report.cases[w] = {c, cases[c].name, p.value(), std::to_string(lhs), std::to_string(rhs), lhs == rhs, {}};
    });
    report.sort();
    return report;
}

inline std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

/// Short stable rendering of a combination for report rows.
inline std::string summarize(const IndexCombination& comb) {
    std::string full = comb.str();
    if (comb.size() <= 4) return full;
    std::ostringstream os;
    os << comb.size() << " terms #" << std::hex << (fnv1a(full) & 0xffffffffULL);
    return os.str();
}

inline ReportCase symbolic_case(std::size_t order, std::string name, const IndexCombination& lhs,
                                const IndexCombination& rhs) {
    ReportCase rc{order, std::move(name), 0, summarize(lhs), summarize(rhs), lhs == rhs, {}};
    if (!rc.pass) rc.detail = "lhs - rhs = " + (lhs - rhs).str();
    return rc;
}

inline std::string paren(const Index& idx) { return "(" + idx.str() + ")"; }

inline Residue signed_term(bool negative, Residue v, const Prime& p) { return negative ? neg_mod(v, p) : v; }

inline std::vector<Index> all_indices(int wmax, int dmax = 1 << 20) {
    std::vector<Index> out;
    for (int w = 1; w <= wmax; ++w) {
        for (const Index& idx : indices_of_weight(w)) {
            if (idx.depth() <= dmax) out.push_back(idx);
        }
    }
    return out;
}

}  // namespace detail

/// zeta2(1) = -2 L(2) and zeta2(k) = (2 - 2^k) Z(k), 2 <= k <= kmax.
inline Report verify_prop21(int kmax, const std::vector<Prime>& primes, unsigned jobs = 1) {
    std::vector<detail::NumericCase> cases;
    for (int k = 1; k <= kmax; ++k) {
        cases.push_back({"zeta2(" + std::to_string(k) + ")", k, [k](const Prime& p) {
                             Residue lhs = eval_zeta2(Index{k}, p);
                             Residue rhs = k == 1 ? mul_mod(neg_mod(2, p), L2(p), p)
                                                  : mul_mod(reduce(BigInt(2) - (BigInt(1) << k), p), Zk(k, p), p);
                             return std::pair{lhs, rhs};
                         }});
    }
    return detail::run_numeric("prop21", cases, primes, jobs);
}

/// zeta2(k1,k2) = 1/2 {(-1)^k2 binom(k,k2) + 2^k - 2} Z(k) for odd k = k1 + k2.
inline Report verify_depth2(int kmax, const std::vector<Prime>& primes, unsigned jobs = 1) {
    std::vector<detail::NumericCase> cases;
    for (int k = 3; k <= kmax; k += 2) {
        for_each_composition(k, 2, [&](const Index& idx) {
            const int k2 = idx[1];
            BigInt b = binom(k, k2);
            Rational coeff = Rational((k2 % 2 ? BigInt(-b) : b) + (BigInt(1) << k) - 2) / 2;
            cases.push_back({"zeta2" + detail::paren(idx), k, [idx, k, coeff](const Prime& p) {
                                 return std::pair{eval_zeta2(idx, p), mul_mod(rational_mod(coeff, p), Zk(k, p), p)};
                             }});
        });
    }
    return detail::run_numeric("depth2", cases, primes, jobs);
}

/// zeta(k) = sum_i (-1)^{k_{i+1}+..+k_r} zeta2(k_1..k_i) zeta2(k_r..k_{i+1}).
inline Report verify_key_identity(int wmax, const std::vector<Prime>& primes, unsigned jobs = 1) {
    std::vector<detail::NumericCase> cases;
    for (const Index& idx : detail::all_indices(wmax)) {
        cases.push_back({"key" + detail::paren(idx), idx.weight(), [idx](const Prime& p) {
                             const auto r = static_cast<std::size_t>(idx.depth());
                             Residue rhs = 0;
                             for (std::size_t i = 0; i <= r; ++i) {
                                 Index suffix = idx.slice(i, r);
                                 Residue t = mul_mod(eval_zeta2(idx.slice(0, i), p), eval_zeta2(suffix.reversed(), p), p);
                                 rhs = add_mod(rhs, detail::signed_term(suffix.weight() % 2, t, p), p);
                             }
                             return std::pair{eval_zeta(idx, p), rhs};
                         }});
    }
    return detail::run_numeric("key", cases, primes, jobs);
}

/// zeta2(k) = (-1)^{r+k} sum_i (-1)^i zeta(k_i..k_1) zeta2*(k_{i+1}..k_r).
inline Report verify_parity(int wmax, const std::vector<Prime>& primes, unsigned jobs = 1) {
    std::vector<detail::NumericCase> cases;
    for (const Index& idx : detail::all_indices(wmax)) {
        cases.push_back({"parity" + detail::paren(idx), idx.weight(), [idx](const Prime& p) {
                             const auto r = static_cast<std::size_t>(idx.depth());
                             Residue sum = 0;
                             for (std::size_t i = 0; i <= r; ++i) {
                                 Residue t = mul_mod(eval_zeta(idx.slice(0, i).reversed(), p), eval_zeta2_star(idx.slice(i, r), p), p);
                                 sum = add_mod(sum, detail::signed_term(i % 2, t, p), p);
                             }
                             return std::pair{eval_zeta2(idx, p), detail::signed_term((idx.depth() + idx.weight()) % 2, sum, p)};
                         }});
    }
    return detail::run_numeric("parity", cases, primes, jobs);
}

/// Antipode identity: symbolically zero in the harmonic algebra for every
/// index of depth <= dmax, weight <= wmax, and numerically zero at each prime.
inline Report verify_antipode(int wmax, int dmax, const std::vector<Prime>& primes, unsigned jobs = 1) {
    const std::vector<Index> indices = detail::all_indices(wmax, dmax);
    Report symbolic{"antipode", std::vector<ReportCase>(indices.size())};
    parallel_for(indices.size(), jobs, [&](std::size_t i) {
        symbolic.cases[i] = detail::symbolic_case(i, "symbolic" + detail::paren(indices[i]), antipode_sum(indices[i]),
                                                  IndexCombination{});
    });
    std::vector<detail::NumericCase> cases;
    for (const Index& idx : indices) {
        cases.push_back({"numeric" + detail::paren(idx), idx.weight(), [idx](const Prime& p) {
                             const auto r = static_cast<std::size_t>(idx.depth());
                             Residue sum = 0;
                             for (std::size_t j = 0; j <= r; ++j) {
                                 Residue t = mul_mod(eval_zeta2(idx.slice(0, j).reversed(), p), eval_zeta2_star(idx.slice(j, r), p), p);
                                 sum = add_mod(sum, detail::signed_term(j % 2, t, p), p);
                             }
                             return std::pair{sum, Residue{0}};
                         }});
    }
    symbolic += detail::run_numeric("antipode", cases, primes, jobs);
    return symbolic;
}

/// Both rewrites of level two (over even and over odd summation variables).
inline Report verify_even_odd(int wmax, const std::vector<Prime>& primes, unsigned jobs = 1) {
    std::vector<detail::NumericCase> cases;
    for (const Index& idx : detail::all_indices(wmax)) {
        cases.push_back({"even" + detail::paren(idx), idx.weight(),
                         [idx](const Prime& p) { return std::pair{eval_even_form(idx, p), eval_zeta2(idx, p)}; }});
        cases.push_back({"odd" + detail::paren(idx), idx.weight(),
                         [idx](const Prime& p) { return std::pair{eval_odd_form(idx, p), eval_zeta2(idx, p)}; }});
    }
    return detail::run_numeric("evenodd", cases, primes, jobs);
}

/// Odd-weight pairs: zeta2(k1,k2) = -1/2 (zeta2(k1+k2) + zeta(k2,k1));
/// even-weight triples: the depth-3 formula.
inline Report verify_example24(int wmax, const std::vector<Prime>& primes, unsigned jobs = 1) {
    std::vector<detail::NumericCase> cases;
    for (int k = 3; k <= wmax; k += 2) {
        for_each_composition(k, 2, [&](const Index& idx) {
            cases.push_back({"pair" + detail::paren(idx), k, [idx](const Prime& p) {
                                 Residue s = add_mod(eval_zeta2(Index{idx.weight()}, p), eval_zeta(idx.reversed(), p), p);
                                 return std::pair{eval_zeta2(idx, p), mul_mod(rational_mod(Rational(-1, 2), p), s, p)};
                             }});
        });
    }
    for (int k = 4; k <= wmax; k += 2) {
        for_each_composition(k, 3, [&](const Index& idx) {
            cases.push_back({"triple" + detail::paren(idx), k, [idx](const Prime& p) {
                                 const int a = idx[0], b = idx[1], c = idx[2];
                                 Residue s = eval_zeta(idx, p);
                                 s = sub_mod(s, eval_zeta2(Index{a + b, c}, p), p);
                                 s = sub_mod(s, eval_zeta2(Index{a, b + c}, p), p);
                                 s = add_mod(s, mul_mod(eval_zeta(Index{a, b}, p), eval_zeta2(Index{c}, p), p), p);
                                 return std::pair{eval_zeta2(idx, p), mul_mod(rational_mod(Rational(1, 2), p), s, p)};
                             }});
        });
    }
    return detail::run_numeric("example24", cases, primes, jobs);
}

/// S(k,r) and S1(k,r) against their odd-entry expansions, 1 <= r <= k <= kmax.
inline Report verify_sum_formula(int kmax, const std::vector<Prime>& primes, unsigned jobs = 1) {
    std::vector<detail::NumericCase> cases;
    for (int k = 1; k <= kmax; ++k) {
        for (int r = 1; r <= k; ++r) {
            for (bool restricted : {false, true}) {
                const int min_part = restricted ? 2 : 1;
                std::vector<Index> all;
                for_each_composition(k, r, [&](const Index& i) { all.push_back(i); }, min_part);
                // (coefficient, odd indices of depth i) for each admissible i
                std::vector<std::pair<BigInt, std::vector<Index>>> rhs_terms;
                for (int i = 1; i <= r; ++i) {
                    if ((k - i) % 2 != 0) continue;
                    BigInt c = binom(restricted ? (k - 3 * i) / 2 : (k - i) / 2, r - i);
                    if ((k + r) % 2) c = -c;
                    std::vector<Index> odd;
                    for_each_composition(k, i, [&](const Index& idx) {
                        if (all_entries_odd(idx)) odd.push_back(idx);
                    }, restricted ? 3 : 1);
                    rhs_terms.emplace_back(c, std::move(odd));
                }
                std::string name = std::string(restricted ? "S1(" : "S(") + std::to_string(k) + "," + std::to_string(r) + ")";
                cases.push_back({name, k, [all, rhs_terms](const Prime& p) {
                                     Residue lhs = 0, rhs = 0;
                                     for (const auto& idx : all) lhs = add_mod(lhs, eval_zeta2(idx, p), p);
                                     for (const auto& [c, odd] : rhs_terms) {
                                         Residue b = 0;
                                         for (const auto& idx : odd) b = add_mod(b, eval_zeta2(idx, p), p);
                                         rhs = add_mod(rhs, mul_mod(reduce(c, p), b, p), p);
                                     }
                                     return std::pair{lhs, rhs};
                                 }});
            }
        }
    }
    return detail::run_numeric("sumformula", cases, primes, jobs);
}

namespace detail {

/// Sum of zeta2 over compositions of k into r parts whose entry at `odd_pos`
/// is odd and all other entries even.
inline std::vector<Index> one_odd_pattern(int k, int r, int odd_pos) {
    std::vector<Index> out;
    for_each_composition(k, r, [&](const Index& idx) {
        for (int j = 0; j < r; ++j) {
            if ((idx[static_cast<std::size_t>(j)] % 2 == 1) != (j == odd_pos)) return;
        }
        out.push_back(idx);
    });
    return out;
}

inline Residue sum_zeta2(const std::vector<Index>& indices, const Prime& p) {
    Residue s = 0;
    for (const auto& idx : indices) s = add_mod(s, eval_zeta2(idx, p), p);
    return s;
}

}  // namespace detail

/// The 2..2,1,2..2 closed form for 1 <= i <= r <= rmax, plus reconstruction
/// of the rational constant c in "one-odd pattern sum = c zeta2(k)" for odd
/// k <= wmax on two disjoint halves of the prime list, each with its own
/// held-out check.
inline Report verify_ppt(int rmax, int wmax, const std::vector<Prime>& primes, unsigned jobs = 1) {
    std::vector<detail::NumericCase> cases;
    for (int r = 1; r <= rmax; ++r) {
        for (int i = 1; i <= r; ++i) {
            std::vector<int> e(static_cast<std::size_t>(r), 2);
            e[static_cast<std::size_t>(i - 1)] = 1;
            Index idx(e);
            Rational coeff = Rational(binom(2 * r - 1, 2 * i - 1), BigInt(1) << (2 * r - 2));
            if ((r - 1) % 2) coeff = -coeff;
            cases.push_back({"special" + detail::paren(idx), idx.weight(), [idx, coeff, r](const Prime& p) {
                                 return std::pair{eval_zeta2(idx, p),
                                                  mul_mod(rational_mod(coeff, p), eval_zeta2(Index{2 * r - 1}, p), p)};
                             }});
        }
    }
    Report report = detail::run_numeric("ppt", cases, primes, jobs);

    struct Pattern {
        int k, r, i;
        std::vector<Index> indices;
    };
    std::vector<Pattern> patterns;
    for (int k = 1; k <= wmax; k += 2) {
        for (int r = 1; 2 * r - 1 <= k; ++r) {
            for (int i = 1; i <= r; ++i) patterns.push_back({k, r, i, detail::one_odd_pattern(k, r, i - 1)});
        }
    }
    std::vector<std::vector<ReportCase>> rows(patterns.size());
    parallel_for(patterns.size(), jobs, [&](std::size_t t) {
        const Pattern& pat = patterns[t];
        const std::string name = "c[k=" + std::to_string(pat.k) + ",r=" + std::to_string(pat.r) + ",i=" + std::to_string(pat.i) + "]";
        std::vector<Prime> usable;
        for (const auto& p : primes) {
            if (p.value() > static_cast<std::uint64_t>(pat.k) + 2) usable.push_back(p);
        }
        auto [set_a, set_b] = split_disjoint(usable);
        std::vector<std::string> constants;
        for (const auto& [label, set] : {std::pair{std::string("A"), set_a}, std::pair{std::string("B"), set_b}}) {
            PrimeSplit split = split_training(set);
            std::vector<std::pair<Residue, Prime>> ratios;
            for (const auto& p : split.training) {
                Residue lhs = detail::sum_zeta2(pat.indices, p);
                Residue base = eval_zeta2(Index{pat.k}, p);
                if (base != 0) {
                    ratios.emplace_back(mul_mod(lhs, mod_inv(base, p), p), p);
                } else if (lhs != 0) {
                    rows[t].push_back({t, name + " " + label + " zero base", p.value(), std::to_string(lhs), "0", false, "zeta2(k) = 0 but pattern sum is not"});
                }
            }
            std::optional<Rational> c;
            if (!ratios.empty()) {
                CrtResult crt = crt_combine(ratios);
                c = rat_reconstruct(crt.residue, crt.modulus);
            }
            if (!c) {
                rows[t].push_back({t, name + " " + label + " reconstruction", 0, "none", "-", false, "rational reconstruction failed"});
                constants.emplace_back("none");
                continue;
            }
            constants.push_back(c->str());
            for (const auto& p : split.held_out) {
                Residue lhs = detail::sum_zeta2(pat.indices, p);
                Residue rhs = mul_mod(rational_mod(*c, p), eval_zeta2(Index{pat.k}, p), p);
                rows[t].push_back({t, name + " " + label + " held-out c=" + c->str(), p.value(), std::to_string(lhs),
                                   std::to_string(rhs), lhs == rhs, {}});
            }
        }
        rows[t].push_back({t, name + " stable A/B", 0, constants[0], constants[1],
                           constants[0] == constants[1] && constants[0] != "none", {}});
    });
    Report constants{"ppt", {}};
    for (auto& rs : rows) {
        for (auto& rc : rs) constants.cases.push_back(std::move(rc));
    }
    report += constants;
    return report;
}

/// Permutation-weighted sums. Level 1 uses zeta with factor 2; level 2 uses
/// zeta2 and requires k_1..k_{r-1} even, k_r odd.
inline Report verify_weighted_perm(int level, const std::vector<Index>& indices, const std::vector<Prime>& primes,
                                   unsigned jobs = 1) {
    if (level != 1 && level != 2) throw std::invalid_argument("verify_weighted_perm: level must be 1 or 2");
    std::vector<detail::NumericCase> cases;
    for (const Index& idx : indices) {
        const auto r = static_cast<std::size_t>(idx.depth());
        if (r < 1) throw std::invalid_argument("verify_weighted_perm: empty index");
        if (level == 2) {
            for (std::size_t i = 0; i + 1 < r; ++i) {
                if (idx[i] % 2 != 0) throw std::invalid_argument("level-2 weighted sum needs even k_1..k_{r-1}: " + idx.str());
            }
            if (idx[r - 1] % 2 != 1) throw std::invalid_argument("level-2 weighted sum needs odd k_r: " + idx.str());
        }
        // sum over tau of C(k_tau(1)..k_tau(r-1), k_r)
        Rational csum = 0;
        std::vector<int> head(idx.begin(), idx.end() - 1);
        std::vector<std::size_t> perm(head.size());
        std::iota(perm.begin(), perm.end(), 0);
        do {
            std::vector<int> e;
            for (std::size_t t : perm) e.push_back(head[t]);
            e.push_back(idx[r - 1]);
            csum += coeff_C(Index(e));
        } while (std::next_permutation(perm.begin(), perm.end()));
        Rational factor = (r % 2 ? Rational(-1) : Rational(1)) * (level == 1 ? 2 : 1) * csum;
        IndexCombination lhs_comb = gen_R(idx);
        const Variant variant = level == 1 ? Variant::zeta : Variant::zeta2;
        cases.push_back({"R" + detail::paren(idx), idx.weight(), [lhs_comb, factor, variant, k = idx.weight()](const Prime& p) {
                             Residue lhs = evaluate_combination(lhs_comb, variant, p);
                             Residue rhs = factor == 0 ? 0 : mul_mod(rational_mod(factor, p), Zk(k, p), p);
                             return std::pair{lhs, rhs};
                         }});
    }
    return detail::run_numeric(level == 1 ? "weighted1" : "weighted2", cases, primes, jobs);
}

/// All indices of depth <= dmax and weight <= wmax, restricted for level 2 to
/// the even..even,odd shape.
inline std::vector<Index> weighted_perm_indices(int level, int dmax, int wmax) {
    std::vector<Index> out;
    for (const Index& idx : detail::all_indices(wmax, dmax)) {
        if (level == 2) {
            bool ok = idx.entries().back() % 2 == 1;
            for (int i = 0; i + 1 < idx.depth(); ++i) ok = ok && idx[static_cast<std::size_t>(i)] % 2 == 0;
            if (!ok) continue;
        }
        out.push_back(idx);
    }
    return out;
}

/// sum over {1,2}-words with a twos of ((-1)^{#twos at odd positions} 2^a - 1) zeta2(word) = 0.
inline Report verify_conj38(int rmax, const std::vector<Prime>& primes, unsigned jobs = 1) {
    std::vector<detail::NumericCase> cases;
    for (int r = 1; r <= rmax; ++r) {
        for (int a = 0; a <= r; ++a) {
            std::vector<std::pair<std::int64_t, Index>> terms;
            for (unsigned mask = 0; mask < (1u << r); ++mask) {
                if (std::popcount(mask) != a) continue;
                std::vector<int> e;
                int odd_twos = 0;
                for (int pos = 1; pos <= r; ++pos) {
                    bool two = (mask >> (pos - 1)) & 1;
                    e.push_back(two ? 2 : 1);
                    if (two && pos % 2 == 1) ++odd_twos;
                }
                std::int64_t c = (odd_twos % 2 ? -1 : 1) * (std::int64_t{1} << a) - 1;
                if (c != 0) terms.emplace_back(c, Index(e));
            }
            cases.push_back({"r=" + std::to_string(r) + ",a=" + std::to_string(a), r + a, [terms](const Prime& p) {
                                 Residue s = 0;
                                 for (const auto& [c, idx] : terms) s = add_mod(s, mul_mod(reduce(c, p), eval_zeta2(idx, p), p), p);
                                 return std::pair{s, Residue{0}};
                             }});
        }
    }
    return detail::run_numeric("conj38", cases, primes, jobs);
}

/// Symbolic lemmas: g and g1 identities for 1 <= r <= k <= kmax, and the R
/// identity for every index of depth 2..dmax, weight <= wmax.
inline Report verify_lemmas(int kmax, int dmax, int wmax, unsigned jobs = 1) {
    struct Item {
        std::string name;
        std::function<std::pair<IndexCombination, IndexCombination>()> sides;
    };
    std::vector<Item> items;
    for (int k = 1; k <= kmax; ++k) {
        for (int r = 1; r <= k; ++r) {
            for (int a = 0; a <= r; ++a) {
                std::string tag = "(" + std::to_string(k) + "," + std::to_string(r) + "," + std::to_string(a) + ")";
                items.push_back({"g" + tag, [=] { return detail::lemma_g_sides(k, r, a, false); }});
                items.push_back({"g1" + tag, [=] { return detail::lemma_g_sides(k, r, a, true); }});
            }
        }
    }
    for (const Index& idx : detail::all_indices(wmax, dmax)) {
        if (idx.depth() >= 2) items.push_back({"R" + detail::paren(idx), [idx] { return detail::lemma_R_sides(idx); }});
    }
    Report report{"lemmas", std::vector<ReportCase>(items.size())};
    parallel_for(items.size(), jobs, [&](std::size_t i) {
        auto [lhs, rhs] = items[i].sides();
        report.cases[i] = detail::symbolic_case(i, items[i].name, lhs, rhs);
    });
    return report;
}

}  // namespace fmzv
