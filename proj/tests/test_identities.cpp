#include "fmzv/identities.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace fmzv;

namespace {

const std::vector<Prime>& primes_100() {
    static const auto ps = sieve_primes(5, 100);
    return ps;
}

void expect_pass(const Report& r) {
    EXPECT_GT(r.cases.size(), 0u) << r.suite;
    if (!r.passed()) {
        std::ostringstream os;
        write_text(os, r);
        ADD_FAILURE() << os.str();
    }
}

}  // namespace

TEST(Identities, Binomial) {
    EXPECT_EQ(binom(5, 2), 10);
    EXPECT_EQ(binom(5, 6), 0);
    EXPECT_EQ(binom(5, -1), 0);
    EXPECT_EQ(binom(0, 0), 1);
}

TEST(Identities, CoeffC) {
    // C(1,2) = (-1)^1 binom(3,1) = -3; C(2,1) = binom(3,2) = 3
    EXPECT_EQ(coeff_C({1, 2}), -3);
    EXPECT_EQ(coeff_C({2, 1}), 3);
    EXPECT_EQ(coeff_C({5}), 0);
    EXPECT_THROW(coeff_C(Index{}), std::invalid_argument);
}

TEST(Identities, SuitesPassOnSmallRanges) {
    const auto& ps = primes_100();
    expect_pass(verify_prop21(7, ps));
    expect_pass(verify_depth2(7, ps));
    expect_pass(verify_key_identity(5, ps));
    expect_pass(verify_parity(5, ps));
    expect_pass(verify_antipode(6, 4, ps));
    expect_pass(verify_even_odd(5, ps));
    expect_pass(verify_example24(6, ps));
    expect_pass(verify_sum_formula(7, ps));
    expect_pass(verify_ppt(4, 7, sieve_primes(5, 200)));
    expect_pass(verify_weighted_perm(1, weighted_perm_indices(1, 3, 6), ps));
    expect_pass(verify_weighted_perm(2, weighted_perm_indices(2, 3, 7), ps));
    expect_pass(verify_conj38(5, ps));
    expect_pass(verify_lemmas(7, 3, 6));
}

TEST(Identities, RowsSkipSmallPrimes) {
    Report r = verify_prop21(9, sieve_primes(5, 13));
    for (const auto& c : r.cases) {
        const int k = std::stoi(c.name.substr(6));
        EXPECT_GT(c.prime, static_cast<std::uint64_t>(k) + 2) << c.name;
    }
}

TEST(Identities, SumFormulaAnchor) {
    // S(3,2) at p = 7: zeta2(1,2) + zeta2(2,1) = 1 + 5 = 6 = -1
    Report r = verify_sum_formula(3, {Prime(7)});
    auto it = std::find_if(r.cases.begin(), r.cases.end(), [](const ReportCase& c) { return c.name == "S(3,2)"; });
    ASSERT_NE(it, r.cases.end());
    EXPECT_EQ(it->lhs, "6");
    EXPECT_EQ(it->rhs, "6");
    EXPECT_EQ(oracle::zeta2({1, 2}, 7) + oracle::zeta2({2, 1}, 7), 6u);
}

TEST(Identities, WeightedPermAnchors) {
    Report r1 = verify_weighted_perm(1, {Index{1, 2}}, {Prime(7)});
    ASSERT_EQ(r1.cases.size(), 1u);
    EXPECT_EQ(r1.cases[0].lhs, "1");
    EXPECT_EQ(r1.cases[0].rhs, "1");
    Report r2 = verify_weighted_perm(2, {Index{2, 1}}, {Prime(7)});
    ASSERT_EQ(r2.cases.size(), 1u);
    EXPECT_EQ(r2.cases[0].lhs, "3");
    EXPECT_EQ(r2.cases[0].rhs, "3");
    Report r3 = verify_weighted_perm(2, {Index{5}}, {Prime(11)});
    EXPECT_EQ(r3.cases[0].lhs, "0");
    EXPECT_EQ(r3.cases[0].rhs, "0");
}

TEST(Identities, WeightedPermHypothesis) {
    EXPECT_THROW(verify_weighted_perm(2, {Index{1, 1}}, primes_100()), std::invalid_argument);
    EXPECT_THROW(verify_weighted_perm(2, {Index{2, 2}}, primes_100()), std::invalid_argument);
    EXPECT_THROW(verify_weighted_perm(3, {Index{2, 1}}, primes_100()), std::invalid_argument);
    for (const auto& idx : weighted_perm_indices(2, 4, 9)) {
        EXPECT_EQ(idx.entries().back() % 2, 1);
        for (int i = 0; i + 1 < idx.depth(); ++i) EXPECT_EQ(idx[static_cast<std::size_t>(i)] % 2, 0);
    }
}

TEST(Identities, Conj38Anchor) {
    // r=2, a=1 at p=7: words (2,1) coefficient -3, (1,2) coefficient 1.
    EXPECT_EQ((oracle::zeta2({1, 2}, 7) + 7 * 3 - 3 * oracle::zeta2({2, 1}, 7)) % 7, 0u);
    Report r = verify_conj38(2, {Prime(7)});
    EXPECT_TRUE(r.passed());
}

TEST(Identities, PptConstants) {
    Report r = verify_ppt(2, 5, sieve_primes(5, 400));
    auto stable = [&](const std::string& name) {
        auto it = std::find_if(r.cases.begin(), r.cases.end(), [&](const ReportCase& c) { return c.name == name; });
        return it == r.cases.end() ? std::string("missing") : it->lhs + "|" + it->rhs;
    };
    EXPECT_EQ(stable("c[k=3,r=2,i=1] stable A/B"), "-3/4|-3/4");
    EXPECT_EQ(stable("c[k=3,r=2,i=2] stable A/B"), "-1/4|-1/4");
    EXPECT_EQ(stable("c[k=5,r=1,i=1] stable A/B"), "1|1");
}

TEST(Identities, PptSpecialCaseAtSeven) {
    // -(3/4) zeta2(3) at p=7 equals zeta2(1,2) = 1
    Residue rhs = mul_mod(rational_mod(Rational(-3, 4), 7), oracle::zeta2({3}, 7), 7);
    EXPECT_EQ(rhs, 1u);
    EXPECT_EQ(oracle::zeta2({1, 2}, 7), 1u);
}

TEST(Identities, ParallelMatchesSerial) {
    const auto& ps = primes_100();
    EXPECT_EQ(to_json(verify_key_identity(5, ps, 1)).dump(), to_json(verify_key_identity(5, ps, 4)).dump());
    EXPECT_EQ(to_json(verify_ppt(3, 5, ps, 1)).dump(), to_json(verify_ppt(3, 5, ps, 3)).dump());
    EXPECT_EQ(to_json(verify_lemmas(6, 3, 6, 1)).dump(), to_json(verify_lemmas(6, 3, 6, 4)).dump());
}

TEST(Report, FailingCaseIsVisible) {
    Report r{"demo", {{0, "a", 7, "1", "2", false, "mismatch"}, {1, "b", 0, "x", "x", true, {}}}};
    EXPECT_FALSE(r.passed());
    EXPECT_EQ(r.failed_count(), 1u);
    std::ostringstream text, csv;
    write_text(text, r);
    EXPECT_NE(text.str().find("FAIL"), std::string::npos);
    EXPECT_NE(text.str().find("mismatch"), std::string::npos);
    write_csv(csv, r);
    EXPECT_EQ(csv.str(), "case,prime,lhs,rhs,pass\na,7,1,2,false\nb,0,x,x,true\n");
    auto j = to_json(r);
    EXPECT_EQ(j["passed"], false);
    EXPECT_EQ(j["summary"]["failed"], 1);
}

TEST(Report, CsvQuoting) {
    EXPECT_EQ(csv_field("key(1,2)"), "\"key(1,2)\"");
    EXPECT_EQ(csv_field("a\"b"), "\"a\"\"b\"");
    EXPECT_EQ(csv_field("plain"), "plain");
}

TEST(Report, JsonAndCsvCarrySameData) {
    Report r = verify_example24(5, primes_100());
    std::ostringstream csv;
    write_csv(csv, r);
    std::ostringstream rebuilt;
    rebuilt << "case,prime,lhs,rhs,pass\n";
    const auto j = to_json(r);
    for (const auto& c : j["cases"]) {
        rebuilt << csv_field(c["case"].get<std::string>()) << ',' << c["prime"].get<std::uint64_t>() << ','
                << csv_field(c["lhs"].get<std::string>()) << ',' << csv_field(c["rhs"].get<std::string>()) << ','
                << (c["pass"].get<bool>() ? "true" : "false") << '\n';
    }
    EXPECT_EQ(csv.str(), rebuilt.str());
}
