#pragma once

// Command-line front end. Exit codes: 0 success, 1 runtime / I/O failure or
// failed verification, 2 usage error, 3 ambiguous basis expression.

#include "fmzv/cache.hpp"
#include "fmzv/identities.hpp"
#include "fmzv/relations.hpp"
#include "fmzv/report.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdlib>
#include <iomanip>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace fmzv::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitAmbiguous = 3;

/// Weight guard for exhaustive suites.
inline constexpr int kMaxSuiteWeight = 12;
inline constexpr int kMaxDimsWeight = 7;

struct RunConfig {
    std::string command;
    std::string variant = "zeta2";
    std::string index;
    std::string signs;
    bool signs_given = false;
    std::string primes = "5..200";
    bool primes_given = false;
    std::string suite;
    std::optional<int> kmax, wmax, rmax, dmax;
    int weight = 0;
    bool weight_given = false;
    std::string target;
    std::string basis = "odd";
    std::string height = "1000000";
    std::string format = "text";
    std::string experiment = "both";
    std::string cache_path;
    bool no_cache = false;
    unsigned jobs = 1;
    std::string cache_action;
};

class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// "lo..hi", inclusive.
inline std::vector<Prime> parse_prime_range(const std::string& text) {
    auto dots = text.find("..");
    if (dots == std::string::npos) throw UsageError("prime range must look like lo..hi: '" + text + "'");
    std::string lo_s = text.substr(0, dots), hi_s = text.substr(dots + 2);
    auto numeric = [](const std::string& s) { return !s.empty() && s.find_first_not_of("0123456789") == std::string::npos; };
    if (!numeric(lo_s) || !numeric(hi_s)) throw UsageError("prime range must look like lo..hi: '" + text + "'");
    std::uint64_t lo = std::stoull(lo_s), hi = std::stoull(hi_s);
    if (lo < 5 || lo > hi) throw UsageError("prime range needs 5 <= lo <= hi: '" + text + "'");
    if (hi > 100000000) throw UsageError("prime range upper bound too large: '" + text + "'");
    return sieve_primes(lo, hi);
}

inline std::unique_ptr<ResidueCache> open_cache(const RunConfig& cfg) {
    if (cfg.no_cache) return nullptr;
    std::string path = cfg.cache_path;
    if (path.empty()) {
        if (const char* env = std::getenv("FMZV_CACHE"); env && *env) path = env;
    }
    if (path.empty()) return nullptr;
    return std::make_unique<ResidueCache>(path);
}

inline nlohmann::ordered_json bigint_json(const BigInt& x) {
    if (abs(x) < (BigInt(1) << 62)) return static_cast<long long>(x);
    return x.str();
}

inline int run_compute(const RunConfig& cfg, std::ostream& out) {
    Variant variant = parse_variant(cfg.variant);
    Index index = Index::parse(cfg.index);
    std::optional<SignVector> signs;
    if (cfg.signs_given) signs = SignVector::parse(cfg.signs);
    if (variant == Variant::euler && !signs) throw UsageError("--signs is required for the euler variant");
    if (variant != Variant::euler && signs) throw UsageError("--signs is only valid for the euler variant");
    if (signs && signs->size() != static_cast<std::size_t>(index.depth())) {
        throw UsageError("--signs must have one sign per index entry");
    }
    std::vector<Prime> primes = parse_prime_range(cfg.primes);
    if (primes.empty()) throw UsageError("no primes in range " + cfg.primes);
    auto cache = open_cache(cfg);
    ResidueTable t = eval_table(variant, index, signs, primes, cache.get(), cfg.jobs);

    if (cfg.format == "json") {
        nlohmann::ordered_json j;
        j["variant"] = std::string(to_string(variant));
        j["index"] = index.str();
        j["signs"] = signs ? nlohmann::ordered_json(signs->str()) : nlohmann::ordered_json(nullptr);
        auto rows = nlohmann::ordered_json::array();
        for (const auto& [p, v] : t.rows) rows.push_back({{"prime", p}, {"residue", v}});
        j["rows"] = std::move(rows);
        out << j.dump(2) << '\n';
    } else if (cfg.format == "csv") {
        out << "prime,residue\n";
        for (const auto& [p, v] : t.rows) out << p << ',' << v << '\n';
    } else {
        out << to_string(variant) << "(" << index.str() << (signs ? ";" + signs->str() : std::string()) << ")\n";
        out << "prime  residue\n";
        for (const auto& [p, v] : t.rows) out << std::left << std::setw(5) << p << "  " << v << '\n';
    }
    return kExitOk;
}

inline void check_weight(const char* flag, int value, int limit = kMaxSuiteWeight) {
    if (value < 1) throw UsageError(std::string(flag) + " must be positive");
    if (value > limit) throw UsageError(std::string(flag) + " exceeds the guard of " + std::to_string(limit));
}

inline const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{"key",        "parity", "antipode",  "evenodd",   "prop21",
                                                "depth2",     "example24", "sumformula", "ppt",    "weighted1",
                                                "weighted2",  "conj38", "lemmas"};
    return names;
}

/// Runs one suite with the configured bounds (suite defaults where unset).
inline Report run_suite(const RunConfig& cfg) {
    const std::string& s = cfg.suite;
    auto bound = [&](const std::optional<int>& v, int def, const char* flag, int limit = kMaxSuiteWeight) {
        int x = v.value_or(def);
        check_weight(flag, x, limit);
        return x;
    };
    std::vector<Prime> primes;
    if (s != "lemmas") primes = parse_prime_range(cfg.primes);
    const unsigned jobs = cfg.jobs;

    if (s == "key") return verify_key_identity(bound(cfg.wmax, 7, "--wmax"), primes, jobs);
    if (s == "parity") return verify_parity(bound(cfg.wmax, 7, "--wmax"), primes, jobs);
    if (s == "antipode") return verify_antipode(bound(cfg.wmax, 8, "--wmax"), bound(cfg.dmax, 5, "--dmax"), primes, jobs);
    if (s == "evenodd") return verify_even_odd(bound(cfg.wmax, 6, "--wmax"), primes, jobs);
    if (s == "prop21") return verify_prop21(bound(cfg.kmax, 9, "--kmax"), primes, jobs);
    if (s == "depth2") return verify_depth2(bound(cfg.kmax, 9, "--kmax"), primes, jobs);
    if (s == "example24") return verify_example24(bound(cfg.wmax, 8, "--wmax"), primes, jobs);
    if (s == "sumformula") return verify_sum_formula(bound(cfg.kmax, 10, "--kmax"), primes, jobs);
    if (s == "ppt") {
        int rmax = bound(cfg.rmax, 6, "--rmax", 6);
        return verify_ppt(rmax, bound(cfg.wmax, 9, "--wmax"), primes, jobs);
    }
    if (s == "weighted1" || s == "weighted2") {
        const int level = s == "weighted1" ? 1 : 2;
        int dmax = bound(cfg.dmax, 4, "--dmax", 5);
        int wmax = bound(cfg.wmax, level == 1 ? 8 : 9, "--wmax");
        return verify_weighted_perm(level, weighted_perm_indices(level, dmax, wmax), primes, jobs);
    }
    if (s == "conj38") return verify_conj38(bound(cfg.rmax, 8, "--rmax", 10), primes, jobs);
    if (s == "lemmas") {
        return verify_lemmas(bound(cfg.kmax, 10, "--kmax"), bound(cfg.dmax, 4, "--dmax", 5), bound(cfg.wmax, 8, "--wmax"), jobs);
    }
    throw UsageError("unknown suite: '" + s + "'");
}

inline void write_report(std::ostream& out, const Report& r, const std::string& format) {
    if (format == "json") {
        out << to_json(r).dump(2) << '\n';
    } else if (format == "csv") {
        write_csv(out, r);
    } else {
        write_text(out, r);
    }
}

inline int run_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    Report r = run_suite(cfg);
    write_report(out, r, cfg.format);
    if (!r.passed()) {
        err << "suite " << r.suite << " FAILED: " << r.failed_count() << " of " << r.cases.size() << " cases\n";
        return kExitRuntime;
    }
    return kExitOk;
}

inline std::vector<Descriptor> parse_basis(const RunConfig& cfg, int weight) {
    if (cfg.basis == "odd") return odd_basis(weight);
    if (cfg.basis == "odd3") return odd3_basis(weight);
    std::vector<Descriptor> out;
    std::string rest = cfg.basis;
    while (!rest.empty()) {
        auto semi = rest.find(';');
        out.push_back({Variant::zeta2, Index::parse(rest.substr(0, semi)), std::nullopt});
        rest = semi == std::string::npos ? std::string() : rest.substr(semi + 1);
    }
    if (out.empty()) throw UsageError("empty basis");
    return out;
}

inline int run_discover(const RunConfig& cfg, std::ostream& out) {
    Variant variant = parse_variant(cfg.variant);
    if (variant == Variant::euler) throw UsageError("discover supports unsigned targets only");
    Descriptor target{variant, Index::parse(cfg.target), std::nullopt};
    if (target.index.empty()) throw UsageError("--target must be a nonempty index");
    const int weight = cfg.weight_given ? cfg.weight : target.index.weight();
    check_weight("--weight", weight);
    std::vector<Descriptor> basis = parse_basis(cfg, weight);
    if (std::find(basis.begin(), basis.end(), target) != basis.end()) {
        throw UsageError("target " + target.str() + " is itself a basis element");
    }
    int max_weight = target.index.weight();
    for (const auto& b : basis) max_weight = std::max(max_weight, b.index.weight());
    std::vector<Prime> primes;
    for (const auto& p : parse_prime_range(cfg.primes)) {
        if (p.value() > static_cast<std::uint64_t>(max_weight) + 2) primes.push_back(p);
    }
    const BigInt height(cfg.height);
    auto cache = open_cache(cfg);
    auto [set_a, set_b] = split_disjoint(primes);

    nlohmann::ordered_json j;
    j["target"] = target.str();
    auto jb = nlohmann::ordered_json::array();
    for (const auto& b : basis) jb.push_back(b.str());
    j["basis"] = jb;
    j["height_bound"] = bigint_json(height);
    j["runs"] = nlohmann::ordered_json::array();
    std::vector<std::optional<std::vector<Rational>>> found;
    for (const auto& set : {set_a, set_b}) {
        nlohmann::ordered_json run;
        PrimeSplit split = split_training(set);
        auto plist = [](const std::vector<Prime>& ps) {
            auto a = nlohmann::ordered_json::array();
            for (const auto& p : ps) a.push_back(p.value());
            return a;
        };
        run["training_primes"] = plist(split.training);
        run["held_out_primes"] = plist(split.held_out);
        std::optional<BasisExpression> e;
        if (!set.empty()) e = express_in_basis(target, basis, set, height, cache.get(), cfg.jobs);
        if (e) {
            auto cols = nlohmann::ordered_json::array();
            for (const auto& c : e->columns) cols.push_back(c.str());
            run["columns"] = cols;
            auto coeffs = nlohmann::ordered_json::array();
            for (const auto& c : e->relation.coefficients) coeffs.push_back(bigint_json(c));
            run["relation"] = coeffs;
            run["status"] = std::string(to_string(e->relation.status));
            nlohmann::ordered_json ex;
            for (std::size_t i = 0; i < basis.size(); ++i) ex[basis[i].str()] = e->coefficients[i].str();
            run["coefficients"] = ex;
            found.push_back(e->coefficients);
        } else {
            run["status"] = "not found";
            found.push_back(std::nullopt);
        }
        j["runs"].push_back(run);
    }
    const bool have = found[0].has_value() && found[1].has_value();
    const bool stable = have && *found[0] == *found[1];
    if (have || found[0]) {
        nlohmann::ordered_json ex;
        for (std::size_t i = 0; i < basis.size(); ++i) ex[basis[i].str()] = (*found[0])[i].str();
        j["coefficients"] = ex;
    } else {
        j["coefficients"] = nullptr;
    }
    j["stability"] = stable ? "stable" : (found[0] || found[1] ? "unstable" : "not found");
    out << j.dump(2) << '\n';
    return stable ? kExitOk : kExitRuntime;
}

inline int run_dims(const RunConfig& cfg, std::ostream& out) {
    check_weight("--weight", cfg.weight, kMaxDimsWeight);
    const int k = cfg.weight;
    std::vector<Prime> primes;
    for (const auto& p : parse_prime_range(cfg.primes_given ? cfg.primes : "5..400")) {
        if (p.value() > static_cast<std::uint64_t>(k) + 2) primes.push_back(p);
    }
    if (primes.empty()) throw UsageError("no primes above weight + 2 in range");
    const BigInt height(cfg.height);
    auto cache = open_cache(cfg);

    struct Row {
        std::string experiment;
        Variant variant;
        DimensionEstimate est;
        std::uint64_t conjectured;
    };
    std::vector<Row> rows;
    if (cfg.experiment == "odd" || cfg.experiment == "both") {
        rows.push_back({"odd", Variant::zeta2, dimension_estimate(k, Variant::zeta2, primes, height, cache.get(), cfg.jobs), fib(k)});
    }
    if (cfg.experiment == "odd3" || cfg.experiment == "both") {
        rows.push_back({"odd3", Variant::zeta, dimension_estimate(k, Variant::zeta, primes, height, cache.get(), cfg.jobs),
                        k >= 3 ? dseq(k - 3) : 0});
    }
    if (rows.empty()) throw UsageError("--experiment must be odd, odd3 or both");

    if (cfg.format == "json") {
        nlohmann::ordered_json j;
        j["weight"] = k;
        j["primes"] = {{"first", primes.front().value()}, {"last", primes.back().value()}, {"count", primes.size()}};
        auto arr = nlohmann::ordered_json::array();
        for (const auto& r : rows) {
            arr.push_back({{"experiment", r.experiment}, {"variant", std::string(to_string(r.variant))},
                           {"columns", r.est.columns}, {"relations", r.est.relations}, {"estimated", r.est.dimension},
                           {"conjectured", r.conjectured}, {"match", r.est.dimension == r.conjectured}});
        }
        j["experiments"] = arr;
        out << j.dump(2) << '\n';
    } else if (cfg.format == "csv") {
        out << "experiment,variant,weight,columns,relations,estimated,conjectured,match\n";
        for (const auto& r : rows) {
            out << r.experiment << ',' << to_string(r.variant) << ',' << k << ',' << r.est.columns << ',' << r.est.relations
                << ',' << r.est.dimension << ',' << r.conjectured << ',' << (r.est.dimension == r.conjectured ? "true" : "false")
                << '\n';
        }
    } else {
        out << "weight " << k << ", primes " << primes.front().value() << ".." << primes.back().value() << " ("
            << primes.size() << ")\n";
        out << "experiment  variant  columns  relations  estimated  conjectured  match\n";
        for (const auto& r : rows) {
            out << std::left << std::setw(10) << r.experiment << "  " << std::setw(7) << to_string(r.variant) << "  "
                << std::setw(7) << r.est.columns << "  " << std::setw(9) << r.est.relations << "  " << std::setw(9)
                << r.est.dimension << "  " << std::setw(11) << r.conjectured << "  "
                << (r.est.dimension == r.conjectured ? "yes" : "no") << '\n';
        }
    }
    return kExitOk;
}

inline int run_cache(const RunConfig& cfg, std::ostream& out) {
    auto cache = open_cache(cfg);
    if (!cache) throw UsageError("no cache configured (use --cache PATH or FMZV_CACHE)");
    if (cfg.cache_action == "stats") {
        out << cache->path().string() << ": " << cache->size() << " cells\n";
        return kExitOk;
    }
    auto bad = verify_cache(*cache, cfg.jobs);
    for (const auto& k : bad) out << "mismatch: " << k << '\n';
    out << cache->size() - bad.size() << "/" << cache->size() << " cells reproduce\n";
    return bad.empty() ? kExitOk : kExitRuntime;
}

/// Entry point; `args` excludes the program name.
inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    CLI::App app{"Finite multiple zeta values of level one and two modulo primes"};
    app.require_subcommand(1);
    app.add_option("--cache", cfg.cache_path, "Residue cache file (overrides FMZV_CACHE)");
    app.add_flag("--no-cache", cfg.no_cache, "Do not read or write a residue cache");
    app.add_option("--jobs,-j", cfg.jobs, "Worker threads")->check(CLI::Range(1u, 256u));

    auto formats = CLI::IsMember({"text", "json", "csv"});
    auto primes_opt = [&](CLI::App* sub) {
        return sub->add_option("--primes", cfg.primes, "Inclusive prime range lo..hi");
    };

    auto* compute = app.add_subcommand("compute", "Evaluate one value over a prime range");
    compute->add_option("--variant", cfg.variant)->check(CLI::IsMember({"zeta", "zeta2", "zeta2star", "euler"}));
    compute->add_option("--index", cfg.index, "Comma-separated index, e.g. 1,2")->required();
    auto* signs_opt = compute->add_option("--signs", cfg.signs, "Comma-separated signs for euler, e.g. +,-");
    primes_opt(compute);
    compute->add_option("--format", cfg.format)->check(formats);

    auto* verify = app.add_subcommand("verify", "Run a verification suite");
    verify->add_option("--suite", cfg.suite)->required()->check(CLI::IsMember(suite_names()));
    verify->add_option("--kmax", cfg.kmax);
    verify->add_option("--wmax", cfg.wmax);
    verify->add_option("--rmax", cfg.rmax);
    verify->add_option("--dmax", cfg.dmax);
    primes_opt(verify);
    verify->add_option("--format", cfg.format)->check(formats);

    auto* discover = app.add_subcommand("discover", "Express a value in a conjectural basis");
    discover->add_option("--target", cfg.target)->required();
    discover->add_option("--variant", cfg.variant, "Variant of the target")->check(CLI::IsMember({"zeta", "zeta2", "zeta2star"}));
    discover->add_option("--basis", cfg.basis, "odd, odd3, or explicit list like 3;1,1,1");
    auto* dweight = discover->add_option("--weight", cfg.weight);
    primes_opt(discover);
    discover->add_option("--height", cfg.height, "Height bound for relation coefficients");

    auto* dims = app.add_subcommand("dims", "Estimate dimensions of weight-k spaces");
    dims->add_option("--weight", cfg.weight)->required();
    auto* dprimes = primes_opt(dims);
    dims->add_option("--height", cfg.height);
    dims->add_option("--experiment", cfg.experiment)->check(CLI::IsMember({"odd", "odd3", "both"}));
    dims->add_option("--format", cfg.format)->check(formats);

    auto* cache_cmd = app.add_subcommand("cache", "Inspect or re-verify the residue cache");
    cache_cmd->add_option("action", cfg.cache_action)->required()->check(CLI::IsMember({"stats", "verify"}));

    try {
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n" << app.help();
        return kExitUsage;
    }
    cfg.signs_given = signs_opt->count() > 0;
    cfg.weight_given = dweight->count() > 0;
    cfg.primes_given = dprimes->count() > 0;

    try {
        if (compute->parsed()) return run_compute(cfg, out);
        if (verify->parsed()) return run_verify(cfg, out, err);
        if (discover->parsed()) return run_discover(cfg, out);
        if (dims->parsed()) return run_dims(cfg, out);
        if (cache_cmd->parsed()) return run_cache(cfg, out);
    } catch (const AmbiguityError& e) {
        err << "ambiguous: " << e.what() << '\n';
        return kExitAmbiguous;
    } catch (const CacheError& e) {
        err << "cache error: " << e.what() << '\n';
        return kExitRuntime;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return kExitUsage;
}

}  // namespace fmzv::cli
