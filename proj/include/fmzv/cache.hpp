#pragma once

// Residue tables over prime sets and the append-only on-disk cache.
//
// Cache file: one cell per line, `variant,index,signs,p,residue`, where the
// index and signs fields are themselves comma-separated. The signs field is
// empty for unsigned variants, so such a line reads e.g. `zeta2,1,2,,7,1`.

#include "fmzv/evaluator.hpp"
#include "fmzv/parallel.hpp"

#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace fmzv {

struct ResidueTable {
    Variant variant = Variant::zeta;
    Index index;
    std::optional<SignVector> signs;
    std::map<std::uint64_t, Residue> rows;
};

/// Thrown for unreadable or corrupt cache files; the message names the file
/// and, for parse failures, the offending line.
class CacheError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ResidueCache {
public:
    struct Cell {
        Variant variant;
        Index index;
        std::optional<SignVector> signs;
        std::uint64_t prime;
        Residue value;
    };

    /// Opens (creating if absent) the cache at `path` and loads every cell.
    explicit ResidueCache(std::filesystem::path path) : path_(std::move(path)) {
        if (std::filesystem::exists(path_)) load();
        out_.open(path_, std::ios::app);
        if (!out_) throw CacheError("cannot open cache file for appending: " + path_.string());
    }

    const std::filesystem::path& path() const { return path_; }

    std::optional<Residue> lookup(Variant v, const Index& idx, const std::optional<SignVector>& signs,
                                  std::uint64_t p) const {
        std::lock_guard lock(mutex_);
        auto it = cells_.find(key(v, idx, signs, p));
        if (it == cells_.end()) return std::nullopt;
        return it->second.value;
    }

    /// Records a freshly computed cell. A conflicting existing value is an error.
    void store(Variant v, const Index& idx, const std::optional<SignVector>& signs, std::uint64_t p, Residue value) {
        std::lock_guard lock(mutex_);
        std::string k = key(v, idx, signs, p);
        if (auto it = cells_.find(k); it != cells_.end()) {
            if (it->second.value != value) {
                throw CacheError("cache cell " + k + " holds " + std::to_string(it->second.value) +
                                 " but recomputation gave " + std::to_string(value) + " (" + path_.string() + ")");
            }
            return;
        }
        cells_.emplace(k, Cell{v, idx, signs, p, value});
        std::string line = k + "," + std::to_string(value) + "\n";
        out_.write(line.data(), static_cast<std::streamsize>(line.size()));
        out_.flush();
        if (!out_) throw CacheError("write failed: " + path_.string());
    }

    std::size_t size() const {
        std::lock_guard lock(mutex_);
        return cells_.size();
    }

    std::vector<Cell> cells() const {
        std::lock_guard lock(mutex_);
        std::vector<Cell> out;
        for (const auto& [k, c] : cells_) out.push_back(c);
        return out;
    }

    static std::string key(Variant v, const Index& idx, const std::optional<SignVector>& signs, std::uint64_t p) {
        return std::string(to_string(v)) + "," + idx.str() + "," + (signs ? signs->str() : std::string()) + "," +
               std::to_string(p);
    }

    /// Parses one cache line; throws std::invalid_argument on malformed input.
    static Cell parse_line(const std::string& line) {
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ',')) f.push_back(field);
        if (!line.empty() && line.back() == ',') f.emplace_back();
        if (f.size() < 5) throw std::invalid_argument("too few fields");
        Cell cell{parse_variant(f[0]), {}, std::nullopt, 0, 0};
        cell.prime = parse_uint(f[f.size() - 2]);
        cell.value = parse_uint(f[f.size() - 1]);
        std::vector<std::string> middle(f.begin() + 1, f.end() - 2);
        auto join = [](auto first, auto last) {
            std::string s;
            for (auto it = first; it != last; ++it) s += (it == first ? "" : ",") + *it;
            return s;
        };
        if (cell.variant == Variant::euler) {
            if (middle.size() % 2 != 0) throw std::invalid_argument("index and signs differ in length");
            auto half = middle.begin() + static_cast<std::ptrdiff_t>(middle.size() / 2);
            cell.index = Index::parse(join(middle.begin(), half));
            cell.signs = SignVector::parse(join(half, middle.end()));
        } else {
            if (middle.empty() || !middle.back().empty()) throw std::invalid_argument("signs field must be empty");
            cell.index = Index::parse(join(middle.begin(), middle.end() - 1));
        }
        if (cell.index.empty()) throw std::invalid_argument("empty index is never cached");
        Prime checked(cell.prime);
        if (cell.value >= cell.prime) throw std::invalid_argument("residue not reduced");
        return cell;
    }

private:
    static std::uint64_t parse_uint(const std::string& s) {
        if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) {
            throw std::invalid_argument("expected an unsigned integer, got '" + s + "'");
        }
        return std::stoull(s);
    }

    void load() {
        std::ifstream in(path_);
        if (!in) throw CacheError("cannot read cache file: " + path_.string());
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (line.empty()) continue;
            try {
                Cell c = parse_line(line);
                std::string k = key(c.variant, c.index, c.signs, c.prime);
                auto [it, inserted] = cells_.emplace(k, c);
                if (!inserted && it->second.value != c.value) throw std::invalid_argument("conflicting duplicate cell");
            } catch (const std::exception& e) {
                throw CacheError(path_.string() + ":" + std::to_string(lineno) + ": corrupt cache line '" + line +
                                 "': " + e.what());
            }
        }
        if (in.bad()) throw CacheError("read error: " + path_.string());
    }

    std::filesystem::path path_;
    std::map<std::string, Cell> cells_;
    std::ofstream out_;
    mutable std::mutex mutex_;
};

/// Evaluates one variant/index over a prime list, consulting and updating
/// `cache` when given. Primes are evaluated on up to `jobs` threads.
inline ResidueTable eval_table(Variant variant, const Index& index, const std::optional<SignVector>& signs,
                               const std::vector<Prime>& primes, ResidueCache* cache = nullptr, unsigned jobs = 1) {
    if (primes.empty()) throw std::invalid_argument("eval_table: prime list is empty");
    if (!std::is_sorted(primes.begin(), primes.end()) ||
        std::adjacent_find(primes.begin(), primes.end()) != primes.end()) {
        throw std::invalid_argument("eval_table: primes must be strictly ascending");
    }
    std::vector<Residue> values(primes.size());
    parallel_for(primes.size(), jobs, [&](std::size_t i) {
        const Prime& p = primes[i];
        if (cache && !index.empty()) {
            if (auto hit = cache->lookup(variant, index, signs, p)) {
                values[i] = *hit;
                return;
            }
        }
        values[i] = evaluate(variant, index, signs, p);
        if (cache && !index.empty()) cache->store(variant, index, signs, p, values[i]);
    });
    ResidueTable table{variant, index, signs, {}};
    for (std::size_t i = 0; i < primes.size(); ++i) table.rows.emplace(primes[i].value(), values[i]);
    return table;
}

/// Recomputes every cached cell; returns the keys whose stored value differs.
inline std::vector<std::string> verify_cache(const ResidueCache& cache, unsigned jobs = 1) {
    auto cells = cache.cells();
    std::vector<char> bad(cells.size(), 0);
    parallel_for(cells.size(), jobs, [&](std::size_t i) {
        const auto& c = cells[i];
        bad[i] = evaluate(c.variant, c.index, c.signs, Prime(c.prime)) != c.value;
    });
    std::vector<std::string> out;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (bad[i]) out.push_back(ResidueCache::key(cells[i].variant, cells[i].index, cells[i].signs, cells[i].prime));
    }
    return out;
}

}  // namespace fmzv
