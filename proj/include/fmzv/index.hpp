#pragma once

// Indices (compositions), sign vectors and the zeta variants.

#include <algorithm>
#include <charconv>
#include <compare>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fmzv {

/// A tuple (k_1, ..., k_r) of positive integers. The empty index is the unit.
class Index {
public:
    Index() = default;
    Index(std::initializer_list<int> entries) : Index(std::vector<int>(entries)) {}
    explicit Index(std::vector<int> entries) : entries_(std::move(entries)) {
        for (int k : entries_) {
            if (k < 1) throw std::invalid_argument("index entries must be positive");
        }
    }

    const std::vector<int>& entries() const { return entries_; }
    int depth() const { return static_cast<int>(entries_.size()); }
    int weight() const { return std::accumulate(entries_.begin(), entries_.end(), 0); }
    bool empty() const { return entries_.empty(); }
    int operator[](std::size_t i) const { return entries_[i]; }
    auto begin() const { return entries_.begin(); }
    auto end() const { return entries_.end(); }

    Index reversed() const { return Index(std::vector<int>(entries_.rbegin(), entries_.rend())); }

    /// Entries [first, last) as a new index.
    Index slice(std::size_t first, std::size_t last) const {
        return Index(std::vector<int>(entries_.begin() + first, entries_.begin() + last));
    }

    /// Canonical order: weight, then depth, then lexicographic entries.
    friend std::strong_ordering operator<=>(const Index& a, const Index& b) {
        if (auto c = a.weight() <=> b.weight(); c != 0) return c;
        if (auto c = a.depth() <=> b.depth(); c != 0) return c;
        return a.entries_ <=> b.entries_;
    }
    friend bool operator==(const Index&, const Index&) = default;

    /// "1,2,3"; the empty index serializes to "".
    std::string str() const {
        std::string s;
        for (std::size_t i = 0; i < entries_.size(); ++i) {
            if (i) s += ',';
            s += std::to_string(entries_[i]);
        }
        return s;
    }

    static Index parse(std::string_view text) {
        std::vector<int> entries;
        if (text.empty()) return Index{};
        std::size_t pos = 0;
        while (true) {
            std::size_t comma = text.find(',', pos);
            std::string_view field = text.substr(pos, comma == std::string_view::npos ? text.npos : comma - pos);
            int value = 0;
            auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
            if (ec != std::errc{} || ptr != field.data() + field.size() || value < 1) {
                throw std::invalid_argument("malformed index: '" + std::string(text) + "'");
            }
            entries.push_back(value);
            if (comma == std::string_view::npos) break;
            pos = comma + 1;
        }
        return Index(std::move(entries));
    }

private:
    std::vector<int> entries_;
};

/// Signs (+1 / -1) paired entrywise with an index, for finite Euler sums.
class SignVector {
public:
    SignVector() = default;
    SignVector(std::initializer_list<int> signs) : SignVector(std::vector<int>(signs)) {}
    explicit SignVector(std::vector<int> signs) : signs_(std::move(signs)) {
        for (int s : signs_) {
            if (s != 1 && s != -1) throw std::invalid_argument("signs must be +1 or -1");
        }
    }

    const std::vector<int>& signs() const { return signs_; }
    std::size_t size() const { return signs_.size(); }
    int operator[](std::size_t i) const { return signs_[i]; }

    friend auto operator<=>(const SignVector&, const SignVector&) = default;

    /// "+,-,+"
    std::string str() const {
        std::string s;
        for (std::size_t i = 0; i < signs_.size(); ++i) {
            if (i) s += ',';
            s += signs_[i] > 0 ? '+' : '-';
        }
        return s;
    }

    static SignVector parse(std::string_view text) {
        std::vector<int> signs;
        if (text.empty()) return SignVector{};
        for (std::size_t i = 0; i < text.size(); ++i) {
            bool sign_slot = i % 2 == 0;
            char c = text[i];
            if (sign_slot && (c == '+' || c == '-')) {
                signs.push_back(c == '+' ? 1 : -1);
            } else if (!sign_slot && c == ',') {
                continue;
            } else {
                throw std::invalid_argument("malformed sign vector: '" + std::string(text) + "'");
            }
        }
        if (text.back() == ',') throw std::invalid_argument("malformed sign vector: '" + std::string(text) + "'");
        return SignVector(std::move(signs));
    }

private:
    std::vector<int> signs_;
};

enum class Variant { zeta, zeta2, zeta2star, euler };

inline std::string_view to_string(Variant v) {
    switch (v) {
        case Variant::zeta: return "zeta";
        case Variant::zeta2: return "zeta2";
        case Variant::zeta2star: return "zeta2star";
        case Variant::euler: return "euler";
    }
    return "?";
}

inline Variant parse_variant(std::string_view name) {
    if (name == "zeta") return Variant::zeta;
    if (name == "zeta2") return Variant::zeta2;
    if (name == "zeta2star") return Variant::zeta2star;
    if (name == "euler") return Variant::euler;
    throw std::invalid_argument("unknown variant: '" + std::string(name) + "'");
}

/// Calls fn(Index) for every composition of `weight` into `depth` positive
/// parts, each part in [min_part, max_part], in lexicographic order.
inline void for_each_composition(int weight, int depth, const std::function<void(const Index&)>& fn,
                                 int min_part = 1, int max_part = 1 << 20) {
    if (depth < 0 || weight < 0) return;
    std::vector<int> parts(static_cast<std::size_t>(depth));
    std::function<void(int, int)> rec = [&](int pos, int remaining) {
        if (pos == depth) {
            if (remaining == 0) fn(Index(parts));
            return;
        }
        int slots_left = depth - pos - 1;
        for (int k = min_part; k <= std::min(max_part, remaining - slots_left * min_part); ++k) {
            parts[static_cast<std::size_t>(pos)] = k;
            rec(pos + 1, remaining - k);
        }
    };
    rec(0, weight);
}

/// All indices of the given weight (every depth), in canonical order.
inline std::vector<Index> indices_of_weight(int weight, const std::function<bool(const Index&)>& keep = {}) {
    std::vector<Index> out;
    for (int depth = 1; depth <= weight; ++depth) {
        for_each_composition(weight, depth, [&](const Index& idx) {
            if (!keep || keep(idx)) out.push_back(idx);
        });
    }
    return out;
}

inline bool all_entries_odd(const Index& idx) {
    return std::all_of(idx.begin(), idx.end(), [](int k) { return k % 2 == 1; });
}

}  // namespace fmzv
