#pragma once

// Verification reports and their JSON / CSV / text renderings. JSON and CSV
// carry the same five fields per case; text adds failure details.

#include <json.hpp>

#include <algorithm>
#include <cstdint>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace fmzv {

struct ReportCase {
    std::size_t order = 0;     // position in the suite's enumeration
    std::string name;
    std::uint64_t prime = 0;   // 0 for symbolic cases
    std::string lhs;
    std::string rhs;
    bool pass = false;
    std::string detail;
};

struct Report {
    std::string suite;
    std::vector<ReportCase> cases;

    std::size_t passed_count() const {
        return static_cast<std::size_t>(std::count_if(cases.begin(), cases.end(), [](const ReportCase& c) { return c.pass; }));
    }
    std::size_t failed_count() const { return cases.size() - passed_count(); }
    bool passed() const { return failed_count() == 0; }

    void sort() {
        std::stable_sort(cases.begin(), cases.end(), [](const ReportCase& a, const ReportCase& b) {
            return a.order != b.order ? a.order < b.order : a.prime < b.prime;
        });
    }

    Report& operator+=(const Report& o) {
        std::size_t base = cases.empty() ? 0 : cases.back().order + 1;
        for (auto c : o.cases) {
            c.order += base;
            cases.push_back(std::move(c));
        }
        return *this;
    }
};

inline nlohmann::ordered_json to_json(const Report& r) {
    nlohmann::ordered_json j;
    j["suite"] = r.suite;
    j["passed"] = r.passed();
    j["summary"] = {{"cases", r.cases.size()}, {"passed", r.passed_count()}, {"failed", r.failed_count()}};
    auto rows = nlohmann::ordered_json::array();
    for (const auto& c : r.cases) {
        rows.push_back({{"case", c.name}, {"prime", c.prime}, {"lhs", c.lhs}, {"rhs", c.rhs}, {"pass", c.pass}});
    }
    j["cases"] = std::move(rows);
    return j;
}

inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

inline void write_csv(std::ostream& os, const Report& r) {
    os << "case,prime,lhs,rhs,pass\n";
    for (const auto& c : r.cases) {
        os << csv_field(c.name) << ',' << c.prime << ',' << csv_field(c.lhs) << ',' << csv_field(c.rhs) << ','
           << (c.pass ? "true" : "false") << '\n';
    }
}

inline void write_text(std::ostream& os, const Report& r) {
    std::size_t w_name = 4, w_lhs = 3, w_rhs = 3;
    for (const auto& c : r.cases) {
        w_name = std::max(w_name, c.name.size());
        w_lhs = std::max(w_lhs, c.lhs.size());
        w_rhs = std::max(w_rhs, c.rhs.size());
    }
    os << "suite " << r.suite << ": " << r.passed_count() << "/" << r.cases.size() << " cases pass"
       << (r.passed() ? "" : " -- FAILURES") << '\n';
    os << std::left << std::setw(static_cast<int>(w_name)) << "case" << "  " << std::setw(7) << "prime" << "  "
       << std::setw(static_cast<int>(w_lhs)) << "lhs" << "  " << std::setw(static_cast<int>(w_rhs)) << "rhs"
       << "  pass\n";
    for (const auto& c : r.cases) {
        os << std::left << std::setw(static_cast<int>(w_name)) << c.name << "  " << std::setw(7)
           << (c.prime ? std::to_string(c.prime) : std::string("-")) << "  " << std::setw(static_cast<int>(w_lhs))
           << c.lhs << "  " << std::setw(static_cast<int>(w_rhs)) << c.rhs << "  " << (c.pass ? "ok" : "FAIL");
        if (!c.pass && !c.detail.empty()) os << "  (" << c.detail << ")";
        os << '\n';
    }
}

}  // namespace fmzv
