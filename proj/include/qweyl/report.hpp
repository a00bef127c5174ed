#pragma once

#include <chrono>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "json.hpp"

namespace qweyl {

struct CaseResult {
    std::string id;
    std::string anchor;   // stable identity label of the verified fact
    std::string status;   // pass | fail | skip
    std::string witness;  // free-form evidence or failure detail
    long ms = 0;
};

struct SuiteReport {
    std::string name;
    std::vector<CaseResult> cases;

    bool ok() const {
        for (auto& c : cases)
            if (c.status == "fail") return false;
        return true;
    }
};

/// run one case with timing; the body returns (pass, witness)
template <class F>
void run_case(SuiteReport& suite, const std::string& id, const std::string& anchor, F&& body) {
    auto t0 = std::chrono::steady_clock::now();
    CaseResult r;
    r.id = id;
    r.anchor = anchor;
    try {
        auto [pass, witness] = body();
        r.status = pass ? "pass" : "fail";
        r.witness = witness;
    } catch (const std::exception& e) {
        r.status = "fail";
        r.witness = std::string("exception: ") + e.what();
    }
    auto t1 = std::chrono::steady_clock::now();
    r.ms = std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count();
    suite.cases.push_back(std::move(r));
}

inline nlohmann::json report_json(const std::vector<SuiteReport>& suites) {
    nlohmann::json j;
    j["version"] = 1;
    j["suites"] = nlohmann::json::array();
    for (auto& s : suites) {
        nlohmann::json js;
        js["name"] = s.name;
        js["cases"] = nlohmann::json::array();
        for (auto& c : s.cases)
            js["cases"].push_back({{"id", c.id},
                                   {"anchor", c.anchor},
                                   {"status", c.status},
                                   {"witness", c.witness},
                                   {"ms", c.ms}});
        j["suites"].push_back(std::move(js));
    }
    return j;
}

inline std::string report_markdown(const std::vector<SuiteReport>& suites) {
    std::string out;
    for (auto& s : suites) {
        out += "## " + s.name + "\n\n";
        out += "| case | anchor | status | witness | ms |\n";
        out += "|---|---|---|---|---|\n";
        for (auto& c : s.cases)
            out += "| " + c.id + " | " + c.anchor + " | " + c.status + " | " + c.witness +
                   " | " + std::to_string(c.ms) + " |\n";
        out += "\n";
    }
    return out;
}

inline void print_report(const std::vector<SuiteReport>& suites, std::ostream& os) {
    for (auto& s : suites) {
        os << "suite " << s.name << "\n";
        for (auto& c : s.cases) {
            os << "  [" << c.status << "] " << c.id;
            if (!c.witness.empty()) os << "  -- " << c.witness;
            os << "  (" << c.ms << " ms)\n";
        }
    }
}

} // namespace qweyl
