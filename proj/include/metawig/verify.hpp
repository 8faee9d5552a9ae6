// Verification suites: every acceptance check as a structured, seeded report.
// The CLI `verify` subcommand and the acceptance test binary both run these.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace metawig {

struct VerifyEntry {
    std::string quantity;
    double value = 0.0;
    double bound = 0.0;
    double margin = 0.0;  // positive = satisfied with room
    bool asserted = true; // report-only entries never fail the suite
    bool pass = true;
};

struct VerifyReport {
    std::string suite;
    uint64_t seed = 0;
    std::vector<VerifyEntry> entries;

    bool pass() const;
    nlohmann::json to_json() const;

    // value <= bound
    void check_le(const std::string& q, double value, double bound, bool asserted = true);
    // value >= bound
    void check_ge(const std::string& q, double value, double bound, bool asserted = true);
    void check_true(const std::string& q, bool ok);
    void report_only(const std::string& q, double value);
};

VerifyReport verify_core(uint64_t seed);
VerifyReport verify_engine(uint64_t seed);
VerifyReport verify_dist(uint64_t seed);
VerifyReport verify_analysis(uint64_t seed);
VerifyReport verify_quant(uint64_t seed);
std::vector<VerifyReport> verify_suite(const std::string& name, uint64_t seed);

} // namespace metawig
