#pragma once

#include <string>
#include <vector>

namespace subdiff {

struct SelfTestEntry {
    std::string name;
    bool pass;
    std::string detail;  // worst observed error or failure location
};

struct SelfTestReport {
    std::vector<SelfTestEntry> entries;
    bool all_pass() const;
    std::string to_text() const;
};

// Property suite over the library's analytic identities: closed forms of the
// Mittag-Leffler family, the integral identities behind the solver algebra,
// kernel boundedness, and a small recovery roundtrip. `quick` trims the
// slower sweeps.
SelfTestReport run_selftest(bool quick);

} // namespace subdiff
