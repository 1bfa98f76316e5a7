// verify.hpp: seeded property suites behind `opexp verify`.
//
// Each property reports the largest deviation observed over its cases and the
// tolerance it must stay below. Reports are deterministic for a given seed.

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace opexp {

struct PropertyResult {
    std::string name;
    double max_deviation = 0.0;
    double tolerance = 0.0;
    std::size_t cases = 0;

    bool passed() const { return max_deviation <= tolerance; }
};

struct SuiteReport {
    std::string suite;
    std::vector<PropertyResult> properties;

    bool passed() const;
};

struct VerifyOptions {
    std::uint64_t seed = 1;
    // Added to every entry of the jump operator V in the Lindblad suite; a
    // nonzero value must make that suite fail.
    double v_perturbation = 0.0;
    unsigned threads = 1;
};

SuiteReport verify_identities(const VerifyOptions& opts);
SuiteReport verify_lindblad(const VerifyOptions& opts);
SuiteReport verify_lattice(const VerifyOptions& opts);

// "identities", "lindblad", "lattice" or "all"
std::vector<SuiteReport> run_verification(const std::string& suite, const VerifyOptions& opts);

const std::vector<std::string>& verification_suites();

} // namespace opexp
