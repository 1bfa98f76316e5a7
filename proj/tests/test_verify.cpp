#include <gtest/gtest.h>

#include "opexp/errors.hpp"
#include "opexp/verify.hpp"

using namespace opexp;

namespace {

bool same_report(const SuiteReport& a, const SuiteReport& b)
{
    if (a.suite != b.suite || a.properties.size() != b.properties.size()) {
        return false;
    }
    for (std::size_t i = 0; i < a.properties.size(); ++i) {
        const auto& p = a.properties[i];
        const auto& q = b.properties[i];
        if (p.name != q.name || p.max_deviation != q.max_deviation || p.cases != q.cases) {
            return false;
        }
    }
    return true;
}

const PropertyResult* find(const SuiteReport& r, const std::string& name)
{
    for (const auto& p : r.properties) {
        if (p.name == name) {
            return &p;
        }
    }
    return nullptr;
}

} // namespace

TEST(Verify, SuitesPass)
{
    for (const auto& report : run_verification("all", VerifyOptions{})) {
        for (const auto& p : report.properties) {
            EXPECT_TRUE(p.passed()) << report.suite << "/" << p.name << " " << p.max_deviation;
            EXPECT_GT(p.cases, 0);
        }
    }
}

TEST(Verify, DeterministicUnderSeed)
{
    VerifyOptions opts;
    opts.seed = 99;
    const SuiteReport a = verify_identities(opts);
    const SuiteReport b = verify_identities(opts);
    EXPECT_TRUE(same_report(a, b));
    opts.threads = 3;
    EXPECT_TRUE(same_report(a, verify_identities(opts)));
}

TEST(Verify, InjectedJumpFaultFailsLindblad)
{
    VerifyOptions opts;
    opts.v_perturbation = 1e-3;
    const SuiteReport r = verify_lindblad(opts);
    EXPECT_FALSE(r.passed());
    const PropertyResult* jl = find(r, "J_after_L_vanishes");
    ASSERT_NE(jl, nullptr);
    EXPECT_FALSE(jl->passed());
}

TEST(Verify, UnknownSuite)
{
    EXPECT_THROW(run_verification("nope", VerifyOptions{}), InvalidArgument);
    EXPECT_EQ(verification_suites().size(), 4u);
}
