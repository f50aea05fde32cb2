#include <mgeom/verify.hpp>

#include <gtest/gtest.h>

using namespace mgeom;

class PropertySuite : public ::testing::TestWithParam<std::string> {};

TEST_P(PropertySuite, AllPropertiesHold) {
    auto results = verify::run_suite(GetParam(), {});
    ASSERT_FALSE(results.empty());
    for (const auto& r : results) {
        EXPECT_TRUE(r.passed) << r.name << ": " << r.message;
        EXPECT_GT(r.cases, 0u) << r.name;
    }
}

INSTANTIATE_TEST_SUITE_P(Suites, PropertySuite, ::testing::Values("metric-core", "cantor-dims", "gromov", "telescope"),
                         [](const auto& info) {
                             std::string n = info.param;
                             for (char& c : n)
                                 if (c == '-') c = '_';
                             return n;
                         });

TEST(PropertySuite, InjectedFaultIsReported) {
    verify::Options opt;
    opt.cases = 10;
    opt.inject_fault = true;
    auto results = verify::run_suite("metric-core", opt);
    EXPECT_FALSE(verify::all_passed(results));
    const auto& last = results.back();
    EXPECT_FALSE(last.passed);
    EXPECT_NE(last.message.find("strong triangle inequality fails"), std::string::npos) << last.message;
}

TEST(PropertySuite, JUnitReport) {
    std::vector<verify::CaseResult> rs = {{"s", "a & b", 3, true, "", 0.5}, {"s", "c", 1, false, "x < y", 0.1}};
    std::string xml = verify::junit_xml(rs);
    EXPECT_NE(xml.find("a &amp; b"), std::string::npos);
    EXPECT_NE(xml.find("x &lt; y"), std::string::npos);
    EXPECT_NE(xml.find("failures=\"1\""), std::string::npos);
    EXPECT_THROW(verify::run("bogus", {}), MalformedInput);
}
