#include "doctest.h"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "qmlab/error.hpp"
#include "qmlab/growth.hpp"
#include "qmlab/harness.hpp"
#include "qmlab/machines.hpp"

using namespace qmlab;

TEST_CASE("fit_growth") {
    std::vector<GrowthPoint> lin, quad;
    for (std::uint64_t n = 16; n <= 4096; n *= 2) {
        lin.push_back({n, 7 * n});
        quad.push_back({n, n * n});
    }
    const GrowthReport a = fit_growth(lin);
    CHECK(a.fitted_exponent == doctest::Approx(1.0));
    CHECK(a.max_ratio == doctest::Approx(7.0));
    CHECK(a.linear);
    const GrowthReport b = fit_growth(quad);
    CHECK(b.fitted_exponent == doctest::Approx(2.0));
    CHECK_FALSE(b.linear);

    CHECK_THROWS(fit_growth({{2, 4}, {4, 8}, {8, 16}}));
    CHECK_THROWS(fit_growth({{2, 4}, {4, 8}, {4, 8}, {8, 16}}));
    CHECK_THROWS(fit_growth({{1, 4}, {4, 8}, {6, 8}, {8, 16}}));
}

TEST_CASE("fit_growth rejects an n^(4/3) trend") {
    std::vector<GrowthPoint> pts;
    for (std::uint64_t n = 100; n <= 10000; n *= 2)
        pts.push_back({n, static_cast<std::uint64_t>(std::pow(static_cast<double>(n), 4.0 / 3.0))});
    CHECK_FALSE(fit_growth(pts).linear);
}

TEST_CASE("fit_growth rejects a wide ratio spread") {
    std::vector<GrowthPoint> pts;
    for (std::uint64_t n = 256; n <= 65536; n *= 2) pts.push_back({n, n * (n >= 8192 ? 8 : 1)});
    const GrowthReport g = fit_growth(pts);
    CHECK(g.max_ratio / g.min_ratio > kLinearRatioSpread);
    CHECK_FALSE(g.linear);
}

TEST_CASE("report rows are independent of worker count") {
    VerifyOptions o;
    o.suite = "lprime";
    o.cases = 300;
    o.all_words_len = 5;
    o.shape_len = 8;
    o.workers = 1;
    const std::string serial = format_report(run_verify(o), Format::text);
    o.workers = 3;
    const std::string parallel = format_report(run_verify(o), Format::text);
    CHECK(serial == parallel);
}

TEST_CASE("a failing check is reported with seed and expected/actual") {
    // A broken acceptor: accept the a^n b^n language in place of L'.
    const Machine wrong(build_post_anbn(AnbnVariant::linear));
    std::vector<BatchCase> cases = gen_batch("lprime", 3, 4, 9);
    cases.push_back({"ab", "reject", "planted"});
    const VerifyReport r = verify_batch(wrong, cases);
    CHECK_FALSE(r.passed());
    bool found = false;
    for (const auto& row : r.rows)
        if (!row.pass && row.check == "planted")
            found = row.detail.find("expected=reject") != std::string::npos &&
                    row.detail.find("actual=accept") != std::string::npos;
    CHECK(found);
}

TEST_CASE("verify rejects an unknown suite") {
    VerifyOptions o;
    o.suite = "nope";
    CHECK_THROWS_AS(run_verify(o), std::invalid_argument);
}

TEST_CASE("batch files round-trip and verify") {
    for (const char* family : {"lprime", "lk", "anbn"}) {
        CAPTURE(family);
        const auto cases = gen_batch(family, 3, 20, 5);
        CHECK(cases == gen_batch(family, 3, 20, 5));
        std::stringstream io;
        write_batch(io, cases);
        CHECK(read_batch(io) == cases);
    }
    const Machine lp(build_lprime_acceptor());
    CHECK(verify_batch(lp, gen_batch("lprime", 6, 50, 2)).passed());
    const Machine m3(build_mk(3)), t3(build_tk(3));
    CHECK(verify_batch(m3, gen_batch("lk", 3, 50, 2)).passed());
    CHECK(verify_batch(t3, gen_batch("lk", 3, 50, 2)).passed());
    const Machine an(build_post_anbn(AnbnVariant::linear));
    CHECK(verify_batch(an, gen_batch("anbn", 12, 50, 2)).passed());

    CHECK_THROWS_AS(gen_batch("nope", 1, 1, 1), std::invalid_argument);
    std::stringstream bad("abc\taccept\n");
    CHECK_THROWS_AS(read_batch(bad), ParseError);
    std::stringstream bad2("abc\tmaybe\tx\n");
    CHECK_THROWS_AS(read_batch(bad2), ParseError);
}

TEST_CASE("bench output is byte-stable") {
    const auto sizes = power_sizes(6, 10);
    CHECK(sizes.front() == 64);
    CHECK(sizes.size() == 5);
    const std::string a = format_bench(run_bench("mk:2", sizes, 3), Format::csv);
    const std::string b = format_bench(run_bench("mk:2", sizes, 3, 1), Format::csv);
    CHECK(a == b);
    CHECK(a.rfind("n,steps,max_len,verdict\n", 0) == 0);
    CHECK(a.find("# verdict=linear") != std::string::npos);
}

TEST_CASE("report formats") {
    VerifyReport r;
    r.rows.push_back({"pi", "bijection", 2, true, "n=4"});
    r.rows.push_back({"pi", "bijection", 1, false, "n=2"});
    r.normalize();
    CHECK(r.rows[0].case_id == 1);
    CHECK(r.failures() == 1);
    CHECK(format_report(r, Format::text) == "pi\t1\tbijection\tFAIL\tn=2\npi\t2\tbijection\tPASS\tn=4\nsummary\t2 checks\t1 failed\n");
    CHECK(format_report(r, Format::csv) == "suite,case,check,status,detail\npi,1,bijection,FAIL,n=2\npi,2,bijection,PASS,n=4\n");
    CHECK(format_report(r, Format::json).find("\"failures\": 1") != std::string::npos);
}

TEST_CASE("case seeds") {
    CHECK(case_seed(1, 0) != case_seed(1, 1));
    CHECK(case_seed(1, 0) != case_seed(2, 0));
    CHECK(case_seed(5, 17) == case_seed(5, 17));
}
