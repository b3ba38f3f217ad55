#include "doctest.h"

#include <stdexcept>

#include "qmlab/executor.hpp"
#include "qmlab/growth.hpp"
#include "qmlab/machines.hpp"
#include "qmlab/oracles.hpp"

using namespace qmlab;

TEST_CASE("M_k and T_k examples") {
    for (const auto& spec : {build_mk(2), build_tk(2)}) {
        const Machine m(spec);
        const RunResult r = run(m, "01#1$00$11$");
        CHECK(r.verdict == Verdict::accept);
        CHECK(r.output == "01$10$");
    }
    for (const auto& spec : {build_mk(1), build_tk(1)}) {
        const Machine m(spec);
        CHECK(run(m, "0$1$").output == "0$");
    }
    CHECK_THROWS_AS(build_mk(0), std::invalid_argument);
    CHECK_THROWS_AS(build_tk(0), std::invalid_argument);
}

TEST_CASE("M_k and T_k reject malformed input") {
    const Machine mk(build_mk(2)), tk(build_tk(2));
    for (const char* w : {"01$00$", "01#1$0$", "01#1$", "01#1$00", "#1$00$", "01#1$000$"}) {
        CAPTURE(w);
        CHECK(run(mk, w).verdict == Verdict::reject);
        CHECK(run(tk, w).verdict == Verdict::reject);
    }
}

TEST_CASE("M_1 and T_1 agree on 1000 seeds") {
    const Machine mk(build_mk(1)), tk(build_tk(1));
    for (std::uint64_t seed = 1; seed <= 1000; ++seed) {
        Rng rng(seed);
        const std::size_t f = 1 + rng.below(12), m = 1 + rng.below(24);
        const std::string word = gen_lk(1, {f}, m, rng.next()).render();
        CAPTURE(word);
        const RunResult a = run(mk, word), b = run(tk, word);
        REQUIRE(a.verdict == Verdict::accept);
        REQUIRE(b.verdict == Verdict::accept);
        REQUIRE(a.output == b.output);
    }
}

TEST_CASE("T_k work stays linear when queues run dry") {
    const Machine tk(build_tk(2));
    std::vector<GrowthPoint> pts;
    for (std::size_t n : {100u, 1000u, 10000u, 100000u}) {
        // short prefixes force repeated relocation
        const std::string word = gen_lk(2, {1, 3}, n, n).render();
        const RunResult r = run(tk, word);
        REQUIRE(r.verdict == Verdict::accept);
        pts.push_back({word.size(), r.steps});
    }
    const GrowthReport g = fit_growth(pts);
    CHECK(g.linear);
}

TEST_CASE("pi") {
    CHECK(pi("a") == "a");
    CHECK(pi("ab") == "ab");
    CHECK(pi("aabb") == "abab");
    CHECK(pi_order(4) == std::vector<std::size_t>{1, 3, 2, 4});
    CHECK(pi_order(8) == std::vector<std::size_t>{1, 3, 5, 7, 2, 6, 4, 8});
    CHECK(pi("abc") == "abc");   // identity off powers of two
    CHECK(pi("") == "");
    CHECK(is_power_of_two(1));
    CHECK_FALSE(is_power_of_two(0));
    CHECK_FALSE(is_power_of_two(6));
}

TEST_CASE("predicted cycle lengths and tail steps") {
    CHECK(predicted_cycle_length(3, 1) == 15);
    CHECK(predicted_cycle_length(3, 4) == 2);
    CHECK(predicted_cycle_length(0, 1) == 2);
    CHECK_THROWS_AS(predicted_cycle_length(3, 0), std::out_of_range);
    CHECK_THROWS_AS(predicted_cycle_length(3, 5), std::out_of_range);
    CHECK(predicted_tail_steps(0) == 4);
    CHECK(predicted_tail_steps(3) == 33);
    for (std::size_t k = 0; k <= 20; ++k) {
        CAPTURE(k);
        CHECK(predicted_tail_steps(k) == predicted_tail_steps_sum(k));
    }
}

TEST_CASE("L' acceptor examples") {
    const Machine lp(build_lprime_acceptor());
    CHECK(run(lp, "aca").verdict == Verdict::accept);
    CHECK(run(lp, "acb").verdict == Verdict::reject);
    CHECK(run(lp, "ab0c0ab").verdict == Verdict::accept);
    CHECK(run(lp, "aabb00c00abab").verdict == Verdict::accept);
    CHECK(run(lp, "aabb00c00aabb").verdict == Verdict::reject);
    CHECK(run(lp, "aabb0c0abab").verdict == Verdict::reject);   // |w| = 4 but 2^|v| = 2
    CHECK(run(lp, "c").verdict == Verdict::reject);
}

TEST_CASE("L' cycle profile at k = 3") {
    const Machine lp(build_lprime_acceptor());
    const std::string word = gen_lprime(3, 42).render();
    const RunResult r = run(lp, word, {0, true});
    REQUIRE(r.verdict == Verdict::accept);
    const LprimeRunProfile p = profile_lprime_run(lp, *r.trace);
    CHECK(p.cycle_lengths == std::vector<std::size_t>{15, 9, 5, 2});
    CHECK(p.tail_steps == 33);
    CHECK(p.prefix_steps == 8 + 3 + 1 + 3);
    CHECK(p.prefix_max_delay == 0);
}

TEST_CASE("Post-machine a^n b^n") {
    for (auto v : {AnbnVariant::linear, AnbnVariant::quadratic}) {
        const Machine m(build_post_anbn(v));
        CHECK(run(m, "aabb").verdict == Verdict::accept);
        CHECK(run(m, "aab").verdict == Verdict::reject);
        CHECK(run(m, "ba").verdict == Verdict::reject);
        CHECK(run(m, "").verdict == Verdict::accept);
    }
    const Machine lin(build_post_anbn(AnbnVariant::linear)), quad(build_post_anbn(AnbnVariant::quadratic));
    double previous = 2.0;
    for (std::size_t n = 8; n <= 1024; n *= 2) {
        const std::string w = std::string(n, 'a') + std::string(n, 'b');
        const double ratio = static_cast<double>(run(lin, w).steps) / static_cast<double>(run(quad, w).steps);
        CHECK(ratio < previous);
        previous = ratio;
    }
    CHECK(previous < 0.05);
}

TEST_CASE("builtin names") {
    CHECK(builtin_machine("mk:3"));
    CHECK(builtin_machine("tk:64"));
    CHECK_FALSE(builtin_machine("tk:65"));
    CHECK_FALSE(builtin_machine("mk:0"));
    CHECK_FALSE(builtin_machine("mk:x"));
    CHECK_FALSE(builtin_machine("nope"));
    CHECK_FALSE(builtin_names_help().empty());
}
