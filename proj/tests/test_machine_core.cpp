#include "doctest.h"

#include <sstream>
#include <stdexcept>

#include "qmlab/error.hpp"
#include "qmlab/executor.hpp"
#include "qmlab/machine.hpp"
#include "qmlab/machines.hpp"
#include "qmlab/spec_format.hpp"

using namespace qmlab;

namespace {

// Copies the input into Q one symbol per step, then pops it all back.
constexpr const char* kCopier = R"(states: copy drain
input_alphabet: ab
output_alphabet: ab
storage: Q queue ab
acceptance: empty_all_storages
copy | a | * -> copy | y | push=a | -
copy | b | * -> copy | y | push=b | -
copy | - | * -> drain | n | - | -
drain | - | a -> drain | n | pop | a
drain | - | b -> drain | n | pop | b
)";

constexpr const char* kStack = R"(states: s
input_alphabet: abc
storage: P pushdown abc
acceptance: final_states s
s | a | * -> s | y | push=a | -
s | b | * -> s | y | push=b | -
s | c | * -> s | y | pop+push=c | -
)";

Machine from_text(std::string_view text) { return Machine(parse_spec(text)); }

std::string queue_contents(const Configuration& c, std::size_t i = 0) {
    const auto& q = std::get<QueueStore>(c.storages[i]).symbols;
    return {q.begin(), q.end()};
}

}  // namespace

TEST_CASE("queue is FIFO") {
    const Machine m = from_text(kCopier);
    const RunResult r = run(m, "abba");
    CHECK(r.verdict == Verdict::accept);
    CHECK(r.output == "abba");
    CHECK(r.steps == 9);
    CHECK(r.max_lengths == std::vector<std::size_t>{4});
}

TEST_CASE("pop and push in one step") {
    SUBCASE("queue [a,b] pop+push c -> [b,c]") {
        const Machine m = from_text(R"(states: s t
input_alphabet: abc
storage: Q queue abc
acceptance: final_states t
s | a | * -> s | y | push=a | -
s | b | * -> s | y | push=b | -
s | c | * -> t | y | pop+push=c | -
)");
        Configuration c = initial_configuration(m, "abc");
        for (int i = 0; i < 3; ++i) REQUIRE(step(m, "abc", c));
        CHECK(queue_contents(c) == "bc");
    }
    SUBCASE("pushdown [a,b] pop+push c -> [a,c]") {
        const Machine m = from_text(kStack);
        Configuration c = initial_configuration(m, "abc");
        for (int i = 0; i < 3; ++i) REQUIRE(step(m, "abc", c));
        CHECK(std::get<PushdownStore>(c.storages[0]).symbols == "ac");
    }
}

TEST_CASE("initial configuration") {
    const Machine lp(build_lprime_acceptor());
    const Configuration c = initial_configuration(lp, "aca");
    CHECK(c.input_position == 0);
    CHECK(queue_contents(c).empty());
    CHECK(c.state == lp.start_state());

    const Machine post(build_post_anbn(AnbnVariant::linear));
    CHECK(queue_contents(initial_configuration(post, "aabb")) == "aabb");

    try {
        (void)initial_configuration(lp, "a7b");
        FAIL("expected InputError");
    } catch (const InputError& e) {
        CHECK(e.position() == 1);
    }
}

TEST_CASE("halt when no rule applies") {
    const Machine m = from_text(kCopier);
    Configuration c = initial_configuration(m, "");
    REQUIRE(step(m, "", c));   // copy -> drain on end of input
    CHECK_FALSE(step(m, "", c).has_value());
    CHECK(c.steps == 1);
}

TEST_CASE("validation") {
    SUBCASE("builtins are clean") {
        for (const char* name : {"mk:1", "mk:2", "mk:3", "tk:1", "tk:2", "tk:3", "lprime", "anbn:linear", "anbn:quadratic"}) {
            CAPTURE(name);
            const auto report = validate_spec(*builtin_machine(name));
            CHECK(report.ok());
            CHECK(report.error_count() == 0);
        }
    }
    SUBCASE("nondeterminism names both rules") {
        MachineSpec s = parse_spec(kCopier);
        s.rules.push_back(s.rules[0]);
        s.rules.back().next = "drain";
        const auto report = validate_spec(s);
        REQUIRE(report.has("nondeterminism"));
        bool named = false;
        for (const auto& i : report.issues)
            if (i.code == "nondeterminism")
                named = i.message.find('0') != std::string::npos && i.message.find('5') != std::string::npos;
        CHECK(named);
        CHECK_THROWS_AS(Machine{s}, SpecError);
    }
    SUBCASE("input read in post mode") {
        MachineSpec s = build_post_anbn(AnbnVariant::quadratic);
        s.rules[0].consume = true;
        const auto report = validate_spec(s);
        CHECK(report.has("post-mode-read"));
        bool message = false;
        for (const auto& i : report.issues) message |= i.message.find("input read in post mode") != std::string::npos;
        CHECK(message);
    }
    SUBCASE("reserved and unknown symbols") {
        MachineSpec s = parse_spec(kCopier);
        s.input_alphabet = "a*";
        CHECK(validate_spec(s).has("reserved-symbol"));
        s = parse_spec(kCopier);
        s.rules[0].next = "nowhere";
        CHECK(validate_spec(s).has("unknown-state"));
        s = parse_spec(kCopier);
        s.rules[0].actions[0].push = 'z';
        CHECK(validate_spec(s).has("alphabet-leak"));
    }
    SUBCASE("pop on an observed-empty queue") {
        MachineSpec s = parse_spec(kCopier);
        s.rules[2].observe = {std::string(1, kNone)};
        s.rules[2].actions[0].pop = true;
        CHECK(validate_spec(s).has("pop-on-empty"));
    }
    SUBCASE("arity mismatch") {
        MachineSpec s = parse_spec(kCopier);
        s.rules[0].observe.clear();
        CHECK(validate_spec(s).has("arity"));
    }
}

TEST_CASE("most specific rule wins") {
    const Machine m = from_text(R"(states: s t u
input_alphabet: ab
output_alphabet: 123
storage: Q queue ab
acceptance: output_bit
s | * | * -> t | n | - | 1
s | a | * -> t | n | - | 2
s | a | empty -> u | n | - | 3
)");
    CHECK(run(m, "a").output == "3");
    CHECK(run(m, "b").output == "1");
}

TEST_CASE("wildcard pop on empty is a fault") {
    const Machine m = from_text(R"(states: s
input_alphabet: a
storage: Q queue a
acceptance: empty_all_storages
s | a | * -> s | y | pop | -
)");
    const RunResult r = run(m, "a");
    CHECK(r.verdict == Verdict::fault);
    CHECK(r.fault.find("pop") != std::string::npos);
}

TEST_CASE("step limit") {
    const Machine m = from_text(R"(states: s
input_alphabet: a
storage: Q queue a
acceptance: empty_all_storages
s | * | * -> s | n | - | -
)");
    CHECK(run(m, "a", {10}).verdict == Verdict::step_limit_exceeded);
    CHECK(run(m, "a", {10}).steps == 10);
    CHECK(default_max_steps(3) == 64 * 16);
}

TEST_CASE("acceptance modes") {
    const Machine lp(build_lprime_acceptor());
    CHECK(run(lp, "").verdict == Verdict::reject);   // epsilon never accepted
    const Machine post(build_post_anbn(AnbnVariant::linear));
    CHECK(run(post, "").verdict == Verdict::accept);
    CHECK(run(Machine(build_mk(1)), "0$1$").verdict == Verdict::accept);
}

TEST_CASE("realtime and bounded delay") {
    const Machine copier = from_text(kCopier);
    const RunResult r = run(copier, "abab", {0, true});
    REQUIRE(r.trace);
    const Trace& t = *r.trace;
    CHECK(check_realtime(t, {0, 4}));
    CHECK_FALSE(check_realtime(t));
    CHECK(max_delay(t, {0, t.size()}) == 5);
    for (std::size_t d = 0; d < 6; ++d) {
        CAPTURE(d);
        CHECK(check_bounded_delay(t, {0, t.size()}, d) == (d >= 5));
    }
    CHECK(check_bounded_delay(t, {0, 4}, 0) == check_realtime(t, {0, 4}));

    const auto series = storage_length_series(t, "Q");
    REQUIRE(series.size() == t.size());
    CHECK(series[2] == std::pair<std::uint64_t, std::size_t>{3, 3});
    CHECK(series.back().second == 0);
    CHECK_THROWS_AS(storage_length_series(t, "nope"), std::out_of_range);
}

TEST_CASE("L' acceptor prefix is real-time, tail is not") {
    const Machine lp(build_lprime_acceptor());
    const RunResult r = run(lp, "aabb00c00abab", {0, true});
    REQUIRE(r.verdict == Verdict::accept);
    const LprimeRunProfile p = profile_lprime_run(lp, *r.trace);
    CHECK(check_realtime(*r.trace, {0, p.prefix_steps}));
    CHECK(check_bounded_delay(*r.trace, {0, p.prefix_steps}, 4));
    CHECK_FALSE(check_realtime(*r.trace));
    CHECK_FALSE(check_bounded_delay(*r.trace, {p.prefix_steps, r.trace->size()}, 1));
}

TEST_CASE("tape machine bookkeeping") {
    const Machine m = from_text(R"(states: s
input_alphabet: ab
storage: T tape ab tracks=2
acceptance: final_states s
s | a | * -> s | y | write=a*/move=R | -
s | b | * -> s | y | write=*b/move=S | -
)");
    Configuration c = initial_configuration(m, "aba");
    while (step(m, "aba", c)) {}
    const auto& t = std::get<TapeStore>(c.storages[0]);
    CHECK(t.head == 2);
    CHECK(t.at(0, 0) == 'a');
    CHECK(t.at(0, 1) == kBlank);
    CHECK(t.at(1, 0) == 'a');
    CHECK(t.at(1, 1) == 'b');
    CHECK(t.length() == 2);
}

TEST_CASE("spec format round-trips every builtin") {
    for (const char* name : {"mk:1", "mk:3", "tk:1", "tk:3", "lprime", "anbn:linear", "anbn:quadratic"}) {
        CAPTURE(name);
        const MachineSpec s = *builtin_machine(name);
        const std::string text = format_spec(s);
        CHECK(parse_spec(text) == s);
        CHECK(format_spec(parse_spec(text)) == text);
    }
}

TEST_CASE("spec parse errors carry line numbers") {
    try {
        (void)parse_spec("states: s\nbogus: 1\n");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
    }
    CHECK_THROWS_AS(parse_spec("states: s\ns | a | * -> s | maybe | - | -\n"), ParseError);
    CHECK_THROWS_AS(parse_spec("storage: Q stack ab\n"), ParseError);
}

TEST_CASE("trace csv") {
    const Machine copier = from_text(kCopier);
    const RunResult r = run(copier, "ab", {0, true});
    std::ostringstream out;
    write_trace_csv(out, *r.trace);
    CHECK(out.str() ==
          "step,state,consumed,len(Q),emit\n"
          "1,copy,1,1,-\n"
          "2,copy,1,2,-\n"
          "3,copy,0,2,-\n"
          "4,drain,0,1,a\n"
          "5,drain,0,0,b\n");
}
