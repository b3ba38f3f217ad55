// One PASS/FAIL line per acceptance criterion; exit status 0 iff all pass.

#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "qmlab/executor.hpp"
#include "qmlab/harness.hpp"
#include "qmlab/machines.hpp"
#include "qmlab/oracles.hpp"

using namespace qmlab;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string first_failure(const VerifyReport& r) {
    for (const auto& row : r.rows)
        if (!row.pass) return row.suite + " " + std::to_string(row.case_id) + " " + row.check + ": " + row.detail;
    return {};
}

std::string summary(const VerifyReport& r) {
    std::ostringstream out;
    out << r.rows.size() << " checks, " << r.failures() << " failed";
    if (!r.passed()) out << "; first: " << first_failure(r);
    return out.str();
}

Outcome suite_outcome(const std::string& suite, const std::function<bool(const CheckRow&)>& selected) {
    VerifyOptions o;
    o.suite = suite;
    VerifyReport all = run_verify(o), picked;
    for (auto& row : all.rows)
        if (selected(row)) picked.rows.push_back(row);
    return {picked.passed(), summary(picked)};
}

Outcome criterion_cycle_lengths() {
    return suite_outcome("formulas", [](const CheckRow& r) {
        return r.check == "cycle-lengths" || r.check == "accept" || r.check.rfind("seeded-members", 0) == 0;
    });
}

Outcome criterion_tail_steps() {
    Outcome o = suite_outcome("formulas", [](const CheckRow& r) {
        return r.check == "tail-steps" || r.check == "closed-form=sum" || r.check.rfind("seeded-members", 0) == 0;
    });
    o.detail += "; c0=0";
    return o;
}

Outcome criterion_lprime_agreement() {
    VerifyOptions o;
    o.suite = "lprime";
    const VerifyReport r = run_verify(o);
    std::string counts;
    for (const auto& row : r.rows) counts += " " + row.check + "[" + row.detail + "]";
    return {r.passed(), summary(r) + ";" + counts};
}

Outcome criterion_linear_time() {
    const std::vector<std::string> machines = {"lprime", "mk:1", "mk:2", "mk:3", "tk:1", "tk:2", "tk:3"};
    bool all = true;
    std::ostringstream detail;
    for (const auto& m : machines) {
        const BenchReport b = run_bench(m, power_sizes(8, 16), 1);
        bool accepted = true;
        for (const auto& row : b.rows) accepted &= row.verdict == Verdict::accept;
        const bool ok = accepted && b.growth.linear;
        all &= ok;
        char buf[160];
        std::snprintf(buf, sizeof buf, "%s slope=%.4f spread=%.3f%s; ", m.c_str(), b.growth.fitted_exponent,
                      b.growth.max_ratio / b.growth.min_ratio, ok ? "" : " FAIL");
        detail << buf;
    }
    return {all, detail.str()};
}

Outcome criterion_fk() {
    return suite_outcome("fk", [](const CheckRow& r) { return r.check.find("=reference") != std::string::npos; });
}

Outcome criterion_pi() { return suite_outcome("pi", [](const CheckRow&) { return true; }); }

Outcome criterion_bounded_delay() {
    const Machine lp(build_lprime_acceptor());
    bool all = true;
    std::size_t worst = 0;
    for (std::size_t k = 0; k <= 10; ++k) {
        for (std::uint64_t seed = 1; seed <= 3; ++seed) {
            const RunResult r = run(lp, gen_lprime(k, case_seed(seed, k)).render(), {0, true});
            if (r.verdict != Verdict::accept) {
                all = false;
                continue;
            }
            const LprimeRunProfile p = profile_lprime_run(lp, *r.trace);
            all &= check_bounded_delay(*r.trace, {0, p.prefix_steps}, kLprimePrefixDelay);
            worst = std::max(worst, max_delay(*r.trace, {0, p.prefix_steps}));
        }
    }
    return {all, "d=" + std::to_string(kLprimePrefixDelay) + " observed max=" + std::to_string(worst) + " k=0..10"};
}

Outcome criterion_post_machine() {
    return suite_outcome("anbn", [](const CheckRow&) { return true; });
}

Outcome criterion_determinism() {
    VerifyOptions o;
    o.suite = "all";
    o.seed = 20260101;
    o.workers = 1;
    const std::string first = format_report(run_verify(o), Format::csv);
    o.workers = 4;
    const std::string second = format_report(run_verify(o), Format::csv);
    return {first == second, std::to_string(first.size()) + " bytes, serial vs 4 workers"};
}

}  // namespace

int main() {
    struct Criterion {
        const char* name;
        Outcome (*fn)();
    };
    const Criterion criteria[] = {
        {"1 cycle-start queue lengths", criterion_cycle_lengths},
        {"2 tail steps", criterion_tail_steps},
        {"3 L' acceptor agreement", criterion_lprime_agreement},
        {"4 linear-time certification", criterion_linear_time},
        {"5 F_k equivalence", criterion_fk},
        {"6 pi bijection and oracle", criterion_pi},
        {"7 bounded delay on prefix", criterion_bounded_delay},
        {"8 Post-machine a^n b^n", criterion_post_machine},
        {"9 verify reproducibility", criterion_determinism},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.fn();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("%s  %-30s %6.1fs  %s\n", o.pass ? "PASS" : "FAIL", c.name, secs, o.detail.c_str());
        std::fflush(stdout);
        failed += !o.pass;
    }
    return failed == 0 ? 0 : 1;
}
