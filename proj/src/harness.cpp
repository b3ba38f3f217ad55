#include "qmlab/harness.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "json.hpp"

#include "qmlab/error.hpp"
#include "qmlab/machines.hpp"
#include "qmlab/oracles.hpp"

namespace qmlab {

namespace {

using json = nlohmann::json;

std::size_t resolve_workers(std::size_t w) { return w ? w : worker_count(); }

std::string shorten(std::string_view word, std::size_t limit = 48) {
    if (word.size() <= limit) return std::string(word);
    return std::string(word.substr(0, limit)) + "...(" + std::to_string(word.size()) + " symbols)";
}

std::string fixed(double x, int digits = 4) {
    std::ostringstream out;
    out << std::fixed << std::setprecision(digits) << x;
    return out.str();
}

template <class T>
std::string join(const std::vector<T>& xs) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? " " : "") + std::to_string(xs[i]);
    return out;
}

/// Agreement tally for one aggregated check, plus the first few failures.
struct Tally {
    std::uint64_t total = 0;
    std::uint64_t agree = 0;
    std::vector<CheckRow> failures;

    template <class MakeRow>
    void record(bool ok, MakeRow&& make_row) {
        ++total;
        if (ok) {
            ++agree;
        } else if (failures.size() < 8) {
            CheckRow row = make_row();
            row.pass = false;
            failures.push_back(std::move(row));
        }
    }
    void merge(Tally&& other) {
        total += other.total;
        agree += other.agree;
        for (auto& f : other.failures)
            if (failures.size() < 8) failures.push_back(std::move(f));
    }
    void emit(VerifyReport& report, const std::string& suite, const std::string& check, std::uint64_t case_id) {
        report.rows.push_back({suite, check, case_id, total > 0 && agree == total,
                               "agree " + std::to_string(agree) + "/" + std::to_string(total)});
        for (auto& f : failures) report.rows.push_back(std::move(f));
    }
};

// ---------------------------------------------------------------- pi

void suite_pi(const VerifyOptions& o, VerifyReport& report) {
    const std::size_t k_max = o.k_max ? o.k_max : 12;
    std::vector<std::vector<CheckRow>> slots(k_max + 1);
    parallel_for(k_max + 1, resolve_workers(o.workers), [&](std::size_t k) {
        const std::size_t n = std::size_t{1} << k;
        const auto order = pi_order(n);
        auto sorted = order;
        std::sort(sorted.begin(), sorted.end());
        std::vector<std::size_t> identity(n);
        std::iota(identity.begin(), identity.end(), 1);
        Rng rng(case_seed(o.seed, k));
        const std::string w = rng.word("ab", n);
        auto& rows = slots[k];
        rows.push_back({"pi", "bijection", k, sorted == identity, "n=" + std::to_string(n)});
        rows.push_back({"pi", "order=oracle", k, order == pi_oracle_positions(n), "n=" + std::to_string(n)});
        rows.push_back({"pi", "word=oracle", k, pi(w) == pi_oracle(w), "w=" + shorten(w)});
    });
    for (auto& s : slots)
        for (auto& r : s) report.rows.push_back(std::move(r));
}

// ---------------------------------------------------------------- formulas

void suite_formulas(const VerifyOptions& o, VerifyReport& report) {
    const std::size_t k_max = o.k_max ? o.k_max : 10;
    const Machine acceptor(build_lprime_acceptor());
    std::vector<std::vector<CheckRow>> slots(k_max + 1);
    parallel_for(k_max + 1, resolve_workers(o.workers), [&](std::size_t k) {
        auto& rows = slots[k];
        const std::uint64_t cs = case_seed(o.seed, k);
        const std::string word = gen_lprime(k, cs).render();
        const RunResult r = run(acceptor, word, {0, true});
        const std::string where = "k=" + std::to_string(k) + " seed=" + std::to_string(cs);

        rows.push_back({"formulas", "closed-form=sum", k, predicted_tail_steps(k) == predicted_tail_steps_sum(k),
                        std::to_string(predicted_tail_steps(k))});
        rows.push_back({"formulas", "accept", k, r.verdict == Verdict::accept,
                        where + " verdict=" + std::string(to_string(r.verdict))});
        LprimeRunProfile p;
        try {
            p = profile_lprime_run(acceptor, *r.trace);
        } catch (const std::exception& e) {
            rows.push_back({"formulas", "profile", k, false, where + " " + e.what()});
            return;
        }
        std::vector<std::uint64_t> expected;
        for (std::size_t i = 1; i <= k + 1; ++i) expected.push_back(predicted_cycle_length(k, i));
        std::vector<std::uint64_t> observed(p.cycle_lengths.begin(), p.cycle_lengths.end());
        rows.push_back({"formulas", "cycle-lengths", k, observed == expected,
                        where + " expected=[" + join(expected) + "] actual=[" + join(observed) + "]"});
        rows.push_back({"formulas", "tail-steps", k, p.tail_steps == predicted_tail_steps(k),
                        where + " expected=" + std::to_string(predicted_tail_steps(k)) +
                            " actual=" + std::to_string(p.tail_steps)});
        rows.push_back({"formulas", "prefix-delay", k, p.prefix_max_delay <= kLprimePrefixDelay,
                        where + " d=" + std::to_string(p.prefix_max_delay) +
                            " limit=" + std::to_string(kLprimePrefixDelay)});
    });
    for (auto& s : slots)
        for (auto& r : s) report.rows.push_back(std::move(r));

    // The same three measurements on further seeded members per k.
    constexpr std::size_t kExtra = 15;
    std::vector<Tally> extra(k_max + 1);
    parallel_for(k_max + 1, resolve_workers(o.workers), [&](std::size_t k) {
        for (std::size_t s = 1; s <= kExtra; ++s) {
            const std::uint64_t cs = case_seed(o.seed, k + 1000 * s);
            const RunResult r = run(acceptor, gen_lprime(k, cs).render(), {0, true});
            bool ok = r.verdict == Verdict::accept;
            std::string actual = "verdict=" + std::string(to_string(r.verdict));
            if (ok) {
                const LprimeRunProfile p = profile_lprime_run(acceptor, *r.trace);
                for (std::size_t i = 1; i <= k + 1; ++i)
                    ok &= i <= p.cycle_lengths.size() && p.cycle_lengths[i - 1] == predicted_cycle_length(k, i);
                ok &= p.tail_steps == predicted_tail_steps(k) && p.prefix_max_delay <= kLprimePrefixDelay;
                actual = "cycles=[" + join(p.cycle_lengths) + "] tail=" + std::to_string(p.tail_steps) +
                         " d=" + std::to_string(p.prefix_max_delay);
            }
            extra[k].record(ok, [&] {
                return CheckRow{"formulas", "seeded-members", 100 + k, false,
                                "k=" + std::to_string(k) + " seed=" + std::to_string(cs) + " " + actual};
            });
        }
    });
    for (std::size_t k = 0; k <= k_max; ++k) extra[k].emit(report, "formulas", "seeded-members k=" + std::to_string(k), 100 + k);
}

// ---------------------------------------------------------------- lprime

bool accepted(const Machine& m, std::string_view word) { return run(m, word).verdict == Verdict::accept; }

/// Every word w v c v' w' with the given block lengths.
Tally scan_shape(const Machine& m, std::size_t p, std::size_t q, std::size_t r, std::size_t s) {
    Tally t;
    const std::size_t free = p + q + r + s;
    std::string word(free + 1, ' ');
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << free); ++mask) {
        std::size_t bit = 0, pos = 0;
        auto fill = [&](std::size_t len, char zero, char one) {
            for (std::size_t i = 0; i < len; ++i, ++bit) word[pos++] = (mask >> bit) & 1 ? one : zero;
        };
        fill(p, 'a', 'b');
        fill(q, '0', '1');
        word[pos++] = 'c';
        fill(r, '0', '1');
        fill(s, 'a', 'b');
        const bool want = in_Lprime(word);
        t.record(accepted(m, word) == want,
                 [&] { return CheckRow{"lprime", "shaped<=len", 0, false, "word=" + word + " expected=" + (want ? "accept" : "reject")}; });
    }
    return t;
}

Tally scan_all(const Machine& m, std::size_t len, char first) {
    static constexpr std::string_view alphabet = "ab01c";
    Tally t;
    std::string word(len, 'a');
    if (len > 0) word[0] = first;
    std::vector<std::size_t> digit(len, 0);
    while (true) {
        const bool want = in_Lprime(word);
        t.record(accepted(m, word) == want, [&] {
            return CheckRow{"lprime", "all-words", 0, false,
                            "word=" + (word.empty() ? std::string("<empty>") : word) +
                                " expected=" + (want ? "accept" : "reject")};
        });
        std::size_t i = len;
        while (i > 1 && digit[i - 1] + 1 == alphabet.size()) {
            digit[i - 1] = 0;
            word[i - 1] = alphabet[0];
            --i;
        }
        if (i <= 1) return t;
        word[i - 1] = alphabet[++digit[i - 1]];
    }
}

void suite_lprime(const VerifyOptions& o, VerifyReport& report) {
    const std::size_t k_max = o.k_max ? o.k_max : 10;
    const std::size_t cases = o.cases ? o.cases : 10000;
    const std::size_t workers = resolve_workers(o.workers);
    const Machine acceptor(build_lprime_acceptor());

    // Structured members and one negative per clause.
    constexpr std::size_t kinds = 1 + std::size(kAllClauses);
    std::vector<std::array<Tally, kinds>> tallies(cases);
    parallel_for(cases, workers, [&](std::size_t c) {
        const std::uint64_t cs = case_seed(o.seed, c);
        const std::size_t k = c % (k_max + 1);
        const LprimeInstance inst = gen_lprime(k, cs);
        const std::string member = inst.render();
        const std::string where = "k=" + std::to_string(k) + " seed=" + std::to_string(cs);
        tallies[c][0].record(in_Lprime(member) && accepted(acceptor, member),
                             [&] { return CheckRow{"lprime", "structured:member", c, false, where + " word=" + shorten(member)}; });
        for (std::size_t ci = 0; ci < std::size(kAllClauses); ++ci) {
            const Clause clause = kAllClauses[ci];
            const LprimeInstance& base =
                clause == Clause::v_mismatch && k == 0 ? gen_lprime(1 + c % std::max<std::size_t>(k_max, 1), cs) : inst;
            const std::string word = mutate_negative(base, clause, cs + ci + 1);
            tallies[c][ci + 1].record(
                !in_Lprime(word) && !accepted(acceptor, word),
                [&] { return CheckRow{"lprime", "structured:" + std::string(to_string(clause)), c, false, where + " word=" + shorten(word)}; });
        }
    });
    std::array<Tally, kinds> merged;
    for (auto& row : tallies)
        for (std::size_t i = 0; i < kinds; ++i) merged[i].merge(std::move(row[i]));
    merged[0].emit(report, "lprime", "structured:member", 0);
    for (std::size_t ci = 0; ci < std::size(kAllClauses); ++ci)
        merged[ci + 1].emit(report, "lprime", "structured:" + std::string(to_string(kAllClauses[ci])), ci + 1);

    // Every word up to all_words_len.
    {
        std::vector<std::pair<std::size_t, char>> units;
        for (std::size_t len = 0; len <= o.all_words_len; ++len) {
            if (len == 0) {
                units.emplace_back(0, 'a');
                continue;
            }
            for (char c : std::string_view("ab01c")) units.emplace_back(len, c);
        }
        std::vector<Tally> parts(units.size());
        parallel_for(units.size(), workers, [&](std::size_t u) { parts[u] = scan_all(acceptor, units[u].first, units[u].second); });
        Tally all;
        for (auto& p : parts) all.merge(std::move(p));
        all.emit(report, "lprime", "all-words<=" + std::to_string(o.all_words_len), 10);
    }

    // Every shaped word up to shape_len.
    {
        std::vector<std::array<std::size_t, 4>> units;
        for (std::size_t len = 1; len <= o.shape_len; ++len)
            for (std::size_t p = 0; p < len; ++p)
                for (std::size_t q = 0; p + q < len; ++q)
                    for (std::size_t r = 0; p + q + r < len; ++r) units.push_back({p, q, r, len - 1 - p - q - r});
        std::vector<Tally> parts(units.size());
        parallel_for(units.size(), workers, [&](std::size_t u) {
            const auto& [p, q, r, s] = units[u];
            parts[u] = scan_shape(acceptor, p, q, r, s);
        });
        Tally shaped;
        for (auto& p : parts) shaped.merge(std::move(p));
        shaped.emit(report, "lprime", "shaped<=" + std::to_string(o.shape_len), 11);
    }
}

// ---------------------------------------------------------------- fk

void suite_fk(const VerifyOptions& o, VerifyReport& report) {
    const std::size_t k_max = o.k_max ? o.k_max : 3;
    const std::size_t cases = o.cases ? o.cases : 1000;
    const std::size_t workers = resolve_workers(o.workers);
    for (std::size_t k = 1; k <= k_max; ++k) {
        const Machine mk(build_mk(k)), tk(build_tk(k));
        std::vector<std::array<Tally, 3>> tallies(cases);
        parallel_for(cases, workers, [&](std::size_t c) {
            const std::uint64_t id = k * 1000000 + c;
            const std::uint64_t cs = case_seed(o.seed, id);
            Rng rng(cs);
            std::vector<std::size_t> f(k);
            for (auto& fi : f) fi = 1 + rng.below(8);
            const std::size_t m = 1 + rng.below(16);
            const LkInstance inst = gen_lk(k, f, m, rng.next());
            const std::string word = inst.render();
            const std::string expected = evaluate_fk(inst);
            const RunResult rm = run(mk, word), rt = run(tk, word);
            const std::string where = "k=" + std::to_string(k) + " seed=" + std::to_string(cs);
            tallies[c][0].record(rm.verdict == Verdict::accept && rm.output == expected,
                                 [&] { return CheckRow{"fk", "mk=reference", id, false,
                                  where + " expected=" + shorten(expected) + " actual=" + shorten(rm.output)}; });
            tallies[c][1].record(rt.verdict == Verdict::accept && rt.output == expected,
                                 [&] { return CheckRow{"fk", "tk=reference", id, false,
                                  where + " expected=" + shorten(expected) + " actual=" + shorten(rt.output)}; });
            const std::string bad = mutate_negative(inst, Clause::bad_format, cs + 1);
            tallies[c][2].record(run(mk, bad).verdict == Verdict::reject && run(tk, bad).verdict == Verdict::reject,
                                 [&] { return CheckRow{"fk", "malformed-rejected", id, false, where + " word=" + shorten(bad)}; });
        });
        std::array<Tally, 3> merged;
        for (auto& t : tallies)
            for (std::size_t i = 0; i < 3; ++i) merged[i].merge(std::move(t[i]));
        merged[0].emit(report, "fk", "mk=reference k=" + std::to_string(k), k * 10);
        merged[1].emit(report, "fk", "tk=reference k=" + std::to_string(k), k * 10 + 1);
        merged[2].emit(report, "fk", "malformed-rejected k=" + std::to_string(k), k * 10 + 2);
    }
}

// ---------------------------------------------------------------- anbn

void suite_anbn(const VerifyOptions& o, VerifyReport& report) {
    const Machine linear(build_post_anbn(AnbnVariant::linear)), quadratic(build_post_anbn(AnbnVariant::quadratic));
    std::vector<std::array<Tally, 2>> parts(o.anbn_len + 1);
    parallel_for(o.anbn_len + 1, resolve_workers(o.workers), [&](std::size_t len) {
        std::string word(len, 'a');
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << len); ++mask) {
            for (std::size_t i = 0; i < len; ++i) word[i] = (mask >> i) & 1 ? 'b' : 'a';
            const bool want = in_anbn(word);
            const std::string detail = "word=" + (word.empty() ? std::string("<empty>") : word);
            parts[len][0].record(accepted(linear, word) == want, [&] { return CheckRow{"anbn", "linear=predicate", len, false, detail}; });
            parts[len][1].record(accepted(quadratic, word) == want, [&] { return CheckRow{"anbn", "quadratic=predicate", len, false, detail}; });
        }
    });
    std::array<Tally, 2> merged;
    for (auto& p : parts)
        for (std::size_t i = 0; i < 2; ++i) merged[i].merge(std::move(p[i]));
    merged[0].emit(report, "anbn", "linear=predicate len<=" + std::to_string(o.anbn_len), 0);
    merged[1].emit(report, "anbn", "quadratic=predicate len<=" + std::to_string(o.anbn_len), 1);

    std::vector<GrowthPoint> lin, quad;
    for (std::size_t n = 8; n <= 1024; n *= 2) {
        const std::string word = std::string(n, 'a') + std::string(n, 'b');
        lin.push_back({n, run(linear, word).steps});
        quad.push_back({n, run(quadratic, word).steps});
    }
    const GrowthReport gl = fit_growth(lin), gq = fit_growth(quad);
    double c_quad = 0;
    for (const auto& p : quad) c_quad = std::max(c_quad, static_cast<double>(p.n * p.n) / static_cast<double>(p.steps));
    report.rows.push_back({"anbn", "linear-growth", 2, gl.linear,
                           "slope=" + fixed(gl.fitted_exponent) + " c=" + fixed(gl.max_ratio)});
    report.rows.push_back({"anbn", "quadratic-growth", 3, gq.fitted_exponent >= 1.9,
                           "slope=" + fixed(gq.fitted_exponent) + " c'=" + fixed(c_quad)});
}

}  // namespace

std::size_t worker_count() {
    if (const char* env = std::getenv("QMLAB_WORKERS")) {
        char* end = nullptr;
        const unsigned long v = std::strtoul(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return v;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

std::uint64_t case_seed(std::uint64_t seed, std::uint64_t case_id) noexcept {
    // splitmix64 finaliser over (seed, case id)
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (case_id + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

bool VerifyReport::passed() const noexcept { return failures() == 0 && !rows.empty(); }

std::size_t VerifyReport::failures() const noexcept {
    return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [](const CheckRow& r) { return !r.pass; }));
}

void VerifyReport::normalize() {
    std::stable_sort(rows.begin(), rows.end(), [](const CheckRow& a, const CheckRow& b) {
        return std::tie(a.suite, a.case_id, a.check) < std::tie(b.suite, b.case_id, b.check);
    });
}

std::vector<std::string> suite_names() { return {"anbn", "fk", "formulas", "lprime", "pi"}; }

VerifyReport run_verify(const VerifyOptions& o) {
    VerifyReport report;
    const auto names = suite_names();
    if (o.suite != "all" && std::find(names.begin(), names.end(), o.suite) == names.end())
        throw std::invalid_argument("unknown suite '" + o.suite + "'");
    auto wanted = [&](std::string_view s) { return o.suite == "all" || o.suite == s; };
    if (wanted("anbn")) suite_anbn(o, report);
    if (wanted("fk")) suite_fk(o, report);
    if (wanted("formulas")) suite_formulas(o, report);
    if (wanted("lprime")) suite_lprime(o, report);
    if (wanted("pi")) suite_pi(o, report);
    report.normalize();
    return report;
}

std::string format_report(const VerifyReport& report, Format format) {
    std::ostringstream out;
    if (format == Format::json) {
        json rows = json::array();
        for (const auto& r : report.rows)
            rows.push_back({{"suite", r.suite}, {"case", r.case_id}, {"check", r.check},
                            {"status", r.pass ? "pass" : "fail"}, {"detail", r.detail}});
        json doc = {{"rows", rows}, {"checks", report.rows.size()}, {"failures", report.failures()},
                    {"passed", report.passed()}};
        out << doc.dump(2) << '\n';
        return out.str();
    }
    const char sep = format == Format::csv ? ',' : '\t';
    if (format == Format::csv) out << "suite,case,check,status,detail\n";
    for (const auto& r : report.rows)
        out << r.suite << sep << r.case_id << sep << r.check << sep << (r.pass ? "PASS" : "FAIL") << sep << r.detail
            << '\n';
    if (format == Format::text)
        out << "summary" << sep << report.rows.size() << " checks" << sep << report.failures() << " failed\n";
    return out.str();
}

std::vector<std::size_t> power_sizes(unsigned lo, unsigned hi) {
    std::vector<std::size_t> out;
    for (unsigned e = lo; e <= hi; ++e) out.push_back(std::size_t{1} << e);
    return out;
}

std::string bench_input(std::string_view machine, std::size_t target, std::uint64_t seed) {
    if (machine == "lprime") {
        const std::size_t k = std::bit_width(target) >= 2 ? std::bit_width(target) - 2 : 0;
        return gen_lprime(k, seed).render();
    }
    if (machine == "anbn:linear" || machine == "anbn:quadratic")
        return std::string(target / 2, 'a') + std::string(target / 2, 'b');
    if (machine.substr(0, 3) == "mk:" || machine.substr(0, 3) == "tk:") {
        auto spec = builtin_machine(machine);
        if (!spec) throw std::invalid_argument("unknown machine " + std::string(machine));
        const std::size_t k = std::stoul(std::string(machine.substr(3)));
        const std::size_t fi = std::max<std::size_t>(1, target / (4 * k));
        const std::size_t used = fi * k + k;
        const std::size_t m = target > used ? std::max<std::size_t>(1, (target - used) / (k + 1)) : 1;
        return gen_lk(k, std::vector<std::size_t>(k, fi), m, seed).render();
    }
    throw std::invalid_argument("no input generator for machine " + std::string(machine));
}

BenchReport run_bench(std::string_view machine, const std::vector<std::size_t>& sizes, std::uint64_t seed,
                      std::size_t workers) {
    auto spec = builtin_machine(machine);
    if (!spec) throw std::invalid_argument("unknown machine " + std::string(machine));
    const Machine m(std::move(*spec));
    BenchReport report;
    report.machine = std::string(machine);
    report.rows.resize(sizes.size());
    parallel_for(sizes.size(), resolve_workers(workers), [&](std::size_t i) {
        const std::string input = bench_input(machine, sizes[i], case_seed(seed, sizes[i]));
        const RunResult r = run(m, input);
        report.rows[i] = {input.size(), r.steps,
                          r.max_lengths.empty() ? 0 : *std::max_element(r.max_lengths.begin(), r.max_lengths.end()),
                          r.verdict};
    });
    std::sort(report.rows.begin(), report.rows.end(), [](const BenchRow& a, const BenchRow& b) { return a.n < b.n; });
    if (report.rows.size() >= 4) {
        std::vector<GrowthPoint> pts;
        for (const auto& r : report.rows) pts.push_back({r.n, r.steps});
        report.growth = fit_growth(std::move(pts));
    }
    return report;
}

std::string format_bench(const BenchReport& report, Format format) {
    std::ostringstream out;
    const auto& g = report.growth;
    if (format == Format::json) {
        json rows = json::array();
        for (const auto& r : report.rows)
            rows.push_back({{"n", r.n}, {"steps", r.steps}, {"max_len", r.max_len}, {"verdict", to_string(r.verdict)}});
        json doc = {{"machine", report.machine},
                    {"rows", rows},
                    {"growth",
                     {{"fitted_exponent", g.fitted_exponent},
                      {"max_ratio", g.max_ratio},
                      {"min_ratio", g.min_ratio},
                      {"verdict", g.linear ? "linear" : "not-linear"}}}};
        out << doc.dump(2) << '\n';
        return out.str();
    }
    out << "n,steps,max_len,verdict\n";
    for (const auto& r : report.rows) out << r.n << ',' << r.steps << ',' << r.max_len << ',' << to_string(r.verdict) << '\n';
    out << "# machine=" << report.machine << '\n';
    out << "# fitted_exponent=" << fixed(g.fitted_exponent) << '\n';
    out << "# max_ratio=" << fixed(g.max_ratio) << '\n';
    out << "# min_ratio=" << fixed(g.min_ratio) << '\n';
    out << "# verdict=" << (g.linear ? "linear" : "not-linear") << '\n';
    return out.str();
}

std::vector<BatchCase> gen_batch(std::string_view family, std::size_t k, std::size_t count, std::uint64_t seed) {
    std::vector<BatchCase> out;
    if (family == "lprime") {
        for (std::size_t c = 0; c < count; ++c) {
            const std::uint64_t cs = case_seed(seed, c);
            const std::size_t kk = c % (k + 1);
            const LprimeInstance inst = gen_lprime(kk, cs);
            const std::string ks = " k=" + std::to_string(kk);
            out.push_back({inst.render(), "accept", "member" + ks});
            Clause clause = kAllClauses[c % std::size(kAllClauses)];
            if (clause == Clause::v_mismatch && kk == 0) clause = Clause::w_not_pi;
            out.push_back({mutate_negative(inst, clause, cs + 1), "reject", std::string(to_string(clause)) + ks});
        }
    } else if (family == "lk") {
        if (k == 0) throw std::invalid_argument("lk batches need k >= 1");
        for (std::size_t c = 0; c < count; ++c) {
            Rng rng(case_seed(seed, c));
            std::vector<std::size_t> f(k);
            for (auto& fi : f) fi = 1 + rng.below(8);
            const LkInstance inst = gen_lk(k, f, 1 + rng.below(16), rng.next());
            const std::string ks = "k=" + std::to_string(k);
            out.push_back({inst.render(), "output=" + evaluate_fk(inst), "lk " + ks});
            out.push_back({mutate_negative(inst, Clause::bad_format, rng.next()), "reject", "bad-format " + ks});
        }
    } else if (family == "anbn") {
        for (std::size_t c = 0; c < count; ++c) {
            Rng rng(case_seed(seed, c));
            const std::size_t n = c % (k + 1);
            out.push_back({std::string(n, 'a') + std::string(n, 'b'), "accept", "member n=" + std::to_string(n)});
            const std::string w = rng.word("ab", rng.below(2 * k + 2));
            out.push_back({w, in_anbn(w) ? "accept" : "reject", "random"});
        }
    } else {
        throw std::invalid_argument("unknown family '" + std::string(family) + "'");
    }
    return out;
}

void write_batch(std::ostream& out, const std::vector<BatchCase>& cases) {
    for (const auto& c : cases) out << c.word << '\t' << c.expected << '\t' << c.tag << '\n';
}

std::vector<BatchCase> read_batch(std::istream& in) {
    std::vector<BatchCase> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::size_t t1 = line.find('\t');
        const std::size_t t2 = t1 == std::string::npos ? std::string::npos : line.find('\t', t1 + 1);
        if (t2 == std::string::npos) throw ParseError(line_no, "expected <word> TAB <expected> TAB <tag>");
        BatchCase c{line.substr(0, t1), line.substr(t1 + 1, t2 - t1 - 1), line.substr(t2 + 1)};
        if (c.expected != "accept" && c.expected != "reject" && c.expected.rfind("output=", 0) != 0)
            throw ParseError(line_no, "expected must be accept, reject or output=<word>");
        out.push_back(std::move(c));
    }
    return out;
}

VerifyReport verify_batch(const Machine& machine, const std::vector<BatchCase>& cases, std::size_t workers) {
    std::vector<Tally> parts(cases.size());
    parallel_for(cases.size(), resolve_workers(workers), [&](std::size_t i) {
        const BatchCase& c = cases[i];
        bool ok = false;
        std::string actual;
        try {
            const RunResult r = run(machine, c.word);
            actual = std::string(to_string(r.verdict));
            if (c.expected == "accept")
                ok = r.verdict == Verdict::accept;
            else if (c.expected == "reject")
                ok = r.verdict == Verdict::reject;
            else {
                ok = r.verdict == Verdict::accept && "output=" + r.output == c.expected;
                actual += " output=" + shorten(r.output);
            }
        } catch (const InputError& e) {
            actual = e.what();
            ok = c.expected == "reject";
        }
        parts[i].record(ok, [&] { return CheckRow{"batch", c.tag, i, false,
                             "word=" + shorten(c.word) + " expected=" + shorten(c.expected) + " actual=" + actual}; });
    });
    Tally all;
    for (auto& p : parts) all.merge(std::move(p));
    VerifyReport report;
    all.emit(report, "batch", "cases", 0);
    report.normalize();
    return report;
}

}  // namespace qmlab
