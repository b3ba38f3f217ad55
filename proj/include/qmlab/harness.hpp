#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "qmlab/executor.hpp"
#include "qmlab/growth.hpp"
#include "qmlab/machine.hpp"

namespace qmlab {

/// QMLAB_WORKERS if set to a positive integer, else the hardware thread count.
std::size_t worker_count();

/// Calls fn(i) for i in [0, n) on up to `workers` threads. Each index is
/// handled by exactly one thread; callers write results into slot i.
template <class Fn>
void parallel_for(std::size_t n, std::size_t workers, Fn&& fn) {
    workers = std::max<std::size_t>(1, std::min(workers, n));
    if (workers == 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < n; i += workers) fn(i);
        });
    for (auto& t : pool) t.join();
}

/// Per-case seed derived from the run seed; stable across platforms.
std::uint64_t case_seed(std::uint64_t seed, std::uint64_t case_id) noexcept;

enum class Format { text, csv, json };

struct CheckRow {
    std::string suite;
    std::string check;
    std::uint64_t case_id = 0;
    bool pass = false;
    std::string detail;
};

struct VerifyReport {
    std::vector<CheckRow> rows;

    bool passed() const noexcept;
    std::size_t failures() const noexcept;
    /// Sorts rows by (suite, case id, check).
    void normalize();
};

struct VerifyOptions {
    std::string suite;                // lprime, fk, anbn, formulas, pi, all
    std::size_t k_max = 0;            // 0: suite default (lprime/formulas 10, pi 12, fk 3)
    std::size_t cases = 0;            // 0: suite default (lprime 10000 per clause, fk 1000 per k)
    std::uint64_t seed = 1;
    std::size_t all_words_len = 8;    // lprime: every word over {a,b,0,1,c}
    std::size_t shape_len = 13;       // lprime: every word shaped [ab]*[01]*c[01]*[ab]*
    std::size_t anbn_len = 14;        // anbn: every word over {a,b}
    std::size_t workers = 0;          // 0: worker_count()
};

/// Largest run of non-reading steps the L' acceptor may take while copying
/// the prefix w v c v'.
inline constexpr std::size_t kLprimePrefixDelay = 0;

std::vector<std::string> suite_names();

/// Throws std::invalid_argument for an unknown suite.
VerifyReport run_verify(const VerifyOptions& options);

std::string format_report(const VerifyReport& report, Format format);

struct BenchRow {
    std::uint64_t n = 0;
    std::uint64_t steps = 0;
    std::size_t max_len = 0;
    Verdict verdict = Verdict::reject;
};

struct BenchReport {
    std::string machine;
    std::vector<BenchRow> rows;
    GrowthReport growth;
};

/// A well-formed input of about `target` symbols for a builtin machine
/// family. Throws std::invalid_argument for machines without a generator.
std::string bench_input(std::string_view machine, std::size_t target, std::uint64_t seed);

/// Powers of two from 2^lo to 2^hi.
std::vector<std::size_t> power_sizes(unsigned lo, unsigned hi);

BenchReport run_bench(std::string_view machine, const std::vector<std::size_t>& sizes, std::uint64_t seed,
                      std::size_t workers = 0);

std::string format_bench(const BenchReport& report, Format format);

/// One line of an instance batch file: `<word> TAB <expected> TAB <tag>`,
/// expected being accept, reject or output=<word>.
struct BatchCase {
    std::string word;
    std::string expected;
    std::string tag;

    bool operator==(const BatchCase&) const = default;
};

/// Families: lprime (k = max |v|), lk (k = queue count), anbn (k = max n).
/// Throws std::invalid_argument for an unknown family.
std::vector<BatchCase> gen_batch(std::string_view family, std::size_t k, std::size_t count, std::uint64_t seed);

void write_batch(std::ostream& out, const std::vector<BatchCase>& cases);
/// Throws ParseError on malformed lines.
std::vector<BatchCase> read_batch(std::istream& in);

VerifyReport verify_batch(const Machine& machine, const std::vector<BatchCase>& cases, std::size_t workers = 0);

}  // namespace qmlab
