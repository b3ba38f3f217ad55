#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "qmlab/machine.hpp"

namespace qmlab {

/// FIFO store, front at index 0.
struct QueueStore {
    std::deque<char> symbols;
    std::size_t length() const noexcept { return symbols.size(); }
    bool operator==(const QueueStore&) const = default;
};

/// LIFO store, top at the back.
struct PushdownStore {
    std::string symbols;
    std::size_t length() const noexcept { return symbols.size(); }
    bool operator==(const PushdownStore&) const = default;
};

/// One-way infinite tape with `tracks` tracks. Cells are stored row-major,
/// `tracks` chars per cell; cells past the end are blank. length() counts
/// cells holding at least one non-blank track symbol.
struct TapeStore {
    std::size_t tracks = 1;
    std::size_t head = 0;
    std::vector<char> cells;
    std::size_t nonblank = 0;

    char at(std::size_t cell, std::size_t track) const {
        const std::size_t i = cell * tracks + track;
        return i < cells.size() ? cells[i] : kBlank;
    }
    std::size_t length() const noexcept { return nonblank; }
    bool operator==(const TapeStore&) const = default;
};

using Storage = std::variant<QueueStore, PushdownStore, TapeStore>;

std::size_t storage_length(const Storage& s);

/// Instantaneous description of a run.
struct Configuration {
    std::size_t state = 0;
    std::size_t input_position = 0;
    std::vector<Storage> storages;
    std::string output;
    std::uint64_t steps = 0;

    bool operator==(const Configuration&) const = default;
};

struct StepRecord {
    std::uint64_t step = 0;   // 1-based
    std::uint32_t from = 0;   // state the transition fired in
    std::uint32_t to = 0;
    bool consumed = false;
    char emit = kNone;

    bool operator==(const StepRecord&) const = default;
};

/// Per-step instrumentation of one run. Storage lengths after each step are
/// kept in one flat array, `storage_count()` entries per record.
class Trace {
public:
    Trace() = default;
    Trace(std::vector<std::string> state_names, std::vector<std::string> storage_ids,
          std::vector<std::size_t> initial_lengths);

    void append(const StepRecord& r, const Configuration& after);

    std::size_t size() const noexcept { return records_.size(); }
    std::size_t storage_count() const noexcept { return storage_ids_.size(); }
    const std::vector<StepRecord>& records() const noexcept { return records_; }
    const StepRecord& operator[](std::size_t i) const { return records_[i]; }
    const std::string& state_name(std::size_t s) const { return state_names_[s]; }
    const std::vector<std::string>& storage_ids() const noexcept { return storage_ids_; }
    /// Throws std::out_of_range for an undeclared id.
    std::size_t storage_index(std::string_view id) const;

    /// Length of a storage after record `i`; `i == npos` gives the length
    /// before the first step.
    std::size_t length_after(std::size_t i, std::size_t storage) const;
    /// Length right before record `i` fired.
    std::size_t length_before(std::size_t i, std::size_t storage) const {
        return i == 0 ? initial_[storage] : length_after(i - 1, storage);
    }

    std::size_t consumed_total() const;
    std::size_t output_total() const;

    bool operator==(const Trace&) const = default;

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

private:
    std::vector<std::string> state_names_;
    std::vector<std::string> storage_ids_;
    std::vector<std::size_t> initial_;
    std::vector<StepRecord> records_;
    std::vector<std::size_t> lengths_;
};

enum class Verdict { accept, reject, step_limit_exceeded, fault };

std::string_view to_string(Verdict v) noexcept;

struct RunLimits {
    std::uint64_t max_steps = 0;   // 0 selects default_max_steps(|input|)
    bool trace = false;
};

struct RunResult {
    Verdict verdict = Verdict::reject;
    std::string output;
    std::uint64_t steps = 0;
    std::size_t input_consumed = 0;
    std::vector<std::size_t> max_lengths;   // per storage, over the whole run
    std::string fault;
    Configuration final_config;
    std::optional<Trace> trace;
};

/// 64 * (n + 1)^2, enough for every quadratic machine in this project.
std::uint64_t default_max_steps(std::size_t input_length) noexcept;

/// Throws InputError naming the first symbol outside the input alphabet.
Configuration initial_configuration(const Machine& m, std::string_view input);

/// The concrete observation for `config`, one char per component
/// (see observation_width).
std::string observe(const Machine& m, std::string_view input, const Configuration& config);

/// Applies the unique applicable transition in place. Returns nullopt when
/// no rule applies (halt). Throws ExecutionFault when the chosen action is
/// impossible (pop on empty, read past end, move off the left end).
std::optional<StepRecord> step(const Machine& m, std::string_view input, Configuration& config);

/// Runs to halt or limit. Faults and limits surface as verdicts.
RunResult run(const Machine& m, std::string_view input, RunLimits limits = {});

/// Half-open range of trace record indices.
struct StepRange {
    std::size_t begin = 0;
    std::size_t end = 0;
};

bool check_realtime(const Trace& trace);
bool check_realtime(const Trace& trace, StepRange region);
/// True iff no more than `d` consecutive records in `region` skip the input.
bool check_bounded_delay(const Trace& trace, StepRange region, std::size_t d);
/// Longest run of non-consuming records inside `region`.
std::size_t max_delay(const Trace& trace, StepRange region);

/// (step, length after step) for every record. Throws std::out_of_range for
/// an unknown storage id.
std::vector<std::pair<std::uint64_t, std::size_t>> storage_length_series(const Trace& trace,
                                                                         std::string_view storage);

}  // namespace qmlab
