#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace qmlab {

// Reserved symbol codes. None of them may appear in a declared alphabet.
inline constexpr char kNone = '\0';   // end of input, empty queue/pushdown, "no symbol"
inline constexpr char kAny = '*';     // wildcard in patterns, "keep" in tape writes
inline constexpr char kBlank = '_';   // blank tape cell

/// True for characters that are part of the notation rather than symbols.
bool is_reserved_symbol(char c) noexcept;

enum class StorageKind { queue, pushdown, tape };
enum class Move { left, stay, right };
enum class InputMode { online, post };

std::string_view to_string(StorageKind kind) noexcept;

struct StorageSpec {
    std::string id;
    StorageKind kind = StorageKind::queue;
    std::string alphabet;     // for tapes: the per-track symbols, blank excluded
    std::size_t tracks = 1;

    bool operator==(const StorageSpec&) const = default;
};

/// What a transition does to one storage.
///  - queue/pushdown: optional pop, optional push of one symbol
///  - tape: optional write (one char per track, kAny keeps the track), then move
struct StorageAction {
    bool pop = false;
    char push = kNone;
    std::string write;
    Move move = Move::stay;

    bool operator==(const StorageAction&) const = default;
};

/// One row of the transition table.
///
/// `input` is a symbol, kNone (end of input) or kAny. `observe` has one entry
/// per storage: for queues and pushdowns a single char (symbol, kNone for
/// empty, kAny), for tapes one char per track (symbol, kBlank, kAny).
struct Rule {
    std::string state;
    char input = kAny;
    std::vector<std::string> observe;
    std::string next;
    bool consume = false;
    std::vector<StorageAction> actions;
    char emit = kNone;

    bool operator==(const Rule&) const = default;
};

struct Acceptance {
    enum class Kind { empty_storage, final_states, output_bit };
    Kind kind = Kind::empty_storage;
    std::vector<std::string> final_states;

    bool operator==(const Acceptance&) const = default;
};

struct MachineSpec {
    std::vector<std::string> states;
    std::string start;
    std::string input_alphabet;
    std::string output_alphabet;
    std::vector<StorageSpec> storages;
    std::vector<Rule> rules;
    Acceptance acceptance;
    InputMode mode = InputMode::online;
    bool epsilon_accept = false;

    bool operator==(const MachineSpec&) const = default;
};

struct Issue {
    enum class Severity { error, warning };
    Severity severity = Severity::error;
    std::string code;
    std::string message;
};

struct ValidationReport {
    std::vector<Issue> issues;

    bool ok() const noexcept;
    std::size_t error_count() const noexcept;
    bool has(std::string_view code) const noexcept;
};

/// Lists every problem that keeps `spec` from being executed. Never throws.
ValidationReport validate_spec(const MachineSpec& spec);

/// Width of the flattened observation: 1 (input) + 1 per queue/pushdown
/// + `tracks` per tape.
std::size_t observation_width(const MachineSpec& spec);

/// Flattens a rule's pattern into one char per observation component.
std::string flatten_pattern(const MachineSpec& spec, const Rule& rule);

/// A validated, indexed, immutable machine. Safe to share across threads.
class Machine {
public:
    /// Throws SpecError listing the violations when validate_spec fails.
    explicit Machine(MachineSpec spec);

    const MachineSpec& spec() const noexcept { return spec_; }
    std::size_t start_state() const noexcept { return start_; }
    std::size_t state_count() const noexcept { return spec_.states.size(); }
    const std::string& state_name(std::size_t s) const { return spec_.states[s]; }
    /// Throws std::out_of_range for undeclared names.
    std::size_t state_index(std::string_view name) const;
    bool is_final(std::size_t s) const { return final_[s]; }
    std::size_t width() const noexcept { return width_; }

    /// Index into spec().rules of the applicable rule, or npos when none
    /// applies. Most specific pattern wins: concrete beats wildcard,
    /// leftmost component most significant.
    std::size_t select(std::size_t state, std::string_view observation) const;
    std::size_t next_state(std::size_t rule) const { return next_[rule]; }

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

private:
    struct Entry {
        std::string pattern;
        std::size_t rule;
    };

    MachineSpec spec_;
    std::size_t start_ = 0;
    std::size_t width_ = 0;
    std::vector<bool> final_;
    std::vector<std::size_t> next_;
    std::vector<std::vector<Entry>> table_;   // per state, most specific first
};

}  // namespace qmlab
