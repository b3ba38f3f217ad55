#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

// Ground truth for every language and function the machines implement.
// Nothing here runs a machine or calls the pi() formula except in_Lprime,
// which checks the permuted suffix with it by definition; pi_oracle is the
// independent route for pi itself.

namespace qmlab {

/// in L = { w v c v w : v in {0,1}+, w in {a,b}+ }.
bool in_L(std::string_view word);

/// in L' = { w v c v pi(w) : v in {0,1}*, w in {a,b}*, |w| = 2^|v| }.
bool in_Lprime(std::string_view word);

/// Emission order of the "drop every other symbol" process: repeatedly walk
/// the sequence emitting odd positions and keeping even ones, then emit the
/// last survivor. Throws std::invalid_argument unless |word| is a power of two.
std::string pi_oracle(std::string_view word);
/// The same process run on the positions 1..n themselves.
std::vector<std::size_t> pi_oracle_positions(std::size_t n);

/// A member of L_k: k prefix strings x_i (|x_i| = f_i >= 1) and m >= 1
/// blocks of k bits; block j holds x_{i, f_i + j} at position i.
struct LkInstance {
    std::size_t k = 0;
    std::vector<std::string> prefixes;
    std::vector<std::string> blocks;

    std::string render() const;
    bool operator==(const LkInstance&) const = default;
};

struct Reject {
    std::size_t position = 0;
    std::string reason;
};

std::variant<LkInstance, Reject> parse_lk(std::size_t k, std::string_view word);

/// Rows x_{1,j}..x_{k,j} followed by '$' for j = 1..m.
std::string evaluate_fk(const LkInstance& instance);
std::variant<std::string, Reject> reference_fk(std::size_t k, std::string_view word);

struct LprimeInstance {
    std::string w;
    std::string v;

    std::string render() const;   // w v c v pi(w)
};

/// Seeded generator: std::mt19937_64 with modulo reduction. Both are fully
/// specified, so every platform draws the same cases.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    std::uint64_t next() { return engine_(); }
    std::uint64_t below(std::uint64_t n) { return n ? engine_() % n : 0; }
    char pick(std::string_view from) { return from[below(from.size())]; }
    std::string word(std::string_view alphabet, std::size_t length);

private:
    std::mt19937_64 engine_;
};

/// Throws std::invalid_argument unless k >= 1, |f| = k, all f_i >= 1, m >= 1.
LkInstance gen_lk(std::size_t k, const std::vector<std::size_t>& f, std::size_t m, std::uint64_t seed);
LprimeInstance gen_lprime(std::size_t k, std::uint64_t seed);

enum class Clause { v_mismatch, w_not_pi, bad_length, bad_format };
std::string_view to_string(Clause c) noexcept;
inline constexpr Clause kAllClauses[] = {Clause::v_mismatch, Clause::w_not_pi, Clause::bad_length,
                                         Clause::bad_format};

/// A non-member of L' derived from `instance` by breaking exactly `clause`.
/// Throws std::invalid_argument when impossible (v_mismatch with |v| = 0).
std::string mutate_negative(const LprimeInstance& instance, Clause clause, std::uint64_t seed);

/// A word parse_lk rejects; only Clause::bad_format applies to L_k.
std::string mutate_negative(const LkInstance& instance, Clause clause, std::uint64_t seed);

/// Membership predicate for { a^n b^n : n >= 0 }.
bool in_anbn(std::string_view word);

}  // namespace qmlab
