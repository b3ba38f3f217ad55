#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qmlab/executor.hpp"
#include "qmlab/machine.hpp"

namespace qmlab {

/// k-queue machine for F_k. Phase one routes the #-separated segments into
/// queues Q1..Qk; after the first $ each round appends the incoming bit for
/// queue i, emits the bit popped from its front, and copies $ to the output.
/// Accepts (final state `done`) on well-formed L_k inputs with m >= 1.
/// Throws std::invalid_argument for k == 0.
MachineSpec build_mk(std::size_t k);

/// One k-track tape plus one pushdown computing the same function as
/// build_mk(k).
///
/// Tape layout: cell 0 holds '^' on every track, track i keeps the contents
/// of queue i. Old bits are '0'/'1', bits written during the current pass
/// are '2'/'3' (new 0, new 1), 'x' marks cells whose contents have been
/// moved. The head sits on one column for a whole round; when track i runs
/// out of old bits the machine walks back over the new bits pushing them,
/// returns, and pops them onto the cells following the head as old bits.
MachineSpec build_tk(std::size_t k);

/// Single-queue acceptor for { w v c v pi(w) : |w| = 2^|v| }.
///
/// The prefix w v c v' is copied to the queue one symbol per step. On the
/// first {a,b} after it the machine switches to cycling: each cycle compares
/// every other {a,b} queue symbol with the input and drops it, re-queues the
/// rest, keeps the first bit of v in the control, rotates v and c, checks the
/// first bit of v' against the control, and rotates the rest of v'. A cycle
/// touches every queue symbol once. When a single {a,b} symbol is left and v
/// is used up, the c is dropped and one closing step checks that queue and
/// input are both exhausted.
MachineSpec build_lprime_acceptor();

enum class AnbnVariant { linear, quadratic };

/// Post-mode single-queue machine for { a^n b^n : n >= 0 }.
///  - quadratic: each full rotation deletes the leading a and the first b.
///  - linear: each pass deletes every other a and every other b and
///    requires the two counts to have equal parity; passes halve the queue.
MachineSpec build_post_anbn(AnbnVariant variant);

/// Builtin names: mk:<k>, tk:<k>, lprime, anbn:linear, anbn:quadratic.
std::optional<MachineSpec> builtin_machine(std::string_view name);
std::vector<std::string> builtin_names_help();

/// 1-based positions of w in the order pi lists them. For |w| = 2^k this is
/// grouped by the 2-adic valuation of the index: odd indices, then 2 mod 4,
/// then 4 mod 8, ..., ending with 2^k. Other lengths give the identity.
std::vector<std::size_t> pi_order(std::size_t length);
std::string pi(std::string_view w);

bool is_power_of_two(std::size_t n) noexcept;

/// Queue length at the start of cycle i (1 <= i <= k+1) of the L' acceptor
/// with |v| = k: 2^(k-i+1) + 2(k-i+1) + 1. Throws std::out_of_range.
std::uint64_t predicted_cycle_length(std::size_t k, std::size_t i);
/// 2 + 2^(k+1) - 1 + k^2 + 2k + 1.
std::uint64_t predicted_tail_steps(std::size_t k);
/// 2 + sum_{i=1}^{k+1} predicted_cycle_length(k, i).
std::uint64_t predicted_tail_steps_sum(std::size_t k);

/// Measurements taken from a traced run of build_lprime_acceptor().
struct LprimeRunProfile {
    std::size_t prefix_steps = 0;            // steps spent copying w v c v'
    std::uint64_t tail_steps = 0;            // all later steps
    std::vector<std::size_t> cycle_lengths;  // queue length at each cycle start
    std::size_t prefix_max_delay = 0;        // longest non-reading run in the prefix
    std::size_t tail_max_delay = 0;
};

/// Throws std::invalid_argument if the trace never reaches the cycling phase.
LprimeRunProfile profile_lprime_run(const Machine& acceptor, const Trace& trace);

}  // namespace qmlab
