#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include "qmlab/executor.hpp"
#include "qmlab/machine.hpp"

namespace qmlab {

// Line-oriented machine description:
//
//   # comment
//   states: q0 q1 acc
//   start: q0
//   input_alphabet: ab
//   output_alphabet: -                  (- for an empty alphabet)
//   storage: Q queue ab
//   storage: T tape 01^ tracks=2
//   acceptance: empty_all_storages      (or final_states s1 s2..., output_bit)
//   mode: online                        (or post)
//   epsilon_accept: false
//   q0 | a | *,01 -> q1 | y | push=a,write=1*/move=R | -
//
// Input observations are a symbol, '-' (end of input) or '*'. Queue and
// pushdown observations are a symbol, 'empty' or '*'; tape observations give
// one symbol per track ('_' blank, '*' any). Queue/pushdown actions are '-',
// 'pop', 'push=<s>' or 'pop+push=<s>'; tape actions are '-', 'move=<L|S|R>'
// or 'write=<syms>/move=<L|S|R>' where '*' keeps a track.

/// Syntactic parse; throws ParseError. Semantic checks are validate_spec's job.
MachineSpec parse_spec(std::string_view text);

/// Canonical text form; parse_spec(format_spec(s)) == s.
std::string format_spec(const MachineSpec& spec);

/// Reads and parses a spec file. Throws Error if the file cannot be read.
MachineSpec load_spec_file(const std::filesystem::path& path);

/// `step,state,consumed,len(<id>)...,emit` with a header row. `state` is the
/// state the transition fired in; `emit` is '-' when nothing was emitted.
void write_trace_csv(std::ostream& out, const Trace& trace);

}  // namespace qmlab
