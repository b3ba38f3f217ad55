#include "qmlab/machines.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <stdexcept>

namespace qmlab {

namespace {

StorageAction pop() { return {true, kNone, {}, Move::stay}; }
StorageAction push(char c) { return {false, c, {}, Move::stay}; }
StorageAction pop_push(char c) { return {true, c, {}, Move::stay}; }
StorageAction tape(std::string write, Move move) { return {false, kNone, std::move(write), move}; }

std::string one(char c) { return std::string(1, c); }

/// Pattern or write string that constrains only one track.
std::string on_track(std::size_t tracks, std::size_t t, char c) {
    std::string s(tracks, kAny);
    s[t] = c;
    return s;
}

/// Collects rules and declares states in order of first mention.
class Table {
public:
    explicit Table(MachineSpec& spec) : spec_(spec) {}

    void state(const std::string& s) {
        if (std::find(spec_.states.begin(), spec_.states.end(), s) == spec_.states.end()) spec_.states.push_back(s);
    }

    /// `observe` / `actions` list only the storages that matter, by index;
    /// the rest default to wildcard / no-op.
    void add(const std::string& from, char input, std::vector<std::pair<std::size_t, std::string>> observe,
             const std::string& to, bool consume, std::vector<std::pair<std::size_t, StorageAction>> actions,
             char emit = kNone) {
        state(from);
        state(to);
        Rule r;
        r.state = from;
        r.input = input;
        r.observe.assign(spec_.storages.size(), one(kAny));
        for (auto& [s, o] : observe) r.observe[s] = std::move(o);
        r.next = to;
        r.consume = consume;
        r.actions.assign(spec_.storages.size(), StorageAction{});
        for (auto& [s, a] : actions) r.actions[s] = std::move(a);
        r.emit = emit;
        spec_.rules.push_back(std::move(r));
    }

private:
    MachineSpec& spec_;
};

constexpr std::string_view kBits = "01";
constexpr std::string_view kLetters = "ab";

void require_positive(std::size_t k) {
    if (k == 0) throw std::invalid_argument("k must be at least 1");
}

std::string idx(std::string_view base, std::size_t i) { return std::string(base) + std::to_string(i); }

std::optional<std::size_t> parse_count(std::string_view s) {
    std::size_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) return std::nullopt;
    return v;
}

}  // namespace

MachineSpec build_mk(std::size_t k) {
    require_positive(k);
    MachineSpec spec;
    spec.input_alphabet = "01#$";
    spec.output_alphabet = "01$";
    for (std::size_t i = 1; i <= k; ++i) spec.storages.push_back({idx("Q", i), StorageKind::queue, "01", 1});
    spec.acceptance = {Acceptance::Kind::final_states, {"done"}};
    spec.start = "fill1_0";

    Table t(spec);
    // Phase one: segment i goes to queue i; fill<i>_0 insists on a first bit.
    for (std::size_t i = 1; i <= k; ++i) {
        const std::size_t q = i - 1;
        for (char b : kBits) {
            t.add(idx("fill", i) + "_0", b, {}, idx("fill", i), true, {{q, push(b)}});
            t.add(idx("fill", i), b, {}, idx("fill", i), true, {{q, push(b)}});
        }
        if (i < k)
            t.add(idx("fill", i), '#', {}, idx("fill", i + 1) + "_0", true, {});
        else
            t.add(idx("fill", i), '$', {}, "r1_0", true, {});
    }
    // Rounds. r1_0 is the first round's entry and cannot end the input.
    std::vector<std::pair<std::string, std::size_t>> round_states{{"r1_0", 1}};
    for (std::size_t i = 1; i <= k; ++i) round_states.emplace_back(idx("r", i), i);
    for (const auto& [name, i] : round_states) {
        const std::size_t q = i - 1;
        const std::string next = i < k ? idx("r", i + 1) : "sep";
        for (char b : kBits)
            for (char x : kBits) t.add(name, b, {{q, one(x)}}, next, true, {{q, pop_push(b)}}, x);
    }
    t.add("sep", '$', {}, "r1", true, {}, '$');
    t.add("r1", kNone, {}, "done", false, {});
    return spec;
}

MachineSpec build_tk(std::size_t k) {
    require_positive(k);
    MachineSpec spec;
    spec.input_alphabet = "01#$";
    spec.output_alphabet = "01$";
    spec.storages.push_back({"T", StorageKind::tape, "^0123x", k});
    spec.storages.push_back({"P", StorageKind::pushdown, "01", 1});
    spec.acceptance = {Acceptance::Kind::final_states, {"done"}};
    spec.start = "init";
    constexpr std::size_t T = 0, P = 1;
    auto newbit = [](char b) { return static_cast<char>(b + 2); };   // '0'->'2', '1'->'3'

    Table t(spec);
    t.add("init", kAny, {}, "fill1_0", false, {{T, tape(std::string(k, '^'), Move::right)}});

    // Phase one: copy segment i onto track i from cell 1, then walk back to
    // cell 1 (the '^' column) before the next segment.
    for (std::size_t i = 1; i <= k; ++i) {
        const std::size_t tr = i - 1;
        for (char b : kBits) {
            t.add(idx("fill", i) + "_0", b, {}, idx("fill", i), true, {{T, tape(on_track(k, tr, b), Move::right)}});
            t.add(idx("fill", i), b, {}, idx("fill", i), true, {{T, tape(on_track(k, tr, b), Move::right)}});
        }
        t.add(idx("fill", i), i < k ? '#' : '$', {}, idx("back", i), true, {{T, tape({}, Move::left)}});
        const std::string after = i < k ? idx("fill", i + 1) + "_0" : "r1_0";
        t.add(idx("back", i), kAny, {{T, on_track(k, 0, '^')}}, after, false, {{T, tape({}, Move::right)}});
        t.add(idx("back", i), kAny, {}, idx("back", i), false, {{T, tape({}, Move::left)}});
    }

    // Rounds: the head stays on one column while tracks 1..k are served,
    // then moves right on the $.
    std::vector<std::pair<std::string, std::size_t>> round_states{{"r1_0", 1}};
    for (std::size_t i = 1; i <= k; ++i) round_states.emplace_back(idx("r", i), i);
    for (const auto& [name, i] : round_states) {
        const std::size_t tr = i - 1;
        const std::string next = i < k ? idx("r", i + 1) : "sep";
        for (char b : kBits)
            for (char x : kBits)
                t.add(name, b, {{T, on_track(k, tr, x)}}, next, true,
                      {{T, tape(on_track(k, tr, newbit(b)), Move::stay)}}, x);
    }
    t.add("sep", '$', {}, "r1", true, {{T, tape({}, Move::right)}}, '$');
    t.add("r1", kNone, {}, "done", false, {});

    // Track i exhausted: move its new bits behind the head onto the cells
    // starting at the head, through the pushdown.
    for (std::size_t i = 1; i <= k; ++i) {
        const std::size_t tr = i - 1;
        const std::string r = idx("r", i), gath = idx("gath", i), seek = idx("seek", i), put = idx("put", i),
                          ret = idx("ret", i);
        t.add(r, kAny, {{T, on_track(k, tr, kBlank)}}, gath, false, {{T, tape({}, Move::left)}});
        for (char b : kBits)
            t.add(gath, kAny, {{T, on_track(k, tr, newbit(b))}}, gath, false,
                  {{T, tape(on_track(k, tr, 'x'), Move::left)}, {P, push(b)}});
        t.add(gath, kAny, {}, seek, false, {{T, tape({}, Move::right)}});
        t.add(seek, kAny, {{T, on_track(k, tr, 'x')}}, seek, false, {{T, tape({}, Move::right)}});
        for (char b : kBits) {
            t.add(seek, kAny, {{T, on_track(k, tr, kBlank)}, {P, one(b)}}, put, false,
                  {{T, tape(on_track(k, tr, b), Move::right)}, {P, pop()}});
            t.add(put, kAny, {{P, one(b)}}, put, false, {{T, tape(on_track(k, tr, b), Move::right)}, {P, pop()}});
            t.add(ret, kAny, {{T, on_track(k, tr, b)}}, ret, false, {{T, tape({}, Move::left)}});
        }
        t.add(put, kAny, {{P, one(kNone)}}, ret, false, {{T, tape({}, Move::left)}});
        t.add(ret, kAny, {{T, on_track(k, tr, 'x')}}, r, false, {{T, tape({}, Move::right)}});
    }
    return spec;
}

MachineSpec build_lprime_acceptor() {
    MachineSpec spec;
    spec.input_alphabet = "ab01c";
    spec.output_alphabet = "";
    spec.storages.push_back({"Q", StorageKind::queue, "ab01c", 1});
    spec.acceptance = {Acceptance::Kind::empty_storage, {}};
    spec.epsilon_accept = false;
    spec.start = "w0";
    constexpr std::size_t Q = 0;

    Table t(spec);
    // Prefix w v c v', one symbol per step.
    for (char x : kLetters) {
        t.add("w0", x, {}, "w", true, {{Q, push(x)}});
        t.add("w", x, {}, "w", true, {{Q, push(x)}});
    }
    for (char b : kBits) {
        t.add("w", b, {}, "v", true, {{Q, push(b)}});
        t.add("v", b, {}, "v", true, {{Q, push(b)}});
        t.add("v2", b, {}, "v2", true, {{Q, push(b)}});
    }
    t.add("w", 'c', {}, "v2", true, {{Q, push('c')}});
    t.add("v", 'c', {}, "v2", true, {{Q, push('c')}});
    for (char x : kLetters) t.add("v2", x, {}, "cycle", false, {});

    // Cycles. `cycle` starts the first one, `rest` flows into the next one.
    for (char x : kLetters) {
        t.add("cycle", x, {{Q, one(x)}}, "keep1", true, {{Q, pop()}});
        t.add("rest", x, {{Q, one(x)}}, "keep1", true, {{Q, pop()}});
        t.add("keep1", kAny, {{Q, one(x)}}, "drop", false, {{Q, pop_push(x)}});
        t.add("drop", x, {{Q, one(x)}}, "keep", true, {{Q, pop()}});
        t.add("keep", kAny, {{Q, one(x)}}, "drop", false, {{Q, pop_push(x)}});
    }
    for (char b : kBits) {
        t.add("rest", kAny, {{Q, one(b)}}, "rest", false, {{Q, pop_push(b)}});
        t.add("drop", kAny, {{Q, one(b)}}, idx("vbit", b - '0'), false, {{Q, pop()}});
        for (char y : kBits) t.add(idx("vbit", b - '0'), kAny, {{Q, one(y)}}, idx("vbit", b - '0'), false, {{Q, pop_push(y)}});
        t.add(idx("vbit", b - '0'), kAny, {{Q, one('c')}}, idx("cmp", b - '0'), false, {{Q, pop_push('c')}});
        t.add(idx("cmp", b - '0'), kAny, {{Q, one(b)}}, "rest", false, {{Q, pop()}});
    }
    // Last cycle: one {a,b} symbol was compared and v is used up.
    t.add("keep1", kAny, {{Q, one('c')}}, "fin", false, {{Q, pop()}});
    t.add("fin", kNone, {{Q, one(kNone)}}, "acc", false, {});
    return spec;
}

MachineSpec build_post_anbn(AnbnVariant variant) {
    MachineSpec spec;
    spec.input_alphabet = "ab";
    spec.output_alphabet = "";
    spec.storages.push_back({"Q", StorageKind::queue, "ab#", 1});
    spec.acceptance = {Acceptance::Kind::empty_storage, {}};
    spec.mode = InputMode::post;
    spec.epsilon_accept = true;
    constexpr std::size_t Q = 0;
    Table t(spec);

    if (variant == AnbnVariant::quadratic) {
        spec.start = "q0";
        t.add("q0", kAny, {{Q, one('a')}}, "skipA", false, {{Q, pop_push('#')}});
        t.add("skipA", kAny, {{Q, one('a')}}, "skipA", false, {{Q, pop_push('a')}});
        t.add("skipA", kAny, {{Q, one('b')}}, "restB", false, {{Q, pop()}});
        t.add("restB", kAny, {{Q, one('b')}}, "restB", false, {{Q, pop_push('b')}});
        t.add("restB", kAny, {{Q, one('#')}}, "q0", false, {{Q, pop()}});
        return spec;
    }

    // A<pa>: in the a-block, pa = parity of a's seen this pass.
    // B<pa><pb>: in the b-block. Odd-numbered symbols of each block are deleted.
    spec.start = "chk";
    for (char x : kLetters) t.add("chk", kAny, {{Q, one(x)}}, "A0", false, {{Q, push('#')}});
    t.add("A0", kAny, {{Q, one('a')}}, "A1", false, {{Q, pop()}});
    t.add("A1", kAny, {{Q, one('a')}}, "A0", false, {{Q, pop_push('a')}});
    t.add("A0", kAny, {{Q, one('b')}}, "B01", false, {{Q, pop()}});
    t.add("A1", kAny, {{Q, one('b')}}, "B11", false, {{Q, pop()}});
    t.add("A0", kAny, {{Q, one('#')}}, "chk", false, {{Q, pop()}});
    for (char pa : kBits) {
        const std::string b0 = std::string("B") + pa + '0', b1 = std::string("B") + pa + '1';
        t.add(b0, kAny, {{Q, one('b')}}, b1, false, {{Q, pop()}});
        t.add(b1, kAny, {{Q, one('b')}}, b0, false, {{Q, pop_push('b')}});
    }
    t.add("B00", kAny, {{Q, one('#')}}, "chk", false, {{Q, pop()}});
    t.add("B11", kAny, {{Q, one('#')}}, "chk", false, {{Q, pop()}});
    return spec;
}

std::optional<MachineSpec> builtin_machine(std::string_view name) {
    if (name == "lprime") return build_lprime_acceptor();
    if (name == "anbn:linear") return build_post_anbn(AnbnVariant::linear);
    if (name == "anbn:quadratic") return build_post_anbn(AnbnVariant::quadratic);
    for (std::string_view prefix : {"mk:", "tk:"}) {
        if (name.substr(0, prefix.size()) != prefix) continue;
        auto k = parse_count(name.substr(prefix.size()));
        if (!k || *k == 0 || *k > 64) return std::nullopt;
        return prefix == "mk:" ? build_mk(*k) : build_tk(*k);
    }
    return std::nullopt;
}

std::vector<std::string> builtin_names_help() {
    return {"mk:<k>", "tk:<k>", "lprime", "anbn:linear", "anbn:quadratic"};
}

bool is_power_of_two(std::size_t n) noexcept { return std::has_single_bit(n); }

std::vector<std::size_t> pi_order(std::size_t length) {
    std::vector<std::size_t> order;
    order.reserve(length);
    if (!is_power_of_two(length)) {
        for (std::size_t i = 1; i <= length; ++i) order.push_back(i);
        return order;
    }
    const int k = std::countr_zero(length);
    for (int v = 0; v <= k; ++v) {
        const std::size_t step = std::size_t{1} << v;
        for (std::size_t i = step; i <= length; i += 2 * step) order.push_back(i);
    }
    return order;
}

std::string pi(std::string_view w) {
    std::string out;
    out.reserve(w.size());
    for (std::size_t i : pi_order(w.size())) out.push_back(w[i - 1]);
    return out;
}

std::uint64_t predicted_cycle_length(std::size_t k, std::size_t i) {
    if (i < 1 || i > k + 1) throw std::out_of_range("cycle index must be in 1..k+1");
    const std::uint64_t r = k - i + 1;
    return (std::uint64_t{1} << r) + 2 * r + 1;
}

std::uint64_t predicted_tail_steps(std::size_t k) {
    const std::uint64_t kk = k;
    return 2 + (std::uint64_t{1} << (kk + 1)) - 1 + kk * kk + 2 * kk + 1;
}

std::uint64_t predicted_tail_steps_sum(std::size_t k) {
    std::uint64_t total = 2;
    for (std::size_t i = 1; i <= k + 1; ++i) total += predicted_cycle_length(k, i);
    return total;
}

LprimeRunProfile profile_lprime_run(const Machine& acceptor, const Trace& trace) {
    const std::size_t v2 = acceptor.state_index("v2"), cycle = acceptor.state_index("cycle"),
                      keep1 = acceptor.state_index("keep1");
    const auto& recs = trace.records();
    auto sw = std::find_if(recs.begin(), recs.end(), [&](const StepRecord& r) { return r.from == v2 && r.to == cycle; });
    if (sw == recs.end()) throw std::invalid_argument("run never left the prefix phase");

    LprimeRunProfile p;
    p.prefix_steps = static_cast<std::size_t>(sw - recs.begin());
    p.tail_steps = trace.size() - p.prefix_steps;
    for (std::size_t i = p.prefix_steps; i < trace.size(); ++i)
        if (recs[i].to == keep1) p.cycle_lengths.push_back(trace.length_before(i, 0));
    p.prefix_max_delay = max_delay(trace, {0, p.prefix_steps});
    p.tail_max_delay = max_delay(trace, {p.prefix_steps, trace.size()});
    return p;
}

}  // namespace qmlab
