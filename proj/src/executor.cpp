#include "qmlab/executor.hpp"

#include <algorithm>

#include "qmlab/error.hpp"

namespace qmlab {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void observe_into(const Machine& m, std::string_view input, const Configuration& config, std::string& buf) {
    buf.clear();
    if (m.spec().mode == InputMode::online && config.input_position < input.size())
        buf.push_back(input[config.input_position]);
    else
        buf.push_back(kNone);
    for (const Storage& s : config.storages) {
        std::visit(overloaded{
                       [&](const QueueStore& q) { buf.push_back(q.symbols.empty() ? kNone : q.symbols.front()); },
                       [&](const PushdownStore& p) { buf.push_back(p.symbols.empty() ? kNone : p.symbols.back()); },
                       [&](const TapeStore& t) {
                           for (std::size_t k = 0; k < t.tracks; ++k) buf.push_back(t.at(t.head, k));
                       },
                   },
                   s);
    }
}

bool cell_nonblank(const TapeStore& t, std::size_t cell) {
    for (std::size_t k = 0; k < t.tracks; ++k)
        if (t.at(cell, k) != kBlank) return true;
    return false;
}

void apply(TapeStore& t, const StorageAction& a) {
    if (!a.write.empty()) {
        const bool before = cell_nonblank(t, t.head);
        const std::size_t need = (t.head + 1) * t.tracks;
        if (t.cells.size() < need) t.cells.resize(need, kBlank);
        for (std::size_t k = 0; k < t.tracks; ++k)
            if (a.write[k] != kAny) t.cells[t.head * t.tracks + k] = a.write[k];
        const bool after = cell_nonblank(t, t.head);
        if (after && !before) ++t.nonblank;
        if (before && !after) --t.nonblank;
    }
    switch (a.move) {
        case Move::left:
            if (t.head == 0) throw ExecutionFault("move off the left end of the tape");
            --t.head;
            break;
        case Move::right:
            ++t.head;
            break;
        case Move::stay:
            break;
    }
}

std::optional<StepRecord> step_impl(const Machine& m, std::string_view input, Configuration& config,
                                    std::string& obs) {
    observe_into(m, input, config, obs);
    const std::size_t rule_index = m.select(config.state, obs);
    if (rule_index == Machine::npos) return std::nullopt;
    const Rule& rule = m.spec().rules[rule_index];

    if (rule.consume) {
        if (config.input_position >= input.size()) throw ExecutionFault("read past end of input");
        ++config.input_position;
    }
    for (std::size_t s = 0; s < config.storages.size(); ++s) {
        const StorageAction& a = rule.actions[s];
        std::visit(overloaded{
                       [&](QueueStore& q) {
                           if (a.pop) {
                               if (q.symbols.empty()) throw ExecutionFault("pop on empty queue " + m.spec().storages[s].id);
                               q.symbols.pop_front();
                           }
                           if (a.push != kNone) q.symbols.push_back(a.push);
                       },
                       [&](PushdownStore& p) {
                           if (a.pop) {
                               if (p.symbols.empty()) throw ExecutionFault("pop on empty pushdown " + m.spec().storages[s].id);
                               p.symbols.pop_back();
                           }
                           if (a.push != kNone) p.symbols.push_back(a.push);
                       },
                       [&](TapeStore& t) { apply(t, a); },
                   },
                   config.storages[s]);
    }
    if (rule.emit != kNone) config.output.push_back(rule.emit);

    StepRecord rec;
    rec.step = ++config.steps;
    rec.from = static_cast<std::uint32_t>(config.state);
    rec.to = static_cast<std::uint32_t>(m.next_state(rule_index));
    rec.consumed = rule.consume;
    rec.emit = rule.emit;
    config.state = rec.to;
    return rec;
}

bool accepts(const Machine& m, std::string_view input, const Configuration& config) {
    const MachineSpec& spec = m.spec();
    const bool input_done = spec.mode == InputMode::post || config.input_position == input.size();
    switch (spec.acceptance.kind) {
        case Acceptance::Kind::empty_storage:
            return input_done && (!input.empty() || spec.epsilon_accept) &&
                   std::all_of(config.storages.begin(), config.storages.end(),
                               [](const Storage& s) { return storage_length(s) == 0; });
        case Acceptance::Kind::final_states:
            return input_done && m.is_final(config.state);
        case Acceptance::Kind::output_bit:
            return !config.output.empty() && config.output.back() == '1';
    }
    return false;
}

}  // namespace

std::size_t storage_length(const Storage& s) {
    return std::visit([](const auto& x) { return x.length(); }, s);
}

Trace::Trace(std::vector<std::string> state_names, std::vector<std::string> storage_ids,
             std::vector<std::size_t> initial_lengths)
    : state_names_(std::move(state_names)),
      storage_ids_(std::move(storage_ids)),
      initial_(std::move(initial_lengths)) {}

void Trace::append(const StepRecord& r, const Configuration& after) {
    records_.push_back(r);
    for (const Storage& s : after.storages) lengths_.push_back(storage_length(s));
}

std::size_t Trace::storage_index(std::string_view id) const {
    auto it = std::find(storage_ids_.begin(), storage_ids_.end(), id);
    if (it == storage_ids_.end()) throw std::out_of_range("unknown storage " + std::string(id));
    return static_cast<std::size_t>(it - storage_ids_.begin());
}

std::size_t Trace::length_after(std::size_t i, std::size_t storage) const {
    if (i == npos) return initial_.at(storage);
    return lengths_.at(i * storage_count() + storage);
}

std::size_t Trace::consumed_total() const {
    return static_cast<std::size_t>(
        std::count_if(records_.begin(), records_.end(), [](const StepRecord& r) { return r.consumed; }));
}

std::size_t Trace::output_total() const {
    return static_cast<std::size_t>(
        std::count_if(records_.begin(), records_.end(), [](const StepRecord& r) { return r.emit != kNone; }));
}

std::string_view to_string(Verdict v) noexcept {
    switch (v) {
        case Verdict::accept: return "accept";
        case Verdict::reject: return "reject";
        case Verdict::step_limit_exceeded: return "step_limit_exceeded";
        case Verdict::fault: return "fault";
    }
    return "?";
}

std::uint64_t default_max_steps(std::size_t input_length) noexcept {
    const std::uint64_t n = static_cast<std::uint64_t>(input_length) + 1;
    return 64 * n * n;
}

Configuration initial_configuration(const Machine& m, std::string_view input) {
    const MachineSpec& spec = m.spec();
    for (std::size_t i = 0; i < input.size(); ++i)
        if (input[i] == kNone || spec.input_alphabet.find(input[i]) == std::string::npos)
            throw InputError(i, "symbol '" + std::string(1, input[i]) + "' at position " + std::to_string(i) +
                                    " is not in the input alphabet");

    Configuration c;
    c.state = m.start_state();
    for (const StorageSpec& s : spec.storages) {
        switch (s.kind) {
            case StorageKind::queue: c.storages.emplace_back(QueueStore{}); break;
            case StorageKind::pushdown: c.storages.emplace_back(PushdownStore{}); break;
            case StorageKind::tape: c.storages.emplace_back(TapeStore{s.tracks, 0, {}, 0}); break;
        }
    }
    if (spec.mode == InputMode::post)
        std::get<QueueStore>(c.storages.front()).symbols.assign(input.begin(), input.end());
    return c;
}

std::string observe(const Machine& m, std::string_view input, const Configuration& config) {
    std::string buf;
    observe_into(m, input, config, buf);
    return buf;
}

std::optional<StepRecord> step(const Machine& m, std::string_view input, Configuration& config) {
    std::string buf;
    return step_impl(m, input, config, buf);
}

RunResult run(const Machine& m, std::string_view input, RunLimits limits) {
    RunResult result;
    const std::uint64_t max_steps = limits.max_steps ? limits.max_steps : default_max_steps(input.size());
    Configuration config = initial_configuration(m, input);

    std::vector<std::size_t> initial;
    for (const Storage& s : config.storages) initial.push_back(storage_length(s));
    result.max_lengths = initial;
    if (limits.trace) {
        std::vector<std::string> ids;
        for (const auto& s : m.spec().storages) ids.push_back(s.id);
        result.trace.emplace(m.spec().states, std::move(ids), initial);
    }

    std::string obs;
    obs.reserve(m.width());
    bool halted = false;
    try {
        while (config.steps < max_steps) {
            auto rec = step_impl(m, input, config, obs);
            if (!rec) {
                halted = true;
                break;
            }
            for (std::size_t s = 0; s < config.storages.size(); ++s)
                result.max_lengths[s] = std::max(result.max_lengths[s], storage_length(config.storages[s]));
            if (result.trace) result.trace->append(*rec, config);
        }
        if (!halted) {
            observe_into(m, input, config, obs);
            halted = m.select(config.state, obs) == Machine::npos;
        }
        if (!halted)
            result.verdict = Verdict::step_limit_exceeded;
        else
            result.verdict = accepts(m, input, config) ? Verdict::accept : Verdict::reject;
    } catch (const ExecutionFault& e) {
        result.verdict = Verdict::fault;
        result.fault = e.what();
    }

    result.output = config.output;
    result.steps = config.steps;
    result.input_consumed = config.input_position;
    result.final_config = std::move(config);
    return result;
}

bool check_realtime(const Trace& trace) { return check_realtime(trace, {0, trace.size()}); }

bool check_realtime(const Trace& trace, StepRange region) { return check_bounded_delay(trace, region, 0); }

std::size_t max_delay(const Trace& trace, StepRange region) {
    std::size_t run = 0, worst = 0;
    const std::size_t end = std::min(region.end, trace.size());
    for (std::size_t i = region.begin; i < end; ++i) {
        run = trace[i].consumed ? 0 : run + 1;
        worst = std::max(worst, run);
    }
    return worst;
}

bool check_bounded_delay(const Trace& trace, StepRange region, std::size_t d) {
    return max_delay(trace, region) <= d;
}

std::vector<std::pair<std::uint64_t, std::size_t>> storage_length_series(const Trace& trace,
                                                                         std::string_view storage) {
    const std::size_t s = trace.storage_index(storage);
    std::vector<std::pair<std::uint64_t, std::size_t>> out;
    out.reserve(trace.size());
    for (std::size_t i = 0; i < trace.size(); ++i) out.emplace_back(trace[i].step, trace.length_after(i, s));
    return out;
}

}  // namespace qmlab
