#include "qmlab/machine.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <sstream>

#include "qmlab/error.hpp"

namespace qmlab {

namespace {

std::string show(char c) {
    if (c == kNone) return "<none>";
    return std::string(1, c);
}

bool valid_name(std::string_view name) {
    if (name.empty()) return false;
    return std::all_of(name.begin(), name.end(), [](char c) {
        return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
               c == '_' || c == '.' || c == '\'';
    });
}

bool in(std::string_view alphabet, char c) {
    return c != kNone && alphabet.find(c) != std::string_view::npos;
}

std::string expand_tape_pattern(const StorageSpec& s, const std::string& obs) {
    if (s.kind == StorageKind::tape && s.tracks > 1 && obs == std::string(1, kAny))
        return std::string(s.tracks, kAny);
    return obs;
}

class Reporter {
public:
    explicit Reporter(ValidationReport& r) : report_(r) {}
    void error(std::string code, std::string msg) {
        report_.issues.push_back({Issue::Severity::error, std::move(code), std::move(msg)});
    }
    void warning(std::string code, std::string msg) {
        report_.issues.push_back({Issue::Severity::warning, std::move(code), std::move(msg)});
    }

private:
    ValidationReport& report_;
};

void check_alphabet(Reporter& out, std::string_view what, std::string_view alphabet) {
    std::set<char> seen;
    for (char c : alphabet) {
        if (is_reserved_symbol(c))
            out.error("reserved-symbol", std::string(what) + " contains reserved symbol " + show(c));
        if (!seen.insert(c).second)
            out.error("duplicate-symbol", std::string(what) + " lists " + show(c) + " twice");
    }
}

void check_rule(Reporter& out, const MachineSpec& spec, const std::set<std::string>& states,
                std::size_t index, const Rule& rule) {
    const std::string where = "rule " + std::to_string(index) + " (" + rule.state + ")";
    if (!states.count(rule.state)) out.error("unknown-state", where + ": undeclared state");
    if (!states.count(rule.next))
        out.error("unknown-state", where + ": undeclared next state " + rule.next);

    if (rule.input != kAny && rule.input != kNone && !in(spec.input_alphabet, rule.input))
        out.error("alphabet-leak", where + ": input symbol " + show(rule.input) + " not in input alphabet");
    if (rule.consume && rule.input == kNone)
        out.error("consume-at-end", where + ": consumes input while observing end of input");
    if (spec.mode == InputMode::post) {
        if (rule.consume) out.error("post-mode-read", where + ": input read in post mode");
        if (rule.input != kAny && rule.input != kNone)
            out.error("post-mode-read", where + ": input pattern in post mode must be '*' or end");
    }
    if (rule.emit != kNone && !in(spec.output_alphabet, rule.emit))
        out.error("alphabet-leak", where + ": emitted symbol " + show(rule.emit) + " not in output alphabet");

    if (rule.observe.size() != spec.storages.size()) {
        out.error("arity", where + ": " + std::to_string(rule.observe.size()) +
                               " storage observations for " + std::to_string(spec.storages.size()) +
                               " storages");
        return;
    }
    if (rule.actions.size() != spec.storages.size()) {
        out.error("arity", where + ": " + std::to_string(rule.actions.size()) +
                               " storage actions for " + std::to_string(spec.storages.size()) +
                               " storages");
        return;
    }

    for (std::size_t s = 0; s < spec.storages.size(); ++s) {
        const StorageSpec& st = spec.storages[s];
        const std::string obs = expand_tape_pattern(st, rule.observe[s]);
        const StorageAction& act = rule.actions[s];
        const std::string at = where + ", storage " + st.id;
        if (st.kind == StorageKind::tape) {
            if (obs.size() != st.tracks) {
                out.error("arity", at + ": observation needs one symbol per track");
            } else {
                for (char c : obs)
                    if (c != kAny && c != kBlank && !in(st.alphabet, c))
                        out.error("alphabet-leak", at + ": observed " + show(c) + " not in tape alphabet");
            }
            if (act.pop || act.push != kNone)
                out.error("bad-action", at + ": pop/push on a tape");
            if (!act.write.empty()) {
                if (act.write.size() != st.tracks)
                    out.error("arity", at + ": write needs one symbol per track");
                for (char c : act.write)
                    if (c != kAny && c != kBlank && !in(st.alphabet, c))
                        out.error("alphabet-leak", at + ": written " + show(c) + " not in tape alphabet");
            }
        } else {
            if (obs.size() != 1) {
                out.error("arity", at + ": observation must be a single symbol");
            } else if (obs[0] != kAny && obs[0] != kNone && !in(st.alphabet, obs[0])) {
                out.error("alphabet-leak", at + ": observed " + show(obs[0]) + " not in storage alphabet");
            } else if (act.pop && obs[0] == kNone) {
                out.error("pop-on-empty", at + ": pops a storage the pattern requires to be empty");
            }
            if (act.push != kNone && !in(st.alphabet, act.push))
                out.error("alphabet-leak", at + ": pushed " + show(act.push) + " not in storage alphabet");
            if (!act.write.empty() || act.move != Move::stay)
                out.error("bad-action", at + ": write/move on a " + std::string(to_string(st.kind)));
        }
    }
}

}  // namespace

bool is_reserved_symbol(char c) noexcept {
    switch (c) {
        case kNone: case kAny: case kBlank:
        case ' ': case '\t': case '\n': case '\r':
        case '|': case ',': case '-': case '=': case '/': case '+': case '>': case ':':
            return true;
        default:
            return false;
    }
}

std::string_view to_string(StorageKind kind) noexcept {
    switch (kind) {
        case StorageKind::queue: return "queue";
        case StorageKind::pushdown: return "pushdown";
        case StorageKind::tape: return "tape";
    }
    return "?";
}

bool ValidationReport::ok() const noexcept { return error_count() == 0; }

std::size_t ValidationReport::error_count() const noexcept {
    return static_cast<std::size_t>(std::count_if(issues.begin(), issues.end(), [](const Issue& i) {
        return i.severity == Issue::Severity::error;
    }));
}

bool ValidationReport::has(std::string_view code) const noexcept {
    return std::any_of(issues.begin(), issues.end(), [&](const Issue& i) { return i.code == code; });
}

std::size_t observation_width(const MachineSpec& spec) {
    std::size_t w = 1;
    for (const auto& s : spec.storages) w += s.kind == StorageKind::tape ? s.tracks : 1;
    return w;
}

std::string flatten_pattern(const MachineSpec& spec, const Rule& rule) {
    std::string p(1, rule.input);
    for (std::size_t s = 0; s < spec.storages.size() && s < rule.observe.size(); ++s)
        p += expand_tape_pattern(spec.storages[s], rule.observe[s]);
    return p;
}

ValidationReport validate_spec(const MachineSpec& spec) {
    ValidationReport report;
    Reporter out(report);

    std::set<std::string> states;
    for (const auto& s : spec.states) {
        if (!valid_name(s)) out.error("bad-name", "invalid state name '" + s + "'");
        if (!states.insert(s).second) out.error("duplicate-state", "state " + s + " declared twice");
    }
    if (spec.states.empty()) out.error("no-states", "no states declared");
    if (!states.count(spec.start)) out.error("unknown-state", "start state '" + spec.start + "' undeclared");

    check_alphabet(out, "input alphabet", spec.input_alphabet);
    check_alphabet(out, "output alphabet", spec.output_alphabet);

    std::set<std::string> ids;
    for (const auto& st : spec.storages) {
        if (!valid_name(st.id)) out.error("bad-name", "invalid storage id '" + st.id + "'");
        if (!ids.insert(st.id).second) out.error("duplicate-storage", "storage " + st.id + " declared twice");
        check_alphabet(out, "alphabet of " + st.id, st.alphabet);
        if (st.tracks == 0) out.error("bad-tracks", st.id + ": tracks must be positive");
        if (st.kind != StorageKind::tape && st.tracks != 1)
            out.error("bad-tracks", st.id + ": only tapes have tracks");
    }

    if (spec.mode == InputMode::post) {
        if (spec.storages.empty() || spec.storages[0].kind != StorageKind::queue) {
            out.error("post-mode-storage", "post mode needs storage 0 to be a queue");
        } else {
            for (char c : spec.input_alphabet)
                if (!in(spec.storages[0].alphabet, c))
                    out.error("alphabet-leak", "input symbol " + show(c) + " cannot be preloaded onto " +
                                                   spec.storages[0].id);
        }
    }

    if (spec.acceptance.kind == Acceptance::Kind::final_states) {
        if (spec.acceptance.final_states.empty()) out.error("no-final-states", "final_states acceptance without final states");
        for (const auto& f : spec.acceptance.final_states)
            if (!states.count(f)) out.error("unknown-state", "final state '" + f + "' undeclared");
    }

    std::map<std::pair<std::string, std::string>, std::size_t> patterns;
    for (std::size_t i = 0; i < spec.rules.size(); ++i) {
        const Rule& rule = spec.rules[i];
        check_rule(out, spec, states, i, rule);
        auto [it, fresh] = patterns.emplace(std::pair{rule.state, flatten_pattern(spec, rule)}, i);
        if (!fresh)
            out.error("nondeterminism", "rules " + std::to_string(it->second) + " and " + std::to_string(i) +
                                            " match the same observations in state " + rule.state);
    }

    if (states.count(spec.start)) {
        std::map<std::string, std::vector<std::string>> succ;
        for (const auto& r : spec.rules) succ[r.state].push_back(r.next);
        std::set<std::string> seen{spec.start};
        std::deque<std::string> work{spec.start};
        while (!work.empty()) {
            auto s = work.front();
            work.pop_front();
            for (const auto& t : succ[s])
                if (seen.insert(t).second) work.push_back(t);
        }
        for (const auto& s : spec.states)
            if (!seen.count(s)) out.warning("unreachable", "state " + s + " is unreachable");
    }
    return report;
}

Machine::Machine(MachineSpec spec) : spec_(std::move(spec)) {
    const ValidationReport report = validate_spec(spec_);
    if (!report.ok()) {
        std::ostringstream msg;
        msg << "invalid machine:";
        for (const auto& i : report.issues)
            if (i.severity == Issue::Severity::error) msg << "\n  " << i.code << ": " << i.message;
        throw SpecError(msg.str());
    }

    width_ = observation_width(spec_);
    start_ = state_index(spec_.start);
    final_.assign(spec_.states.size(), false);
    for (const auto& f : spec_.acceptance.final_states) final_[state_index(f)] = true;

    table_.resize(spec_.states.size());
    next_.reserve(spec_.rules.size());
    for (std::size_t i = 0; i < spec_.rules.size(); ++i) {
        const Rule& r = spec_.rules[i];
        next_.push_back(state_index(r.next));
        table_[state_index(r.state)].push_back({flatten_pattern(spec_, r), i});
    }
    auto specificity = [](const std::string& p) {
        std::string key(p.size(), '0');
        for (std::size_t i = 0; i < p.size(); ++i)
            if (p[i] != kAny) key[i] = '1';
        return key;
    };
    for (auto& entries : table_)
        std::stable_sort(entries.begin(), entries.end(), [&](const Entry& a, const Entry& b) {
            return specificity(a.pattern) > specificity(b.pattern);
        });
}

std::size_t Machine::state_index(std::string_view name) const {
    auto it = std::find(spec_.states.begin(), spec_.states.end(), name);
    if (it == spec_.states.end()) throw std::out_of_range("unknown state " + std::string(name));
    return static_cast<std::size_t>(it - spec_.states.begin());
}

std::size_t Machine::select(std::size_t state, std::string_view observation) const {
    for (const Entry& e : table_[state]) {
        bool match = true;
        for (std::size_t i = 0; i < width_; ++i) {
            const char p = e.pattern[i];
            if (p != kAny && p != observation[i]) {
                match = false;
                break;
            }
        }
        if (match) return e.rule;
    }
    return npos;
}

}  // namespace qmlab
