#include "qmlab/spec_format.hpp"

#include <fstream>
#include <ostream>
#include <sstream>
#include <vector>

#include "qmlab/error.hpp"

namespace qmlab {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        const std::size_t at = s.find(sep, start);
        parts.push_back(trim(s.substr(start, at - start)));
        if (at == std::string_view::npos) break;
        start = at + 1;
    }
    return parts;
}

std::vector<std::string> words(std::string_view s) {
    std::vector<std::string> out;
    std::istringstream in{std::string(s)};
    for (std::string w; in >> w;) out.push_back(w);
    return out;
}

std::string alphabet_from(std::string_view token) { return token == "-" ? std::string() : std::string(token); }
std::string alphabet_text(const std::string& a) { return a.empty() ? "-" : a; }

bool parse_bool(std::size_t line, std::string_view v) {
    if (v == "true") return true;
    if (v == "false") return false;
    throw ParseError(line, "expected true or false, got '" + std::string(v) + "'");
}

char parse_symbol(std::size_t line, std::string_view tok, std::string_view what) {
    if (tok.size() != 1) throw ParseError(line, std::string(what) + " must be a single symbol, got '" + std::string(tok) + "'");
    return tok[0];
}

Move parse_move(std::size_t line, std::string_view tok) {
    if (tok == "L") return Move::left;
    if (tok == "S") return Move::stay;
    if (tok == "R") return Move::right;
    throw ParseError(line, "move must be L, S or R");
}

char move_char(Move m) {
    switch (m) {
        case Move::left: return 'L';
        case Move::stay: return 'S';
        case Move::right: return 'R';
    }
    return 'S';
}

StorageAction parse_action(std::size_t line, std::string_view tok) {
    StorageAction a;
    if (tok == "-") return a;
    if (tok == "pop") {
        a.pop = true;
        return a;
    }
    constexpr std::string_view pop_push = "pop+push=", push = "push=", write = "write=", move = "move=";
    if (tok.substr(0, pop_push.size()) == pop_push) {
        a.pop = true;
        a.push = parse_symbol(line, tok.substr(pop_push.size()), "pushed symbol");
        return a;
    }
    if (tok.substr(0, push.size()) == push) {
        a.push = parse_symbol(line, tok.substr(push.size()), "pushed symbol");
        return a;
    }
    if (tok.substr(0, move.size()) == move) {
        a.move = parse_move(line, tok.substr(move.size()));
        return a;
    }
    if (tok.substr(0, write.size()) == write) {
        const std::size_t slash = tok.find('/');
        if (slash == std::string_view::npos) throw ParseError(line, "tape action needs '/move=<L|S|R>'");
        a.write = std::string(tok.substr(write.size(), slash - write.size()));
        if (a.write.empty()) throw ParseError(line, "empty tape write");
        const std::string_view rest = tok.substr(slash + 1);
        if (rest.substr(0, move.size()) != move) throw ParseError(line, "tape action needs '/move=<L|S|R>'");
        a.move = parse_move(line, rest.substr(move.size()));
        return a;
    }
    throw ParseError(line, "unknown storage action '" + std::string(tok) + "'");
}

std::string action_text(const StorageSpec& st, const StorageAction& a) {
    if (st.kind == StorageKind::tape || !a.write.empty() || a.move != Move::stay) {
        if (a.write.empty() && a.move == Move::stay && !a.pop && a.push == kNone) return "-";
        if (a.write.empty()) return std::string("move=") + move_char(a.move);
        return "write=" + a.write + "/move=" + move_char(a.move);
    }
    if (a.pop && a.push != kNone) return std::string("pop+push=") + a.push;
    if (a.pop) return "pop";
    if (a.push != kNone) return std::string("push=") + a.push;
    return "-";
}

std::string observation_text(const std::string& obs) {
    if (obs.size() == 1 && obs[0] == kNone) return "empty";
    return obs;
}

Rule parse_rule(std::size_t line, std::string_view text) {
    const std::size_t arrow = text.find("->");
    if (arrow == std::string_view::npos) throw ParseError(line, "unrecognised line");
    const auto lhs = split(text.substr(0, arrow), '|');
    const auto rhs = split(text.substr(arrow + 2), '|');
    if (lhs.size() != 3) throw ParseError(line, "expected '<state> | <input> | <observations>' before '->'");
    if (rhs.size() != 4) throw ParseError(line, "expected '<state> | <consume> | <actions> | <emit>' after '->'");

    Rule r;
    r.state = std::string(lhs[0]);
    r.input = lhs[1] == "-" ? kNone : parse_symbol(line, lhs[1], "input observation");
    if (!lhs[2].empty())
        for (auto tok : split(lhs[2], ',')) {
            if (tok.empty()) throw ParseError(line, "empty storage observation");
            r.observe.push_back(tok == "empty" ? std::string(1, kNone) : std::string(tok));
        }

    r.next = std::string(rhs[0]);
    if (rhs[1] == "y")
        r.consume = true;
    else if (rhs[1] != "n")
        throw ParseError(line, "consume flag must be y or n");
    if (!rhs[2].empty())
        for (auto tok : split(rhs[2], ',')) r.actions.push_back(parse_action(line, tok));
    r.emit = rhs[3] == "-" ? kNone : parse_symbol(line, rhs[3], "emitted symbol");
    if (r.state.empty() || r.next.empty()) throw ParseError(line, "missing state name");
    return r;
}

}  // namespace

MachineSpec parse_spec(std::string_view text) {
    MachineSpec spec;
    bool saw_start = false;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t nl = text.find('\n', pos);
        const std::string_view raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;

        const std::string_view line = trim(raw);
        if (line.empty() || line.front() == '#') continue;

        const std::size_t colon = line.find(':');
        const std::size_t arrow = line.find("->");
        if (colon != std::string_view::npos && (arrow == std::string_view::npos || colon < arrow)) {
            const std::string_view key = trim(line.substr(0, colon));
            const std::string_view value = trim(line.substr(colon + 1));
            const auto w = words(value);
            if (key == "states") {
                spec.states = w;
            } else if (key == "start") {
                if (w.size() != 1) throw ParseError(line_no, "start needs exactly one state");
                spec.start = w[0];
                saw_start = true;
            } else if (key == "input_alphabet") {
                spec.input_alphabet = value.empty() ? std::string() : alphabet_from(value);
            } else if (key == "output_alphabet") {
                spec.output_alphabet = value.empty() ? std::string() : alphabet_from(value);
            } else if (key == "storage") {
                if (w.size() < 3 || w.size() > 4) throw ParseError(line_no, "storage: <id> <kind> <alphabet> [tracks=<n>]");
                StorageSpec st;
                st.id = w[0];
                if (w[1] == "queue")
                    st.kind = StorageKind::queue;
                else if (w[1] == "pushdown")
                    st.kind = StorageKind::pushdown;
                else if (w[1] == "tape")
                    st.kind = StorageKind::tape;
                else
                    throw ParseError(line_no, "unknown storage kind '" + w[1] + "'");
                st.alphabet = alphabet_from(w[2]);
                if (w.size() == 4) {
                    if (w[3].rfind("tracks=", 0) != 0) throw ParseError(line_no, "expected tracks=<n>");
                    try {
                        st.tracks = std::stoul(w[3].substr(7));
                    } catch (const std::exception&) {
                        throw ParseError(line_no, "bad track count");
                    }
                }
                spec.storages.push_back(std::move(st));
            } else if (key == "acceptance") {
                if (w.empty()) throw ParseError(line_no, "acceptance mode missing");
                if (w[0] == "empty_all_storages") {
                    spec.acceptance.kind = Acceptance::Kind::empty_storage;
                } else if (w[0] == "final_states") {
                    spec.acceptance.kind = Acceptance::Kind::final_states;
                    spec.acceptance.final_states.assign(w.begin() + 1, w.end());
                } else if (w[0] == "output_bit") {
                    spec.acceptance.kind = Acceptance::Kind::output_bit;
                } else {
                    throw ParseError(line_no, "unknown acceptance mode '" + w[0] + "'");
                }
            } else if (key == "mode") {
                if (value == "online")
                    spec.mode = InputMode::online;
                else if (value == "post")
                    spec.mode = InputMode::post;
                else
                    throw ParseError(line_no, "mode must be online or post");
            } else if (key == "epsilon_accept") {
                spec.epsilon_accept = parse_bool(line_no, value);
            } else {
                throw ParseError(line_no, "unknown header '" + std::string(key) + "'");
            }
            continue;
        }
        spec.rules.push_back(parse_rule(line_no, line));
    }
    if (!saw_start && !spec.states.empty()) spec.start = spec.states.front();
    return spec;
}

std::string format_spec(const MachineSpec& spec) {
    std::ostringstream out;
    out << "states:";
    for (const auto& s : spec.states) out << ' ' << s;
    out << "\nstart: " << spec.start << '\n';
    out << "input_alphabet: " << alphabet_text(spec.input_alphabet) << '\n';
    out << "output_alphabet: " << alphabet_text(spec.output_alphabet) << '\n';
    for (const auto& st : spec.storages) {
        out << "storage: " << st.id << ' ' << to_string(st.kind) << ' ' << alphabet_text(st.alphabet);
        if (st.kind == StorageKind::tape) out << " tracks=" << st.tracks;
        out << '\n';
    }
    out << "acceptance: ";
    switch (spec.acceptance.kind) {
        case Acceptance::Kind::empty_storage: out << "empty_all_storages"; break;
        case Acceptance::Kind::final_states:
            out << "final_states";
            for (const auto& f : spec.acceptance.final_states) out << ' ' << f;
            break;
        case Acceptance::Kind::output_bit: out << "output_bit"; break;
    }
    out << "\nmode: " << (spec.mode == InputMode::post ? "post" : "online") << '\n';
    out << "epsilon_accept: " << (spec.epsilon_accept ? "true" : "false") << '\n';

    for (const Rule& r : spec.rules) {
        out << r.state << " | ";
        if (r.input == kNone)
            out << '-';
        else
            out << r.input;
        out << " | ";
        for (std::size_t i = 0; i < r.observe.size(); ++i) out << (i ? "," : "") << observation_text(r.observe[i]);
        out << " -> " << r.next << " | " << (r.consume ? 'y' : 'n') << " | ";
        for (std::size_t i = 0; i < r.actions.size(); ++i) {
            const StorageSpec fallback{};
            const StorageSpec& st = i < spec.storages.size() ? spec.storages[i] : fallback;
            out << (i ? "," : "") << action_text(st, r.actions[i]);
        }
        out << " | ";
        if (r.emit == kNone)
            out << '-';
        else
            out << r.emit;
        out << '\n';
    }
    return out.str();
}

MachineSpec load_spec_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot read " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_spec(buf.str());
}

void write_trace_csv(std::ostream& out, const Trace& trace) {
    out << "step,state,consumed";
    for (const auto& id : trace.storage_ids()) out << ",len(" << id << ')';
    out << ",emit\n";
    for (std::size_t i = 0; i < trace.size(); ++i) {
        const StepRecord& r = trace[i];
        out << r.step << ',' << trace.state_name(r.from) << ',' << (r.consumed ? 1 : 0);
        for (std::size_t s = 0; s < trace.storage_count(); ++s) out << ',' << trace.length_after(i, s);
        out << ',';
        if (r.emit == kNone)
            out << '-';
        else
            out << r.emit;
        out << '\n';
    }
}

}  // namespace qmlab
