#include "qmlab/oracles.hpp"

#include <deque>
#include <optional>
#include <stdexcept>

#include "qmlab/machines.hpp"

namespace qmlab {

namespace {

bool is_letter(char c) { return c == 'a' || c == 'b'; }
bool is_bit(char c) { return c == '0' || c == '1'; }

/// word = w v c v' w' split on the alphabet partition.
struct Shape {
    std::string_view w, v, v2, w2;
};

std::optional<Shape> split_shape(std::string_view word) {
    std::size_t i = 0;
    auto run = [&](auto pred) {
        const std::size_t start = i;
        while (i < word.size() && pred(word[i])) ++i;
        return word.substr(start, i - start);
    };
    Shape s;
    s.w = run(is_letter);
    s.v = run(is_bit);
    if (i == word.size() || word[i] != 'c') return std::nullopt;
    ++i;
    s.v2 = run(is_bit);
    s.w2 = run(is_letter);
    if (i != word.size()) return std::nullopt;
    return s;
}

char flip(char c) {
    switch (c) {
        case '0': return '1';
        case '1': return '0';
        case 'a': return 'b';
        case 'b': return 'a';
        default: return c;
    }
}

std::string random_edit(std::string word, std::string_view alphabet, Rng& rng) {
    const auto op = rng.below(word.empty() ? 1 : 3);
    if (op == 0) {
        word.insert(word.begin() + static_cast<std::ptrdiff_t>(rng.below(word.size() + 1)), rng.pick(alphabet));
    } else if (op == 1) {
        word.erase(word.begin() + static_cast<std::ptrdiff_t>(rng.below(word.size())));
    } else {
        word[rng.below(word.size())] = rng.pick(alphabet);
    }
    return word;
}

constexpr int kMaxAttempts = 256;

}  // namespace

bool in_L(std::string_view word) {
    auto s = split_shape(word);
    return s && !s->w.empty() && !s->v.empty() && s->v == s->v2 && s->w == s->w2;
}

bool in_Lprime(std::string_view word) {
    auto s = split_shape(word);
    if (!s || s->v != s->v2 || s->v.size() >= 63) return false;
    if (s->w.size() != (std::size_t{1} << s->v.size())) return false;
    return s->w2 == pi(s->w);
}

std::string pi_oracle(std::string_view word) {
    if (!is_power_of_two(word.size())) throw std::invalid_argument("pi_oracle needs a power-of-two length");
    std::deque<char> queue(word.begin(), word.end());
    std::string out;
    out.reserve(word.size());
    while (queue.size() > 1) {
        const std::size_t n = queue.size();
        for (std::size_t i = 0; i < n; ++i) {
            const char c = queue.front();
            queue.pop_front();
            if (i % 2 == 0)
                out.push_back(c);
            else
                queue.push_back(c);
        }
    }
    out.push_back(queue.front());
    return out;
}

std::vector<std::size_t> pi_oracle_positions(std::size_t n) {
    if (!is_power_of_two(n)) throw std::invalid_argument("pi_oracle needs a power-of-two length");
    std::deque<std::size_t> queue;
    for (std::size_t i = 1; i <= n; ++i) queue.push_back(i);
    std::vector<std::size_t> out;
    out.reserve(n);
    while (queue.size() > 1) {
        const std::size_t len = queue.size();
        for (std::size_t i = 0; i < len; ++i) {
            const std::size_t x = queue.front();
            queue.pop_front();
            if (i % 2 == 0)
                out.push_back(x);
            else
                queue.push_back(x);
        }
    }
    out.push_back(queue.front());
    return out;
}

std::string LkInstance::render() const {
    std::string out;
    for (std::size_t i = 0; i < prefixes.size(); ++i) {
        if (i) out.push_back('#');
        out += prefixes[i];
    }
    out.push_back('$');
    for (const auto& b : blocks) {
        out += b;
        out.push_back('$');
    }
    return out;
}

std::variant<LkInstance, Reject> parse_lk(std::size_t k, std::string_view word) {
    if (k == 0) return Reject{0, "k must be at least 1"};
    LkInstance inst;
    inst.k = k;
    std::size_t pos = 0;
    auto bits = [&] {
        const std::size_t start = pos;
        while (pos < word.size() && is_bit(word[pos])) ++pos;
        return std::string(word.substr(start, pos - start));
    };

    for (std::size_t i = 1; i <= k; ++i) {
        std::string x = bits();
        if (x.empty()) return Reject{pos, "empty segment"};
        if (pos == word.size()) return Reject{pos, "missing terminator $"};
        const char sep = word[pos];
        const char want = i < k ? '#' : '$';
        if (sep != want) {
            if (sep == '#' || sep == '$') return Reject{pos, "wrong segment count"};
            return Reject{pos, "unexpected symbol"};
        }
        ++pos;
        inst.prefixes.push_back(std::move(x));
    }
    while (pos < word.size()) {
        const std::size_t start = pos;
        std::string block = bits();
        if (pos == word.size()) return Reject{pos, "missing terminator $"};
        if (word[pos] != '$') return Reject{pos, "unexpected symbol"};
        if (block.size() != k) return Reject{start, "block length differs from k"};
        ++pos;
        inst.blocks.push_back(std::move(block));
    }
    if (inst.blocks.empty()) return Reject{pos, "no blocks after the first $"};
    return inst;
}

std::string evaluate_fk(const LkInstance& inst) {
    std::string out;
    out.reserve(inst.blocks.size() * (inst.k + 1));
    for (std::size_t j = 1; j <= inst.blocks.size(); ++j) {
        for (std::size_t i = 0; i < inst.k; ++i) {
            const std::size_t f = inst.prefixes[i].size();
            out.push_back(j <= f ? inst.prefixes[i][j - 1] : inst.blocks[j - f - 1][i]);
        }
        out.push_back('$');
    }
    return out;
}

std::variant<std::string, Reject> reference_fk(std::size_t k, std::string_view word) {
    auto parsed = parse_lk(k, word);
    if (auto* r = std::get_if<Reject>(&parsed)) return *r;
    return evaluate_fk(std::get<LkInstance>(parsed));
}

std::string LprimeInstance::render() const { return w + v + 'c' + v + pi(w); }

std::string Rng::word(std::string_view alphabet, std::size_t length) {
    std::string out(length, ' ');
    for (auto& c : out) c = pick(alphabet);
    return out;
}

LkInstance gen_lk(std::size_t k, const std::vector<std::size_t>& f, std::size_t m, std::uint64_t seed) {
    if (k == 0 || f.size() != k || m == 0) throw std::invalid_argument("gen_lk needs k >= 1, |f| = k, m >= 1");
    Rng rng(seed);
    LkInstance inst;
    inst.k = k;
    for (std::size_t fi : f) {
        if (fi == 0) throw std::invalid_argument("gen_lk needs every f_i >= 1");
        inst.prefixes.push_back(rng.word("01", fi));
    }
    for (std::size_t j = 0; j < m; ++j) inst.blocks.push_back(rng.word("01", k));
    return inst;
}

LprimeInstance gen_lprime(std::size_t k, std::uint64_t seed) {
    if (k >= 40) throw std::invalid_argument("gen_lprime: k too large");
    Rng rng(seed);
    LprimeInstance inst;
    inst.v = rng.word("01", k);
    inst.w = rng.word("ab", std::size_t{1} << k);
    return inst;
}

std::string_view to_string(Clause c) noexcept {
    switch (c) {
        case Clause::v_mismatch: return "v-mismatch";
        case Clause::w_not_pi: return "w-not-pi";
        case Clause::bad_length: return "bad-length";
        case Clause::bad_format: return "bad-format";
    }
    return "?";
}

std::string mutate_negative(const LprimeInstance& inst, Clause clause, std::uint64_t seed) {
    Rng rng(seed);
    for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
        std::string word;
        switch (clause) {
            case Clause::v_mismatch: {
                if (inst.v.empty()) throw std::invalid_argument("v-mismatch needs |v| >= 1");
                std::string v2 = inst.v;
                auto& bit = v2[rng.below(v2.size())];
                bit = flip(bit);
                word = inst.w + inst.v + 'c' + v2 + pi(inst.w);
                break;
            }
            case Clause::w_not_pi: {
                std::string suffix = pi(inst.w);
                auto& sym = suffix[rng.below(suffix.size())];
                sym = flip(sym);
                word = inst.w + inst.v + 'c' + inst.v + suffix;
                break;
            }
            case Clause::bad_length: {
                std::string w = inst.w, v = inst.v;
                switch (rng.below(3)) {
                    case 0: w.push_back(rng.pick("ab")); break;
                    case 1: v.push_back(rng.pick("01")); break;
                    default:
                        if (w.size() > 1)
                            w.erase(w.begin() + static_cast<std::ptrdiff_t>(rng.below(w.size())));
                        else
                            w.push_back(rng.pick("ab"));
                        break;
                }
                word = w + v + 'c' + v + pi(w);
                break;
            }
            case Clause::bad_format:
                word = random_edit(inst.render(), "ab01c", rng);
                if (split_shape(word)) continue;   // still shaped: not a format violation
                break;
        }
        if (!in_Lprime(word)) return word;
    }
    throw std::logic_error("mutate_negative: no non-member found");
}

std::string mutate_negative(const LkInstance& inst, Clause clause, std::uint64_t seed) {
    if (clause != Clause::bad_format) throw std::invalid_argument("only bad-format applies to L_k instances");
    Rng rng(seed);
    const std::string word = inst.render();
    for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
        std::string edited = random_edit(word, "01#$", rng);
        if (std::holds_alternative<Reject>(parse_lk(inst.k, edited))) return edited;
    }
    throw std::logic_error("mutate_negative: no malformed word found");
}

bool in_anbn(std::string_view word) {
    const std::size_t n = word.size();
    if (n % 2) return false;
    for (std::size_t i = 0; i < n; ++i)
        if (word[i] != (i < n / 2 ? 'a' : 'b')) return false;
    return true;
}

}  // namespace qmlab
