#include "frostree/core_model.hpp"

#include <algorithm>
#include <cctype>
#include <limits>

namespace frostree {

ChoiceSequence ChoiceSequence::from_signs(std::initializer_list<int> signs) {
    std::vector<Step> steps;
    steps.reserve(signs.size());
    for (int s : signs) {
        if (s == 1) {
            steps.push_back(Step::Attach);
        } else if (s == -1) {
            steps.push_back(Step::Freeze);
        } else {
            throw InvalidSequence("choice sequence entries must be +1 or -1");
        }
    }
    return ChoiceSequence(std::move(steps));
}

std::size_t ChoiceSequence::attach_count() const noexcept {
    return static_cast<std::size_t>(std::count(steps_.begin(), steps_.end(), Step::Attach));
}

std::size_t ChoiceSequence::leading_attach_run() const noexcept {
    auto it = std::find(steps_.begin(), steps_.end(), Step::Freeze);
    return static_cast<std::size_t>(it - steps_.begin());
}

ChoiceSequence ChoiceSequence::concat(const ChoiceSequence& tail) const {
    std::vector<Step> out = steps_;
    out.insert(out.end(), tail.steps_.begin(), tail.steps_.end());
    return ChoiceSequence(std::move(out));
}

ChoiceSequence repeat(Step s, std::size_t k) { return ChoiceSequence(std::vector<Step>(k, s)); }

ChoiceSequence repeat(const ChoiceSequence& block, std::size_t k) {
    std::vector<Step> out;
    out.reserve(block.size() * k);
    for (std::size_t i = 0; i < k; ++i) out.insert(out.end(), block.begin(), block.end());
    return ChoiceSequence(std::move(out));
}

namespace {

// Expansion guard; a sequence this long would not fit any builder anyway.
constexpr std::size_t kMaxExpandedLength = std::size_t{1} << 32;

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    std::vector<Step> parse() {
        std::vector<Step> out = parse_seq();
        skip_ws();
        if (pos_ != text_.size()) {
            if (text_[pos_] == ')') throw ParseError("unbalanced ')'", pos_);
            throw ParseError(std::string("unexpected character '") + text_[pos_] + "'", pos_);
        }
        return out;
    }

private:
    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool at_atom_start() {
        skip_ws();
        return pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-' || text_[pos_] == '(');
    }

    std::vector<Step> parse_seq() {
        skip_ws();
        if (!at_atom_start()) {
            if (pos_ >= text_.size()) throw ParseError("expected '+', '-' or '('", pos_);
            throw ParseError(std::string("expected '+', '-' or '(' but found '") + text_[pos_] + "'", pos_);
        }
        std::vector<Step> out;
        while (at_atom_start()) {
            std::vector<Step> term = parse_term();
            if (out.size() + term.size() > kMaxExpandedLength)
                throw ParseError("expanded sequence too long", pos_);
            out.insert(out.end(), term.begin(), term.end());
        }
        return out;
    }

    std::vector<Step> parse_term() {
        std::vector<Step> atom = parse_atom();
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == '^') {
            ++pos_;
            std::size_t count = parse_count();
            if (!atom.empty() && count > kMaxExpandedLength / atom.size())
                throw ParseError("expanded sequence too long", pos_);
            std::vector<Step> out;
            out.reserve(atom.size() * count);
            for (std::size_t i = 0; i < count; ++i) out.insert(out.end(), atom.begin(), atom.end());
            return out;
        }
        return atom;
    }

    std::vector<Step> parse_atom() {
        skip_ws();
        char c = text_[pos_];
        if (c == '+') {
            ++pos_;
            return {Step::Attach};
        }
        if (c == '-') {
            ++pos_;
            return {Step::Freeze};
        }
        std::size_t open = pos_;
        ++pos_;
        std::vector<Step> inner = parse_seq();
        skip_ws();
        if (pos_ >= text_.size() || text_[pos_] != ')')
            throw ParseError("unclosed '(' opened at offset " + std::to_string(open), pos_);
        ++pos_;
        return inner;
    }

    std::size_t parse_count() {
        skip_ws();
        std::size_t start = pos_;
        std::size_t value = 0;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
            std::size_t digit = static_cast<std::size_t>(text_[pos_] - '0');
            if (value > (kMaxExpandedLength - digit) / 10) throw ParseError("repetition count too large", start);
            value = value * 10 + digit;
            ++pos_;
        }
        if (pos_ == start) throw ParseError("expected repetition count after '^'", pos_);
        if (value == 0) throw ParseError("repetition count must be positive", start);
        return value;
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

}  // namespace

ChoiceSequence parse_sequence(std::string_view text) { return ChoiceSequence(Parser(text).parse()); }

std::string render(const ChoiceSequence& seq) {
    std::string out;
    const auto& steps = seq.steps();
    for (std::size_t i = 0; i < steps.size();) {
        std::size_t j = i;
        while (j < steps.size() && steps[j] == steps[i]) ++j;
        out += steps[i] == Step::Attach ? '+' : '-';
        if (j - i > 1) out += "^" + std::to_string(j - i);
        i = j;
    }
    return out;
}

std::int64_t WalkProfile::max_after_start() const {
    if (s_values.size() == 1) return s_values.front();
    return *std::max_element(s_values.begin() + 1, s_values.end());
}

WalkProfile walk_profile(const ChoiceSequence& seq) {
    WalkProfile p;
    p.s_values.reserve(seq.size() + 1);
    std::int64_t s = 1;
    p.s_values.push_back(s);
    for (std::size_t j = 0; j < seq.size(); ++j) {
        s += to_sign(seq[j]);
        p.s_values.push_back(s);
        if (s == 0 && p.tau.is_infinite()) p.tau = StoppingTime::at(j + 1);
    }
    return p;
}

bool is_valid(const ChoiceSequence& seq) {
    std::int64_t s = 1;
    for (std::size_t j = 0; j + 1 < seq.size(); ++j) {
        s += to_sign(seq[j]);
        if (s <= 0) return false;
    }
    return true;
}

void require_valid(const ChoiceSequence& seq) {
    if (!is_valid(seq))
        throw InvalidSequence("sequence " + render(seq) + " exhausts its active vertices before the last step");
}

SequenceClass classify(const ChoiceSequence& seq, std::size_t n) {
    SequenceClass c;
    c.n = n;
    c.valid = is_valid(seq);
    c.in_x_n = seq.attach_count() == n && walk_profile(seq).tau.at_least(seq.size());
    return c;
}

namespace {

void extend_x_n(std::vector<Step>& prefix, std::int64_t s, std::size_t attaches_left, std::size_t max_length,
                std::vector<ChoiceSequence>& out) {
    if (attaches_left == 0) out.emplace_back(prefix);
    if (prefix.size() == max_length || s == 0) return;
    if (attaches_left > 0) {
        prefix.push_back(Step::Attach);
        extend_x_n(prefix, s + 1, attaches_left - 1, max_length, out);
        prefix.pop_back();
    }
    prefix.push_back(Step::Freeze);
    extend_x_n(prefix, s - 1, attaches_left, max_length, out);
    prefix.pop_back();
}

}  // namespace

std::vector<ChoiceSequence> enumerate_x_n(std::size_t n, std::size_t max_length) {
    std::vector<ChoiceSequence> out;
    std::vector<Step> prefix;
    extend_x_n(prefix, 1, n, max_length, out);
    std::sort(out.begin(), out.end(), [](const ChoiceSequence& a, const ChoiceSequence& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(),
                                            [](Step x, Step y) { return to_sign(x) > to_sign(y); });
    });
    return out;
}

std::vector<ChoiceSequence> enumerate_valid(std::size_t length) {
    std::vector<ChoiceSequence> out;
    if (length >= 63) throw DomainError("enumerate_valid supports lengths below 63");
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << length); ++mask) {
        std::vector<Step> steps(length);
        for (std::size_t i = 0; i < length; ++i) steps[i] = (mask >> (length - 1 - i)) & 1 ? Step::Freeze : Step::Attach;
        ChoiceSequence seq(std::move(steps));
        if (is_valid(seq)) out.push_back(std::move(seq));
    }
    return out;
}

}  // namespace frostree
