#include "cantor/word.hpp"

#include <algorithm>
#include <set>

#include "cantor/budget.hpp"
#include "cantor/errors.hpp"

namespace cantor {

Word Word::parse(std::string_view text) {
    for (char c : text) {
        if (c != '0' && c != '1') {
            throw ParseError("word must consist of 0/1 characters: \"" +
                             std::string(text) + "\"");
        }
    }
    require_word_length(static_cast<long>(text.size()), "word");
    Word w;
    w.bits_.assign(text);
    return w;
}

Word Word::zeros(long n) {
    require_word_length(n, "word");
    Word w;
    w.bits_.assign(static_cast<std::size_t>(n), '0');
    return w;
}

Word Word::ones(long n) {
    require_word_length(n, "word");
    Word w;
    w.bits_.assign(static_cast<std::size_t>(n), '1');
    return w;
}

long Word::count_ones() const {
    return static_cast<long>(std::count(bits_.begin(), bits_.end(), '1'));
}

Word Word::extended(int b) const {
    require_word_length(length() + 1, "word");
    Word w = *this;
    w.bits_.push_back(b ? '1' : '0');
    return w;
}

Word Word::concat(const Word& other) const {
    require_word_length(length() + other.length(), "word");
    Word w = *this;
    w.bits_ += other.bits_;
    return w;
}

Word Word::prefix(long n) const {
    if (n < 0 || n > length()) {
        throw PreconditionError("prefix length out of range");
    }
    Word w;
    w.bits_ = bits_.substr(0, static_cast<std::size_t>(n));
    return w;
}

bool Word::is_prefix_of(const Word& other) const {
    return length() <= other.length() &&
           other.bits_.compare(0, bits_.size(), bits_) == 0;
}

Int Word::value() const {
    if (bits_.empty()) {
        return Int(0);
    }
    return Int(bits_, 2);
}

Rat dyadic_value(const Word& s) {
    if (s.empty()) {
        return Rat(0);
    }
    Int one = 1;
    return make_rat(s.value(), one << static_cast<unsigned long>(s.length()));
}

std::vector<Word> strict_below(const Word& a) {
    if (a.empty()) {
        throw PreconditionError("strict_below requires a nonempty word");
    }
    require_enumerable(a.length(), "strict_below");
    const unsigned long n = a.value().get_ui();
    const long len = a.length();
    std::vector<Word> out;
    out.reserve(n);
    for (unsigned long v = 0; v < n; ++v) {
        std::string bits(static_cast<std::size_t>(len), '0');
        for (long i = 0; i < len; ++i) {
            if ((v >> (len - 1 - i)) & 1UL) {
                bits[static_cast<std::size_t>(i)] = '1';
            }
        }
        out.push_back(Word::parse(bits));
    }
    return out;
}

std::vector<Word> partition(long n) {
    require_enumerable(n, "partition");
    std::vector<Word> out;
    out.reserve(1UL << static_cast<unsigned long>(n));
    std::string bits(static_cast<std::size_t>(n), '0');
    const unsigned long total = 1UL << static_cast<unsigned long>(n);
    for (unsigned long v = 0; v < total; ++v) {
        for (long i = 0; i < n; ++i) {
            bits[static_cast<std::size_t>(i)] =
                ((v >> (n - 1 - i)) & 1UL) ? '1' : '0';
        }
        out.push_back(Word::parse(bits));
    }
    return out;
}

std::vector<Word> cylinder_union_normalize(const std::vector<Word>& words) {
    std::vector<Word> sorted = words;
    std::sort(sorted.begin(), sorted.end(), [](const Word& a, const Word& b) {
        if (a.length() != b.length()) {
            return a.length() < b.length();
        }
        return a < b;
    });
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    std::set<std::string> kept;
    std::vector<Word> out;
    for (const Word& w : sorted) {
        bool covered = false;
        // Shorter words were processed first, so a cover is a proper prefix.
        for (long n = 0; n < w.length(); ++n) {
            if (kept.count(w.str().substr(0, static_cast<std::size_t>(n))) > 0) {
                covered = true;
                break;
            }
        }
        if (!covered) {
            kept.insert(w.str());
            out.push_back(w);
        }
    }
    return out;
}

DyadicInterval DyadicInterval::unit() {
    return {Rat(0), Rat(1)};
}

DyadicInterval DyadicInterval::of_word(const Word& s) {
    const Rat lo = dyadic_value(s);
    return {lo, lo + pow2(-s.length())};
}

DyadicInterval DyadicInterval::make(const Rat& lo, const Rat& hi) {
    return {lo, hi};
}

DyadicInterval DyadicInterval::intersect(const DyadicInterval& other) const {
    DyadicInterval out{std::max(lower, other.lower), std::min(upper, other.upper)};
    if (out.lower > out.upper) {
        out.upper = out.lower;
    }
    return out;
}

EventuallyPeriodic EventuallyPeriodic::make(const Word& head, const Word& repeat) {
    if (repeat.empty()) {
        throw PreconditionError("eventually periodic sequence needs a nonempty repeat block");
    }
    return {head, repeat};
}

int EventuallyPeriodic::bit(long i) const {
    if (i < head.length()) {
        return head.bit(i);
    }
    return repeat.bit((i - head.length()) % repeat.length());
}

Word EventuallyPeriodic::prefix(long n) const {
    require_word_length(n, "eventually periodic prefix");
    std::string bits;
    bits.reserve(static_cast<std::size_t>(n));
    for (long i = 0; i < n; ++i) {
        bits.push_back(bit(i) ? '1' : '0');
    }
    return Word::parse(bits);
}

bool EventuallyPeriodic::has_prefix(const Word& w) const {
    for (long i = 0; i < w.length(); ++i) {
        if (w.bit(i) != bit(i)) {
            return false;
        }
    }
    return true;
}

Rat EventuallyPeriodic::value() const {
    // r(head) + 2^{-|head|} * val(repeat) / (2^{|repeat|} - 1)
    Int one = 1;
    const Int denom =
        (one << static_cast<unsigned long>(repeat.length())) - 1;
    const Rat tail = make_rat(repeat.value(), denom);
    return dyadic_value(head) + pow2(-head.length()) * tail;
}

}  // namespace cantor
