#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "cantor/rational.hpp"

namespace cantor {

// A finite binary word, the index of a cylinder in Cantor space.
// Serialized as an ASCII string of '0'/'1'; the empty word is "".
class Word {
public:
    Word() = default;

    // Validates that every character is '0' or '1'.
    static Word parse(std::string_view text);
    static Word zeros(long n);
    static Word ones(long n);

    long length() const { return static_cast<long>(bits_.size()); }
    bool empty() const { return bits_.empty(); }
    int bit(long i) const { return bits_[static_cast<std::size_t>(i)] == '1'; }
    long count_ones() const;

    Word extended(int b) const;
    Word concat(const Word& other) const;
    Word prefix(long n) const;
    bool is_prefix_of(const Word& other) const;

    // The integer whose binary digits are the word's bits (empty word -> 0).
    Int value() const;

    const std::string& str() const { return bits_; }

    friend bool operator==(const Word& a, const Word& b) { return a.bits_ == b.bits_; }
    friend bool operator!=(const Word& a, const Word& b) { return a.bits_ != b.bits_; }
    // Lexicographic on the bit string; on words of equal length this is the
    // dyadic-value order used for partitions.
    friend bool operator<(const Word& a, const Word& b) { return a.bits_ < b.bits_; }

private:
    std::string bits_;
};

// r(s) = sum_i s_i 2^{-i}: the left endpoint of the word's dyadic interval.
Rat dyadic_value(const Word& s);

// All words of the same length as `a` whose dyadic value is strictly below
// r(a), in increasing order. Requires a nonempty word; the enumeration is
// bounded by the depth budget.
std::vector<Word> strict_below(const Word& a);

// All 2^n words of length n in increasing order. Budget-checked.
std::vector<Word> partition(long n);

// Drops every word that lies inside the cylinder of another word in the set,
// leaving an antichain with the same cylinder union. Output is sorted by
// (length, bits) and the function is idempotent.
std::vector<Word> cylinder_union_normalize(const std::vector<Word>& words);

// Half-open subinterval [lower, upper) of [0, 1); a cylinder viewed on the
// unit interval. Empty when lower == upper.
struct DyadicInterval {
    Rat lower;
    Rat upper;

    static DyadicInterval unit();
    static DyadicInterval of_word(const Word& s);
    static DyadicInterval make(const Rat& lo, const Rat& hi);

    Rat length() const { return upper - lower; }
    bool empty() const { return lower >= upper; }
    DyadicInterval intersect(const DyadicInterval& other) const;
};

// The eventually periodic sequence head . repeat . repeat . ...; the only
// infinite sequences with exact finite descriptions used here (conditioning
// targets, point masses). `repeat` must be nonempty.
struct EventuallyPeriodic {
    Word head;
    Word repeat;

    static EventuallyPeriodic make(const Word& head, const Word& repeat);

    int bit(long i) const;
    Word prefix(long n) const;
    bool has_prefix(const Word& w) const;
    // r of the infinite sequence, a rational.
    Rat value() const;
};

}  // namespace cantor
