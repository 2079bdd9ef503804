#include "cantor/random.hpp"

namespace cantor {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    return splitmix64(splitmix64(seed) + index);
}

bool BitStream::next_bit() {
    if (bits_left_ == 0) {
        buffer_ = engine_();
        bits_left_ = 64;
    }
    const bool b = (buffer_ & 1ULL) != 0;
    buffer_ >>= 1;
    --bits_left_;
    return b;
}

bool BitStream::bernoulli(const Rat& p) {
    if (sgn(p) <= 0) {
        return false;
    }
    if (p >= 1) {
        return true;
    }
    // Walk the binary expansions of U and p until they differ. The residual
    // threshold stays in [0, 1); once it hits 0 the expansion of p has ended
    // and U < p is impossible.
    Rat rest = p;
    while (true) {
        rest *= 2;
        int d = 0;
        if (rest >= 1) {
            d = 1;
            rest -= 1;
        }
        const bool b = next_bit();
        if (!b && d == 1) {
            return true;
        }
        if (b && d == 0) {
            return false;
        }
        if (sgn(rest) == 0) {
            return false;
        }
    }
}

}  // namespace cantor
