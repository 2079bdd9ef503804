#pragma once

#include <cstdint>
#include <random>

#include "cantor/rational.hpp"

namespace cantor {

// splitmix64 scrambler; used to decorrelate user seeds and to derive
// per-trial seeds so experiment results are reproducible bit for bit.
std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

// A deterministic stream of unbiased bits plus an exact Bernoulli draw:
// the uniform U = 0.b1b2... is compared lazily against the binary expansion
// of a rational threshold, so P(success) equals the threshold exactly.
class BitStream {
public:
    explicit BitStream(std::uint64_t seed) : engine_(splitmix64(seed)) {}

    bool next_bit();

    // True with probability exactly p (clamped to [0, 1]).
    bool bernoulli(const Rat& p);

private:
    std::mt19937_64 engine_;
    std::uint64_t buffer_ = 0;
    int bits_left_ = 0;
};

}  // namespace cantor
