#ifndef CHAINBREAK_RNG_HPP
#define CHAINBREAK_RNG_HPP

#include <cstdint>
#include <variant>
#include <vector>

namespace chainbreak {

// splitmix64 (Vigna). Used only for seed expansion and derivation, never as
// one of the comparable generators.
struct SplitMix64 {
    uint64_t state = 0;

    static constexpr uint64_t kGamma = 0x9E3779B97F4A7C15ull;

    static uint64_t finalize(uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    uint64_t next() {
        state += kGamma;
        return finalize(state);
    }
};

/// k-th derived seed of a parent seed (k = 0, 1, ...). Equals output k+1 of a
/// splitmix64 stream seeded with `parent`. The experiment harness builds its
/// whole seed tree out of this one function.
inline uint64_t derive_seed(uint64_t parent, uint64_t k) {
    return SplitMix64::finalize(parent + (k + 1) * SplitMix64::kGamma);
}

/// 48-bit linear congruential generator with the POSIX drand48 constants.
/// next() steps X' = (a*X + c) mod 2^48 and returns X'.
struct Lcg48 {
    static constexpr uint64_t kMultiplier = 0x5DEECE66Dull;
    static constexpr uint64_t kIncrement = 0xBull;
    static constexpr uint64_t kMask = (1ull << 48) - 1;

    uint64_t x = 0;

    // srand48 convention: high 32 bits from the seed, low 16 bits 0x330E.
    static Lcg48 seeded(uint64_t seed) {
        return Lcg48{((seed & 0xFFFFFFFFull) << 16) | 0x330Eull};
    }

    uint64_t next() {
        x = (kMultiplier * x + kIncrement) & kMask;
        return x;
    }

    bool operator==(const Lcg48&) const = default;
};

/// Marsaglia xorshift128. The default-constructed state carries the constants
/// of the reference listing; the all-zero state is forbidden (it is a fixed
/// point of the recurrence).
struct Xorshift128 {
    uint32_t x = 123456789;
    uint32_t y = 362436069;
    uint32_t z = 521288629;
    uint32_t w = 88675123;

    /// seed == 0 keeps the reference constants; any other seed fills the four
    /// words from a splitmix64 stream (low 32 bits of each output), redrawing
    /// in the all-zero case.
    static Xorshift128 seeded(uint64_t seed);
    static Xorshift128 from_splitmix(SplitMix64& sm);

    uint32_t next() {
        const uint32_t t = x ^ (x << 11);
        x = y;
        y = z;
        z = w;
        w = w ^ (w >> 19) ^ (t ^ (t >> 8));
        return w;
    }

    bool all_zero() const { return (x | y | z | w) == 0; }
    bool operator==(const Xorshift128&) const = default;
};

/// Chaotic-iterations generator: a bit array of width n_bits whose cells are
/// flipped by two independent xorshift128 streams. Per output, the first
/// stream draws a, giving m = (a mod 2) + c flip steps counted i = 0..m
/// inclusive; each step flips bit (b mod N) where b comes from the second
/// stream. The array, read LSB-first, is the output word.
class ChaoticIteration {
public:
    static constexpr uint32_t kDefaultBits = 32;
    static constexpr uint32_t kDefaultC = 1;
    static constexpr uint32_t kMaxBits = 53;  // keeps value/2^N exact in a double

    ChaoticIteration(std::vector<uint8_t> bits, uint32_t c, Xorshift128 gen1, Xorshift128 gen2);

    /// Bits and both substates come from one splitmix64 stream: first gen1's
    /// four words, then gen2's (redrawn until distinct from gen1), then
    /// ceil(n_bits/64) words consumed LSB-first for the bit array.
    static ChaoticIteration seeded(uint64_t seed, uint32_t n_bits = kDefaultBits,
                                   uint32_t c = kDefaultC);

    uint64_t next();

    uint64_t value() const { return value_; }  // current array as an integer, bit 0 = LSB
    uint32_t n_bits() const { return static_cast<uint32_t>(bits_.size()); }
    uint32_t c() const { return c_; }
    const std::vector<uint8_t>& bits() const { return bits_; }
    const Xorshift128& step_gen() const { return gen1_; }
    const Xorshift128& index_gen() const { return gen2_; }

    bool operator==(const ChaoticIteration&) const = default;

private:
    std::vector<uint8_t> bits_;
    uint64_t value_ = 0;  // bits_ as an integer, kept in step with the array
    uint32_t c_ = kDefaultC;
    Xorshift128 gen1_;
    Xorshift128 gen2_;
};

enum class PrngKind { Lcg48, Xorshift128, ChaoticIteration };

const char* prng_kind_name(PrngKind kind);

/// Uniform front end over the three generators. A source is a pure function
/// of its seed: equal seeds give equal streams. State is owned and mutable;
/// concurrent chains each hold their own source.
class RandomSource {
public:
    RandomSource(PrngKind kind, uint64_t seed);
    static RandomSource chaotic(uint64_t seed, uint32_t n_bits, uint32_t c);

    /// Wraps an explicitly constructed generator state.
    static RandomSource from_state(Lcg48 state) {
        return RandomSource(StateVariant(state));
    }
    static RandomSource from_state(Xorshift128 state) {
        return RandomSource(StateVariant(state));
    }
    static RandomSource from_state(ChaoticIteration state) {
        return RandomSource(StateVariant(std::move(state)));
    }

    PrngKind kind() const;
    uint32_t word_bits() const;  // 48, 32, or the CI array width

    /// Next raw word of the underlying generator, word_bits() wide.
    uint64_t next_raw();

    /// Raw word divided by 2^word_bits, exact; always in [0, 1).
    double next_uniform();

    /// Unbiased integer in [0, bound) by rejection on the raw word stream.
    /// bound == 1 returns 0 without consuming state. bound must fit the word
    /// width.
    uint64_t next_below(uint64_t bound);

    bool operator==(const RandomSource&) const = default;

private:
    using StateVariant = std::variant<Lcg48, Xorshift128, ChaoticIteration>;

    explicit RandomSource(StateVariant state) : state_(std::move(state)) {}

    StateVariant state_;
};

}  // namespace chainbreak

#endif
