#include "rng.hpp"

#include <cmath>
#include <stdexcept>

namespace chainbreak {

Xorshift128 Xorshift128::from_splitmix(SplitMix64& sm) {
    Xorshift128 s;
    do {
        s.x = static_cast<uint32_t>(sm.next());
        s.y = static_cast<uint32_t>(sm.next());
        s.z = static_cast<uint32_t>(sm.next());
        s.w = static_cast<uint32_t>(sm.next());
    } while (s.all_zero());
    return s;
}

Xorshift128 Xorshift128::seeded(uint64_t seed) {
    if (seed == 0) return Xorshift128{};
    SplitMix64 sm{seed};
    return from_splitmix(sm);
}

ChaoticIteration::ChaoticIteration(std::vector<uint8_t> bits, uint32_t c, Xorshift128 gen1,
                                   Xorshift128 gen2)
    : bits_(std::move(bits)), c_(c), gen1_(gen1), gen2_(gen2) {
    if (bits_.empty() || bits_.size() > kMaxBits)
        throw std::invalid_argument("chaotic iteration: bit width must be in [1, 53]");
    for (uint8_t b : bits_)
        if (b > 1) throw std::invalid_argument("chaotic iteration: bit array entries must be 0 or 1");
    if (gen1_.all_zero() || gen2_.all_zero())
        throw std::invalid_argument("chaotic iteration: substates must not be all-zero");
    if (gen1_ == gen2_)
        throw std::invalid_argument("chaotic iteration: substates must be distinct");
    for (uint32_t i = 0; i < n_bits(); ++i) value_ |= static_cast<uint64_t>(bits_[i]) << i;
}

ChaoticIteration ChaoticIteration::seeded(uint64_t seed, uint32_t n_bits, uint32_t c) {
    if (n_bits == 0 || n_bits > kMaxBits)
        throw std::invalid_argument("chaotic iteration: bit width must be in [1, 53]");
    SplitMix64 sm{seed};
    const Xorshift128 gen1 = Xorshift128::from_splitmix(sm);
    Xorshift128 gen2 = Xorshift128::from_splitmix(sm);
    while (gen2 == gen1) gen2 = Xorshift128::from_splitmix(sm);
    std::vector<uint8_t> bits(n_bits);
    uint64_t word = 0;
    for (uint32_t i = 0; i < n_bits; ++i) {
        if (i % 64 == 0) word = sm.next();
        bits[i] = static_cast<uint8_t>((word >> (i % 64)) & 1u);
    }
    return ChaoticIteration(std::move(bits), c, gen1, gen2);
}

uint64_t ChaoticIteration::next() {
    const uint32_t a = gen1_.next();
    const uint32_t m = a % 2 + c_;
    // m+1 flip steps: the loop bound i = 0..m is inclusive.
    for (uint32_t i = 0; i <= m; ++i) {
        const uint32_t b = gen2_.next();
        const uint32_t s = b % n_bits();
        bits_[s] ^= 1u;
        value_ ^= 1ull << s;
    }
    return value_;
}

const char* prng_kind_name(PrngKind kind) {
    switch (kind) {
        case PrngKind::Lcg48: return "lcg48";
        case PrngKind::Xorshift128: return "xorshift128";
        case PrngKind::ChaoticIteration: return "ci";
    }
    return "?";
}

RandomSource::RandomSource(PrngKind kind, uint64_t seed)
    : state_(Lcg48{}) {
    switch (kind) {
        case PrngKind::Lcg48: state_ = Lcg48::seeded(seed); break;
        case PrngKind::Xorshift128: state_ = Xorshift128::seeded(seed); break;
        case PrngKind::ChaoticIteration: state_ = ChaoticIteration::seeded(seed); break;
    }
}

RandomSource RandomSource::chaotic(uint64_t seed, uint32_t n_bits, uint32_t c) {
    return RandomSource(StateVariant(ChaoticIteration::seeded(seed, n_bits, c)));
}

PrngKind RandomSource::kind() const {
    switch (state_.index()) {
        case 0: return PrngKind::Lcg48;
        case 1: return PrngKind::Xorshift128;
        default: return PrngKind::ChaoticIteration;
    }
}

uint32_t RandomSource::word_bits() const {
    switch (state_.index()) {
        case 0: return 48;
        case 1: return 32;
        default: return std::get<ChaoticIteration>(state_).n_bits();
    }
}

uint64_t RandomSource::next_raw() {
    return std::visit([](auto& g) -> uint64_t { return g.next(); }, state_);
}

double RandomSource::next_uniform() {
    // word_bits() <= 53, so the word is exact in a double and the quotient
    // stays strictly below 1.
    return std::ldexp(static_cast<double>(next_raw()), -static_cast<int>(word_bits()));
}

uint64_t RandomSource::next_below(uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("next_below: bound must be positive");
    if (bound == 1) return 0;
    const uint64_t range = 1ull << word_bits();
    if (bound > range) throw std::invalid_argument("next_below: bound exceeds the word range");
    const uint64_t limit = range - range % bound;
    uint64_t r;
    do {
        r = next_raw();
    } while (r >= limit);
    return r % bound;
}

}  // namespace chainbreak
