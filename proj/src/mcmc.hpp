#ifndef CHAINBREAK_MCMC_HPP
#define CHAINBREAK_MCMC_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <utility>

#include "cipher.hpp"
#include "langmodel.hpp"
#include "rng.hpp"

namespace chainbreak {

enum class InitMode { Random, Frequency, Identity, Fixed };

const char* init_mode_name(InitMode mode);

struct ChainConfig {
    uint64_t iterations = 10000;
    double p = 1.0;  // scaling exponent of the acceptance ratio
    bool track_best = true;
    InitMode init = InitMode::Random;
};

/// Final chain state plus the best state seen along the way.
struct ChainResult {
    SubstitutionKey key;
    double log_score = 0.0;
    SubstitutionKey best_key;
    double best_score = 0.0;
    uint64_t accepted = 0;
    uint64_t proposed = 0;
};

struct TranspositionChainResult {
    TranspositionKey key;
    double log_score = 0.0;
    TranspositionKey best_key;
    double best_score = 0.0;
    uint64_t accepted = 0;
    uint64_t proposed = 0;
};

/// Product-state search over a substitution-then-transposition pipeline.
struct CombinedChainResult {
    SubstitutionKey sub_key;
    TranspositionKey trans_key;
    double log_score = 0.0;
    SubstitutionKey best_sub_key;
    TranspositionKey best_trans_key;
    double best_score = 0.0;
    uint64_t accepted = 0;
    uint64_t proposed = 0;
};

/// Per-step trace hook: (iteration, current log score, accepted).
using TraceSink = std::function<void(uint64_t, double, bool)>;

/// Metropolis rule with scaling exponent p: accept iff
/// u < exp(p * (log_score_y - log_score_x)). Any non-negative score
/// difference accepts unconditionally; the exponent is floored at -700 so the
/// threshold stays a positive subnormal-free double, which cannot flip any
/// outcome reachable by a word-width uniform draw.
bool metropolis_accept(double u, double log_score_y, double log_score_x, double p);

/// Two distinct indices drawn uniformly (ordered); the induced swap kernel is
/// symmetric. Consumes exactly two bounded draws.
std::pair<uint32_t, uint32_t> propose_swap_indices(size_t size, RandomSource& src);

/// Key with the images of one uniformly drawn index pair exchanged.
SubstitutionKey propose_swap(const SubstitutionKey& key, RandomSource& src);

/// Rank-matching warm start: ciphertext symbols ordered by frequency are
/// mapped onto reference symbols ordered by unigram weight, ties broken by
/// index. Returns an encryption key.
SubstitutionKey frequency_warm_start(std::span<const uint8_t> ciphertext,
                                     const BigramModel& model);

/// Metropolis attack on a substitution cipher: per iteration, one swap
/// proposal (two draws), one uniform draw, accept/reject; score maintained
/// incrementally. Deterministic given the inputs and the source state.
ChainResult run_substitution_chain(std::span<const uint8_t> ciphertext, const BigramModel& model,
                                   const ChainConfig& cfg, RandomSource& src,
                                   const SubstitutionKey* fixed_init = nullptr,
                                   const TraceSink& trace = nullptr);

/// Same loop over column orders of a block transposition.
TranspositionChainResult run_transposition_chain(std::span<const uint8_t> ciphertext,
                                                 const BigramModel& model, size_t period,
                                                 const ChainConfig& cfg, RandomSource& src,
                                                 const TranspositionKey* fixed_init = nullptr,
                                                 const TraceSink& trace = nullptr);

/// Product-space chain: each iteration flips a fair coin between a
/// substitution swap and a transposition swap, keeping the kernel symmetric.
CombinedChainResult run_combined_chain(std::span<const uint8_t> ciphertext,
                                       const BigramModel& model, size_t period,
                                       const ChainConfig& cfg, RandomSource& src,
                                       const SubstitutionKey* fixed_sub = nullptr,
                                       const TranspositionKey* fixed_trans = nullptr,
                                       const TraceSink& trace = nullptr);

}  // namespace chainbreak

#endif
