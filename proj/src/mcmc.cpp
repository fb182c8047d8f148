#include "mcmc.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>
#include <stdexcept>

namespace chainbreak {

const char* init_mode_name(InitMode mode) {
    switch (mode) {
        case InitMode::Random: return "random";
        case InitMode::Frequency: return "freq";
        case InitMode::Identity: return "identity";
        case InitMode::Fixed: return "fixed";
    }
    return "?";
}

bool metropolis_accept(double u, double log_score_y, double log_score_x, double p) {
    if (!(p > 0.0)) throw std::invalid_argument("accept: scaling exponent must be positive");
    const double diff = p * (log_score_y - log_score_x);
    if (diff >= 0.0) return true;
    return u < std::exp(std::max(diff, -700.0));
}

std::pair<uint32_t, uint32_t> propose_swap_indices(size_t size, RandomSource& src) {
    if (size < 2) throw std::invalid_argument("propose: key space needs at least 2 positions");
    const uint32_t i = static_cast<uint32_t>(src.next_below(size));
    uint32_t j = static_cast<uint32_t>(src.next_below(size - 1));
    if (j >= i) ++j;
    return {i, j};
}

SubstitutionKey propose_swap(const SubstitutionKey& key, RandomSource& src) {
    const auto [i, j] = propose_swap_indices(key.size(), src);
    SubstitutionKey next = key;
    std::swap(next.perm[i], next.perm[j]);
    return next;
}

SubstitutionKey frequency_warm_start(std::span<const uint8_t> ciphertext,
                                     const BigramModel& model) {
    const size_t n = model.alphabet_size();
    std::vector<uint64_t> cipher_count(n, 0);
    for (const uint8_t c : ciphertext) {
        if (c >= n) throw std::invalid_argument("warm start: symbol outside the alphabet");
        ++cipher_count[c];
    }
    std::vector<uint32_t> cipher_rank(n), plain_rank(n);
    std::iota(cipher_rank.begin(), cipher_rank.end(), 0u);
    std::iota(plain_rank.begin(), plain_rank.end(), 0u);
    std::sort(cipher_rank.begin(), cipher_rank.end(), [&](uint32_t a, uint32_t b) {
        if (cipher_count[a] != cipher_count[b]) return cipher_count[a] > cipher_count[b];
        return a < b;
    });
    std::sort(plain_rank.begin(), plain_rank.end(), [&](uint32_t a, uint32_t b) {
        const double wa = model.unigram_weight(a), wb = model.unigram_weight(b);
        if (wa != wb) return wa > wb;
        return a < b;
    });
    SubstitutionKey key;
    key.perm.resize(n);
    for (size_t k = 0; k < n; ++k) key.perm[plain_rank[k]] = cipher_rank[k];
    return key;
}

namespace {

void check_chain_inputs(std::span<const uint8_t> ciphertext, const BigramModel& model,
                        const ChainConfig& cfg) {
    if (ciphertext.empty()) throw std::invalid_argument("chain: ciphertext is empty");
    if (!model.smoothed()) throw std::invalid_argument("chain: model has zero frequencies");
    if (!(cfg.p > 0.0)) throw std::invalid_argument("chain: scaling exponent must be positive");
}

}  // namespace

ChainResult run_substitution_chain(std::span<const uint8_t> ciphertext, const BigramModel& model,
                                   const ChainConfig& cfg, RandomSource& src,
                                   const SubstitutionKey* fixed_init, const TraceSink& trace) {
    check_chain_inputs(ciphertext, model, cfg);
    const size_t n = model.alphabet_size();

    ChainResult state;
    switch (cfg.init) {
        case InitMode::Random: state.key = random_substitution_key(n, src); break;
        case InitMode::Frequency: state.key = frequency_warm_start(ciphertext, model); break;
        case InitMode::Identity: state.key = SubstitutionKey::identity(n); break;
        case InitMode::Fixed:
            if (!fixed_init) throw std::invalid_argument("chain: fixed init needs a key");
            if (fixed_init->size() != n || !fixed_init->valid())
                throw std::invalid_argument("chain: fixed init key is invalid");
            state.key = *fixed_init;
            break;
    }

    const SubstitutionScorer scorer(ciphertext, model);
    state.log_score = scorer.full_score(state.key);
    state.best_key = state.key;
    state.best_score = state.log_score;

    for (uint64_t it = 0; it < cfg.iterations; ++it) {
        const auto [i, j] = propose_swap_indices(n, src);
        const double delta = scorer.swap_delta(state.key, i, j);
        const double u = src.next_uniform();
        ++state.proposed;
        const bool accepted = metropolis_accept(u, state.log_score + delta, state.log_score, cfg.p);
        if (accepted) {
            std::swap(state.key.perm[i], state.key.perm[j]);
            state.log_score += delta;
            ++state.accepted;
            if (cfg.track_best && state.log_score > state.best_score) {
                state.best_score = state.log_score;
                state.best_key = state.key;
            }
        }
        if (trace) trace(it, state.log_score, accepted);
    }
    if (!cfg.track_best) {
        state.best_key = state.key;
        state.best_score = state.log_score;
    }
    return state;
}

TranspositionChainResult run_transposition_chain(std::span<const uint8_t> ciphertext,
                                                 const BigramModel& model, size_t period,
                                                 const ChainConfig& cfg, RandomSource& src,
                                                 const TranspositionKey* fixed_init,
                                                 const TraceSink& trace) {
    check_chain_inputs(ciphertext, model, cfg);
    if (period < 2) throw std::invalid_argument("chain: transposition period must be >= 2");

    TranspositionChainResult state;
    switch (cfg.init) {
        case InitMode::Random: state.key = random_transposition_key(period, src); break;
        case InitMode::Frequency:  // no frequency structure in a column order; fall back
        case InitMode::Identity: state.key = TranspositionKey::identity(period); break;
        case InitMode::Fixed:
            if (!fixed_init) throw std::invalid_argument("chain: fixed init needs a key");
            if (fixed_init->period() != period || !fixed_init->valid())
                throw std::invalid_argument("chain: fixed init key is invalid");
            state.key = *fixed_init;
            break;
    }

    state.log_score = score_text(transpose_decrypt(ciphertext, state.key), model);
    state.best_key = state.key;
    state.best_score = state.log_score;

    for (uint64_t it = 0; it < cfg.iterations; ++it) {
        const auto [i, j] = propose_swap_indices(period, src);
        TranspositionKey candidate = state.key;
        std::swap(candidate.order[i], candidate.order[j]);
        const double cand_score = score_text(transpose_decrypt(ciphertext, candidate), model);
        const double u = src.next_uniform();
        ++state.proposed;
        const bool accepted = metropolis_accept(u, cand_score, state.log_score, cfg.p);
        if (accepted) {
            state.key = std::move(candidate);
            state.log_score = cand_score;
            ++state.accepted;
            if (cfg.track_best && state.log_score > state.best_score) {
                state.best_score = state.log_score;
                state.best_key = state.key;
            }
        }
        if (trace) trace(it, state.log_score, accepted);
    }
    if (!cfg.track_best) {
        state.best_key = state.key;
        state.best_score = state.log_score;
    }
    return state;
}

CombinedChainResult run_combined_chain(std::span<const uint8_t> ciphertext,
                                       const BigramModel& model, size_t period,
                                       const ChainConfig& cfg, RandomSource& src,
                                       const SubstitutionKey* fixed_sub,
                                       const TranspositionKey* fixed_trans,
                                       const TraceSink& trace) {
    check_chain_inputs(ciphertext, model, cfg);
    if (period < 2) throw std::invalid_argument("chain: transposition period must be >= 2");
    const size_t n = model.alphabet_size();

    CombinedChainResult state;
    switch (cfg.init) {
        case InitMode::Random:
            state.sub_key = random_substitution_key(n, src);
            state.trans_key = random_transposition_key(period, src);
            break;
        case InitMode::Frequency:
            state.sub_key = frequency_warm_start(ciphertext, model);
            state.trans_key = TranspositionKey::identity(period);
            break;
        case InitMode::Identity:
            state.sub_key = SubstitutionKey::identity(n);
            state.trans_key = TranspositionKey::identity(period);
            break;
        case InitMode::Fixed:
            if (!fixed_sub || !fixed_trans)
                throw std::invalid_argument("chain: fixed init needs both keys");
            state.sub_key = *fixed_sub;
            state.trans_key = *fixed_trans;
            if (state.sub_key.size() != n || !state.sub_key.valid() ||
                state.trans_key.period() != period || !state.trans_key.valid())
                throw std::invalid_argument("chain: fixed init keys are invalid");
            break;
    }

    // Encryption pipeline is substitution then transposition, so decryption
    // undoes the transposition first. The scorer holds the bigram counts of
    // the transposition-decrypted text and must be rebuilt when the
    // transposition key moves.
    std::vector<uint8_t> unblocked = transpose_decrypt(ciphertext, state.trans_key);
    auto scorer = std::make_unique<SubstitutionScorer>(unblocked, model);
    state.log_score = scorer->full_score(state.sub_key);
    state.best_sub_key = state.sub_key;
    state.best_trans_key = state.trans_key;
    state.best_score = state.log_score;

    for (uint64_t it = 0; it < cfg.iterations; ++it) {
        const bool move_sub = src.next_below(2) == 0;
        bool accepted = false;
        if (move_sub) {
            const auto [i, j] = propose_swap_indices(n, src);
            const double delta = scorer->swap_delta(state.sub_key, i, j);
            const double u = src.next_uniform();
            accepted = metropolis_accept(u, state.log_score + delta, state.log_score, cfg.p);
            if (accepted) {
                std::swap(state.sub_key.perm[i], state.sub_key.perm[j]);
                state.log_score += delta;
            }
        } else {
            const auto [i, j] = propose_swap_indices(period, src);
            TranspositionKey candidate = state.trans_key;
            std::swap(candidate.order[i], candidate.order[j]);
            std::vector<uint8_t> cand_text = transpose_decrypt(ciphertext, candidate);
            SubstitutionScorer cand_scorer(cand_text, model);
            const double cand_score = cand_scorer.full_score(state.sub_key);
            const double u = src.next_uniform();
            accepted = metropolis_accept(u, cand_score, state.log_score, cfg.p);
            if (accepted) {
                state.trans_key = std::move(candidate);
                state.log_score = cand_score;
                scorer = std::make_unique<SubstitutionScorer>(cand_text, model);
            }
        }
        ++state.proposed;
        if (accepted) {
            ++state.accepted;
            if (cfg.track_best && state.log_score > state.best_score) {
                state.best_score = state.log_score;
                state.best_sub_key = state.sub_key;
                state.best_trans_key = state.trans_key;
            }
        }
        if (trace) trace(it, state.log_score, accepted);
    }
    if (!cfg.track_best) {
        state.best_sub_key = state.sub_key;
        state.best_trans_key = state.trans_key;
        state.best_score = state.log_score;
    }
    return state;
}

}  // namespace chainbreak
