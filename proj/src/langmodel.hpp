#ifndef CHAINBREAK_LANGMODEL_HPP
#define CHAINBREAK_LANGMODEL_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cipher.hpp"

namespace chainbreak {

/// Smoothed reference bigram frequencies r(b1, b2), stored as natural logs.
/// With additive smoothing delta, r = (count + delta) / (total + delta*n^2),
/// so the frequencies sum to one. Immutable after construction and freely
/// shareable across chains.
class BigramModel {
public:
    /// Counts adjacent pairs of the corpus. delta == 0 requires at least one
    /// bigram and leaves unseen pairs at log 0 = -inf; such a model cannot be
    /// scored against, only inspected.
    static BigramModel build(std::span<const uint8_t> corpus, size_t alphabet_size, double delta);

    /// Wraps an explicit log-frequency table, row-major n*n.
    static BigramModel from_log_frequencies(std::vector<double> log_r, size_t alphabet_size);

    /// Count-matrix cache: n^2 CSV rows of `sym1,sym2,count` in row-major
    /// order, symbols rendered through the alphabet.
    static BigramModel load_counts_csv(const std::string& path, const Alphabet& alphabet,
                                       double delta);
    void save_counts_csv(const std::string& path, const Alphabet& alphabet) const;

    size_t alphabet_size() const { return n_; }
    double delta() const { return delta_; }
    uint64_t corpus_symbols() const { return corpus_len_; }
    uint64_t total_bigrams() const { return total_; }

    double log_r(uint32_t b1, uint32_t b2) const { return log_r_[b1 * n_ + b2]; }
    uint64_t count(uint32_t b1, uint32_t b2) const { return counts_.empty() ? 0 : counts_[b1 * n_ + b2]; }
    const std::vector<double>& log_table() const { return log_r_; }

    /// True when every log frequency is finite; scoring requires this.
    bool smoothed() const { return smoothed_; }

    /// Marginal weight of symbol b as a bigram first element; used to rank
    /// symbols for the frequency-analysis warm start.
    double unigram_weight(uint32_t b) const;

private:
    BigramModel() = default;

    size_t n_ = 0;
    std::vector<double> log_r_;
    std::vector<uint64_t> counts_;
    double delta_ = 0.0;
    uint64_t corpus_len_ = 0;
    uint64_t total_ = 0;
    bool smoothed_ = false;
};

/// Bigram counts of a text, row-major n*n; sums to max(len-1, 0).
std::vector<uint64_t> bigram_counts(std::span<const uint8_t> text, size_t alphabet_size);

/// Log score of a text as-is: sum over adjacent pairs of log r.
double score_text(std::span<const uint8_t> text, const BigramModel& model);

/// Log pi of a candidate decryption: the ciphertext is decrypted with `key`
/// and its bigram counts f are folded against the model,
/// sum f(b1,b2) * log r(b1,b2). Empty and single-symbol texts score 0.
double score_log_pi(std::span<const uint8_t> ciphertext, const SubstitutionKey& key,
                    const BigramModel& model);

/// Incremental rescoring support for substitution search. Holds the
/// ciphertext-space bigram counts once; a key swap is then scored by touching
/// only the rows and columns of the two remapped symbols.
class SubstitutionScorer {
public:
    SubstitutionScorer(std::span<const uint8_t> ciphertext, const BigramModel& model);

    double full_score(const SubstitutionKey& key) const;

    /// score(key with images of i and j exchanged) - score(key).
    double swap_delta(const SubstitutionKey& key, uint32_t i, uint32_t j) const;

    const BigramModel& model() const { return *model_; }

private:
    uint64_t cipher_count(uint32_t c1, uint32_t c2) const { return counts_[c1 * n_ + c2]; }

    const BigramModel* model_;
    size_t n_;
    std::vector<uint64_t> counts_;  // ciphertext bigrams, row-major
};

/// Delta of score_log_pi under one swap, via a throwaway scorer. The chain
/// keeps a SubstitutionScorer alive instead.
double score_delta_on_swap(std::span<const uint8_t> ciphertext, const SubstitutionKey& key,
                           const BigramModel& model, uint32_t i, uint32_t j);

}  // namespace chainbreak

#endif
