#include "langmodel.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "errors.hpp"

namespace chainbreak {

BigramModel BigramModel::build(std::span<const uint8_t> corpus, size_t alphabet_size,
                               double delta) {
    if (alphabet_size < 2) throw std::invalid_argument("bigram model: alphabet too small");
    if (delta < 0.0 || !std::isfinite(delta))
        throw std::invalid_argument("bigram model: smoothing delta must be >= 0");

    BigramModel m;
    m.n_ = alphabet_size;
    m.delta_ = delta;
    m.corpus_len_ = corpus.size();
    m.counts_ = bigram_counts(corpus, alphabet_size);
    for (const uint64_t c : m.counts_) m.total_ += c;
    if (delta == 0.0 && m.total_ == 0)
        throw std::invalid_argument("bigram model: unsmoothed build needs a corpus with bigrams");

    const double denom = static_cast<double>(m.total_) +
                         delta * static_cast<double>(alphabet_size) * static_cast<double>(alphabet_size);
    m.log_r_.resize(alphabet_size * alphabet_size);
    m.smoothed_ = true;
    for (size_t i = 0; i < m.log_r_.size(); ++i) {
        const double r = (static_cast<double>(m.counts_[i]) + delta) / denom;
        if (r > 0.0) {
            m.log_r_[i] = std::log(r);
        } else {
            m.log_r_[i] = -std::numeric_limits<double>::infinity();
            m.smoothed_ = false;
        }
    }
    return m;
}

BigramModel BigramModel::from_log_frequencies(std::vector<double> log_r, size_t alphabet_size) {
    if (alphabet_size < 2) throw std::invalid_argument("bigram model: alphabet too small");
    if (log_r.size() != alphabet_size * alphabet_size)
        throw std::invalid_argument("bigram model: log table has the wrong shape");
    BigramModel m;
    m.n_ = alphabet_size;
    m.log_r_ = std::move(log_r);
    m.smoothed_ = true;
    for (const double v : m.log_r_)
        if (!std::isfinite(v)) m.smoothed_ = false;
    return m;
}

void BigramModel::save_counts_csv(const std::string& path, const Alphabet& alphabet) const {
    if (alphabet.size() != n_) throw std::invalid_argument("model cache: alphabet size mismatch");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("model cache: cannot open '" + path + "' for writing");
    for (size_t b1 = 0; b1 < n_; ++b1)
        for (size_t b2 = 0; b2 < n_; ++b2)
            out << alphabet.symbol(static_cast<uint32_t>(b1)) << ','
                << alphabet.symbol(static_cast<uint32_t>(b2)) << ','
                << count(static_cast<uint32_t>(b1), static_cast<uint32_t>(b2)) << '\n';
    if (!out) throw IoError("model cache: write to '" + path + "' failed");
}

BigramModel BigramModel::load_counts_csv(const std::string& path, const Alphabet& alphabet,
                                         double delta) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("model cache: cannot open '" + path + "'");
    const size_t n = alphabet.size();
    std::vector<uint64_t> counts(n * n);
    std::vector<bool> seen(n * n, false);
    std::string line;
    size_t rows = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        // sym1,sym2,count with single-character symbol fields
        if (line.size() < 5 || line[1] != ',' || line[3] != ',')
            throw ParseError("model cache: malformed row '" + line + "'");
        const auto i1 = alphabet.index_of(line[0]);
        const auto i2 = alphabet.index_of(line[2]);
        if (!i1 || !i2) throw ParseError("model cache: symbol outside the alphabet in '" + line + "'");
        uint64_t c = 0;
        try {
            c = std::stoull(line.substr(4));
        } catch (const std::exception&) {
            throw ParseError("model cache: bad count in '" + line + "'");
        }
        const size_t cell = *i1 * n + *i2;
        if (seen[cell]) throw ParseError("model cache: duplicate pair in '" + line + "'");
        seen[cell] = true;
        counts[cell] = c;
        ++rows;
    }
    if (rows != n * n) throw ParseError("model cache: expected " + std::to_string(n * n) + " rows");

    BigramModel m;
    m.n_ = n;
    m.delta_ = delta;
    m.counts_ = std::move(counts);
    for (const uint64_t c : m.counts_) m.total_ += c;
    m.corpus_len_ = m.total_ == 0 ? 0 : m.total_ + 1;
    if (delta == 0.0 && m.total_ == 0)
        throw std::invalid_argument("model cache: unsmoothed load needs nonzero counts");
    const double denom =
        static_cast<double>(m.total_) + delta * static_cast<double>(n) * static_cast<double>(n);
    m.log_r_.resize(n * n);
    m.smoothed_ = true;
    for (size_t i = 0; i < m.log_r_.size(); ++i) {
        const double r = (static_cast<double>(m.counts_[i]) + delta) / denom;
        if (r > 0.0) {
            m.log_r_[i] = std::log(r);
        } else {
            m.log_r_[i] = -std::numeric_limits<double>::infinity();
            m.smoothed_ = false;
        }
    }
    return m;
}

double BigramModel::unigram_weight(uint32_t b) const {
    double w = 0.0;
    if (!counts_.empty()) {
        for (size_t b2 = 0; b2 < n_; ++b2)
            w += static_cast<double>(counts_[b * n_ + b2]);
    } else {
        for (size_t b2 = 0; b2 < n_; ++b2) w += std::exp(log_r_[b * n_ + b2]);
    }
    return w;
}

std::vector<uint64_t> bigram_counts(std::span<const uint8_t> text, size_t alphabet_size) {
    std::vector<uint64_t> f(alphabet_size * alphabet_size, 0);
    for (size_t t = 0; t + 1 < text.size(); ++t) {
        if (text[t] >= alphabet_size || text[t + 1] >= alphabet_size)
            throw std::invalid_argument("bigram counts: symbol outside the alphabet");
        ++f[text[t] * alphabet_size + text[t + 1]];
    }
    if (!text.empty() && text.back() >= alphabet_size)
        throw std::invalid_argument("bigram counts: symbol outside the alphabet");
    return f;
}

double score_text(std::span<const uint8_t> text, const BigramModel& model) {
    if (!model.smoothed()) throw std::invalid_argument("score: model has zero frequencies");
    double s = 0.0;
    const size_t n = model.alphabet_size();
    for (size_t t = 0; t + 1 < text.size(); ++t) {
        if (text[t] >= n || text[t + 1] >= n)
            throw std::invalid_argument("score: symbol outside the alphabet");
        s += model.log_r(text[t], text[t + 1]);
    }
    return s;
}

double score_log_pi(std::span<const uint8_t> ciphertext, const SubstitutionKey& key,
                    const BigramModel& model) {
    SubstitutionScorer scorer(ciphertext, model);
    return scorer.full_score(key);
}

SubstitutionScorer::SubstitutionScorer(std::span<const uint8_t> ciphertext,
                                       const BigramModel& model)
    : model_(&model), n_(model.alphabet_size()), counts_(bigram_counts(ciphertext, n_)) {
    if (!model.smoothed()) throw std::invalid_argument("score: model has zero frequencies");
}

double SubstitutionScorer::full_score(const SubstitutionKey& key) const {
    if (key.size() != n_) throw std::invalid_argument("score: key size mismatch with alphabet");
    // Decrypted bigram counts are a reindexing of the ciphertext counts:
    // f(b1,b2) = counts[perm[b1]][perm[b2]].
    double s = 0.0;
    for (size_t b1 = 0; b1 < n_; ++b1) {
        const uint32_t c1 = key.perm[b1];
        for (size_t b2 = 0; b2 < n_; ++b2) {
            const uint64_t f = cipher_count(c1, key.perm[b2]);
            if (f) s += static_cast<double>(f) * model_->log_r(static_cast<uint32_t>(b1),
                                                               static_cast<uint32_t>(b2));
        }
    }
    return s;
}

double SubstitutionScorer::swap_delta(const SubstitutionKey& key, uint32_t i, uint32_t j) const {
    if (i == j) throw std::invalid_argument("swap delta: indices must differ");
    if (i >= n_ || j >= n_) throw std::invalid_argument("swap delta: index outside alphabet");
    const uint32_t ci = key.perm[i];
    const uint32_t cj = key.perm[j];
    double d = 0.0;
    const auto L = [&](uint32_t a, uint32_t b) { return model_->log_r(a, b); };
    const auto F = [&](uint32_t a, uint32_t b) {
        return static_cast<double>(cipher_count(a, b));
    };
    for (uint32_t b = 0; b < n_; ++b) {
        if (b == i || b == j) continue;
        const uint32_t cb = key.perm[b];
        d += (F(cj, cb) - F(ci, cb)) * L(i, b);
        d += (F(ci, cb) - F(cj, cb)) * L(j, b);
        d += (F(cb, cj) - F(cb, ci)) * L(b, i);
        d += (F(cb, ci) - F(cb, cj)) * L(b, j);
    }
    d += (F(cj, cj) - F(ci, ci)) * L(i, i);
    d += (F(cj, ci) - F(ci, cj)) * L(i, j);
    d += (F(ci, cj) - F(cj, ci)) * L(j, i);
    d += (F(ci, ci) - F(cj, cj)) * L(j, j);
    return d;
}

double score_delta_on_swap(std::span<const uint8_t> ciphertext, const SubstitutionKey& key,
                           const BigramModel& model, uint32_t i, uint32_t j) {
    SubstitutionScorer scorer(ciphertext, model);
    return scorer.swap_delta(key, i, j);
}

}  // namespace chainbreak
