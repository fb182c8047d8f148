#include "chainbreak/chainbreak.h"

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <new>
#include <string>

#include "cipher.hpp"
#include "errors.hpp"
#include "harness.hpp"
#include "langmodel.hpp"
#include "mcmc.hpp"
#include "rng.hpp"

using namespace chainbreak;

struct cb_rng {
    RandomSource src;
};
struct cb_alphabet {
    Alphabet alphabet;
};
struct cb_model {
    BigramModel model;
};
struct cb_report {
    ExperimentReport report;
};

namespace {

thread_local std::string t_last_error;

cb_status fail(cb_status status, const char* what) {
    t_last_error = what ? what : "";
    return status;
}

template <typename Fn>
cb_status guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const IoError& e) {
        return fail(CB_ERROR_IO, e.what());
    } catch (const ParseError& e) {
        return fail(CB_ERROR_PARSE, e.what());
    } catch (const std::invalid_argument& e) {
        return fail(CB_ERROR_INVALID_ARGUMENT, e.what());
    } catch (const std::bad_alloc&) {
        return fail(CB_ERROR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(CB_ERROR_INTERNAL, e.what());
    } catch (...) {
        return fail(CB_ERROR_INTERNAL, "unknown error");
    }
}

cb_status require(bool ok, const char* what) {
    if (ok) return CB_OK;
    return fail(CB_ERROR_INVALID_ARGUMENT, what);
}

char* copy_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

PrngKind to_kind(cb_prng_kind kind) {
    switch (kind) {
        case CB_PRNG_LCG48: return PrngKind::Lcg48;
        case CB_PRNG_XORSHIFT128: return PrngKind::Xorshift128;
        case CB_PRNG_CI: return PrngKind::ChaoticIteration;
    }
    throw std::invalid_argument("unknown prng kind");
}

cb_prng_kind from_kind(PrngKind kind) {
    switch (kind) {
        case PrngKind::Lcg48: return CB_PRNG_LCG48;
        case PrngKind::Xorshift128: return CB_PRNG_XORSHIFT128;
        case PrngKind::ChaoticIteration: return CB_PRNG_CI;
    }
    return CB_PRNG_XORSHIFT128;
}

InitMode to_init(cb_init_mode mode) {
    switch (mode) {
        case CB_INIT_RANDOM: return InitMode::Random;
        case CB_INIT_FREQUENCY: return InitMode::Frequency;
        case CB_INIT_IDENTITY: return InitMode::Identity;
        case CB_INIT_FIXED: return InitMode::Fixed;
    }
    throw std::invalid_argument("unknown init mode");
}

ChainConfig to_chain_config(const cb_chain_config& c) {
    ChainConfig cfg;
    cfg.iterations = c.iterations;
    cfg.p = c.p;
    cfg.track_best = c.track_best != 0;
    cfg.init = to_init(c.init);
    return cfg;
}

// Streams the per-step trace to a CSV file when requested.
struct TraceFile {
    std::ofstream out;

    explicit TraceFile(const char* path) {
        if (!path) return;
        out.open(path, std::ios::binary);
        if (!out) throw IoError(std::string("trace: cannot open '") + path + "' for writing");
        out << "iteration,log_score,accepted\n";
    }

    TraceSink sink() {
        if (!out.is_open()) return nullptr;
        return [this](uint64_t it, double score, bool accepted) {
            char buf[96];
            std::snprintf(buf, sizeof(buf), "%llu,%.6f,%d\n",
                          static_cast<unsigned long long>(it), score, accepted ? 1 : 0);
            out << buf;
        };
    }
};

SubstitutionKey make_sub_key(const uint32_t* perm, uint32_t size) {
    return SubstitutionKey{std::vector<uint32_t>(perm, perm + size)};
}

TranspositionKey make_trans_key(const uint32_t* order, uint32_t period) {
    return TranspositionKey{std::vector<uint32_t>(order, order + period)};
}

ExperimentConfig to_experiment_config(const cb_experiment_config& c) {
    ExperimentConfig cfg;
    switch (c.cipher) {
        case CB_CIPHER_SUBSTITUTION: cfg.cipher = CipherKind::Substitution; break;
        case CB_CIPHER_TRANSPOSITION: cfg.cipher = CipherKind::Transposition; break;
        case CB_CIPHER_COMBINED: cfg.cipher = CipherKind::Combined; break;
        default: throw std::invalid_argument("unknown cipher kind");
    }
    cfg.period = c.period;
    cfg.chain = to_chain_config(c.chain);
    cfg.success_threshold = c.success_threshold;
    cfg.jobs = c.jobs;
    cfg.ci_bits = c.ci_bits;
    cfg.ci_c = c.ci_c;
    return cfg;
}

}  // namespace

extern "C" {

const char* cb_version(void) { return "1.0.0"; }

const char* cb_last_error(void) { return t_last_error.c_str(); }

void cb_string_free(char* s) { std::free(s); }

void cb_indices_free(uint8_t* indices) { std::free(indices); }

/* ---- random sources ---------------------------------------------------- */

cb_status cb_rng_create(cb_prng_kind kind, uint64_t seed, cb_rng** out) {
    if (cb_status s = require(out != nullptr, "out pointer is null")) return s;
    return guarded([&] {
        *out = new cb_rng{RandomSource(to_kind(kind), seed)};
        return CB_OK;
    });
}

cb_status cb_rng_create_ci(uint64_t seed, uint32_t n_bits, uint32_t c, cb_rng** out) {
    if (cb_status s = require(out != nullptr, "out pointer is null")) return s;
    return guarded([&] {
        *out = new cb_rng{RandomSource::chaotic(seed, n_bits, c)};
        return CB_OK;
    });
}

void cb_rng_free(cb_rng* rng) { delete rng; }

cb_status cb_rng_next_raw(cb_rng* rng, uint64_t* out) {
    if (cb_status s = require(rng && out, "null argument")) return s;
    return guarded([&] {
        *out = rng->src.next_raw();
        return CB_OK;
    });
}

cb_status cb_rng_next_uniform(cb_rng* rng, double* out) {
    if (cb_status s = require(rng && out, "null argument")) return s;
    return guarded([&] {
        *out = rng->src.next_uniform();
        return CB_OK;
    });
}

cb_status cb_rng_next_below(cb_rng* rng, uint64_t bound, uint64_t* out) {
    if (cb_status s = require(rng && out, "null argument")) return s;
    return guarded([&] {
        *out = rng->src.next_below(bound);
        return CB_OK;
    });
}

cb_status cb_rng_word_bits(const cb_rng* rng, uint32_t* out) {
    if (cb_status s = require(rng && out, "null argument")) return s;
    *out = rng->src.word_bits();
    return CB_OK;
}

uint64_t cb_derive_seed(uint64_t parent, uint64_t k) { return derive_seed(parent, k); }

/* ---- alphabets and texts ------------------------------------------------ */

cb_status cb_alphabet_create(int keep_space, cb_alphabet** out) {
    if (cb_status s = require(out != nullptr, "out pointer is null")) return s;
    return guarded([&] {
        *out = new cb_alphabet{keep_space ? Alphabet::latin_with_space() : Alphabet::latin()};
        return CB_OK;
    });
}

cb_status cb_alphabet_create_custom(const char* symbols, cb_alphabet** out) {
    if (cb_status s = require(symbols && out, "null argument")) return s;
    return guarded([&] {
        *out = new cb_alphabet{Alphabet(symbols)};
        return CB_OK;
    });
}

void cb_alphabet_free(cb_alphabet* alphabet) { delete alphabet; }

cb_status cb_alphabet_size(const cb_alphabet* alphabet, size_t* out) {
    if (cb_status s = require(alphabet && out, "null argument")) return s;
    *out = alphabet->alphabet.size();
    return CB_OK;
}

cb_status cb_normalize(const cb_alphabet* alphabet, const char* text, size_t len, uint8_t** out,
                       size_t* out_len) {
    if (cb_status s = require(alphabet && out && out_len && (text || len == 0), "null argument"))
        return s;
    return guarded([&] {
        const std::vector<uint8_t> indices =
            alphabet->alphabet.normalize(std::string_view(text ? text : "", len));
        uint8_t* buf = static_cast<uint8_t*>(std::malloc(indices.empty() ? 1 : indices.size()));
        if (!buf) throw std::bad_alloc();
        std::memcpy(buf, indices.data(), indices.size());
        *out = buf;
        *out_len = indices.size();
        return CB_OK;
    });
}

cb_status cb_render(const cb_alphabet* alphabet, const uint8_t* indices, size_t len, char** out) {
    if (cb_status s = require(alphabet && out && (indices || len == 0), "null argument")) return s;
    return guarded([&] {
        *out = copy_string(alphabet->alphabet.render({indices, len}));
        return CB_OK;
    });
}

/* ---- keys and ciphers --------------------------------------------------- */

cb_status cb_random_permutation(cb_rng* rng, uint32_t size, uint32_t* out_perm) {
    if (cb_status s = require(rng && out_perm, "null argument")) return s;
    return guarded([&] {
        const std::vector<uint32_t> perm = random_permutation(size, rng->src);
        std::memcpy(out_perm, perm.data(), perm.size() * sizeof(uint32_t));
        return CB_OK;
    });
}

cb_status cb_sub_encrypt(const uint8_t* text, size_t len, const uint32_t* perm,
                         uint32_t perm_size, uint8_t* out) {
    if (cb_status s = require(perm && out && (text || len == 0), "null argument")) return s;
    return guarded([&] {
        const std::vector<uint8_t> r = sub_encrypt({text, len}, make_sub_key(perm, perm_size));
        std::memcpy(out, r.data(), r.size());
        return CB_OK;
    });
}

cb_status cb_sub_decrypt(const uint8_t* text, size_t len, const uint32_t* perm,
                         uint32_t perm_size, uint8_t* out) {
    if (cb_status s = require(perm && out && (text || len == 0), "null argument")) return s;
    return guarded([&] {
        const std::vector<uint8_t> r = sub_decrypt({text, len}, make_sub_key(perm, perm_size));
        std::memcpy(out, r.data(), r.size());
        return CB_OK;
    });
}

cb_status cb_transpose_encrypt(const uint8_t* text, size_t len, const uint32_t* order,
                               uint32_t period, uint8_t* out) {
    if (cb_status s = require(order && out && (text || len == 0), "null argument")) return s;
    return guarded([&] {
        const std::vector<uint8_t> r =
            transpose_encrypt({text, len}, make_trans_key(order, period));
        std::memcpy(out, r.data(), r.size());
        return CB_OK;
    });
}

cb_status cb_transpose_decrypt(const uint8_t* text, size_t len, const uint32_t* order,
                               uint32_t period, uint8_t* out) {
    if (cb_status s = require(order && out && (text || len == 0), "null argument")) return s;
    return guarded([&] {
        const std::vector<uint8_t> r =
            transpose_decrypt({text, len}, make_trans_key(order, period));
        std::memcpy(out, r.data(), r.size());
        return CB_OK;
    });
}

cb_status cb_key_format(const uint32_t* perm, uint32_t size, char** out) {
    if (cb_status s = require(perm && out, "null argument")) return s;
    return guarded([&] {
        *out = copy_string(format_key({perm, size}));
        return CB_OK;
    });
}

cb_status cb_key_parse(const char* line, uint32_t size, uint32_t* out_perm) {
    if (cb_status s = require(line && out_perm, "null argument")) return s;
    return guarded([&] {
        const std::vector<uint32_t> perm = parse_key(line);
        if (perm.size() != size) throw ParseError("key file: unexpected permutation size");
        std::memcpy(out_perm, perm.data(), perm.size() * sizeof(uint32_t));
        return CB_OK;
    });
}

/* ---- bigram models ------------------------------------------------------ */

cb_status cb_model_build(const cb_alphabet* alphabet, const uint8_t* corpus, size_t len,
                         double delta, cb_model** out) {
    if (cb_status s = require(alphabet && out && (corpus || len == 0), "null argument")) return s;
    return guarded([&] {
        *out = new cb_model{BigramModel::build({corpus, len}, alphabet->alphabet.size(), delta)};
        return CB_OK;
    });
}

cb_status cb_model_save_csv(const cb_model* model, const cb_alphabet* alphabet,
                            const char* path) {
    if (cb_status s = require(model && alphabet && path, "null argument")) return s;
    return guarded([&] {
        model->model.save_counts_csv(path, alphabet->alphabet);
        return CB_OK;
    });
}

cb_status cb_model_load_csv(const cb_alphabet* alphabet, const char* path, double delta,
                            cb_model** out) {
    if (cb_status s = require(alphabet && path && out, "null argument")) return s;
    return guarded([&] {
        *out = new cb_model{BigramModel::load_counts_csv(path, alphabet->alphabet, delta)};
        return CB_OK;
    });
}

void cb_model_free(cb_model* model) { delete model; }

cb_status cb_model_alphabet_size(const cb_model* model, size_t* out) {
    if (cb_status s = require(model && out, "null argument")) return s;
    *out = model->model.alphabet_size();
    return CB_OK;
}

cb_status cb_model_total_bigrams(const cb_model* model, uint64_t* out) {
    if (cb_status s = require(model && out, "null argument")) return s;
    *out = model->model.total_bigrams();
    return CB_OK;
}

cb_status cb_model_corpus_symbols(const cb_model* model, uint64_t* out) {
    if (cb_status s = require(model && out, "null argument")) return s;
    *out = model->model.corpus_symbols();
    return CB_OK;
}

cb_status cb_model_log_r(const cb_model* model, uint32_t b1, uint32_t b2, double* out) {
    if (cb_status s = require(model && out, "null argument")) return s;
    return guarded([&] {
        const size_t n = model->model.alphabet_size();
        if (b1 >= n || b2 >= n) throw std::invalid_argument("log_r: symbol outside the alphabet");
        *out = model->model.log_r(b1, b2);
        return CB_OK;
    });
}

cb_status cb_score_log_pi(const cb_model* model, const uint8_t* text, size_t len,
                          const uint32_t* perm, double* out) {
    if (cb_status s = require(model && out && (text || len == 0), "null argument")) return s;
    return guarded([&] {
        const SubstitutionKey key =
            perm ? make_sub_key(perm, static_cast<uint32_t>(model->model.alphabet_size()))
                 : SubstitutionKey::identity(model->model.alphabet_size());
        *out = score_log_pi({text, len}, key, model->model);
        return CB_OK;
    });
}

/* ---- attacks ------------------------------------------------------------ */

cb_status cb_attack_substitution(const cb_model* model, const uint8_t* ciphertext, size_t len,
                                 const cb_chain_config* config, cb_rng* rng,
                                 const uint32_t* initial_perm, uint32_t* out_perm,
                                 cb_attack_stats* stats) {
    if (cb_status s = require(model && ciphertext && config && rng && out_perm, "null argument"))
        return s;
    return guarded([&] {
        const uint32_t n = static_cast<uint32_t>(model->model.alphabet_size());
        SubstitutionKey fixed;
        const SubstitutionKey* fixed_ptr = nullptr;
        if (config->init == CB_INIT_FIXED) {
            if (!initial_perm) throw std::invalid_argument("fixed init needs an initial key");
            fixed = make_sub_key(initial_perm, n);
            fixed_ptr = &fixed;
        }
        TraceFile trace(config->trace_path);
        const ChainResult res = run_substitution_chain(
            {ciphertext, len}, model->model, to_chain_config(*config), rng->src, fixed_ptr,
            trace.sink());
        std::memcpy(out_perm, res.best_key.perm.data(), n * sizeof(uint32_t));
        if (stats)
            *stats = cb_attack_stats{res.best_score, res.log_score, res.accepted, res.proposed};
        return CB_OK;
    });
}

cb_status cb_attack_transposition(const cb_model* model, const uint8_t* ciphertext, size_t len,
                                  uint32_t period, const cb_chain_config* config, cb_rng* rng,
                                  const uint32_t* initial_order, uint32_t* out_order,
                                  cb_attack_stats* stats) {
    if (cb_status s = require(model && ciphertext && config && rng && out_order, "null argument"))
        return s;
    return guarded([&] {
        TranspositionKey fixed;
        const TranspositionKey* fixed_ptr = nullptr;
        if (config->init == CB_INIT_FIXED) {
            if (!initial_order) throw std::invalid_argument("fixed init needs an initial key");
            fixed = make_trans_key(initial_order, period);
            fixed_ptr = &fixed;
        }
        TraceFile trace(config->trace_path);
        const TranspositionChainResult res = run_transposition_chain(
            {ciphertext, len}, model->model, period, to_chain_config(*config), rng->src,
            fixed_ptr, trace.sink());
        std::memcpy(out_order, res.best_key.order.data(), period * sizeof(uint32_t));
        if (stats)
            *stats = cb_attack_stats{res.best_score, res.log_score, res.accepted, res.proposed};
        return CB_OK;
    });
}

cb_status cb_attack_combined(const cb_model* model, const uint8_t* ciphertext, size_t len,
                             uint32_t period, const cb_chain_config* config, cb_rng* rng,
                             const uint32_t* initial_perm, const uint32_t* initial_order,
                             uint32_t* out_perm, uint32_t* out_order, cb_attack_stats* stats) {
    if (cb_status s =
            require(model && ciphertext && config && rng && out_perm && out_order, "null argument"))
        return s;
    return guarded([&] {
        const uint32_t n = static_cast<uint32_t>(model->model.alphabet_size());
        SubstitutionKey fixed_sub;
        TranspositionKey fixed_trans;
        const SubstitutionKey* sub_ptr = nullptr;
        const TranspositionKey* trans_ptr = nullptr;
        if (config->init == CB_INIT_FIXED) {
            if (!initial_perm || !initial_order)
                throw std::invalid_argument("fixed init needs both initial keys");
            fixed_sub = make_sub_key(initial_perm, n);
            fixed_trans = make_trans_key(initial_order, period);
            sub_ptr = &fixed_sub;
            trans_ptr = &fixed_trans;
        }
        TraceFile trace(config->trace_path);
        const CombinedChainResult res = run_combined_chain(
            {ciphertext, len}, model->model, period, to_chain_config(*config), rng->src, sub_ptr,
            trans_ptr, trace.sink());
        std::memcpy(out_perm, res.best_sub_key.perm.data(), n * sizeof(uint32_t));
        std::memcpy(out_order, res.best_trans_key.order.data(), period * sizeof(uint32_t));
        if (stats)
            *stats = cb_attack_stats{res.best_score, res.log_score, res.accepted, res.proposed};
        return CB_OK;
    });
}

/* ---- evaluation harness ------------------------------------------------- */

cb_status cb_key_accuracy(const uint32_t* found, const uint32_t* truth, uint32_t size,
                          double* out) {
    if (cb_status s = require(found && truth && out, "null argument")) return s;
    return guarded([&] {
        *out = key_accuracy(make_sub_key(found, size), make_sub_key(truth, size));
        return CB_OK;
    });
}

cb_status cb_key_accuracy_support(const uint32_t* found, const uint32_t* truth, uint32_t size,
                                  const uint8_t* plaintext, size_t len, double* out) {
    if (cb_status s = require(found && truth && out && (plaintext || len == 0), "null argument"))
        return s;
    return guarded([&] {
        *out = key_accuracy_on_support(make_sub_key(found, size), make_sub_key(truth, size),
                                       {plaintext, len});
        return CB_OK;
    });
}

cb_status cb_text_accuracy(const uint8_t* decrypted, const uint8_t* plaintext, size_t len,
                           double* out) {
    if (cb_status s = require(out && ((decrypted && plaintext) || len == 0), "null argument"))
        return s;
    return guarded([&] {
        *out = text_accuracy({decrypted, len}, {plaintext, len});
        return CB_OK;
    });
}

cb_status cb_run_experiments(const cb_model* model, const uint8_t* plaintext, size_t len,
                             const cb_experiment_config* config, cb_prng_kind kind,
                             uint32_t experiments, uint32_t runs, uint64_t master_seed,
                             cb_report** out) {
    if (cb_status s = require(model && plaintext && config && out, "null argument")) return s;
    return guarded([&] {
        *out = new cb_report{run_experiments({plaintext, len}, model->model,
                                             to_experiment_config(*config), to_kind(kind),
                                             experiments, runs, master_seed)};
        return CB_OK;
    });
}

cb_status cb_compare_prngs(const cb_model* model, const uint8_t* plaintext, size_t len,
                           const cb_experiment_config* config, uint32_t experiments,
                           uint32_t runs, uint64_t master_seed, cb_report** out) {
    if (cb_status s = require(model && plaintext && config && out, "null argument")) return s;
    return guarded([&] {
        *out = new cb_report{compare_prngs({plaintext, len}, model->model,
                                           to_experiment_config(*config), experiments, runs,
                                           master_seed)};
        return CB_OK;
    });
}

void cb_report_free(cb_report* report) { delete report; }

cb_status cb_report_row_count(const cb_report* report, size_t* out) {
    if (cb_status s = require(report && out, "null argument")) return s;
    *out = report->report.rows.size();
    return CB_OK;
}

cb_status cb_report_row_get(const cb_report* report, size_t index, cb_report_row* out) {
    if (cb_status s = require(report && out, "null argument")) return s;
    return guarded([&] {
        if (index >= report->report.rows.size())
            throw std::invalid_argument("report row index out of range");
        const ReportRow& r = report->report.rows[index];
        *out = cb_report_row{from_kind(r.prng), r.en,  r.ac,          r.ac_support, r.nsd,
                             r.runs,            r.iterations, r.p, r.threshold,  r.seed};
        return CB_OK;
    });
}

cb_status cb_report_csv(const cb_report* report, char** out) {
    if (cb_status s = require(report && out, "null argument")) return s;
    return guarded([&] {
        *out = copy_string(report_csv(report->report));
        return CB_OK;
    });
}

cb_status cb_report_table(const cb_report* report, char** out) {
    if (cb_status s = require(report && out, "null argument")) return s;
    return guarded([&] {
        *out = copy_string(report_table(report->report));
        return CB_OK;
    });
}

cb_status cb_report_seed_ledger(const cb_report* report, char** out) {
    if (cb_status s = require(report && out, "null argument")) return s;
    return guarded([&] {
        *out = copy_string(seed_ledger_jsonl(report->report));
        return CB_OK;
    });
}

}  // extern "C"
