/*
 * chainbreak - MCMC cryptanalysis of classical ciphers with pluggable,
 * bit-exact pseudo-random number generators.
 *
 * C API of the shared library. All objects are opaque handles created and
 * released through matching create/free calls; every fallible function
 * returns a cb_status and reports details through cb_last_error(), which is
 * thread-local. Output buffers allocated by the library are released with
 * cb_string_free().
 */

#ifndef CHAINBREAK_H
#define CHAINBREAK_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define CB_API __declspec(dllexport)
#else
#define CB_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cb_status {
    CB_OK = 0,
    CB_ERROR_INVALID_ARGUMENT = 1,
    CB_ERROR_IO = 2,
    CB_ERROR_PARSE = 3,
    CB_ERROR_INTERNAL = 4
} cb_status;

typedef enum cb_prng_kind {
    CB_PRNG_LCG48 = 0,       /* 48-bit linear congruence, drand48 constants */
    CB_PRNG_XORSHIFT128 = 1, /* Marsaglia xorshift128 */
    CB_PRNG_CI = 2           /* chaotic iterations over a bit array */
} cb_prng_kind;

typedef enum cb_cipher_kind {
    CB_CIPHER_SUBSTITUTION = 0,
    CB_CIPHER_TRANSPOSITION = 1,
    CB_CIPHER_COMBINED = 2 /* substitution then block transposition */
} cb_cipher_kind;

typedef enum cb_init_mode {
    CB_INIT_RANDOM = 0,   /* uniform random key from the attack source */
    CB_INIT_FREQUENCY = 1,/* rank-matching frequency analysis warm start */
    CB_INIT_IDENTITY = 2,
    CB_INIT_FIXED = 3     /* caller-provided key(s) */
} cb_init_mode;

typedef struct cb_rng cb_rng;
typedef struct cb_alphabet cb_alphabet;
typedef struct cb_model cb_model;
typedef struct cb_report cb_report;

CB_API const char* cb_version(void);

/* Message for the last failing call on this thread; empty string if none. */
CB_API const char* cb_last_error(void);

/* Frees any char* buffer returned through an out-parameter below. */
CB_API void cb_string_free(char* s);

/* ---- random sources ---------------------------------------------------- */

/* Streams are pure functions of (kind, seed). CI uses its default shape of
 * 32 bits and c = 1 here; use cb_rng_create_ci for explicit parameters. */
CB_API cb_status cb_rng_create(cb_prng_kind kind, uint64_t seed, cb_rng** out);
CB_API cb_status cb_rng_create_ci(uint64_t seed, uint32_t n_bits, uint32_t c, cb_rng** out);
CB_API void cb_rng_free(cb_rng* rng);

/* Raw word of the generator's native width (48, 32 or n_bits). */
CB_API cb_status cb_rng_next_raw(cb_rng* rng, uint64_t* out);
/* Raw word / 2^width; always in [0, 1). */
CB_API cb_status cb_rng_next_uniform(cb_rng* rng, double* out);
/* Unbiased integer in [0, bound) by rejection sampling. */
CB_API cb_status cb_rng_next_below(cb_rng* rng, uint64_t bound, uint64_t* out);
/* Word width in bits. */
CB_API cb_status cb_rng_word_bits(const cb_rng* rng, uint32_t* out);

/* Seed derivation used throughout the experiment harness: child k of a
 * parent seed (output k+1 of a splitmix64 stream seeded with the parent). */
CB_API uint64_t cb_derive_seed(uint64_t parent, uint64_t k);

/* ---- alphabets and texts ------------------------------------------------ */

/* 26 Latin letters; with keep_space nonzero, a 27th space symbol to which
 * any whitespace run normalizes. */
CB_API cb_status cb_alphabet_create(int keep_space, cb_alphabet** out);
/* Custom symbol set: distinct characters, size 2..256. */
CB_API cb_status cb_alphabet_create_custom(const char* symbols, cb_alphabet** out);
CB_API void cb_alphabet_free(cb_alphabet* alphabet);
CB_API cb_status cb_alphabet_size(const cb_alphabet* alphabet, size_t* out);

/* Uppercases letters, maps members to indices, drops everything else.
 * *out is malloc'd (free()) and holds *out_len indices. */
CB_API cb_status cb_normalize(const cb_alphabet* alphabet, const char* text, size_t len,
                              uint8_t** out, size_t* out_len);
CB_API void cb_indices_free(uint8_t* indices);
/* Indices back to a NUL-terminated string of symbols. */
CB_API cb_status cb_render(const cb_alphabet* alphabet, const uint8_t* indices, size_t len,
                           char** out);

/* ---- keys and ciphers --------------------------------------------------- */

/* Uniform permutation of {0..size-1} via Fisher-Yates, written to out_perm. */
CB_API cb_status cb_random_permutation(cb_rng* rng, uint32_t size, uint32_t* out_perm);

/* Substitution: out[i] = perm[text[i]] (encrypt) or its inverse (decrypt).
 * out must hold len bytes; in-place (out == text) is allowed. */
CB_API cb_status cb_sub_encrypt(const uint8_t* text, size_t len, const uint32_t* perm,
                                uint32_t perm_size, uint8_t* out);
CB_API cb_status cb_sub_decrypt(const uint8_t* text, size_t len, const uint32_t* perm,
                                uint32_t perm_size, uint8_t* out);

/* Block transposition of the given period; a final partial block passes
 * through unchanged. */
CB_API cb_status cb_transpose_encrypt(const uint8_t* text, size_t len, const uint32_t* order,
                                      uint32_t period, uint8_t* out);
CB_API cb_status cb_transpose_decrypt(const uint8_t* text, size_t len, const uint32_t* order,
                                      uint32_t period, uint8_t* out);

/* One-line key file format: space-separated permutation indices. */
CB_API cb_status cb_key_format(const uint32_t* perm, uint32_t size, char** out);
/* Parses into out_perm (capacity `size`); fails unless exactly `size`
 * entries forming a permutation are present. */
CB_API cb_status cb_key_parse(const char* line, uint32_t size, uint32_t* out_perm);

/* ---- bigram models ------------------------------------------------------ */

/* Counts adjacent index pairs of the corpus and applies additive smoothing
 * delta: r = (count + delta) / (total + delta * n^2), stored as logs. */
CB_API cb_status cb_model_build(const cb_alphabet* alphabet, const uint8_t* corpus, size_t len,
                                double delta, cb_model** out);
/* Count-matrix cache, n^2 CSV rows of sym1,sym2,count. */
CB_API cb_status cb_model_save_csv(const cb_model* model, const cb_alphabet* alphabet,
                                   const char* path);
CB_API cb_status cb_model_load_csv(const cb_alphabet* alphabet, const char* path, double delta,
                                   cb_model** out);
CB_API void cb_model_free(cb_model* model);
CB_API cb_status cb_model_alphabet_size(const cb_model* model, size_t* out);
CB_API cb_status cb_model_total_bigrams(const cb_model* model, uint64_t* out);
CB_API cb_status cb_model_corpus_symbols(const cb_model* model, uint64_t* out);
CB_API cb_status cb_model_log_r(const cb_model* model, uint32_t b1, uint32_t b2, double* out);

/* Log pi of the decryption of `text` under the substitution key `perm`;
 * pass NULL perm for the identity key. */
CB_API cb_status cb_score_log_pi(const cb_model* model, const uint8_t* text, size_t len,
                                 const uint32_t* perm, double* out);

/* ---- attacks ------------------------------------------------------------ */

typedef struct cb_chain_config {
    uint64_t iterations;
    double p;               /* scaling exponent, > 0 */
    cb_init_mode init;
    int track_best;         /* nonzero: report the best state seen */
    const char* trace_path; /* optional per-step CSV (iteration,log_score,accepted) */
} cb_chain_config;

typedef struct cb_attack_stats {
    double best_log_score;
    double final_log_score;
    uint64_t accepted;
    uint64_t proposed;
} cb_attack_stats;

/* Runs the Metropolis chain on a substitution ciphertext. initial_perm is
 * required for CB_INIT_FIXED and ignored otherwise; the recovered encryption
 * key is written to out_perm (alphabet size of the model). */
CB_API cb_status cb_attack_substitution(const cb_model* model, const uint8_t* ciphertext,
                                        size_t len, const cb_chain_config* config, cb_rng* rng,
                                        const uint32_t* initial_perm, uint32_t* out_perm,
                                        cb_attack_stats* stats);

CB_API cb_status cb_attack_transposition(const cb_model* model, const uint8_t* ciphertext,
                                         size_t len, uint32_t period,
                                         const cb_chain_config* config, cb_rng* rng,
                                         const uint32_t* initial_order, uint32_t* out_order,
                                         cb_attack_stats* stats);

CB_API cb_status cb_attack_combined(const cb_model* model, const uint8_t* ciphertext, size_t len,
                                    uint32_t period, const cb_chain_config* config, cb_rng* rng,
                                    const uint32_t* initial_perm, const uint32_t* initial_order,
                                    uint32_t* out_perm, uint32_t* out_order,
                                    cb_attack_stats* stats);

/* ---- evaluation harness ------------------------------------------------- */

/* Fraction of equal key positions. */
CB_API cb_status cb_key_accuracy(const uint32_t* found, const uint32_t* truth, uint32_t size,
                                 double* out);
/* Same, restricted to plaintext symbols that occur. */
CB_API cb_status cb_key_accuracy_support(const uint32_t* found, const uint32_t* truth,
                                         uint32_t size, const uint8_t* plaintext, size_t len,
                                         double* out);
/* Fraction of equal positions of two equal-length texts; empty = 1. */
CB_API cb_status cb_text_accuracy(const uint8_t* decrypted, const uint8_t* plaintext, size_t len,
                                  double* out);

typedef struct cb_experiment_config {
    cb_cipher_kind cipher;
    uint32_t period;          /* transposition / combined block length */
    cb_chain_config chain;    /* trace_path is ignored here */
    double success_threshold; /* text accuracy needed to count into NSD */
    uint32_t jobs;            /* worker threads; 0 = hardware concurrency */
    uint32_t ci_bits;         /* CI shape used when the attack kind is CI */
    uint32_t ci_c;
} cb_experiment_config;

/* Grid of `experiments` x `runs` attacks for one generator kind. Every run
 * encrypts the plaintext with a fresh key drawn from a kind-independent
 * stream, so different kinds face identical instances. */
CB_API cb_status cb_run_experiments(const cb_model* model, const uint8_t* plaintext, size_t len,
                                    const cb_experiment_config* config, cb_prng_kind kind,
                                    uint32_t experiments, uint32_t runs, uint64_t master_seed,
                                    cb_report** out);

/* The identical grid for all three generator kinds with matched seeds. */
CB_API cb_status cb_compare_prngs(const cb_model* model, const uint8_t* plaintext, size_t len,
                                  const cb_experiment_config* config, uint32_t experiments,
                                  uint32_t runs, uint64_t master_seed, cb_report** out);

CB_API void cb_report_free(cb_report* report);

typedef struct cb_report_row {
    cb_prng_kind prng;
    uint32_t en;
    double ac;         /* mean key accuracy over runs */
    double ac_support; /* mean key accuracy over exercised entries */
    uint32_t nsd;      /* runs at or above the success threshold */
    uint32_t runs;
    uint64_t iterations;
    double p;
    double threshold;
    uint64_t seed;
} cb_report_row;

CB_API cb_status cb_report_row_count(const cb_report* report, size_t* out);
CB_API cb_status cb_report_row_get(const cb_report* report, size_t index, cb_report_row* out);

/* CSV with header prng,en,ac,ac_support,nsd,runs,iterations,p,threshold,seed;
 * byte-identical across equal-seed executions. */
CB_API cb_status cb_report_csv(const cb_report* report, char** out);
/* Aligned table with per-generator mean lines. */
CB_API cb_status cb_report_table(const cb_report* report, char** out);
/* JSON lines mapping (prng, en, run) to the run seed. */
CB_API cb_status cb_report_seed_ledger(const cb_report* report, char** out);

#ifdef __cplusplus
}
#endif

#endif /* CHAINBREAK_H */
