#ifndef CHAINBREAK_HARNESS_HPP
#define CHAINBREAK_HARNESS_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cipher.hpp"
#include "langmodel.hpp"
#include "mcmc.hpp"
#include "rng.hpp"

namespace chainbreak {

enum class CipherKind { Substitution, Transposition, Combined };

const char* cipher_kind_name(CipherKind kind);

/// Fraction of key positions where the recovered key equals the encryption
/// key.
double key_accuracy(const SubstitutionKey& found, const SubstitutionKey& truth);
double key_accuracy(const TranspositionKey& found, const TranspositionKey& truth);

/// Same fraction restricted to key entries the ciphertext actually exercises,
/// i.e. plaintext symbols that occur. Empty support counts as 1.
double key_accuracy_on_support(const SubstitutionKey& found, const SubstitutionKey& truth,
                               std::span<const uint8_t> plaintext);

/// Fraction of equal positions; lengths must match; empty texts compare as 1.
double text_accuracy(std::span<const uint8_t> decrypted, std::span<const uint8_t> plaintext);

struct RunOutcome {
    double key_accuracy = 0.0;
    double key_accuracy_support = 0.0;
    double text_accuracy = 0.0;
    bool success = false;
    uint64_t seed = 0;
    double final_log_score = 0.0;
};

/// One table row: per-experiment averages in the EN / AC / NSD shape.
struct ReportRow {
    PrngKind prng = PrngKind::Xorshift128;
    uint32_t en = 0;
    double ac = 0.0;
    double ac_support = 0.0;
    uint32_t nsd = 0;
    uint32_t runs = 0;
    uint64_t iterations = 0;
    double p = 1.0;
    double threshold = 0.9;
    uint64_t seed = 0;  // the experiment seed this row was produced from
};

struct SeedRecord {
    PrngKind prng;
    uint32_t en;
    uint32_t run;
    uint64_t seed;
};

struct ExperimentReport {
    std::vector<ReportRow> rows;
    std::vector<SeedRecord> seeds;
};

struct ExperimentConfig {
    CipherKind cipher = CipherKind::Substitution;
    uint32_t period = 5;  // transposition / combined block length
    ChainConfig chain;
    double success_threshold = 0.90;
    uint32_t jobs = 1;  // 0 = hardware concurrency
    uint32_t ci_bits = ChaoticIteration::kDefaultBits;
    uint32_t ci_c = ChaoticIteration::kDefaultC;
    /// Fixed encryption keys for every run instead of per-run random draws;
    /// used by pipeline tests.
    std::optional<SubstitutionKey> fixed_truth_sub;
    std::optional<TranspositionKey> fixed_truth_trans;
};

/// One experiment: `runs` independent attacks on the same plaintext, each
/// with a fresh encryption key. Run r uses run seed derive_seed(experiment
/// seed, r); the encryption key comes from a fixed xorshift128 stream at
/// derived index 0 so all generator kinds attack identical instances, and the
/// attack source of `kind` is seeded at derived index 1. AC is the mean key
/// accuracy, NSD the number of runs at or above the success threshold. Runs
/// may execute on cfg.jobs threads; aggregation is by run index, so the
/// result does not depend on scheduling.
ReportRow run_experiment(std::span<const uint8_t> plaintext, const BigramModel& model,
                         const ExperimentConfig& cfg, PrngKind kind, uint32_t en, uint32_t runs,
                         uint64_t experiment_seed, std::vector<SeedRecord>* ledger = nullptr,
                         std::vector<RunOutcome>* outcomes = nullptr);

/// Experiment grid for one generator kind: EN 1..experiments, with experiment
/// seeds derive_seed(master_seed, en-1).
ExperimentReport run_experiments(std::span<const uint8_t> plaintext, const BigramModel& model,
                                 const ExperimentConfig& cfg, PrngKind kind, uint32_t experiments,
                                 uint32_t runs, uint64_t master_seed);

/// The identical grid for all three generator kinds with matched experiment
/// seeds, concatenated into one report.
ExperimentReport compare_prngs(std::span<const uint8_t> plaintext, const BigramModel& model,
                               const ExperimentConfig& cfg, uint32_t experiments, uint32_t runs,
                               uint64_t master_seed);

/// CSV with the pinned header
/// prng,en,ac,ac_support,nsd,runs,iterations,p,threshold,seed.
std::string report_csv(const ExperimentReport& report);

/// Aligned text table plus per-generator mean AC / NSD lines.
std::string report_table(const ExperimentReport& report);

/// JSON-lines seed ledger: one object per (prng, en, run).
std::string seed_ledger_jsonl(const ExperimentReport& report);

}  // namespace chainbreak

#endif
