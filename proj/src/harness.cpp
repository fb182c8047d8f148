#include "harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace chainbreak {

const char* cipher_kind_name(CipherKind kind) {
    switch (kind) {
        case CipherKind::Substitution: return "substitution";
        case CipherKind::Transposition: return "transposition";
        case CipherKind::Combined: return "combined";
    }
    return "?";
}

namespace {

double match_fraction(std::span<const uint32_t> a, std::span<const uint32_t> b) {
    if (a.size() != b.size()) throw std::invalid_argument("key accuracy: size mismatch");
    if (a.empty()) return 1.0;
    size_t hits = 0;
    for (size_t i = 0; i < a.size(); ++i) hits += a[i] == b[i];
    return static_cast<double>(hits) / static_cast<double>(a.size());
}

}  // namespace

double key_accuracy(const SubstitutionKey& found, const SubstitutionKey& truth) {
    return match_fraction(found.perm, truth.perm);
}

double key_accuracy(const TranspositionKey& found, const TranspositionKey& truth) {
    return match_fraction(found.order, truth.order);
}

double key_accuracy_on_support(const SubstitutionKey& found, const SubstitutionKey& truth,
                               std::span<const uint8_t> plaintext) {
    if (found.size() != truth.size()) throw std::invalid_argument("key accuracy: size mismatch");
    std::vector<bool> present(found.size(), false);
    for (const uint8_t s : plaintext) {
        if (s >= found.size()) throw std::invalid_argument("key accuracy: symbol outside key");
        present[s] = true;
    }
    size_t hits = 0, total = 0;
    for (size_t i = 0; i < found.size(); ++i) {
        if (!present[i]) continue;
        ++total;
        hits += found.perm[i] == truth.perm[i];
    }
    if (total == 0) return 1.0;
    return static_cast<double>(hits) / static_cast<double>(total);
}

double text_accuracy(std::span<const uint8_t> decrypted, std::span<const uint8_t> plaintext) {
    if (decrypted.size() != plaintext.size())
        throw std::invalid_argument("text accuracy: length mismatch");
    if (decrypted.empty()) return 1.0;
    size_t hits = 0;
    for (size_t i = 0; i < decrypted.size(); ++i) hits += decrypted[i] == plaintext[i];
    return static_cast<double>(hits) / static_cast<double>(decrypted.size());
}

namespace {

RandomSource make_attack_source(const ExperimentConfig& cfg, PrngKind kind, uint64_t seed) {
    if (kind == PrngKind::ChaoticIteration)
        return RandomSource::chaotic(seed, cfg.ci_bits, cfg.ci_c);
    return RandomSource(kind, seed);
}

RunOutcome execute_run(std::span<const uint8_t> plaintext, const BigramModel& model,
                       const ExperimentConfig& cfg, PrngKind kind, uint64_t run_seed) {
    const size_t n = model.alphabet_size();

    // Encryption keys come from a generator-independent stream so that every
    // kind attacks the same instances.
    RandomSource truth_src(PrngKind::Xorshift128, derive_seed(run_seed, 0));
    SubstitutionKey truth_sub = cfg.fixed_truth_sub
                                    ? *cfg.fixed_truth_sub
                                    : random_substitution_key(n, truth_src);
    TranspositionKey truth_trans = cfg.fixed_truth_trans
                                       ? *cfg.fixed_truth_trans
                                       : random_transposition_key(cfg.period, truth_src);

    RandomSource attack_src = make_attack_source(cfg, kind, derive_seed(run_seed, 1));

    RunOutcome out;
    out.seed = run_seed;

    switch (cfg.cipher) {
        case CipherKind::Substitution: {
            const std::vector<uint8_t> ct = sub_encrypt(plaintext, truth_sub);
            const ChainResult res =
                run_substitution_chain(ct, model, cfg.chain, attack_src);
            const std::vector<uint8_t> dec = sub_decrypt(ct, res.best_key);
            out.key_accuracy = key_accuracy(res.best_key, truth_sub);
            out.key_accuracy_support = key_accuracy_on_support(res.best_key, truth_sub, plaintext);
            out.text_accuracy = text_accuracy(dec, plaintext);
            out.final_log_score = res.best_score;
            break;
        }
        case CipherKind::Transposition: {
            const std::vector<uint8_t> ct = transpose_encrypt(plaintext, truth_trans);
            const TranspositionChainResult res =
                run_transposition_chain(ct, model, cfg.period, cfg.chain, attack_src);
            const std::vector<uint8_t> dec = transpose_decrypt(ct, res.best_key);
            out.key_accuracy = key_accuracy(res.best_key, truth_trans);
            out.key_accuracy_support = out.key_accuracy;
            out.text_accuracy = text_accuracy(dec, plaintext);
            out.final_log_score = res.best_score;
            break;
        }
        case CipherKind::Combined: {
            const std::vector<uint8_t> ct =
                transpose_encrypt(sub_encrypt(plaintext, truth_sub), truth_trans);
            const CombinedChainResult res =
                run_combined_chain(ct, model, cfg.period, cfg.chain, attack_src);
            const std::vector<uint8_t> dec =
                sub_decrypt(transpose_decrypt(ct, res.best_trans_key), res.best_sub_key);
            const size_t total = truth_sub.size() + truth_trans.period();
            size_t hits = 0;
            for (size_t i = 0; i < truth_sub.size(); ++i)
                hits += res.best_sub_key.perm[i] == truth_sub.perm[i];
            for (size_t i = 0; i < truth_trans.period(); ++i)
                hits += res.best_trans_key.order[i] == truth_trans.order[i];
            out.key_accuracy = static_cast<double>(hits) / static_cast<double>(total);
            out.key_accuracy_support = out.key_accuracy;
            out.text_accuracy = text_accuracy(dec, plaintext);
            out.final_log_score = res.best_score;
            break;
        }
    }
    out.success = out.text_accuracy >= cfg.success_threshold;
    return out;
}

}  // namespace

ReportRow run_experiment(std::span<const uint8_t> plaintext, const BigramModel& model,
                         const ExperimentConfig& cfg, PrngKind kind, uint32_t en, uint32_t runs,
                         uint64_t experiment_seed, std::vector<SeedRecord>* ledger,
                         std::vector<RunOutcome>* outcomes) {
    if (runs == 0) throw std::invalid_argument("experiment: needs at least one run");
    if (plaintext.empty()) throw std::invalid_argument("experiment: plaintext is empty");

    std::vector<RunOutcome> results(runs);
    const uint32_t jobs_wanted = cfg.jobs == 0 ? std::thread::hardware_concurrency() : cfg.jobs;
    const uint32_t jobs = std::max(1u, std::min(jobs_wanted, runs));

    if (jobs == 1) {
        for (uint32_t r = 0; r < runs; ++r)
            results[r] = execute_run(plaintext, model, cfg, kind, derive_seed(experiment_seed, r));
    } else {
        std::atomic<uint32_t> next{0};
        std::mutex failure_mutex;
        std::exception_ptr failure;
        auto worker = [&] {
            for (;;) {
                const uint32_t r = next.fetch_add(1);
                if (r >= runs) return;
                try {
                    results[r] =
                        execute_run(plaintext, model, cfg, kind, derive_seed(experiment_seed, r));
                } catch (...) {
                    const std::lock_guard<std::mutex> lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                    next.store(runs);
                    return;
                }
            }
        };
        std::vector<std::thread> pool;
        pool.reserve(jobs);
        for (uint32_t t = 0; t < jobs; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
        // A failed run aborts the whole experiment rather than dropping rows.
        if (failure) std::rethrow_exception(failure);
    }

    ReportRow row;
    row.prng = kind;
    row.en = en;
    row.runs = runs;
    row.iterations = cfg.chain.iterations;
    row.p = cfg.chain.p;
    row.threshold = cfg.success_threshold;
    row.seed = experiment_seed;
    double ac = 0.0, acs = 0.0;
    uint32_t nsd = 0;
    for (const RunOutcome& r : results) {
        ac += r.key_accuracy;
        acs += r.key_accuracy_support;
        nsd += r.success ? 1 : 0;
    }
    row.ac = ac / runs;
    row.ac_support = acs / runs;
    row.nsd = nsd;

    if (ledger)
        for (uint32_t r = 0; r < runs; ++r)
            ledger->push_back(SeedRecord{kind, en, r, results[r].seed});
    if (outcomes) *outcomes = std::move(results);
    return row;
}

ExperimentReport run_experiments(std::span<const uint8_t> plaintext, const BigramModel& model,
                                 const ExperimentConfig& cfg, PrngKind kind, uint32_t experiments,
                                 uint32_t runs, uint64_t master_seed) {
    ExperimentReport report;
    for (uint32_t en = 1; en <= experiments; ++en) {
        const uint64_t experiment_seed = derive_seed(master_seed, en - 1);
        report.rows.push_back(run_experiment(plaintext, model, cfg, kind, en, runs,
                                             experiment_seed, &report.seeds));
    }
    return report;
}

ExperimentReport compare_prngs(std::span<const uint8_t> plaintext, const BigramModel& model,
                               const ExperimentConfig& cfg, uint32_t experiments, uint32_t runs,
                               uint64_t master_seed) {
    ExperimentReport report;
    for (const PrngKind kind :
         {PrngKind::Lcg48, PrngKind::Xorshift128, PrngKind::ChaoticIteration}) {
        ExperimentReport part =
            run_experiments(plaintext, model, cfg, kind, experiments, runs, master_seed);
        report.rows.insert(report.rows.end(), part.rows.begin(), part.rows.end());
        report.seeds.insert(report.seeds.end(), part.seeds.begin(), part.seeds.end());
    }
    return report;
}

std::string report_csv(const ExperimentReport& report) {
    std::string out = "prng,en,ac,ac_support,nsd,runs,iterations,p,threshold,seed\n";
    char buf[256];
    for (const ReportRow& r : report.rows) {
        std::snprintf(buf, sizeof(buf), "%s,%u,%.6f,%.6f,%u,%u,%llu,%.6f,%.6f,%llu\n",
                      prng_kind_name(r.prng), r.en, r.ac, r.ac_support, r.nsd, r.runs,
                      static_cast<unsigned long long>(r.iterations), r.p, r.threshold,
                      static_cast<unsigned long long>(r.seed));
        out += buf;
    }
    return out;
}

std::string report_table(const ExperimentReport& report) {
    std::string out;
    char buf[256];
    std::snprintf(buf, sizeof(buf), "%-12s %-4s %-8s %-10s %-5s\n", "prng", "EN", "AC",
                  "AC(supp)", "NSD");
    out += buf;
    out += "------------------------------------------\n";
    // Rows grouped per generator with a mean line after each block.
    const PrngKind kinds[] = {PrngKind::Lcg48, PrngKind::Xorshift128,
                              PrngKind::ChaoticIteration};
    for (const PrngKind kind : kinds) {
        double ac = 0.0, acs = 0.0, nsd = 0.0;
        uint32_t count = 0;
        for (const ReportRow& r : report.rows) {
            if (r.prng != kind) continue;
            std::snprintf(buf, sizeof(buf), "%-12s %-4u %-8.4f %-10.4f %-5u\n",
                          prng_kind_name(r.prng), r.en, r.ac, r.ac_support, r.nsd);
            out += buf;
            ac += r.ac;
            acs += r.ac_support;
            nsd += r.nsd;
            ++count;
        }
        if (count) {
            std::snprintf(buf, sizeof(buf), "%-12s %-4s %-8.4f %-10.4f %-5.1f\n", "  mean", "-",
                          ac / count, acs / count, nsd / count);
            out += buf;
        }
    }
    return out;
}

std::string seed_ledger_jsonl(const ExperimentReport& report) {
    std::string out;
    char buf[192];
    for (const SeedRecord& s : report.seeds) {
        std::snprintf(buf, sizeof(buf), "{\"prng\":\"%s\",\"en\":%u,\"run\":%u,\"seed\":%llu}\n",
                      prng_kind_name(s.prng), s.en, s.run,
                      static_cast<unsigned long long>(s.seed));
        out += buf;
    }
    return out;
}

}  // namespace chainbreak
