// chainbreak command line: corpus ingestion, classical encryption, single
// MCMC attacks and the multi-generator comparison experiment. Uses the
// shared library strictly through its C API.

#include <chainbreak/chainbreak.h>

#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

namespace {

// Exit codes, also listed in --help: 0 success, 2 usage error, 3 file/IO
// error, 4 invalid value or combination, 5 internal error.
enum ExitCode { kOk = 0, kUsage = 2, kIo = 3, kConfig = 4, kInternal = 5 };

struct CliError {
    int code;
    std::string message;
};

[[noreturn]] void die(int code, const std::string& message) {
    throw CliError{code, message};
}

void check(cb_status status, const std::string& context) {
    if (status == CB_OK) return;
    int code = kInternal;
    if (status == CB_ERROR_INVALID_ARGUMENT || status == CB_ERROR_PARSE) code = kConfig;
    if (status == CB_ERROR_IO) code = kIo;
    die(code, context + ": " + cb_last_error());
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) die(kIo, "cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) die(kIo, "read of '" + path + "' failed");
    return buf.str();
}

void atomic_write(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) die(kIo, "cannot open '" + tmp + "' for writing");
        out << content;
        out.flush();
        if (!out) die(kIo, "write to '" + tmp + "' failed");
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        die(kIo, "cannot move '" + tmp + "' to '" + path + "'");
}

// RAII wrappers over the opaque C handles.
using AlphabetPtr = std::unique_ptr<cb_alphabet, decltype(&cb_alphabet_free)>;
using ModelPtr = std::unique_ptr<cb_model, decltype(&cb_model_free)>;
using RngPtr = std::unique_ptr<cb_rng, decltype(&cb_rng_free)>;
using ReportPtr = std::unique_ptr<cb_report, decltype(&cb_report_free)>;

AlphabetPtr make_alphabet(bool keep_spaces) {
    cb_alphabet* a = nullptr;
    check(cb_alphabet_create(keep_spaces ? 1 : 0, &a), "alphabet");
    return AlphabetPtr(a, cb_alphabet_free);
}

std::vector<uint8_t> normalize(const cb_alphabet* alphabet, const std::string& text) {
    uint8_t* buf = nullptr;
    size_t len = 0;
    check(cb_normalize(alphabet, text.data(), text.size(), &buf, &len), "normalize");
    std::vector<uint8_t> out(buf, buf + len);
    cb_indices_free(buf);
    return out;
}

std::string render(const cb_alphabet* alphabet, const std::vector<uint8_t>& indices) {
    char* s = nullptr;
    check(cb_render(alphabet, indices.data(), indices.size(), &s), "render");
    std::string out(s);
    cb_string_free(s);
    return out;
}

std::string key_to_line(const uint32_t* perm, uint32_t size) {
    char* s = nullptr;
    check(cb_key_format(perm, size, &s), "format key");
    std::string out(s);
    cb_string_free(s);
    return out;
}

std::string report_text(const cb_report* report,
                        cb_status (*fn)(const cb_report*, char**), const char* what) {
    char* s = nullptr;
    check(fn(report, &s), what);
    std::string out(s);
    cb_string_free(s);
    return out;
}

std::vector<uint32_t> load_key_file(const std::string& path, uint32_t size,
                                    const std::string& what) {
    const std::string line = read_file(path);
    std::vector<uint32_t> perm(size);
    check(cb_key_parse(line.c_str(), size, perm.data()), what + " '" + path + "'");
    return perm;
}

void write_key_file(const std::string& path, const std::vector<uint32_t>& perm) {
    char* s = nullptr;
    check(cb_key_format(perm.data(), static_cast<uint32_t>(perm.size()), &s), "format key");
    std::string content(s);
    cb_string_free(s);
    atomic_write(path, content);
}

// ---- shared option blocks -----------------------------------------------

struct AlphabetOptions {
    bool keep_spaces = false;

    void attach(CLI::App* cmd) {
        cmd->add_flag("--keep-spaces", keep_spaces,
                      "Keep word spacing as a 27th alphabet symbol");
    }
};

struct ModelOptions {
    std::string model_path;
    std::string corpus_path;
    double delta = 1.0;

    void attach(CLI::App* cmd) {
        cmd->add_option("--model", model_path, "Bigram count cache (CSV) to load");
        cmd->add_option("--corpus", corpus_path, "Reference corpus to count bigrams from");
        cmd->add_option("--delta", delta, "Additive smoothing constant")
            ->check(CLI::NonNegativeNumber)
            ->capture_default_str();
    }

    ModelPtr load(const cb_alphabet* alphabet) const {
        if (model_path.empty() == corpus_path.empty())
            die(kConfig, "exactly one of --model and --corpus is required");
        cb_model* m = nullptr;
        if (!model_path.empty()) {
            check(cb_model_load_csv(alphabet, model_path.c_str(), delta, &m), "load model");
        } else {
            const std::string raw = read_file(corpus_path);
            const std::vector<uint8_t> corpus = normalize(alphabet, raw);
            check(cb_model_build(alphabet, corpus.data(), corpus.size(), delta, &m),
                  "build model");
        }
        return ModelPtr(m, cb_model_free);
    }
};

struct PrngOptions {
    std::string kind = "xorshift128";
    uint32_t ci_bits = 32;
    uint32_t ci_c = 1;

    void attach(CLI::App* cmd) {
        cmd->add_option("--prng", kind, "Random source driving the attack")
            ->check(CLI::IsMember({"lcg48", "xorshift128", "ci"}))
            ->capture_default_str();
        attach_ci(cmd);
    }

    void attach_ci(CLI::App* cmd) {
        cmd->add_option("--ci-bits", ci_bits, "CI generator: state width in bits")
            ->check(CLI::Range(1u, 53u))
            ->capture_default_str();
        cmd->add_option("--ci-c", ci_c, "CI generator: constant c of the flip count")
            ->capture_default_str();
    }

    cb_prng_kind value() const {
        if (kind == "lcg48") return CB_PRNG_LCG48;
        if (kind == "ci") return CB_PRNG_CI;
        return CB_PRNG_XORSHIFT128;
    }

    RngPtr make(uint64_t seed) const {
        cb_rng* rng = nullptr;
        if (value() == CB_PRNG_CI)
            check(cb_rng_create_ci(seed, ci_bits, ci_c, &rng), "random source");
        else
            check(cb_rng_create(value(), seed, &rng), "random source");
        return RngPtr(rng, cb_rng_free);
    }
};

struct CipherOptions {
    std::string cipher = "substitution";
    uint32_t period = 5;

    void attach(CLI::App* cmd) {
        cmd->add_option("--cipher", cipher, "Cipher family")
            ->check(CLI::IsMember({"substitution", "transposition", "combined"}))
            ->capture_default_str();
        cmd->add_option("--period", period, "Transposition block length")
            ->check(CLI::Range(1u, 4096u))
            ->capture_default_str();
    }

    cb_cipher_kind value() const {
        if (cipher == "transposition") return CB_CIPHER_TRANSPOSITION;
        if (cipher == "combined") return CB_CIPHER_COMBINED;
        return CB_CIPHER_SUBSTITUTION;
    }
};

cb_init_mode parse_init(const std::string& name) {
    if (name == "random") return CB_INIT_RANDOM;
    if (name == "freq") return CB_INIT_FREQUENCY;
    if (name == "identity") return CB_INIT_IDENTITY;
    return CB_INIT_FIXED;  // "truth"
}

// ---- subcommands ----------------------------------------------------------

struct BuildModelCmd {
    std::string corpus_path;
    std::string out_path;
    double delta = 1.0;
    AlphabetOptions alphabet;

    void attach(CLI::App& app) {
        CLI::App* cmd = app.add_subcommand("build-model",
                                           "Count reference bigrams and cache them as CSV");
        cmd->set_config("--config");
        cmd->add_option("--corpus", corpus_path, "Reference corpus text file")->required();
        cmd->add_option("--out", out_path, "Where to write the count cache")->required();
        cmd->add_option("--delta", delta, "Additive smoothing constant")
            ->check(CLI::NonNegativeNumber)
            ->capture_default_str();
        alphabet.attach(cmd);
        cmd->callback([this] { run(); });
    }

    void run() const {
        AlphabetPtr a = make_alphabet(alphabet.keep_spaces);
        const std::string raw = read_file(corpus_path);
        const std::vector<uint8_t> corpus = normalize(a.get(), raw);
        cb_model* m = nullptr;
        check(cb_model_build(a.get(), corpus.data(), corpus.size(), delta, &m), "build model");
        ModelPtr model(m, cb_model_free);

        const std::string tmp_target = out_path;
        check(cb_model_save_csv(model.get(), a.get(), (tmp_target + ".tmp").c_str()),
              "save model");
        if (std::rename((tmp_target + ".tmp").c_str(), tmp_target.c_str()) != 0)
            die(kIo, "cannot move '" + tmp_target + ".tmp' into place");

        uint64_t total = 0, symbols = 0;
        cb_model_total_bigrams(model.get(), &total);
        cb_model_corpus_symbols(model.get(), &symbols);
        std::printf("# command = build-model\n# corpus = %s\n# delta = %g\n# keep_spaces = %d\n",
                    corpus_path.c_str(), delta, alphabet.keep_spaces ? 1 : 0);
        std::printf("symbols %" PRIu64 "\nbigrams %" PRIu64 "\nwrote %s\n", symbols, total,
                    out_path.c_str());
    }
};

struct EncryptCmd {
    std::string in_path, out_path;
    std::string key_path, trans_key_path;
    std::string key_out, trans_key_out;
    uint64_t seed = 1;
    AlphabetOptions alphabet;
    CipherOptions cipher;

    void attach(CLI::App& app) {
        CLI::App* cmd =
            app.add_subcommand("encrypt", "Normalize a text and encrypt it with a random or "
                                          "given key");
        cmd->set_config("--config");
        cmd->add_option("--in", in_path, "Plaintext file")->required();
        cmd->add_option("--out", out_path, "Ciphertext output file")->required();
        cmd->add_option("--key", key_path, "Substitution key file to use instead of drawing one");
        cmd->add_option("--trans-key", trans_key_path, "Transposition key file to use");
        cmd->add_option("--key-out", key_out, "Where to write the substitution key");
        cmd->add_option("--trans-key-out", trans_key_out, "Where to write the transposition key");
        cmd->add_option("--seed", seed, "Seed of the key-drawing stream")->capture_default_str();
        alphabet.attach(cmd);
        cipher.attach(cmd);
        cmd->callback([this] { run(); });
    }

    void run() const {
        AlphabetPtr a = make_alphabet(alphabet.keep_spaces);
        size_t n = 0;
        cb_alphabet_size(a.get(), &n);
        const std::vector<uint8_t> pt = normalize(a.get(), read_file(in_path));
        if (pt.empty()) die(kConfig, "'" + in_path + "' normalizes to an empty text");

        cb_rng* raw = nullptr;
        check(cb_rng_create(CB_PRNG_XORSHIFT128, seed, &raw), "random source");
        RngPtr rng(raw, cb_rng_free);

        const cb_cipher_kind kind = cipher.value();
        std::vector<uint32_t> sub_key(n), trans_key(cipher.period);
        if (kind != CB_CIPHER_TRANSPOSITION) {
            if (!key_path.empty())
                sub_key = load_key_file(key_path, static_cast<uint32_t>(n), "substitution key");
            else
                check(cb_random_permutation(rng.get(), static_cast<uint32_t>(n), sub_key.data()),
                      "draw key");
        }
        if (kind != CB_CIPHER_SUBSTITUTION) {
            if (!trans_key_path.empty())
                trans_key = load_key_file(trans_key_path, cipher.period, "transposition key");
            else
                check(cb_random_permutation(rng.get(), cipher.period, trans_key.data()),
                      "draw key");
        }

        std::vector<uint8_t> ct(pt.size());
        if (kind == CB_CIPHER_SUBSTITUTION) {
            check(cb_sub_encrypt(pt.data(), pt.size(), sub_key.data(),
                                 static_cast<uint32_t>(n), ct.data()), "encrypt");
        } else if (kind == CB_CIPHER_TRANSPOSITION) {
            check(cb_transpose_encrypt(pt.data(), pt.size(), trans_key.data(), cipher.period,
                                       ct.data()), "encrypt");
        } else {
            std::vector<uint8_t> stage(pt.size());
            check(cb_sub_encrypt(pt.data(), pt.size(), sub_key.data(), static_cast<uint32_t>(n),
                                 stage.data()), "encrypt");
            check(cb_transpose_encrypt(stage.data(), stage.size(), trans_key.data(),
                                       cipher.period, ct.data()), "encrypt");
        }

        atomic_write(out_path, render(a.get(), ct) + "\n");
        if (!key_out.empty() && kind != CB_CIPHER_TRANSPOSITION) write_key_file(key_out, sub_key);
        if (!trans_key_out.empty() && kind != CB_CIPHER_SUBSTITUTION)
            write_key_file(trans_key_out, trans_key);

        std::printf("# command = encrypt\n# cipher = %s\n# period = %u\n# seed = %" PRIu64
                    "\n# keep_spaces = %d\n",
                    cipher.cipher.c_str(), cipher.period, seed, alphabet.keep_spaces ? 1 : 0);
        std::printf("symbols %zu\nwrote %s\n", pt.size(), out_path.c_str());
    }
};

struct AttackCmd {
    std::string in_path, out_path, key_out, trans_key_out, trace_path;
    std::string plaintext_path, truth_key_path, truth_trans_key_path;
    std::string init = "random";
    uint64_t iterations = 10000;
    double p = 1.0;
    uint64_t seed = 1;
    double threshold = 0.90;
    AlphabetOptions alphabet;
    ModelOptions model_opts;
    PrngOptions prng;
    CipherOptions cipher;

    void attach(CLI::App& app) {
        CLI::App* cmd = app.add_subcommand("attack", "Run one MCMC attack on a ciphertext");
        cmd->set_config("--config");
        cmd->add_option("--in", in_path, "Ciphertext file")->required();
        model_opts.attach(cmd);
        cmd->add_option("--iterations", iterations, "Metropolis steps")->capture_default_str();
        cmd->add_option("--p", p, "Scaling exponent of the acceptance ratio")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
        cmd->add_option("--seed", seed, "Seed of the attack source")->capture_default_str();
        cmd->add_option("--init", init, "Initial key: random, freq, identity or truth")
            ->check(CLI::IsMember({"random", "freq", "identity", "truth"}))
            ->capture_default_str();
        cmd->add_option("--truth-key", truth_key_path,
                        "Encryption substitution key, for accuracy reporting or --init truth");
        cmd->add_option("--truth-trans-key", truth_trans_key_path,
                        "Encryption transposition key");
        cmd->add_option("--plaintext", plaintext_path,
                        "Original plaintext, for accuracy reporting");
        cmd->add_option("--out", out_path, "Write the decryption here");
        cmd->add_option("--key-out", key_out, "Write the recovered substitution key here");
        cmd->add_option("--trans-key-out", trans_key_out,
                        "Write the recovered transposition key here");
        cmd->add_option("--trace", trace_path, "Per-step CSV trace (iteration,log_score,accepted)");
        cmd->add_option("--threshold", threshold, "Success threshold on text accuracy")
            ->check(CLI::Range(0.0, 1.0))
            ->capture_default_str();
        prng.attach(cmd);
        alphabet.attach(cmd);
        cipher.attach(cmd);
        cmd->callback([this] { run(); });
    }

    void run() const {
        AlphabetPtr a = make_alphabet(alphabet.keep_spaces);
        size_t n = 0;
        cb_alphabet_size(a.get(), &n);
        ModelPtr model = model_opts.load(a.get());
        const std::vector<uint8_t> ct = normalize(a.get(), read_file(in_path));
        if (ct.empty()) die(kConfig, "'" + in_path + "' normalizes to an empty text");

        const cb_init_mode init_mode = parse_init(init);
        const cb_cipher_kind kind = cipher.value();
        std::vector<uint32_t> init_sub, init_trans;
        if (init_mode == CB_INIT_FIXED) {
            if (kind != CB_CIPHER_TRANSPOSITION) {
                if (truth_key_path.empty()) die(kConfig, "--init truth needs --truth-key");
                init_sub = load_key_file(truth_key_path, static_cast<uint32_t>(n), "truth key");
            }
            if (kind != CB_CIPHER_SUBSTITUTION) {
                if (truth_trans_key_path.empty())
                    die(kConfig, "--init truth needs --truth-trans-key");
                init_trans =
                    load_key_file(truth_trans_key_path, cipher.period, "truth transposition key");
            }
        }

        cb_chain_config chain{iterations, p, init_mode, 1,
                              trace_path.empty() ? nullptr : trace_path.c_str()};
        RngPtr rng = prng.make(seed);

        std::printf("# command = attack\n# cipher = %s\n# period = %u\n# prng = %s\n"
                    "# iterations = %" PRIu64 "\n# p = %g\n# init = %s\n# seed = %" PRIu64
                    "\n# delta = %g\n# keep_spaces = %d\n",
                    cipher.cipher.c_str(), cipher.period, prng.kind.c_str(), iterations, p,
                    init.c_str(), seed, model_opts.delta, alphabet.keep_spaces ? 1 : 0);

        std::vector<uint32_t> found_sub(n), found_trans(cipher.period);
        cb_attack_stats stats{};
        std::vector<uint8_t> dec(ct.size());
        if (kind == CB_CIPHER_SUBSTITUTION) {
            check(cb_attack_substitution(model.get(), ct.data(), ct.size(), &chain, rng.get(),
                                         init_sub.empty() ? nullptr : init_sub.data(),
                                         found_sub.data(), &stats), "attack");
            check(cb_sub_decrypt(ct.data(), ct.size(), found_sub.data(),
                                 static_cast<uint32_t>(n), dec.data()), "decrypt");
        } else if (kind == CB_CIPHER_TRANSPOSITION) {
            check(cb_attack_transposition(model.get(), ct.data(), ct.size(), cipher.period,
                                          &chain, rng.get(),
                                          init_trans.empty() ? nullptr : init_trans.data(),
                                          found_trans.data(), &stats), "attack");
            check(cb_transpose_decrypt(ct.data(), ct.size(), found_trans.data(), cipher.period,
                                       dec.data()), "decrypt");
        } else {
            check(cb_attack_combined(model.get(), ct.data(), ct.size(), cipher.period, &chain,
                                     rng.get(), init_sub.empty() ? nullptr : init_sub.data(),
                                     init_trans.empty() ? nullptr : init_trans.data(),
                                     found_sub.data(), found_trans.data(), &stats), "attack");
            std::vector<uint8_t> stage(ct.size());
            check(cb_transpose_decrypt(ct.data(), ct.size(), found_trans.data(), cipher.period,
                                       stage.data()), "decrypt");
            check(cb_sub_decrypt(stage.data(), stage.size(), found_sub.data(),
                                 static_cast<uint32_t>(n), dec.data()), "decrypt");
        }

        std::printf("best_log_score %.6f\nfinal_log_score %.6f\naccepted %" PRIu64
                    "\nproposed %" PRIu64 "\n",
                    stats.best_log_score, stats.final_log_score, stats.accepted, stats.proposed);
        if (kind != CB_CIPHER_TRANSPOSITION)
            std::printf("key %s",
                        key_to_line(found_sub.data(), static_cast<uint32_t>(n)).c_str());
        if (kind != CB_CIPHER_SUBSTITUTION)
            std::printf("trans_key %s", key_to_line(found_trans.data(), cipher.period).c_str());

        if (!truth_key_path.empty() && kind != CB_CIPHER_TRANSPOSITION) {
            const std::vector<uint32_t> truth =
                load_key_file(truth_key_path, static_cast<uint32_t>(n), "truth key");
            double ka = 0;
            check(cb_key_accuracy(found_sub.data(), truth.data(), static_cast<uint32_t>(n), &ka),
                  "key accuracy");
            std::printf("key_accuracy %.6f\n", ka);
        }
        if (!plaintext_path.empty()) {
            const std::vector<uint8_t> pt = normalize(a.get(), read_file(plaintext_path));
            if (pt.size() != dec.size())
                die(kConfig, "plaintext and ciphertext lengths differ after normalization");
            double ta = 0;
            check(cb_text_accuracy(dec.data(), pt.data(), dec.size(), &ta), "text accuracy");
            std::printf("text_accuracy %.6f\nsuccess %d\n", ta, ta >= threshold ? 1 : 0);
        }

        if (!out_path.empty()) {
            atomic_write(out_path, render(a.get(), dec) + "\n");
            std::printf("wrote %s\n", out_path.c_str());
        } else {
            const std::string preview = render(a.get(), dec);
            std::printf("decrypted %.*s%s\n", 120, preview.c_str(),
                        preview.size() > 120 ? "..." : "");
        }
        if (!key_out.empty() && kind != CB_CIPHER_TRANSPOSITION) write_key_file(key_out, found_sub);
        if (!trans_key_out.empty() && kind != CB_CIPHER_SUBSTITUTION)
            write_key_file(trans_key_out, found_trans);
    }
};

struct ExperimentCmd {
    bool all_kinds;
    std::string text_path, out_path, ledger_path;
    uint32_t runs = 100;
    uint32_t experiments;
    uint64_t iterations = 10000;
    double p = 1.0;
    uint64_t seed = 1;
    double threshold = 0.90;
    uint32_t jobs = 0;
    std::string init = "random";
    AlphabetOptions alphabet;
    ModelOptions model_opts;
    PrngOptions prng;
    CipherOptions cipher;

    explicit ExperimentCmd(bool compare) : all_kinds(compare), experiments(compare ? 5 : 1) {}

    void attach(CLI::App& app) {
        CLI::App* cmd = all_kinds
                            ? app.add_subcommand("compare",
                                                 "Run the experiment grid for all three "
                                                 "generators with matched seeds")
                            : app.add_subcommand("experiment",
                                                 "Run an AC/NSD experiment grid for one "
                                                 "generator");
        cmd->set_config("--config");
        cmd->add_option("--text", text_path, "Plaintext encrypted afresh in every run")
            ->required();
        model_opts.attach(cmd);
        cmd->add_option("--runs", runs, "Attacks per experiment")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
        cmd->add_option("--experiments", experiments, "Number of experiment rows (EN)")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
        cmd->add_option("--iterations", iterations, "Metropolis steps per attack")
            ->capture_default_str();
        cmd->add_option("--p", p, "Scaling exponent of the acceptance ratio")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
        cmd->add_option("--seed", seed, "Master seed of the whole grid")->capture_default_str();
        cmd->add_option("--threshold", threshold, "Text accuracy needed to count as a success")
            ->check(CLI::Range(0.0, 1.0))
            ->capture_default_str();
        cmd->add_option("--jobs", jobs, "Worker threads per experiment (0 = all cores)")
            ->capture_default_str();
        cmd->add_option("--init", init, "Initial key: random, freq or identity")
            ->check(CLI::IsMember({"random", "freq", "identity"}))
            ->capture_default_str();
        cmd->add_option("--out", out_path, "Write the report CSV here");
        cmd->add_option("--seed-ledger", ledger_path, "Write a JSON-lines run seed ledger here");
        if (all_kinds)
            prng.attach_ci(cmd);
        else
            prng.attach(cmd);
        alphabet.attach(cmd);
        cipher.attach(cmd);
        cmd->callback([this] { run(); });
    }

    void run() const {
        AlphabetPtr a = make_alphabet(alphabet.keep_spaces);
        ModelPtr model = model_opts.load(a.get());
        const std::vector<uint8_t> pt = normalize(a.get(), read_file(text_path));
        if (pt.empty()) die(kConfig, "'" + text_path + "' normalizes to an empty text");
        if (cipher.value() != CB_CIPHER_SUBSTITUTION && cipher.period < 2)
            die(kConfig, "transposition experiments need --period >= 2");

        cb_experiment_config cfg{};
        cfg.cipher = cipher.value();
        cfg.period = cipher.period;
        cfg.chain = cb_chain_config{iterations, p, parse_init(init), 1, nullptr};
        cfg.success_threshold = threshold;
        cfg.jobs = jobs;
        cfg.ci_bits = prng.ci_bits;
        cfg.ci_c = prng.ci_c;

        std::printf("# command = %s\n# text = %s\n# cipher = %s\n# experiments = %u\n"
                    "# runs = %u\n# iterations = %" PRIu64 "\n# p = %g\n# init = %s\n"
                    "# threshold = %g\n# delta = %g\n# master_seed = %" PRIu64
                    "\n# keep_spaces = %d\n",
                    all_kinds ? "compare" : "experiment", text_path.c_str(),
                    cipher.cipher.c_str(), experiments, runs, iterations, p, init.c_str(),
                    threshold, model_opts.delta, seed, alphabet.keep_spaces ? 1 : 0);
        if (!all_kinds) std::printf("# prng = %s\n", prng.kind.c_str());

        cb_report* raw = nullptr;
        if (all_kinds)
            check(cb_compare_prngs(model.get(), pt.data(), pt.size(), &cfg, experiments, runs,
                                   seed, &raw), "experiment grid");
        else
            check(cb_run_experiments(model.get(), pt.data(), pt.size(), &cfg, prng.value(),
                                     experiments, runs, seed, &raw), "experiment grid");
        ReportPtr report(raw, cb_report_free);

        std::fputs(report_text(report.get(), cb_report_table, "table").c_str(), stdout);
        if (!out_path.empty()) {
            atomic_write(out_path, report_text(report.get(), cb_report_csv, "csv"));
            std::printf("wrote %s\n", out_path.c_str());
        }
        if (!ledger_path.empty()) {
            atomic_write(ledger_path,
                         report_text(report.get(), cb_report_seed_ledger, "seed ledger"));
            std::printf("wrote %s\n", ledger_path.c_str());
        }
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"chainbreak: MCMC cryptanalysis of classical ciphers with pluggable "
                 "bit-exact random sources"};
    app.require_subcommand(1);
    app.footer("Exit codes: 0 success, 2 usage error, 3 file/IO error, 4 invalid value or "
               "combination, 5 internal error.\n"
               "Options may also come from a key=value file via --config; command-line flags "
               "win over the file, the file wins over defaults.");

    BuildModelCmd build_model;
    EncryptCmd encrypt;
    AttackCmd attack;
    ExperimentCmd experiment(false);
    ExperimentCmd compare(true);
    build_model.attach(app);
    encrypt.attach(app);
    attack.attach(app);
    experiment.attach(app);
    compare.attach(app);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    } catch (const CliError& e) {
        std::fprintf(stderr, "error: %s\n", e.message.c_str());
        return e.code;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kInternal;
    }
    return kOk;
}
