#ifndef CHAINBREAK_CIPHER_HPP
#define CHAINBREAK_CIPHER_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rng.hpp"

namespace chainbreak {

/// Ordered set of distinct symbols plus the character-to-index map used by
/// normalization. Texts are handled as index sequences everywhere else.
class Alphabet {
public:
    static constexpr size_t kMaxSize = 256;

    explicit Alphabet(std::string_view symbols);

    /// The 26 uppercase Latin letters.
    static const Alphabet& latin();

    /// Latin letters plus a space symbol; normalization maps any whitespace
    /// run to one space.
    static const Alphabet& latin_with_space();

    size_t size() const { return symbols_.size(); }
    char symbol(uint32_t index) const { return symbols_.at(index); }
    const std::string& symbols() const { return symbols_; }
    bool has_space() const { return space_index_ >= 0; }

    std::optional<uint32_t> index_of(char c) const {
        const int16_t i = lookup_[static_cast<unsigned char>(c)];
        if (i < 0) return std::nullopt;
        return static_cast<uint32_t>(i);
    }

    /// Uppercases ASCII letters, maps members to indices and drops everything
    /// else. When the alphabet holds a space, whitespace of any kind maps to
    /// it and consecutive spaces collapse to one. Idempotent through render().
    std::vector<uint8_t> normalize(std::string_view raw) const;

    std::string render(std::span<const uint8_t> indices) const;

    bool operator==(const Alphabet& other) const { return symbols_ == other.symbols_; }

private:
    std::string symbols_;
    std::array<int16_t, 256> lookup_;
    int16_t space_index_ = -1;
};

/// Permutation of alphabet indices; perm[i] is the ciphertext index of
/// plaintext symbol i. This is the substitution chain state.
struct SubstitutionKey {
    std::vector<uint32_t> perm;

    static SubstitutionKey identity(size_t n);

    size_t size() const { return perm.size(); }
    bool valid() const;
    SubstitutionKey inverse() const;

    bool operator==(const SubstitutionKey&) const = default;
};

/// Column read order for a block transposition of period order.size().
struct TranspositionKey {
    std::vector<uint32_t> order;

    static TranspositionKey identity(size_t k);

    size_t period() const { return order.size(); }
    bool valid() const;
    TranspositionKey inverse() const;

    bool operator==(const TranspositionKey&) const = default;
};

bool is_permutation_of_indices(std::span<const uint32_t> values);

std::vector<uint8_t> sub_encrypt(std::span<const uint8_t> text, const SubstitutionKey& key);
std::vector<uint8_t> sub_decrypt(std::span<const uint8_t> text, const SubstitutionKey& key);

/// Blockwise transposition: output j of each full block takes input element
/// order[j]. A final partial block passes through unchanged, which keeps the
/// pair exactly invertible for every text length.
std::vector<uint8_t> transpose_encrypt(std::span<const uint8_t> text, const TranspositionKey& key);
std::vector<uint8_t> transpose_decrypt(std::span<const uint8_t> text, const TranspositionKey& key);

/// Uniform random permutation of {0..n-1} (Fisher-Yates over next_below).
std::vector<uint32_t> random_permutation(size_t n, RandomSource& src);
SubstitutionKey random_substitution_key(size_t n, RandomSource& src);
TranspositionKey random_transposition_key(size_t period, RandomSource& src);

/// Key files are one line of space-separated indices.
std::string format_key(std::span<const uint32_t> perm);
std::vector<uint32_t> parse_key(std::string_view line);

}  // namespace chainbreak

#endif
