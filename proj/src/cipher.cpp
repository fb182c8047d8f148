#include "cipher.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <sstream>
#include <stdexcept>

#include "errors.hpp"

namespace chainbreak {

namespace {

char ascii_upper(char c) {
    return (c >= 'a' && c <= 'z') ? static_cast<char>(c - 'a' + 'A') : c;
}

bool ascii_space(char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

}  // namespace

Alphabet::Alphabet(std::string_view symbols) : symbols_(symbols) {
    if (symbols_.size() < 2) throw std::invalid_argument("alphabet: need at least 2 symbols");
    if (symbols_.size() > kMaxSize) throw std::invalid_argument("alphabet: too many symbols");
    lookup_.fill(-1);
    for (size_t i = 0; i < symbols_.size(); ++i) {
        const unsigned char c = static_cast<unsigned char>(symbols_[i]);
        if (lookup_[c] >= 0) throw std::invalid_argument("alphabet: duplicate symbol");
        lookup_[c] = static_cast<int16_t>(i);
        if (symbols_[i] == ' ') space_index_ = static_cast<int16_t>(i);
    }
    // Case-insensitive matching for Latin letters.
    for (size_t i = 0; i < symbols_.size(); ++i) {
        const char c = symbols_[i];
        if (c >= 'A' && c <= 'Z') {
            const unsigned char lower = static_cast<unsigned char>(c - 'A' + 'a');
            if (lookup_[lower] < 0) lookup_[lower] = static_cast<int16_t>(i);
        }
    }
}

const Alphabet& Alphabet::latin() {
    static const Alphabet a("ABCDEFGHIJKLMNOPQRSTUVWXYZ");
    return a;
}

const Alphabet& Alphabet::latin_with_space() {
    static const Alphabet a("ABCDEFGHIJKLMNOPQRSTUVWXYZ ");
    return a;
}

std::vector<uint8_t> Alphabet::normalize(std::string_view raw) const {
    std::vector<uint8_t> out;
    out.reserve(raw.size());
    bool last_was_space = false;
    for (const char c : raw) {
        char mapped = ascii_upper(c);
        if (space_index_ >= 0 && ascii_space(c)) mapped = ' ';
        const int16_t idx = lookup_[static_cast<unsigned char>(mapped)];
        if (idx < 0) continue;
        const bool is_space = idx == space_index_ && space_index_ >= 0;
        if (is_space && last_was_space) continue;
        out.push_back(static_cast<uint8_t>(idx));
        last_was_space = is_space;
    }
    return out;
}

std::string Alphabet::render(std::span<const uint8_t> indices) const {
    std::string out;
    out.reserve(indices.size());
    for (const uint8_t i : indices) {
        if (i >= symbols_.size()) throw std::invalid_argument("render: index outside alphabet");
        out.push_back(symbols_[i]);
    }
    return out;
}

bool is_permutation_of_indices(std::span<const uint32_t> values) {
    std::vector<bool> seen(values.size(), false);
    for (const uint32_t v : values) {
        if (v >= values.size() || seen[v]) return false;
        seen[v] = true;
    }
    return true;
}

SubstitutionKey SubstitutionKey::identity(size_t n) {
    SubstitutionKey k;
    k.perm.resize(n);
    for (size_t i = 0; i < n; ++i) k.perm[i] = static_cast<uint32_t>(i);
    return k;
}

bool SubstitutionKey::valid() const { return is_permutation_of_indices(perm); }

SubstitutionKey SubstitutionKey::inverse() const {
    SubstitutionKey inv;
    inv.perm.resize(perm.size());
    for (size_t i = 0; i < perm.size(); ++i) inv.perm[perm[i]] = static_cast<uint32_t>(i);
    return inv;
}

TranspositionKey TranspositionKey::identity(size_t k) {
    TranspositionKey t;
    t.order.resize(k);
    for (size_t i = 0; i < k; ++i) t.order[i] = static_cast<uint32_t>(i);
    return t;
}

bool TranspositionKey::valid() const { return !order.empty() && is_permutation_of_indices(order); }

TranspositionKey TranspositionKey::inverse() const {
    TranspositionKey inv;
    inv.order.resize(order.size());
    for (size_t i = 0; i < order.size(); ++i) inv.order[order[i]] = static_cast<uint32_t>(i);
    return inv;
}

namespace {

std::vector<uint8_t> apply_sub(std::span<const uint8_t> text, const std::vector<uint32_t>& map) {
    std::vector<uint8_t> out(text.size());
    for (size_t i = 0; i < text.size(); ++i) {
        if (text[i] >= map.size()) throw std::invalid_argument("substitution: text index outside key");
        out[i] = static_cast<uint8_t>(map[text[i]]);
    }
    return out;
}

}  // namespace

std::vector<uint8_t> sub_encrypt(std::span<const uint8_t> text, const SubstitutionKey& key) {
    if (!key.valid()) throw std::invalid_argument("substitution: key is not a permutation");
    return apply_sub(text, key.perm);
}

std::vector<uint8_t> sub_decrypt(std::span<const uint8_t> text, const SubstitutionKey& key) {
    if (!key.valid()) throw std::invalid_argument("substitution: key is not a permutation");
    return apply_sub(text, key.inverse().perm);
}

std::vector<uint8_t> transpose_encrypt(std::span<const uint8_t> text, const TranspositionKey& key) {
    if (!key.valid()) throw std::invalid_argument("transposition: key is not a permutation");
    const size_t k = key.period();
    std::vector<uint8_t> out(text.size());
    const size_t full = text.size() / k * k;
    for (size_t base = 0; base < full; base += k)
        for (size_t j = 0; j < k; ++j) out[base + j] = text[base + key.order[j]];
    for (size_t i = full; i < text.size(); ++i) out[i] = text[i];
    return out;
}

std::vector<uint8_t> transpose_decrypt(std::span<const uint8_t> text, const TranspositionKey& key) {
    if (!key.valid()) throw std::invalid_argument("transposition: key is not a permutation");
    const size_t k = key.period();
    std::vector<uint8_t> out(text.size());
    const size_t full = text.size() / k * k;
    for (size_t base = 0; base < full; base += k)
        for (size_t j = 0; j < k; ++j) out[base + key.order[j]] = text[base + j];
    for (size_t i = full; i < text.size(); ++i) out[i] = text[i];
    return out;
}

std::vector<uint32_t> random_permutation(size_t n, RandomSource& src) {
    std::vector<uint32_t> v(n);
    for (size_t i = 0; i < n; ++i) v[i] = static_cast<uint32_t>(i);
    for (size_t i = n; i > 1; --i) {
        const uint64_t j = src.next_below(i);
        std::swap(v[i - 1], v[j]);
    }
    return v;
}

SubstitutionKey random_substitution_key(size_t n, RandomSource& src) {
    return SubstitutionKey{random_permutation(n, src)};
}

TranspositionKey random_transposition_key(size_t period, RandomSource& src) {
    return TranspositionKey{random_permutation(period, src)};
}

std::string format_key(std::span<const uint32_t> perm) {
    std::string out;
    for (size_t i = 0; i < perm.size(); ++i) {
        if (i) out.push_back(' ');
        out += std::to_string(perm[i]);
    }
    out.push_back('\n');
    return out;
}

std::vector<uint32_t> parse_key(std::string_view line) {
    std::vector<uint32_t> perm;
    size_t pos = 0;
    while (pos < line.size()) {
        while (pos < line.size() && (ascii_space(line[pos]))) ++pos;
        if (pos >= line.size()) break;
        uint32_t value = 0;
        const auto [ptr, ec] = std::from_chars(line.data() + pos, line.data() + line.size(), value);
        if (ec != std::errc()) throw ParseError("key file: expected a non-negative integer");
        pos = static_cast<size_t>(ptr - line.data());
        perm.push_back(value);
    }
    if (!is_permutation_of_indices(perm))
        throw ParseError("key file: entries do not form a permutation of 0..n-1");
    return perm;
}

}  // namespace chainbreak
