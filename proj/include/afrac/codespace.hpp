#pragma once

// Symbolic addresses i1 i2 ... in, eventually periodic infinite codes, cylinders
// and the shift.

#include <algorithm>
#include <compare>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "config.hpp"
#include "errors.hpp"

namespace afrac {

/// Kept symbols are 1..kept, complement symbols kept+1..total.
struct Alphabet {
    int kept = 2;
    int total = 2;

    friend constexpr bool operator==(const Alphabet&, const Alphabet&) = default;
};

namespace detail {

inline void check_alphabet(Alphabet a) {
    if (a.kept < 1 || a.total < a.kept) {
        throw InvalidAddress("alphabet needs 1 <= kept <= total");
    }
}

inline std::string symbols_to_string(std::span<const int> symbols, int total) {
    std::string out;
    for (std::size_t i = 0; i < symbols.size(); ++i) {
        if (total > 9 && i > 0) {
            out += '.';
        }
        out += std::to_string(symbols[i]);
    }
    return out;
}

}  // namespace detail

/// Finite word locating a cell of the construction tree. Every symbol but the
/// last is a kept symbol; a complement last symbol marks a complement set.
class Address {
public:
    explicit Address(Alphabet alphabet, std::vector<int> symbols = {})
        : alphabet_(alphabet), symbols_(std::move(symbols)) {
        detail::check_alphabet(alphabet_);
        for (std::size_t i = 0; i < symbols_.size(); ++i) {
            const int limit = (i + 1 == symbols_.size()) ? alphabet_.total : alphabet_.kept;
            if (symbols_[i] < 1 || symbols_[i] > limit) {
                throw InvalidAddress("symbol " + std::to_string(symbols_[i]) + " at position " +
                                     std::to_string(i + 1) + " outside 1.." + std::to_string(limit));
            }
        }
    }

    /// Digit string for total <= 9, dot-separated otherwise. The empty string is the root.
    static Address parse(std::string_view text, Alphabet alphabet) {
        std::vector<int> symbols;
        if (alphabet.total > 9) {
            std::size_t start = 0;
            while (!text.empty() && start <= text.size()) {
                const std::size_t dot = text.find('.', start);
                const auto token = text.substr(start, dot == std::string_view::npos ? std::string_view::npos : dot - start);
                symbols.push_back(parse_number(token));
                if (dot == std::string_view::npos) {
                    break;
                }
                start = dot + 1;
            }
        } else {
            for (char ch : text) {
                if (ch < '0' || ch > '9') {
                    throw InvalidAddress("address contains non-digit '" + std::string(1, ch) + "'");
                }
                symbols.push_back(ch - '0');
            }
        }
        return Address(alphabet, std::move(symbols));
    }

    Alphabet alphabet() const { return alphabet_; }
    std::span<const int> symbols() const { return symbols_; }
    std::size_t size() const { return symbols_.size(); }
    bool empty() const { return symbols_.empty(); }
    int operator[](std::size_t i) const { return symbols_[i]; }
    int back() const { return symbols_.back(); }

    bool is_complement() const { return !symbols_.empty() && symbols_.back() > alphabet_.kept; }
    bool is_kept() const { return !is_complement(); }

    Address child(int j) const {
        if (is_complement()) {
            throw InvalidAddress("complement cells have no children");
        }
        auto next = symbols_;
        next.push_back(j);
        return Address(alphabet_, std::move(next));
    }

    Address parent() const {
        if (symbols_.empty()) {
            throw InvalidAddress("root has no parent");
        }
        return Address(alphabet_, {symbols_.begin(), symbols_.end() - 1});
    }

    Address prefix(std::size_t n) const {
        return Address(alphabet_, {symbols_.begin(), symbols_.begin() + static_cast<std::ptrdiff_t>(std::min(n, symbols_.size()))});
    }

    bool starts_with(const Address& other) const {
        return other.size() <= size() && std::equal(other.symbols_.begin(), other.symbols_.end(), symbols_.begin());
    }

    std::string to_string() const { return detail::symbols_to_string(symbols_, alphabet_.total); }

    friend bool operator==(const Address& a, const Address& b) {
        return a.alphabet_ == b.alphabet_ && a.symbols_ == b.symbols_;
    }
    /// Lexicographic; a proper prefix sorts first.
    friend std::strong_ordering operator<=>(const Address& a, const Address& b) {
        return a.symbols_ <=> b.symbols_;
    }

private:
    static int parse_number(std::string_view token) {
        if (token.empty()) {
            throw InvalidAddress("empty symbol in dotted address");
        }
        int value = 0;
        for (char ch : token) {
            if (ch < '0' || ch > '9') {
                throw InvalidAddress("address contains non-digit '" + std::string(1, ch) + "'");
            }
            value = value * 10 + (ch - '0');
            if (value > 1'000'000) {
                throw InvalidAddress("symbol too large");
            }
        }
        return value;
    }

    Alphabet alphabet_;
    std::vector<int> symbols_;
};

/// Eventually periodic infinite code over the kept symbols, stored in canonical
/// form (primitive period, shortest preperiod) so that equality is symbolic.
class Code {
public:
    Code(int kept, std::vector<int> preperiod, std::vector<int> period)
        : kept_(kept), preperiod_(std::move(preperiod)), period_(std::move(period)) {
        if (kept_ < 1) {
            throw InvalidAddress("code alphabet must be nonempty");
        }
        if (period_.empty()) {
            throw InvalidAddress("code period must be nonempty");
        }
        for (const auto* part : {&preperiod_, &period_}) {
            for (int s : *part) {
                if (s < 1 || s > kept_) {
                    throw InvalidAddress("code symbol " + std::to_string(s) + " outside 1.." + std::to_string(kept_));
                }
            }
        }
        canonicalize();
    }

    int kept() const { return kept_; }
    std::span<const int> preperiod() const { return preperiod_; }
    std::span<const int> period() const { return period_; }

    /// Zero-based symbol access.
    int symbol(std::size_t k) const {
        if (k < preperiod_.size()) {
            return preperiod_[k];
        }
        return period_[(k - preperiod_.size()) % period_.size()];
    }

    std::vector<int> word(std::size_t n) const {
        std::vector<int> out(n);
        for (std::size_t k = 0; k < n; ++k) {
            out[k] = symbol(k);
        }
        return out;
    }

    /// First n symbols as an address over `alphabet` (whose kept size must match).
    Address prefix(std::size_t n, Alphabet alphabet) const { return Address(alphabet, word(n)); }

    Code shift(std::size_t k = 1) const {
        if (k <= preperiod_.size()) {
            return Code(kept_, {preperiod_.begin() + static_cast<std::ptrdiff_t>(k), preperiod_.end()}, period_);
        }
        const std::size_t r = (k - preperiod_.size()) % period_.size();
        std::vector<int> rotated(period_.begin() + static_cast<std::ptrdiff_t>(r), period_.end());
        rotated.insert(rotated.end(), period_.begin(), period_.begin() + static_cast<std::ptrdiff_t>(r));
        return Code(kept_, {}, std::move(rotated));
    }

    /// "2(1)" for 2111..., "(12)" for 1212...
    std::string to_string() const {
        const int total = kept_;
        return detail::symbols_to_string(preperiod_, total) + "(" + detail::symbols_to_string(period_, total) + ")";
    }

    friend bool operator==(const Code&, const Code&) = default;

private:
    void canonicalize() {
        const std::size_t n = period_.size();
        for (std::size_t p = 1; p < n; ++p) {
            if (n % p != 0) {
                continue;
            }
            bool repeats = true;
            for (std::size_t i = p; i < n && repeats; ++i) {
                repeats = period_[i] == period_[i - p];
            }
            if (repeats) {
                period_.resize(p);
                break;
            }
        }
        while (!preperiod_.empty() && preperiod_.back() == period_.back()) {
            preperiod_.pop_back();
            std::rotate(period_.rbegin(), period_.rbegin() + 1, period_.rend());
        }
    }

    int kept_;
    std::vector<int> preperiod_;
    std::vector<int> period_;
};

/// All codes sharing a fixed kept prefix.
class Cylinder {
public:
    explicit Cylinder(Address prefix) : prefix_(std::move(prefix)) {
        for (int s : prefix_.symbols()) {
            if (s > prefix_.alphabet().kept) {
                throw InvalidAddress("cylinder prefix " + prefix_.to_string() + " is not a kept address");
            }
        }
    }

    const Address& prefix() const { return prefix_; }

private:
    Address prefix_;
};

inline Code shift(const Code& c) { return c.shift(1); }

inline bool in_cylinder(const Code& c, const Cylinder& cyl) {
    const auto& p = cyl.prefix();
    if (p.alphabet().kept != c.kept()) {
        throw InvalidAddress("code and cylinder alphabets differ");
    }
    for (std::size_t k = 0; k < p.size(); ++k) {
        if (c.symbol(k) != p[k]) {
            return false;
        }
    }
    return true;
}

/// All kept words of length n in lexicographic order.
inline std::vector<Address> enumerate_words(Alphabet alphabet, std::size_t n, const Limits& limits = {}) {
    detail::check_alphabet(alphabet);
    const std::size_t m = static_cast<std::size_t>(alphabet.kept);
    const std::size_t count = saturating_pow(m, n);
    require_within_cap(count, limits.words, "word enumeration");
    std::vector<Address> out;
    out.reserve(count);
    std::vector<int> word(n, 1);
    for (std::size_t idx = 0; idx < count; ++idx) {
        out.emplace_back(alphabet, word);
        for (std::size_t pos = n; pos-- > 0;) {
            if (word[pos] < alphabet.kept) {
                ++word[pos];
                break;
            }
            word[pos] = 1;
        }
    }
    return out;
}

/// The code w w w ...
inline Code periodic_code(const Address& w) {
    if (w.empty()) {
        throw InvalidAddress("periodic code needs a nonempty word");
    }
    for (int s : w.symbols()) {
        if (s > w.alphabet().kept) {
            throw InvalidAddress("periodic code word must use kept symbols");
        }
    }
    return Code(w.alphabet().kept, {}, {w.symbols().begin(), w.symbols().end()});
}

/// Concatenation of every kept word of lengths 1..n in lexicographic order.
/// Any code extending it visits every cylinder of depth <= n under the shift.
inline Address transitive_prefix(Alphabet alphabet, std::size_t n, const Limits& limits = {}) {
    detail::check_alphabet(alphabet);
    if (alphabet.kept < 2 || n < 1) {
        throw InvalidAddress("transitive prefix needs kept >= 2 and n >= 1");
    }
    const std::size_t m = static_cast<std::size_t>(alphabet.kept);
    std::size_t length = 0;
    for (std::size_t k = 1; k <= n; ++k) {
        const std::size_t words = saturating_pow(m, k);
        require_within_cap(words, limits.words, "transitive prefix");
        length += words * k;
        require_within_cap(length, limits.words, "transitive prefix length");
    }
    std::vector<int> out;
    out.reserve(length);
    const Alphabet kept_only{alphabet.kept, alphabet.kept};
    for (std::size_t k = 1; k <= n; ++k) {
        for (const auto& w : enumerate_words(kept_only, k, limits)) {
            out.insert(out.end(), w.symbols().begin(), w.symbols().end());
        }
    }
    // Interior symbols are kept, so the word is a valid address over the full alphabet.
    return Address(alphabet, std::move(out));
}

}  // namespace afrac
