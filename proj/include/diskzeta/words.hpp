#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace diskzeta {

/// A word over the binary alphabet {0, 1} encoding a reduced three-disk orbit:
/// symbol 0 = the next disk is the previous one again (backscatter), symbol
/// 1 = the next disk is the third one (forward scatter).
class Word {
public:
    /// Validates the alphabet; throws std::invalid_argument on anything but
    /// a nonempty string of '0'/'1' characters.
    explicit Word(std::string symbols);

    int length() const { return static_cast<int>(symbols_.size()); }
    int count0() const;
    int count1() const { return length() - count0(); }
    char symbol(int i) const { return symbols_[static_cast<std::size_t>(i)]; }
    const std::string& str() const { return symbols_; }

    /// True iff the word is not a power of a strictly shorter word.
    bool prime() const;
    /// True iff the word is lexicographically minimal among its rotations.
    bool canonical() const;

    friend bool operator==(const Word& a, const Word& b) { return a.symbols_ == b.symbols_; }

private:
    std::string symbols_;
};

/// All prime canonical words of length 1..max_len, sorted by (length, lex).
/// These are exactly the binary Lyndon words up to max_len.
std::vector<Word> enumerate_words(int max_len);

} // namespace diskzeta
