#include "diskzeta/words.hpp"

#include <algorithm>
#include <stdexcept>

namespace diskzeta {

Word::Word(std::string symbols) : symbols_(std::move(symbols)) {
    if (symbols_.empty())
        throw std::invalid_argument("word must be nonempty");
    for (char c : symbols_)
        if (c != '0' && c != '1')
            throw std::invalid_argument("word must use the binary alphabet {0,1}; got \"" +
                                        symbols_ + "\"");
}

int Word::count0() const {
    return static_cast<int>(std::count(symbols_.begin(), symbols_.end(), '0'));
}

bool Word::prime() const {
    const int n = length();
    for (int d = 1; d < n; ++d) {
        if (n % d != 0) continue;
        bool periodic = true;
        for (int i = d; i < n && periodic; ++i)
            periodic = symbols_[static_cast<std::size_t>(i)] ==
                       symbols_[static_cast<std::size_t>(i - d)];
        if (periodic) return false;
    }
    return true;
}

bool Word::canonical() const {
    const int n = length();
    const std::string doubled = symbols_ + symbols_;
    for (int s = 1; s < n; ++s)
        if (doubled.compare(static_cast<std::size_t>(s), static_cast<std::size_t>(n), symbols_) < 0)
            return false;
    return true;
}

std::vector<Word> enumerate_words(int max_len) {
    if (max_len < 1)
        throw std::invalid_argument("max_len must be >= 1");
    // Duval's algorithm: generates all binary Lyndon words of length <= max_len
    // in lexicographic order.
    std::vector<std::string> lyndon;
    std::string w = "0";
    while (!w.empty()) {
        lyndon.push_back(w);
        while (static_cast<int>(w.size()) < max_len)
            w.push_back(w[w.size() % lyndon.back().size()]);
        while (!w.empty() && w.back() == '1')
            w.pop_back();
        if (!w.empty())
            w.back() = '1';
    }
    std::sort(lyndon.begin(), lyndon.end(), [](const std::string& a, const std::string& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return a < b;
    });
    std::vector<Word> out;
    out.reserve(lyndon.size());
    for (std::string& s : lyndon)
        out.emplace_back(std::move(s));
    return out;
}

} // namespace diskzeta
