#include "altrel/hj.hpp"

#include <unordered_map>

#include "altrel/util.hpp"

namespace altrel {

std::optional<Word> hj_line_search(const Alphabet& L, int n, const Colouring& colouring) {
    if (n < 1)
        throw Error("hj_line_search: word length must be >= 1");
    const auto& letters = L.level(0);
    int k = static_cast<int>(letters.size());
    // Cells are digits in base k+1; digit k is the variable.
    std::vector<int> digits(static_cast<size_t>(n), 0);
    while (true) {
        bool has_var = false;
        for (int d : digits)
            if (d == k)
                has_var = true;
        if (has_var) {
            Word line;
            for (int d : digits) {
                if (d == k)
                    line.push_variable();
                else
                    line.push_letter(letters[static_cast<size_t>(d)]);
            }
            int colour = -1;
            bool mono = true;
            for (const auto& lambda : letters) {
                int c = colouring(line.substitute(Word::Cell(lambda)));
                if (colour == -1)
                    colour = c;
                else if (c != colour) {
                    mono = false;
                    break;
                }
            }
            if (mono)
                return line;
        }
        int j = n - 1;
        while (j >= 0 && digits[static_cast<size_t>(j)] == k) {
            digits[static_cast<size_t>(j)] = 0;
            --j;
        }
        if (j < 0)
            break;
        ++digits[static_cast<size_t>(j)];
    }
    return std::nullopt;
}

namespace {

class MemoColouring {
public:
    explicit MemoColouring(const Colouring& fn, LvSearchStats& stats) : fn_(fn), stats_(stats) {}

    int operator()(const Word& w) {
        auto it = memo_.find(w);
        if (it != memo_.end())
            return it->second;
        ++stats_.words_coloured;
        int c = fn_(w);
        memo_.emplace(w, c);
        return c;
    }

private:
    const Colouring& fn_;
    LvSearchStats& stats_;
    std::unordered_map<Word, int, WordHash> memo_;
};

// Odometer step over digit vectors; returns false on wrap-around.
bool next_digits(std::vector<int>& digits, int base) {
    int j = static_cast<int>(digits.size()) - 1;
    while (j >= 0 && digits[static_cast<size_t>(j)] == base - 1) {
        digits[static_cast<size_t>(j)] = 0;
        --j;
    }
    if (j < 0)
        return false;
    ++digits[static_cast<size_t>(j)];
    return true;
}

// Lexicographic successor among compositions of total into k parts >= 1.
bool next_composition(std::vector<size_t>& parts, size_t total) {
    size_t k = parts.size();
    if (k <= 1)
        return false;
    for (size_t j = k - 1; j-- > 0;) {
        size_t used_before = 0;
        for (size_t t = 0; t < j; ++t)
            used_before += parts[t];
        // After incrementing part j, positions j+1..k-1 need at least 1 each.
        if (used_before + parts[j] + 1 + (k - 1 - j) <= total) {
            ++parts[j];
            size_t used = used_before + parts[j];
            for (size_t t = j + 1; t + 1 < k; ++t) {
                parts[t] = 1;
                used += 1;
            }
            parts[k - 1] = total - used;
            return true;
        }
    }
    return false;
}

}  // namespace

LvSearchResult lv_hj_bounded_search(const Alphabet& L, const Colouring& colouring, int k,
                                    size_t len_budget) {
    if (k < 1)
        throw Error("lv_hj_bounded_search: need at least one variable word");
    LvSearchResult result;
    MemoColouring colour(colouring, result.stats);
    Colouring memo = [&colour](const Word& w) { return colour(w); };
    SemigroupMode mode = L.graded_mode() ? SemigroupMode::graded : SemigroupMode::plain;

    for (size_t total = static_cast<size_t>(k); total <= len_budget; ++total) {
        result.stats.max_total_len = total;
        // |w0| descending: prefix-pinning certificates are the common case.
        for (size_t a = total - static_cast<size_t>(k); a + 1 != 0; --a) {
            size_t rest = total - a;
            std::vector<size_t> comp(static_cast<size_t>(k), 1);
            comp[static_cast<size_t>(k) - 1] = rest - (static_cast<size_t>(k) - 1);
            do {
                const auto& w0_letters = L.level(0);
                std::vector<int> w0_digits(a, 0);
                do {
                    Word w0;
                    for (int d : w0_digits)
                        w0.push_letter(w0_letters[static_cast<size_t>(d)]);

                    // Cells after each forced leading v: letters of the
                    // relevant level, then v as the final digit.
                    std::vector<std::vector<int>> x_digits;
                    for (int i = 0; i < k; ++i)
                        x_digits.emplace_back(comp[static_cast<size_t>(i)] - 1, 0);
                    bool x_more = true;
                    while (x_more) {
                        VarSequence X;
                        for (int i = 0; i < k; ++i) {
                            const auto& letters = L.level(mode == SemigroupMode::graded ? i : 0);
                            Word x;
                            x.push_variable();
                            for (int d : x_digits[static_cast<size_t>(i)]) {
                                if (d == static_cast<int>(letters.size()))
                                    x.push_variable();
                                else
                                    x.push_letter(letters[static_cast<size_t>(d)]);
                            }
                            X.push_back(std::move(x));
                        }
                        ++result.stats.candidates_tried;
                        auto check = verify_monochromatic(w0, X, L, mode, len_budget, memo);
                        if (check.ok) {
                            result.certificate = LvCertificate{w0, X, check.colour};
                            return result;
                        }
                        int which = k - 1;
                        while (which >= 0) {
                            const auto& letters = L.level(mode == SemigroupMode::graded ? which : 0);
                            if (next_digits(x_digits[static_cast<size_t>(which)],
                                            static_cast<int>(letters.size()) + 1))
                                break;
                            --which;
                        }
                        x_more = which >= 0;
                    }
                } while (!w0_digits.empty() &&
                         next_digits(w0_digits, static_cast<int>(w0_letters.size())));
            } while (next_composition(comp, rest));
            if (a == 0)
                break;
        }
    }
    return result;
}

Colouring parse_colouring(const std::string& spec) {
    if (spec.rfind("const:", 0) == 0) {
        int c = std::stoi(spec.substr(6));
        return [c](const Word&) { return c; };
    }
    if (spec.rfind("len-mod:", 0) == 0) {
        int m = std::stoi(spec.substr(8));
        if (m < 1)
            throw Error("len-mod: modulus must be >= 1");
        return [m](const Word& w) { return static_cast<int>(w.size()) % m; };
    }
    if (spec == "first-letter") {
        return [](const Word& w) {
            if (w.empty() || !w.at(0))
                return 0;
            return (*w.at(0))[0];
        };
    }
    if (spec.rfind("letter-count:", 0) == 0) {
        std::string rest = spec.substr(13);
        size_t colon = rest.rfind(':');
        if (colon == std::string::npos)
            throw Error("letter-count spec needs letter and modulus");
        Word lw = Word::parse_text(rest.substr(0, colon));
        if (lw.size() != 1 || !lw.at(0))
            throw Error("letter-count: first field must be a single letter");
        Letter target = *lw.at(0);
        int m = std::stoi(rest.substr(colon + 1));
        if (m < 1)
            throw Error("letter-count: modulus must be >= 1");
        return [target, m](const Word& w) {
            int count = 0;
            for (const auto& c : w.cells())
                if (c && *c == target)
                    ++count;
            return count % m;
        };
    }
    throw Error("unknown colouring spec '" + spec + "'");
}

}  // namespace altrel
