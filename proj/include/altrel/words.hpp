#ifndef ALTREL_WORDS_HPP
#define ALTREL_WORDS_HPP

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace altrel {

// A letter is a tuple of coordinates; plain alphabets use arity 1.
using Letter = std::vector<int>;

/// Word over an alphabet extended by the variable symbol v. A cell holding
/// nullopt is an occurrence of v.
class Word {
public:
    using Cell = std::optional<Letter>;

    Word() = default;
    explicit Word(std::vector<Cell> cells) : cells_(std::move(cells)) {}

    static Word variable() { return Word({Cell{}}); }

    size_t size() const { return cells_.size(); }
    bool empty() const { return cells_.empty(); }
    const Cell& at(size_t i) const { return cells_.at(i); }
    const std::vector<Cell>& cells() const { return cells_; }

    bool has_variable() const;
    bool variable_free() const { return !has_variable(); }
    bool left_variable() const { return !cells_.empty() && !cells_[0].has_value(); }

    void push_letter(Letter l) { cells_.emplace_back(std::move(l)); }
    void push_variable() { cells_.emplace_back(std::nullopt); }

    Word concat(const Word& other) const;

    // x[lambda]: replace every occurrence of v. Substituting the variable
    // itself (nullopt) is the identity.
    Word substitute(const Cell& lambda) const;

    bool operator==(const Word& other) const { return cells_ == other.cells_; }
    // Lexicographic; v sorts before every letter.
    std::strong_ordering operator<=>(const Word& other) const;

    uint64_t hash() const;

    // Compact digit string ("01v1") when every letter has arity 1 and
    // single-digit coordinates; dot-joined otherwise ("(0,1).v.(2,0)").
    // The empty word prints as "".
    std::string to_text() const;
    static Word parse_text(const std::string& text);

private:
    std::vector<Cell> cells_;
};

struct WordHash {
    size_t operator()(const Word& w) const { return static_cast<size_t>(w.hash()); }
};

/// Alphabet with optional grading. levels[i] is the cumulative set of
/// letters usable for the i-th graded substitution; plain alphabets carry a
/// single level. Queries past the last provided level clamp to it for plain
/// alphabets and fail for graded ones.
class Alphabet {
public:
    Alphabet() = default;

    // All base^arity tuples, lexicographic.
    static Alphabet tuples(int base, int arity);

    static Alphabet plain(std::vector<Letter> letters);

    // Cumulative chain; each level must extend the previous one.
    static Alphabet graded(std::vector<std::vector<Letter>> levels);

    bool graded_mode() const { return graded_; }
    int levels() const { return static_cast<int>(levels_.size()); }

    const std::vector<Letter>& level(int i) const;
    const std::vector<Letter>& last_level() const { return levels_.back(); }

    bool contains(const Letter& l, int level_index) const;

    std::string to_json() const;
    static Alphabet from_json(const std::string& json_text);

private:
    std::vector<std::vector<Letter>> levels_;
    bool graded_ = false;
};

enum class SemigroupMode { plain, graded };

/// Truncation of an infinite sequence of left-variable words.
using VarSequence = std::vector<Word>;

// All substitution products x_{n_0}[l_0]^...^x_{n_k}[l_k] with at least one
// factor and k <= max_terms. Plain mode draws indices as arbitrary
// increasing subsets and letters from the full alphabet; graded mode forces
// indices 0..k and the i-th letter from level i. Sorted and deduplicated.
std::vector<Word> enumerate_semigroup(const VarSequence& X, const Alphabet& L,
                                      SemigroupMode mode, int max_terms);

using Colouring = std::function<int(const Word&)>;

// Walks w0 together with every translate element w0^s (|w0^s| <= len_budget)
// in a fixed deterministic order. The prefix w0 itself is part of the
// certified set: it is the image of the shortest end-extension in the
// coding application. Returns false if fn aborts the walk.
bool for_each_translate(const Word& w0, const VarSequence& X, const Alphabet& L,
                        SemigroupMode mode, size_t len_budget,
                        const std::function<bool(const Word&)>& fn);

// Membership of w in { w0 } union w0^[X]_L (or the graded variant),
// ignoring the length budget.
bool translate_contains(const Word& w0, const VarSequence& X, const Alphabet& L,
                        SemigroupMode mode, const Word& w);

struct MonochromaticCheck {
    bool ok = true;
    std::optional<Word> counterexample;
    int colour = -1;
    long long words_checked = 0;
};

// Enumerates the translate up to the budget and reports the first
// off-colour word, if any.
MonochromaticCheck verify_monochromatic(const Word& w0, const VarSequence& X,
                                        const Alphabet& L, SemigroupMode mode,
                                        size_t len_budget, const Colouring& colouring);

}  // namespace altrel

#endif
