#include "altrel/words.hpp"

#include <algorithm>
#include <set>

#include "altrel/util.hpp"
#include "json.hpp"

namespace altrel {

bool Word::has_variable() const {
    for (const auto& c : cells_)
        if (!c)
            return true;
    return false;
}

Word Word::concat(const Word& other) const {
    std::vector<Cell> cells = cells_;
    cells.insert(cells.end(), other.cells_.begin(), other.cells_.end());
    return Word(std::move(cells));
}

Word Word::substitute(const Cell& lambda) const {
    if (!lambda)
        return *this;
    std::vector<Cell> cells = cells_;
    for (auto& c : cells)
        if (!c)
            c = lambda;
    return Word(std::move(cells));
}

std::strong_ordering Word::operator<=>(const Word& other) const {
    size_t n = std::min(cells_.size(), other.cells_.size());
    for (size_t i = 0; i < n; ++i) {
        const Cell& a = cells_[i];
        const Cell& b = other.cells_[i];
        if (a.has_value() != b.has_value())
            return a.has_value() ? std::strong_ordering::greater : std::strong_ordering::less;
        if (a && b) {
            if (*a != *b)
                return *a < *b ? std::strong_ordering::less : std::strong_ordering::greater;
        }
    }
    return cells_.size() <=> other.cells_.size();
}

uint64_t Word::hash() const {
    uint64_t h = fnv1a64_init();
    for (const auto& c : cells_) {
        if (!c) {
            h = fnv1a64(h, 0x7fffffffffffffffull);
        } else {
            h = fnv1a64(h, c->size());
            h = fnv1a64_span(h, *c);
        }
    }
    return h;
}

std::string Word::to_text() const {
    bool compact = true;
    for (const auto& c : cells_)
        if (c && (c->size() != 1 || (*c)[0] < 0 || (*c)[0] > 9))
            compact = false;
    std::string out;
    if (compact) {
        for (const auto& c : cells_)
            out += c ? static_cast<char>('0' + (*c)[0]) : 'v';
        return out;
    }
    for (size_t i = 0; i < cells_.size(); ++i) {
        if (i) out += '.';
        const auto& c = cells_[i];
        if (!c) {
            out += 'v';
        } else if (c->size() == 1) {
            out += std::to_string((*c)[0]);
        } else {
            out += '(';
            for (size_t j = 0; j < c->size(); ++j) {
                if (j) out += ',';
                out += std::to_string((*c)[j]);
            }
            out += ')';
        }
    }
    return out;
}

Word Word::parse_text(const std::string& text) {
    std::vector<Cell> cells;
    if (text.empty())
        return Word();
    bool dotted = text.find('.') != std::string::npos || text.find('(') != std::string::npos ||
                  text.find(',') != std::string::npos;
    if (!dotted) {
        for (char ch : text) {
            if (ch == 'v') {
                cells.emplace_back(std::nullopt);
            } else if (ch >= '0' && ch <= '9') {
                cells.emplace_back(Letter{ch - '0'});
            } else {
                throw Error(std::string("word: unexpected character '") + ch + "'");
            }
        }
        return Word(std::move(cells));
    }
    size_t pos = 0;
    while (pos < text.size()) {
        size_t end = text.find('.', pos);
        std::string tok = text.substr(pos, end == std::string::npos ? end : end - pos);
        if (tok == "v") {
            cells.emplace_back(std::nullopt);
        } else if (!tok.empty() && tok[0] == '(') {
            if (tok.back() != ')')
                throw Error("word: unterminated tuple '" + tok + "'");
            Letter l;
            std::string inner = tok.substr(1, tok.size() - 2);
            size_t p = 0;
            while (p < inner.size()) {
                size_t q = inner.find(',', p);
                std::string num = inner.substr(p, q == std::string::npos ? q : q - p);
                l.push_back(std::stoi(num));
                if (q == std::string::npos) break;
                p = q + 1;
            }
            cells.emplace_back(std::move(l));
        } else {
            cells.emplace_back(Letter{std::stoi(tok)});
        }
        if (end == std::string::npos) break;
        pos = end + 1;
    }
    return Word(std::move(cells));
}

// --- Alphabet -----------------------------------------------------------

Alphabet Alphabet::tuples(int base, int arity) {
    if (base < 1 || arity < 1)
        throw Error("alphabet: base and arity must be >= 1");
    double size = 1;
    for (int i = 0; i < arity; ++i) {
        size *= base;
        if (size > 1e6)
            throw Error("alphabet: base^arity too large to materialize");
    }
    std::vector<Letter> letters;
    Letter cur(static_cast<size_t>(arity), 0);
    while (true) {
        letters.push_back(cur);
        int j = arity - 1;
        while (j >= 0 && cur[static_cast<size_t>(j)] == base - 1) {
            cur[static_cast<size_t>(j)] = 0;
            --j;
        }
        if (j < 0) break;
        ++cur[static_cast<size_t>(j)];
    }
    return plain(std::move(letters));
}

Alphabet Alphabet::plain(std::vector<Letter> letters) {
    if (letters.empty())
        throw Error("alphabet: empty letter set");
    Alphabet a;
    a.levels_.push_back(std::move(letters));
    a.graded_ = false;
    return a;
}

Alphabet Alphabet::graded(std::vector<std::vector<Letter>> levels) {
    if (levels.empty())
        throw Error("alphabet: graded chain needs at least one level");
    for (size_t i = 1; i < levels.size(); ++i)
        for (const auto& l : levels[i - 1])
            if (std::find(levels[i].begin(), levels[i].end(), l) == levels[i].end())
                throw Error("alphabet: graded levels must form an increasing chain");
    Alphabet a;
    a.levels_ = std::move(levels);
    a.graded_ = true;
    return a;
}

const std::vector<Letter>& Alphabet::level(int i) const {
    if (i < 0)
        throw Error("alphabet: negative level");
    if (!graded_)
        return levels_[0];
    if (i >= static_cast<int>(levels_.size()))
        throw Error("alphabet: level " + std::to_string(i) + " not materialized");
    return levels_[static_cast<size_t>(i)];
}

bool Alphabet::contains(const Letter& l, int level_index) const {
    const auto& lv = level(level_index);
    return std::find(lv.begin(), lv.end(), l) != lv.end();
}

std::string Alphabet::to_json() const {
    nlohmann::json j;
    j["graded"] = graded_;
    nlohmann::json lv = nlohmann::json::array();
    for (const auto& level : levels_) {
        nlohmann::json ls = nlohmann::json::array();
        for (const auto& l : level)
            ls.push_back(l);
        lv.push_back(ls);
    }
    j["levels"] = lv;
    return j.dump();
}

Alphabet Alphabet::from_json(const std::string& json_text) {
    nlohmann::json j = nlohmann::json::parse(json_text);
    if (j.contains("base") && j.contains("arity"))
        return tuples(j.at("base").get<int>(), j.at("arity").get<int>());
    std::vector<std::vector<Letter>> levels;
    for (const auto& lv : j.at("levels"))
        levels.push_back(lv.get<std::vector<Letter>>());
    bool graded_flag = j.value("graded", levels.size() > 1);
    if (!graded_flag && levels.size() == 1)
        return plain(levels[0]);
    return graded(std::move(levels));
}

// --- semigroup enumeration ----------------------------------------------

namespace {

// Recursively extend the product over chosen factor indices.
void enumerate_rec(const VarSequence& X, const Alphabet& L, SemigroupMode mode,
                   int max_terms, size_t next_index, int terms_used, const Word& acc,
                   size_t len_budget, bool budgeted, const std::function<bool(const Word&)>& emit,
                   bool& keep_going) {
    if (!keep_going)
        return;
    for (size_t i = next_index; i < X.size(); ++i) {
        if (mode == SemigroupMode::graded && i != next_index)
            break;  // graded products use consecutive indices from zero
        int level = terms_used;  // position in the product
        const std::vector<Letter>& letters =
            mode == SemigroupMode::graded ? L.level(level) : L.level(0);
        for (const auto& lambda : letters) {
            Word factor = X[i].substitute(Word::Cell(lambda));
            Word next = acc.concat(factor);
            if (budgeted && next.size() > len_budget)
                continue;
            if (!emit(next)) {
                keep_going = false;
                return;
            }
            if (terms_used < max_terms)
                enumerate_rec(X, L, mode, max_terms, i + 1, terms_used + 1, next, len_budget,
                              budgeted, emit, keep_going);
            if (!keep_going)
                return;
        }
    }
}

}  // namespace

std::vector<Word> enumerate_semigroup(const VarSequence& X, const Alphabet& L,
                                      SemigroupMode mode, int max_terms) {
    if (mode == SemigroupMode::plain && L.graded_mode())
        throw Error("enumerate_semigroup: plain mode needs a finite alphabet");
    for (const auto& x : X)
        if (!x.left_variable())
            throw Error("enumerate_semigroup: every generator must be left-variable");
    std::set<Word> out;
    bool keep_going = true;
    enumerate_rec(X, L, mode, max_terms, 0, 0, Word(), 0, false,
                  [&](const Word& w) {
                      out.insert(w);
                      return true;
                  },
                  keep_going);
    return std::vector<Word>(out.begin(), out.end());
}

bool for_each_translate(const Word& w0, const VarSequence& X, const Alphabet& L,
                        SemigroupMode mode, size_t len_budget,
                        const std::function<bool(const Word&)>& fn) {
    if (w0.size() > len_budget)
        return true;  // nothing within budget
    if (!fn(w0))
        return false;
    bool keep_going = true;
    enumerate_rec(X, L, mode, static_cast<int>(X.size()), 0, 0, w0, len_budget, true, fn,
                  keep_going);
    return keep_going;
}

namespace {

bool match_rec(const VarSequence& X, const Alphabet& L, SemigroupMode mode, const Word& w,
               size_t pos, size_t next_index, int terms_used) {
    if (pos == w.size())
        return true;
    for (size_t i = next_index; i < X.size(); ++i) {
        if (mode == SemigroupMode::graded && i != next_index)
            break;
        const std::vector<Letter>& letters =
            mode == SemigroupMode::graded ? L.level(terms_used) : L.level(0);
        if (pos + X[i].size() > w.size())
            continue;
        for (const auto& lambda : letters) {
            Word factor = X[i].substitute(Word::Cell(lambda));
            bool fits = true;
            for (size_t j = 0; j < factor.size(); ++j)
                if (!(factor.at(j) == w.at(pos + j))) {
                    fits = false;
                    break;
                }
            if (fits && match_rec(X, L, mode, w, pos + factor.size(), i + 1, terms_used + 1))
                return true;
        }
    }
    return false;
}

}  // namespace

bool translate_contains(const Word& w0, const VarSequence& X, const Alphabet& L,
                        SemigroupMode mode, const Word& w) {
    if (w.size() < w0.size())
        return false;
    for (size_t i = 0; i < w0.size(); ++i)
        if (!(w.at(i) == w0.at(i)))
            return false;
    return match_rec(X, L, mode, w, w0.size(), 0, 0);
}

MonochromaticCheck verify_monochromatic(const Word& w0, const VarSequence& X,
                                        const Alphabet& L, SemigroupMode mode,
                                        size_t len_budget, const Colouring& colouring) {
    MonochromaticCheck result;
    bool first = true;
    for_each_translate(w0, X, L, mode, len_budget, [&](const Word& w) {
        ++result.words_checked;
        int c = colouring(w);
        if (first) {
            result.colour = c;
            first = false;
        } else if (c != result.colour) {
            result.ok = false;
            result.counterexample = w;
            return false;
        }
        return true;
    });
    return result;
}

}  // namespace altrel
