#ifndef ALTREL_HJ_HPP
#define ALTREL_HJ_HPP

#include <optional>
#include <string>

#include "altrel/words.hpp"

namespace altrel {

// Brute-force search for a monochromatic combinatorial line in L^n: a
// variable word x of length n with { x[l] : l in L } all one colour.
// Templates are scanned in lexicographic order with v sorting after the
// letters, so the result is deterministic.
std::optional<Word> hj_line_search(const Alphabet& L, int n, const Colouring& colouring);

struct LvCertificate {
    Word w0;
    VarSequence X;
    int colour = 0;
};

struct LvSearchStats {
    long long candidates_tried = 0;
    long long words_coloured = 0;
    size_t max_total_len = 0;
};

struct LvSearchResult {
    std::optional<LvCertificate> certificate;
    LvSearchStats stats;
    bool exhausted() const { return !certificate.has_value(); }
};

/// Bounded left-variable Hales-Jewett search: iterative deepening over the
/// total description length |w0| + sum |x_i| up to len_budget, looking for a
/// variable-free w0 and k left-variable words whose translate (including w0)
/// is monochromatic for every element of length <= len_budget. Candidates
/// are enumerated in a fixed order: larger |w0| first within each total,
/// then letter assignments lexicographically, so certificates are
/// reproducible.
LvSearchResult lv_hj_bounded_search(const Alphabet& L, const Colouring& colouring, int k,
                                    size_t len_budget);

// Built-in colourings for the CLI: const:<c>, len-mod:<m>, first-letter,
// letter-count:<letter>:<m>.
Colouring parse_colouring(const std::string& spec);

}  // namespace altrel

#endif
