#ifndef ALTREL_CODING_HPP
#define ALTREL_CODING_HPP

#include <optional>
#include <vector>

#include "altrel/eqrel.hpp"
#include "altrel/partition.hpp"
#include "altrel/words.hpp"

namespace altrel {

/// Context for coding end-extensions of a = r_n(E) as words. For a finite
/// partition into l blocks the alphabet is the (n+1)^l tuples and every
/// extension consumes classes in blocks of l. For an infinite partition the
/// blocks have sizes t_0, t_1, ... given by the recurrence
/// t_0 = 2^(q_0+1), t_i = t_{i-1} * 2^(q_i+1), where q_i is the block of
/// the (n+1+i)-th representative, and the alphabet is graded by arity.
class CodingContext {
public:
    // constraint: nullopt for the unconstrained space; geq() realizes the
    // plain containment condition; anything else is the sequence variant.
    CodingContext(EqRelStream E, int n, Partition P, std::optional<ConstraintSeq> constraint);

    const EqRelStream& stream() const { return E_; }
    const FiniteEqRel& base_approx() const { return a_; }  // a = r_n(E)
    int n() const { return n_; }
    const Partition& partition() const { return P_; }
    const std::optional<ConstraintSeq>& constraint() const { return constraint_; }
    bool constrained() const { return constraint_.has_value(); }

    bool finite_path() const { return P_.finite(); }
    int block_size() const;  // l for the finite path, t_0 for the infinite

    // Infinite path data.
    int q(int i) const;                 // block of p_{n+1+i}(E)
    unsigned long long t(int i) const;  // t_i
    unsigned long long m_factor(int i) const;  // m_i with t_i = t_0 * m_i

    // Letter alphabet. Finite path: all (n+1)^l tuples. Infinite path: a
    // graded chain with `levels` levels; throws if a level is too large to
    // materialize.
    Alphabet alphabet(int levels = 1) const;

    // Whether the class of p_{src_rep_index}(E) may be absorbed into the
    // class of p_{tgt_rep_index}(E) without leaving the space.
    bool can_join(int src_rep_index, int tgt_rep_index) const;

private:
    EqRelStream E_;
    int n_;
    Partition P_;
    std::optional<ConstraintSeq> constraint_;
    FiniteEqRel a_;
    mutable std::vector<unsigned long long> t_cache_;
};

// Code an end-extension b of a (joining whole classes of E downward, one
// new class headed by p_n(E)) as a word over the context alphabet.
Word encode_extension(const CodingContext& ctx, const FiniteEqRel& b);

// Unique end-extension determined by a word; in constrained contexts
// illegal joins are first redirected to class 0 (the tilde rewriting).
FiniteEqRel decode_word(const CodingContext& ctx, const Word& w);

// Letter-coordinate rewriting of the constrained path: coordinates whose
// join would leave the space become 0; variable cells are preserved.
// Finite-path positions are cell-indexed as written.
Word tilde_reduce(const CodingContext& ctx, const Word& w);

// Split a letter of arity t_0 * m into a word of m arity-t_0 letters.
Word flatten_letter(const CodingContext& ctx, const Letter& l);

struct ExpandedCertificate {
    Word u0;                 // variable-free, arity-1 letters over {0..n}
    std::vector<Word> ys;    // variable words, arity-1 letters
};

// Flatten a search certificate (w0, X) to single-coordinate words, placing
// each variable inside its expansion block: at offset i mod l on the finite
// path, and at the least offset whose representative block matches q_i on
// the infinite path.
ExpandedCertificate expand_certificate(const CodingContext& ctx, const Word& w0,
                                       const VarSequence& X);

// The coarsening F read off an expanded certificate: letter k at place i of
// u0^y_0^y_1^... joins p_{n+1+i}(E) to p_k(E); the variable places of one
// y_j form a single new class. Beyond the truncation the stream continues
// with the canonical greedy tail. Constrained mode applies the tilde
// rewriting to the letters first.
EqRelStream build_F(const CodingContext& ctx, const ExpandedCertificate& cert, bool constrained);

// Member of [a, base]: the classes of a followed by the canonical greedy
// tail over the remaining classes of base. Requires dom(a) = p_d(base) for
// some d with a coarser than r_d(base).
EqRelStream extend_greedily(const FiniteEqRel& a, const EqRelStream& base, const Partition& P,
                            const std::optional<ConstraintSeq>& constraint);

// All end-extensions of a inside E with exactly `letters` alphabet letters
// worth of joined classes, enumerated independently of the word coding (the
// oracle route: every join map is spelled out directly).
std::vector<FiniteEqRel> enumerate_end_extensions(const CodingContext& ctx, int letters);

}  // namespace altrel

#endif
