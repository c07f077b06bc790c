#ifndef ALTREL_PARTITION_HPP
#define ALTREL_PARTITION_HPP

#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "altrel/eqrel.hpp"

namespace altrel {

// Ruler sequence: 2-adic valuation of k+1 (OEIS A007814 shifted to k+1).
int sigma(long long k);

/// Partition of omega into infinite blocks P_0, P_1, ... with
/// min P_i < min P_j for i < j. Finite partitions have num_blocks() blocks;
/// infinite partitions report nullopt.
class Partition {
public:
    Partition() = default;

    // Residue classes mod l: P_i = { x : x = i (mod l) }.
    static Partition mod(int l);

    // Dyadic ruler partition: P_q = { x : sigma(x) = q }.
    static Partition dyadic();

    // Custom partition from a classifier; enumerate/rank are derived by
    // scanning unless provided. Caller must respect the block invariants.
    static Partition custom(std::string name, std::optional<int> blocks,
                            std::function<int(int)> classify);

    // Parses the CLI spec strings "mod:l" and "dyadic".
    static Partition parse(const std::string& spec);

    bool finite() const { return num_blocks_.has_value(); }
    std::optional<int> num_blocks() const { return num_blocks_; }

    int block_of(int x) const;                 // theta
    int rank_within(int x) const;              // psi
    int element(int block, int rank) const;    // rank-th element of P_block

    // Block a minimal representative with index k must land in.
    int pattern_block(long long k) const;

    const std::string& name() const { return name_; }

private:
    std::string name_;
    std::optional<int> num_blocks_;
    std::function<int(int)> classify_;
    std::function<int(int)> rank_;             // may be empty: derived by scan
    std::function<int(int, int)> element_;     // may be empty: derived by scan
};

/// Block-membership constraint: I_n is the set of blocks whose elements a
/// P_n-class may contain. Always satisfies n in I_n. legal_join answers
/// whether a whole class headed in src_block may be absorbed into a class
/// headed in tgt_block without leaving the space.
class ConstraintSeq {
public:
    ConstraintSeq() = default;

    // I_n = { m : m >= n }; this is the plain containment condition on
    // classes for finite partitions, and the identity-bijection instance
    // for infinite ones.
    static ConstraintSeq geq();

    // I_n = omega: vacuous.
    static ConstraintSeq all();

    // I_n = { m : key(m) >= key(n) } for an arbitrary total order key.
    static ConstraintSeq from_key(std::string name, std::function<bool(int, int)> key_geq);

    bool contains(int n, int m) const;  // m in I_n
    bool legal_join(int src_block, int tgt_block) const;

    const std::string& name() const { return name_; }

private:
    std::string name_;
    // ge_(a, b): key(a) >= key(b)
    std::function<bool(int, int)> ge_;
};

struct Violation {
    long long index = -1;   // failing k, or failing element
    int expected = -1;      // expected block
    int actual = -1;        // actual block
    std::string detail;
};

using ValidationResult = std::optional<Violation>;  // nullopt = ok

// Checks that the minimal representatives follow the partition pattern:
// block_of(p_k) = k mod l for finite partitions, sigma(k) for infinite
// ones, for all k < depth.
ValidationResult validate_alternating(const EqRelStream& E, const Partition& P, int depth);

// Checks the class containment condition on all elements below p_depth(E):
// an element x lying in a class headed in block n must itself lie in a
// block belonging to I_n.
ValidationResult validate_class_constraint(const EqRelStream& E, const Partition& P,
                                           const ConstraintSeq& I, int depth);

// Whether a finite relation is an approximation of some space member: its
// representatives follow the pattern, its domain bound sits in the block
// the next representative needs, and (when constrained) every element lies
// in a block its class head permits.
ValidationResult validate_approximation(const FiniteEqRel& a, const Partition& P,
                                        const std::optional<ConstraintSeq>& I);

// Greedy canonical member of the space: scanning omega in order, an element
// becomes the next representative exactly when its block matches the
// pattern; otherwise it joins the earliest permitted class (the class of 0
// when unconstrained). Throws if some element has no permitted class.
EqRelStream canonical_finest(const Partition& P, const std::optional<ConstraintSeq>& I);

}  // namespace altrel

#endif
