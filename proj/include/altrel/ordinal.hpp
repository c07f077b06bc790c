#ifndef ALTREL_ORDINAL_HPP
#define ALTREL_ORDINAL_HPP

#include <optional>
#include <string>

#include "altrel/cnf.hpp"
#include "altrel/eqrel.hpp"
#include "altrel/partition.hpp"

namespace altrel {

/// Element of w*l or of alpha = w*beta: the rank-th element of the copy of
/// omega indexed by `copy` (an integer below l, or an ordinal below beta).
struct OrdinalElem {
    long long rank = 0;
    Cnf copy;

    bool operator==(const OrdinalElem&) const = default;
    // Standard ordinal order: by copy, then by rank inside the copy.
    std::strong_ordering operator<=>(const OrdinalElem& other) const {
        auto c = copy <=> other.copy;
        if (c != std::strong_ordering::equal)
            return c;
        return rank <=> other.rank;
    }

    std::string to_text() const;
    static OrdinalElem parse_text(const std::string& text);
};

/// Which ordinal the blocks of the partition are identified with: the l
/// copies of omega in w*l, or the beta copies in alpha = w*beta laid out by
/// a bijection f : omega -> beta with f(0) = 0.
class OrdinalTarget {
public:
    static OrdinalTarget omega_l(int l);
    static OrdinalTarget alpha(const Cnf& alpha_value, OrdinalBijection f);

    bool is_omega_l() const { return l_ > 0; }
    int l() const { return l_; }
    const Cnf& alpha_value() const { return alpha_; }
    const OrdinalBijection& bijection() const { return f_; }

    Cnf copy_for_block(int block) const;
    int block_for_copy(const Cnf& copy) const;

    std::string name() const;

private:
    int l_ = 0;  // 0 marks the alpha case
    Cnf alpha_;
    Cnf beta_;
    OrdinalBijection f_;
};

// phi(n) = (psi(n), theta(n)) for w*l and (psi(n), f(theta(n))) for alpha:
// the order isomorphism between omega and the target under the diagonal
// enumeration.
OrdinalElem phi(int n, const Partition& P, const OrdinalTarget& target);
int phi_inverse(const OrdinalElem& e, const Partition& P, const OrdinalTarget& target);

/// Equivalence relation on w*l or alpha whose classes are the phi-images of
/// the classes of a backing relation on omega.
class OrdinalEqRel {
public:
    OrdinalEqRel() = default;
    OrdinalEqRel(EqRelStream backing, Partition P, OrdinalTarget target);

    const EqRelStream& backing() const { return backing_; }
    const Partition& partition() const { return P_; }
    const OrdinalTarget& target() const { return target_; }

    OrdinalElem map(int n) const { return phi(n, P_, target_); }
    int unmap(const OrdinalElem& e) const { return phi_inverse(e, P_, target_); }

    OrdinalElem class_of(const OrdinalElem& e) const;
    // k-th minimal representative in the diagonal order.
    OrdinalElem rep(int k) const;
    std::optional<long long> finite_classes() const { return backing_.finite_classes(); }

    OrdinalEqRel coarsened(const JoinSpec& spec) const;
    // Every class of *this is a union of classes of other, checked on the
    // element prefix below the depth-th representative.
    bool is_coarsening_of(const OrdinalEqRel& other, int depth) const;

private:
    EqRelStream backing_;
    Partition P_;
    OrdinalTarget target_;
};

struct OrdinalViolation {
    long long k = -1;
    char condition = '?';  // 'a' or 'b'
    std::string detail;
};
using OrdinalValidation = std::optional<OrdinalViolation>;

// Conditions on the representatives, checked on the probed prefix: (a) the
// diagonal enumeration of the representatives walks the copies in the
// pattern order; (b) diagonal-minimal representatives are also minimal in
// the standard ordinal order. The representatives are recovered from the
// element prefix, not read off the backing stream.
OrdinalValidation validate_ordinal_space(const OrdinalEqRel& E, int depth);

// Wrap a validated member of the omega-side space; throws on violation.
// The class constraint is the containment condition for w*l targets and
// the bijection-induced sequence for alpha targets.
OrdinalEqRel transfer(const EqRelStream& E, const Partition& P, const OrdinalTarget& target,
                      int validate_depth);
ConstraintSeq transfer_constraint(const OrdinalTarget& target);
EqRelStream transfer_inverse(const OrdinalEqRel& E);

// I_n = { m : f(m) >= f(n) }.
ConstraintSeq build_I(const OrdinalBijection& f);

/// Rigid surjection presentation of an equivalence relation: the fibre over
/// the j-th element (standard order) is the class whose standard-order
/// minimum comes j-th. Fibre minima are increasing, which pins the map.
class Rigid {
public:
    Rigid() = default;
    explicit Rigid(OrdinalEqRel rel) : rel_(std::move(rel)) {}

    const OrdinalEqRel& relation() const { return rel_; }

    // Value of the surjection at an element: the position of its class.
    OrdinalElem value(const OrdinalElem& e) const;
    // Minimal element of the fibre over a target value.
    OrdinalElem fiber_min(const OrdinalElem& target) const;

private:
    OrdinalEqRel rel_;
};

OrdinalEqRel rigid_to_eqrel(const Rigid& f);
// Requires the representatives to meet every copy within the probe depth.
Rigid eqrel_to_rigid(const OrdinalEqRel& E, int probe_depth);

// Join every class with representative index >= k into the class of the
// least element; exactly k classes remain.
OrdinalEqRel project_k(const OrdinalEqRel& E, int k);

}  // namespace altrel

#endif
