#include "altrel/ordinal.hpp"

#include <algorithm>
#include <map>

#include "altrel/util.hpp"

namespace altrel {

std::string OrdinalElem::to_text() const {
    return "(" + std::to_string(rank) + ", " + copy.to_text() + ")";
}

OrdinalElem OrdinalElem::parse_text(const std::string& text) {
    size_t open = text.find('(');
    size_t comma = text.find(',');
    size_t close = text.rfind(')');
    if (open == std::string::npos || comma == std::string::npos || close == std::string::npos ||
        !(open < comma && comma < close))
        throw Error("ordinal element: expected '(rank, cnf)'");
    OrdinalElem e;
    e.rank = std::stoll(text.substr(open + 1, comma - open - 1));
    e.copy = Cnf::parse_text(text.substr(comma + 1, close - comma - 1));
    return e;
}

OrdinalTarget OrdinalTarget::omega_l(int l) {
    if (l < 1)
        throw Error("ordinal target: l must be >= 1");
    OrdinalTarget t;
    t.l_ = l;
    t.alpha_ = Cnf::from_terms({Cnf::term(Cnf::nat(1), l)});  // w * l
    return t;
}

OrdinalTarget OrdinalTarget::alpha(const Cnf& alpha_value, OrdinalBijection f) {
    OrdinalTarget t;
    t.l_ = 0;
    t.alpha_ = alpha_value;
    t.beta_ = divide_by_omega(alpha_value);
    if (!(t.beta_ == f.beta()))
        throw Error("ordinal target: bijection range does not match alpha / w");
    t.f_ = std::move(f);
    return t;
}

Cnf OrdinalTarget::copy_for_block(int block) const {
    if (is_omega_l()) {
        if (block < 0 || block >= l_)
            throw Error("ordinal target: block outside the copies of w*l");
        return Cnf::nat(block);
    }
    return f_.value(block);
}

int OrdinalTarget::block_for_copy(const Cnf& copy) const {
    if (is_omega_l()) {
        long long v = copy.as_nat();
        if (v >= l_)
            throw Error("ordinal target: copy outside w*l");
        return static_cast<int>(v);
    }
    return f_.inverse(copy);
}

std::string OrdinalTarget::name() const {
    if (is_omega_l())
        return "w*" + std::to_string(l_);
    return alpha_.to_text() + " (f=" + f_.name() + ")";
}

OrdinalElem phi(int n, const Partition& P, const OrdinalTarget& target) {
    int block = P.block_of(n);
    return OrdinalElem{P.rank_within(n), target.copy_for_block(block)};
}

int phi_inverse(const OrdinalElem& e, const Partition& P, const OrdinalTarget& target) {
    int block = target.block_for_copy(e.copy);
    if (e.rank < 0)
        throw Error("phi_inverse: negative rank");
    return P.element(block, static_cast<int>(e.rank));
}

OrdinalEqRel::OrdinalEqRel(EqRelStream backing, Partition P, OrdinalTarget target)
    : backing_(std::move(backing)), P_(std::move(P)), target_(std::move(target)) {
    if (target_.is_omega_l()) {
        if (!P_.finite() || *P_.num_blocks() != target_.l())
            throw Error("ordinal relation: partition blocks must match the copies of w*l");
    } else if (P_.finite()) {
        throw Error("ordinal relation: alpha targets need an infinite partition");
    }
}

OrdinalElem OrdinalEqRel::class_of(const OrdinalElem& e) const {
    return map(backing_.class_of(unmap(e)));
}

OrdinalElem OrdinalEqRel::rep(int k) const { return map(backing_.rep(k)); }

OrdinalEqRel OrdinalEqRel::coarsened(const JoinSpec& spec) const {
    return OrdinalEqRel(coarsen(backing_, spec), P_, target_);
}

bool OrdinalEqRel::is_coarsening_of(const OrdinalEqRel& other, int depth) const {
    // Work on the ordinal side: the coarse class map must be constant on the
    // classes of the finer relation across the probed element prefix.
    long long idx = depth;
    if (auto fin = finite_classes())
        idx = std::min<long long>(idx, *fin - 1);
    int bound = backing_.rep(static_cast<int>(idx));
    for (int x = 0; x < bound; ++x) {
        OrdinalElem e = map(x);
        if (!(class_of(e) == class_of(other.class_of(e))))
            return false;
    }
    return true;
}

OrdinalValidation validate_ordinal_space(const OrdinalEqRel& E, int depth) {
    if (depth < 1)
        throw Error("validate_ordinal_space: depth must be >= 1");
    long long limit = depth;
    long long rep_bound = depth;
    if (auto fin = E.finite_classes()) {
        limit = std::min<long long>(limit, *fin);
        rep_bound = std::min<long long>(rep_bound, *fin - 1);
    }
    // Element prefix: everything below the rep_bound-th representative in
    // the diagonal enumeration.
    int bound = E.backing().rep(static_cast<int>(rep_bound));
    // Walk the prefix in diagonal order, recording each class's first-seen
    // element (the diagonal minimum) and its standard-order minimum.
    std::vector<OrdinalElem> diag_min;
    std::vector<OrdinalElem> std_min;
    std::map<int, size_t> class_index;  // keyed by backing representative
    for (int x = 0; x < bound; ++x) {
        OrdinalElem e = E.map(x);
        int key = E.backing().class_of(x);
        auto it = class_index.find(key);
        if (it == class_index.end()) {
            class_index.emplace(key, diag_min.size());
            diag_min.push_back(e);
            std_min.push_back(e);
        } else if (e < std_min[it->second]) {
            std_min[it->second] = e;
        }
    }
    long long checked = std::min<long long>(limit, static_cast<long long>(diag_min.size()));
    for (long long k = 0; k < checked; ++k) {
        Cnf want = E.target().copy_for_block(E.partition().pattern_block(k));
        if (!(diag_min[static_cast<size_t>(k)].copy == want))
            return OrdinalViolation{k, 'a',
                                    "representative " + diag_min[static_cast<size_t>(k)].to_text() +
                                        " lies in copy " +
                                        diag_min[static_cast<size_t>(k)].copy.to_text() +
                                        ", expected " + want.to_text()};
        if (!(diag_min[static_cast<size_t>(k)] == std_min[static_cast<size_t>(k)]))
            return OrdinalViolation{k, 'b',
                                    "diagonal minimum " + diag_min[static_cast<size_t>(k)].to_text() +
                                        " differs from standard minimum " +
                                        std_min[static_cast<size_t>(k)].to_text()};
    }
    return std::nullopt;
}

ConstraintSeq transfer_constraint(const OrdinalTarget& target) {
    if (target.is_omega_l())
        return ConstraintSeq::geq();
    return build_I(target.bijection());
}

OrdinalEqRel transfer(const EqRelStream& E, const Partition& P, const OrdinalTarget& target,
                      int validate_depth) {
    if (auto v = validate_alternating(E, P, validate_depth))
        throw Error("transfer: stream violates alternation at k=" + std::to_string(v->index));
    if (auto v = validate_class_constraint(E, P, transfer_constraint(target), validate_depth))
        throw Error("transfer: stream violates the class constraint at element " +
                    std::to_string(v->index));
    OrdinalEqRel out(E, P, target);
    if (auto v = validate_ordinal_space(out, validate_depth))
        throw Error(std::string("transfer: image violates condition (") + v->condition + ")");
    return out;
}

EqRelStream transfer_inverse(const OrdinalEqRel& E) { return E.backing(); }

ConstraintSeq build_I(const OrdinalBijection& f) {
    return ConstraintSeq::from_key("f-geq:" + f.name(),
                                   [f](int a, int b) { return !(f.value(a) < f.value(b)); });
}

OrdinalElem Rigid::value(const OrdinalElem& e) const {
    OrdinalElem head = rel_.class_of(e);
    // Position of the class: how many classes have their minimum in the
    // same copy with a smaller rank. Representatives inside one copy have
    // increasing ranks along the diagonal enumeration, so the scan can stop
    // at the first same-copy representative at or past head.
    long long before = 0;
    for (int k = 0;; ++k) {
        if (auto fin = rel_.finite_classes(); fin && k >= *fin)
            break;
        OrdinalElem r = rel_.rep(k);
        if (r.copy == head.copy) {
            if (r.rank >= head.rank)
                break;
            ++before;
        }
    }
    return OrdinalElem{before, head.copy};
}

OrdinalElem Rigid::fiber_min(const OrdinalElem& target) const {
    long long seen = 0;
    for (int k = 0;; ++k) {
        if (auto fin = rel_.finite_classes(); fin && k >= *fin)
            throw Error("rigid: fibre target beyond the class count");
        OrdinalElem r = rel_.rep(k);
        if (r.copy == target.copy) {
            if (seen == target.rank)
                return r;
            ++seen;
        }
    }
}

OrdinalEqRel rigid_to_eqrel(const Rigid& f) { return f.relation(); }

Rigid eqrel_to_rigid(const OrdinalEqRel& E, int probe_depth) {
    if (probe_depth < 1)
        throw Error("eqrel_to_rigid: probe depth must be >= 1");
    if (E.finite_classes())
        throw Error("eqrel_to_rigid: needs infinitely many classes");
    // Every copy that is supposed to carry representatives must be met
    // within the probe: for w*l that is each of the l copies.
    if (E.target().is_omega_l()) {
        std::vector<bool> seen(static_cast<size_t>(E.target().l()), false);
        for (int k = 0; k < probe_depth; ++k) {
            long long c = E.rep(k).copy.as_nat();
            seen[static_cast<size_t>(c)] = true;
        }
        for (size_t i = 0; i < seen.size(); ++i)
            if (!seen[i])
                throw Error("eqrel_to_rigid: no representative meets copy " + std::to_string(i) +
                            " within the probe");
    } else {
        for (int k = 0; k < probe_depth; ++k)
            (void)E.rep(k);
    }
    return Rigid(E);
}

OrdinalEqRel project_k(const OrdinalEqRel& E, int k) {
    if (k < 1)
        throw Error("project_k: k must be >= 1");
    JoinSpec spec;
    spec.tail_start = k;
    spec.tail_pattern = {std::optional<int>(0)};
    return E.coarsened(spec);
}

}  // namespace altrel
