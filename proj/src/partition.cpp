#include "altrel/partition.hpp"

#include <bit>
#include <mutex>
#include <vector>

#include "altrel/util.hpp"

namespace altrel {

int sigma(long long k) {
    if (k < 0)
        throw Error("sigma: negative argument");
    return std::countr_zero(static_cast<unsigned long long>(k) + 1ull);
}

Partition Partition::mod(int l) {
    if (l < 1)
        throw Error("mod partition: l must be >= 1");
    Partition p;
    p.name_ = "mod:" + std::to_string(l);
    p.num_blocks_ = l;
    p.classify_ = [l](int x) { return x % l; };
    p.rank_ = [l](int x) { return x / l; };
    p.element_ = [l](int block, int rank) { return rank * l + block; };
    return p;
}

Partition Partition::dyadic() {
    Partition p;
    p.name_ = "dyadic";
    p.num_blocks_ = std::nullopt;
    p.classify_ = [](int x) { return sigma(x); };
    p.rank_ = [](int x) {
        // x + 1 = 2^q * (2r + 1)
        int q = sigma(x);
        return static_cast<int>((static_cast<long long>(x) + 1) >> (q + 1));
    };
    p.element_ = [](int block, int rank) {
        long long v = ((2ll * rank + 1) << block) - 1;
        if (v > (1ll << 30))
            throw Error("dyadic element out of supported range");
        return static_cast<int>(v);
    };
    return p;
}

Partition Partition::custom(std::string name, std::optional<int> blocks,
                            std::function<int(int)> classify) {
    Partition p;
    p.name_ = std::move(name);
    p.num_blocks_ = blocks;
    p.classify_ = std::move(classify);
    return p;
}

Partition Partition::parse(const std::string& spec) {
    if (spec == "dyadic")
        return dyadic();
    if (spec.rfind("mod:", 0) == 0) {
        int l = std::stoi(spec.substr(4));
        return mod(l);
    }
    throw Error("unknown partition spec '" + spec + "' (expected mod:l or dyadic)");
}

int Partition::block_of(int x) const {
    if (x < 0)
        throw Error("block_of: negative element");
    return classify_(x);
}

int Partition::rank_within(int x) const {
    if (rank_)
        return rank_(x);
    int b = block_of(x);
    int count = 0;
    for (int y = 0; y < x; ++y)
        if (classify_(y) == b)
            ++count;
    return count;
}

int Partition::element(int block, int rank) const {
    if (element_)
        return element_(block, rank);
    int seen = 0;
    for (int y = 0;; ++y) {
        if (y > (1 << 24))
            throw Error("partition element scan cap exceeded");
        if (classify_(y) == block) {
            if (seen == rank)
                return y;
            ++seen;
        }
    }
}

int Partition::pattern_block(long long k) const {
    if (finite())
        return static_cast<int>(k % *num_blocks_);
    return sigma(k);
}

ConstraintSeq ConstraintSeq::geq() {
    ConstraintSeq c;
    c.name_ = "geq";
    c.ge_ = [](int a, int b) { return a >= b; };
    return c;
}

ConstraintSeq ConstraintSeq::all() {
    ConstraintSeq c;
    c.name_ = "all";
    c.ge_ = [](int, int) { return true; };
    return c;
}

ConstraintSeq ConstraintSeq::from_key(std::string name, std::function<bool(int, int)> key_geq) {
    ConstraintSeq c;
    c.name_ = std::move(name);
    c.ge_ = std::move(key_geq);
    return c;
}

bool ConstraintSeq::contains(int n, int m) const { return ge_(m, n); }

bool ConstraintSeq::legal_join(int src_block, int tgt_block) const {
    return ge_(src_block, tgt_block);
}

ValidationResult validate_alternating(const EqRelStream& E, const Partition& P, int depth) {
    if (depth < 1)
        throw Error("validate_alternating: depth must be >= 1");
    for (long long k = 0; k < depth; ++k) {
        if (auto fin = E.finite_classes(); fin && k >= *fin)
            return Violation{k, P.pattern_block(k), -1, "stream ran out of classes"};
        int p = E.rep(static_cast<int>(k));
        int want = P.pattern_block(k);
        int got = P.block_of(p);
        if (got != want)
            return Violation{k, want, got, "representative " + std::to_string(p)};
    }
    return std::nullopt;
}

ValidationResult validate_class_constraint(const EqRelStream& E, const Partition& P,
                                           const ConstraintSeq& I, int depth) {
    if (depth < 1)
        throw Error("validate_class_constraint: depth must be >= 1");
    if (auto fin = E.finite_classes(); fin && depth > *fin)
        depth = static_cast<int>(*fin);
    int bound = E.rep(depth - 1);
    for (int x = 0; x <= bound; ++x) {
        int head_block = P.block_of(E.class_of(x));
        if (!I.contains(head_block, P.block_of(x)))
            return Violation{x, head_block, P.block_of(x),
                             "element in class headed by " + std::to_string(E.class_of(x))};
    }
    return std::nullopt;
}

ValidationResult validate_approximation(const FiniteEqRel& a, const Partition& P,
                                        const std::optional<ConstraintSeq>& I) {
    std::vector<int> reps = a.reps();
    for (size_t k = 0; k < reps.size(); ++k) {
        int want = P.pattern_block(static_cast<long long>(k));
        int got = P.block_of(reps[k]);
        if (got != want)
            return Violation{static_cast<long long>(k), want, got,
                             "representative " + std::to_string(reps[k])};
    }
    int next = P.pattern_block(a.num_classes());
    if (P.block_of(a.size()) != next)
        return Violation{a.num_classes(), next, P.block_of(a.size()),
                         "domain bound " + std::to_string(a.size())};
    if (I) {
        for (int x = 0; x < a.size(); ++x) {
            int head = P.block_of(a.rep_of(x));
            if (!I->contains(head, P.block_of(x)))
                return Violation{x, head, P.block_of(x), "element in a forbidden block"};
        }
    }
    return std::nullopt;
}

namespace {

class GreedyPatternStream final : public detail::StreamImpl {
public:
    GreedyPatternStream(Partition P, std::optional<ConstraintSeq> I)
        : P_(std::move(P)), I_(std::move(I)) {}

    int class_of(int x) const override {
        std::lock_guard<std::mutex> lock(mu_);
        extend(x);
        return assign_[static_cast<size_t>(x)];
    }

private:
    void extend(int upto) const {
        while (static_cast<int>(assign_.size()) <= upto) {
            int x = static_cast<int>(assign_.size());
            int xb = P_.block_of(x);
            if (xb == P_.pattern_block(static_cast<long long>(rep_blocks_.size()))) {
                assign_.push_back(x);
                rep_blocks_.push_back(xb);
                reps_.push_back(x);
                continue;
            }
            int target = -1;
            for (size_t j = 0; j < reps_.size(); ++j) {
                bool ok = I_ ? I_->contains(rep_blocks_[j], xb) : true;
                if (ok) {
                    target = reps_[j];
                    break;
                }
            }
            if (target < 0)
                throw Error("canonical_finest: element " + std::to_string(x) +
                            " has no permitted class");
            assign_.push_back(target);
        }
    }

    Partition P_;
    std::optional<ConstraintSeq> I_;
    mutable std::mutex mu_;
    mutable std::vector<int> assign_;
    mutable std::vector<int> rep_blocks_;
    mutable std::vector<int> reps_;
};

}  // namespace

EqRelStream canonical_finest(const Partition& P, const std::optional<ConstraintSeq>& I) {
    std::string prov = "pattern-canonical(" + P.name();
    if (I)
        prov += "," + I->name();
    prov += ")";
    return EqRelStream(std::make_shared<GreedyPatternStream>(P, I), std::move(prov));
}

}  // namespace altrel
