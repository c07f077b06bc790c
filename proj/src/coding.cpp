#include "altrel/coding.hpp"

#include <algorithm>
#include <mutex>

#include "altrel/util.hpp"

namespace altrel {

CodingContext::CodingContext(EqRelStream E, int n, Partition P,
                             std::optional<ConstraintSeq> constraint)
    : E_(std::move(E)), n_(n), P_(std::move(P)), constraint_(std::move(constraint)) {
    if (n_ < 0)
        throw Error("coding context: n must be >= 0");
    if (auto v = validate_alternating(E_, P_, n_ + 2))
        throw Error("coding context: stream violates the alternation pattern at k=" +
                    std::to_string(v->index));
    a_ = E_.approx(n_);
}

int CodingContext::block_size() const {
    if (finite_path())
        return *P_.num_blocks();
    unsigned long long t0 = t(0);
    if (t0 > (1ull << 20))
        throw Error("coding context: t_0 too large");
    return static_cast<int>(t0);
}

int CodingContext::q(int i) const {
    if (i < 0)
        throw Error("coding context: negative q index");
    return P_.block_of(E_.rep(n_ + 1 + i));
}

unsigned long long CodingContext::t(int i) const {
    if (finite_path())
        throw Error("coding context: t-grading only exists on the infinite path");
    while (static_cast<int>(t_cache_.size()) <= i) {
        int j = static_cast<int>(t_cache_.size());
        int qj = q(j);
        if (qj >= 60)
            throw Error("coding context: q too large for the t recurrence");
        unsigned long long factor = 1ull << (qj + 1);
        unsigned long long prev = j == 0 ? 1ull : t_cache_[static_cast<size_t>(j) - 1];
        if (prev > (~0ull) / factor)
            throw Error("coding context: t recurrence overflow");
        t_cache_.push_back(prev * factor);
    }
    return t_cache_[static_cast<size_t>(i)];
}

unsigned long long CodingContext::m_factor(int i) const { return t(i) / t(0); }

Alphabet CodingContext::alphabet(int levels) const {
    if (finite_path())
        return Alphabet::tuples(n_ + 1, *P_.num_blocks());
    if (levels < 1)
        throw Error("coding context: need at least one alphabet level");
    std::vector<std::vector<Letter>> chain;
    std::vector<Letter> cumulative;
    for (int i = 0; i < levels; ++i) {
        unsigned long long arity = t(i);
        if (arity > (1ull << 20))
            throw Error("coding context: alphabet arity too large to materialize");
        Alphabet level = Alphabet::tuples(n_ + 1, static_cast<int>(arity));
        cumulative.insert(cumulative.end(), level.level(0).begin(), level.level(0).end());
        chain.push_back(cumulative);
    }
    return Alphabet::graded(std::move(chain));
}

bool CodingContext::can_join(int src_rep_index, int tgt_rep_index) const {
    if (!constraint_)
        return true;
    return constraint_->legal_join(P_.block_of(E_.rep(src_rep_index)),
                                   P_.block_of(E_.rep(tgt_rep_index)));
}

namespace {

// Arity of a letter on the infinite path must be one of the t_i; returns
// the level index.
int arity_level(const CodingContext& ctx, size_t arity) {
    for (int i = 0;; ++i) {
        unsigned long long t = ctx.t(i);
        if (t == arity)
            return i;
        if (t > arity)
            throw Error("coding: letter arity " + std::to_string(arity) +
                        " is not in the t-grading");
    }
}

void check_letter(const CodingContext& ctx, const Letter& l) {
    if (ctx.finite_path()) {
        if (static_cast<int>(l.size()) != ctx.block_size())
            throw Error("coding: letter arity must equal the block count");
    } else {
        arity_level(ctx, l.size());
    }
    for (int c : l)
        if (c < 0 || c > ctx.n())
            throw Error("coding: letter coordinate out of range");
}

// Per-coordinate join targets of a variable-free word, in flat order.
std::vector<int> flat_targets(const CodingContext& ctx, const Word& w, bool apply_tilde) {
    std::vector<int> flat;
    for (const auto& cell : w.cells()) {
        if (!cell)
            throw Error("coding: variable-free word required");
        check_letter(ctx, *cell);
        flat.insert(flat.end(), cell->begin(), cell->end());
    }
    if (apply_tilde) {
        for (size_t s = 0; s < flat.size(); ++s)
            if (!ctx.can_join(ctx.n() + 1 + static_cast<int>(s), flat[s]))
                flat[s] = 0;
    }
    return flat;
}

}  // namespace

Word encode_extension(const CodingContext& ctx, const FiniteEqRel& b) {
    const EqRelStream& E = ctx.stream();
    int n = ctx.n();
    // Locate m with dom(b) = p_m(E).
    int m = 0;
    while (true) {
        int p = E.rep(m);
        if (p == b.size())
            break;
        if (p > b.size())
            throw Error("encode: domain of b is not an approximation domain of E");
        ++m;
    }
    if (m <= n)
        throw Error("encode: b does not extend past a");
    int B = ctx.block_size();
    int joined = m - n - 1;
    if (joined % B != 0)
        throw Error("encode: extension size " + std::to_string(m) +
                    " is not reachable in the space");
    if (!(b.restrict_to(ctx.base_approx().size()) == ctx.base_approx()))
        throw Error("encode: b does not end-extend a");
    if (b.num_classes() != n + 1)
        throw Error("encode: b must have exactly one extra class");
    for (int k = 0; k <= n; ++k)
        if (!b.is_rep(E.rep(k)))
            throw Error("encode: representative p_" + std::to_string(k) + " lost in b");
    for (int x = 0; x < b.size(); ++x)
        if (b.rep_of(x) != b.rep_of(E.class_of(x)))
            throw Error("encode: b splits a class of E");
    std::vector<int> targets(static_cast<size_t>(joined));
    for (int s = 0; s < joined; ++s) {
        int src = E.rep(n + 1 + s);
        int tgt = b.rep_of(src);
        int k = E.rep_index(tgt);
        if (k > n)
            throw Error("encode: join target is not among the first n+1 classes");
        if (ctx.constrained() && !ctx.can_join(n + 1 + s, k))
            throw Error("encode: b joins class " + std::to_string(n + 1 + s) +
                        " illegally under the constraint");
        targets[static_cast<size_t>(s)] = k;
    }
    Word w;
    for (int i = 0; i < joined / B; ++i)
        w.push_letter(Letter(targets.begin() + static_cast<long>(i) * B,
                             targets.begin() + static_cast<long>(i + 1) * B));
    return w;
}

FiniteEqRel decode_word(const CodingContext& ctx, const Word& w) {
    const EqRelStream& E = ctx.stream();
    int n = ctx.n();
    std::vector<int> flat = flat_targets(ctx, w, ctx.constrained());
    int m = n + 1 + static_cast<int>(flat.size());
    int dom = E.rep(m);
    std::vector<int> assign(static_cast<size_t>(dom));
    for (int x = 0; x < dom; ++x) {
        int r = E.class_of(x);
        int idx = E.rep_index(r);
        if (idx <= n)
            assign[static_cast<size_t>(x)] = r;
        else
            assign[static_cast<size_t>(x)] = E.rep(flat[static_cast<size_t>(idx) - n - 1]);
    }
    return FiniteEqRel::from_assign(std::move(assign));
}

Word tilde_reduce(const CodingContext& ctx, const Word& w) {
    int n = ctx.n();
    std::vector<Word::Cell> cells;
    if (ctx.finite_path()) {
        int l = ctx.block_size();
        for (size_t i = 0; i < w.size(); ++i) {
            const auto& cell = w.at(i);
            if (!cell) {
                cells.emplace_back(std::nullopt);
                continue;
            }
            check_letter(ctx, *cell);
            Letter out = *cell;
            for (int j = 0; j < l; ++j)
                if (!ctx.can_join(n + 1 + static_cast<int>(i) * l + j, out[static_cast<size_t>(j)]))
                    out[static_cast<size_t>(j)] = 0;
            cells.emplace_back(std::move(out));
        }
        return Word(std::move(cells));
    }
    // Infinite path: the variable has no fixed arity inside a bare word, so
    // only variable-free words have well-defined positions here.
    if (w.has_variable())
        throw Error("tilde_reduce: infinite-path rewriting of variable words happens "
                    "after expansion");
    size_t pos = 0;
    for (const auto& cell : w.cells()) {
        check_letter(ctx, *cell);
        Letter out = *cell;
        for (size_t j = 0; j < out.size(); ++j)
            if (!ctx.can_join(n + 1 + static_cast<int>(pos + j), out[j]))
                out[j] = 0;
        pos += out.size();
        cells.emplace_back(std::move(out));
    }
    return Word(std::move(cells));
}

Word flatten_letter(const CodingContext& ctx, const Letter& l) {
    if (ctx.finite_path())
        throw Error("flatten_letter: only meaningful on the infinite path");
    check_letter(ctx, l);
    size_t t0 = static_cast<size_t>(ctx.block_size());
    if (l.size() % t0 != 0)
        throw Error("flatten_letter: arity is not a multiple of t_0");
    Word out;
    for (size_t i = 0; i < l.size() / t0; ++i)
        out.push_letter(Letter(l.begin() + static_cast<long>(i * t0),
                               l.begin() + static_cast<long>((i + 1) * t0)));
    return out;
}

ExpandedCertificate expand_certificate(const CodingContext& ctx, const Word& w0,
                                       const VarSequence& X) {
    if (!w0.variable_free())
        throw Error("expand: w0 must be variable-free");
    for (const auto& x : X)
        if (!x.left_variable())
            throw Error("expand: every x_i must be left-variable");

    auto flatten_into = [&](const Letter& l, Word& out) {
        check_letter(ctx, l);
        for (int c : l)
            out.push_letter(Letter{c});
    };

    ExpandedCertificate cert;
    for (const auto& cell : w0.cells())
        flatten_into(*cell, cert.u0);

    size_t base = cert.u0.size();
    for (size_t i = 0; i < X.size(); ++i) {
        Word y;
        for (const auto& cell : X[i].cells()) {
            if (cell) {
                flatten_into(*cell, y);
                continue;
            }
            if (ctx.finite_path()) {
                int l = ctx.block_size();
                int offset = static_cast<int>(i) % l;
                for (int j = 0; j < l; ++j) {
                    if (j == offset)
                        y.push_variable();
                    else
                        y.push_letter(Letter{0});
                }
            } else {
                unsigned long long ti = ctx.t(static_cast<int>(i));
                if (ti > (1ull << 20))
                    throw Error("expand: variable block t_i too large");
                size_t block = static_cast<size_t>(ti);
                size_t j = y.size();
                std::optional<size_t> offset;
                for (size_t N = 0; N < block; ++N) {
                    if (ctx.q(static_cast<int>(base + j + N)) == ctx.q(static_cast<int>(i))) {
                        offset = N;
                        break;
                    }
                }
                if (!offset)
                    throw Error("expand: no variable slot with the required block inside "
                                "t_i; grading data is inconsistent");
                for (size_t N = 0; N < block; ++N) {
                    if (N == *offset)
                        y.push_variable();
                    else
                        y.push_letter(Letter{0});
                }
            }
        }
        base += y.size();
        cert.ys.push_back(std::move(y));
    }
    return cert;
}

// --- the built coarsening ------------------------------------------------

namespace detail {

struct Directive {
    enum Kind { keep, join, var_group } kind;
    int value = 0;  // join target (base class index) or group id
};

// Stream assembled from a head relation, an explicit directive region and a
// canonical greedy tail. Class indices of the base stream are mapped to
// representatives of the built relation.
class BuiltStream final : public StreamImpl {
public:
    BuiltStream(EqRelStream base, FiniteEqRel head, int s0, std::vector<Directive> directives,
                Partition P)
        : base_(std::move(base)), head_(std::move(head)), s0_(s0),
          directives_(std::move(directives)), P_(std::move(P)) {
        if (head_.size() != (s0_ == 0 ? 0 : base_.rep(s0_)))
            throw Error("built stream: head domain must be p_{s0}(base)");
        for (int x = 0; x < head_.size(); ++x)
            if (head_.rep_of(x) != head_.rep_of(base_.class_of(x)))
                throw Error("built stream: head splits a class of base");
        int groups = 0;
        for (size_t i = 0; i < directives_.size(); ++i) {
            const Directive& d = directives_[i];
            if (d.kind == Directive::join && d.value >= s0_ + static_cast<int>(i))
                throw Error("built stream: join directive must point strictly earlier");
            if (d.kind == Directive::var_group) {
                if (d.value >= groups)
                    groups = d.value + 1;
                if (group_first_.size() < static_cast<size_t>(groups))
                    group_first_.resize(static_cast<size_t>(groups), -1);
                if (group_first_[static_cast<size_t>(d.value)] < 0)
                    group_first_[static_cast<size_t>(d.value)] = static_cast<int>(i);
            }
        }
        start_count_ = head_.num_classes();
        for (const auto& d : directives_)
            if (d.kind == Directive::keep)
                ++start_count_;
        start_count_ += static_cast<int>(group_first_.size());
    }

    int class_of(int x) const override {
        int idx = base_.rep_index(base_.class_of(x));
        return resolve(idx);
    }

private:
    int resolve(int idx) const {
        if (idx < s0_)
            return head_.rep_of(base_.rep(idx));
        int off = idx - s0_;
        if (off < static_cast<int>(directives_.size())) {
            const Directive& d = directives_[static_cast<size_t>(off)];
            switch (d.kind) {
                case Directive::keep: return base_.rep(idx);
                case Directive::join: return resolve(d.value);
                case Directive::var_group:
                    return base_.rep(s0_ + group_first_[static_cast<size_t>(d.value)]);
            }
        }
        return tail_keep(idx) ? base_.rep(idx) : resolve(0);
    }

    bool tail_keep(int idx) const {
        std::lock_guard<std::mutex> lock(mu_);
        int tail_base = s0_ + static_cast<int>(directives_.size());
        while (static_cast<int>(tail_flags_.size()) <= idx - tail_base) {
            int i = tail_base + static_cast<int>(tail_flags_.size());
            long long count = start_count_ + kept_in_tail_;
            bool keep = P_.block_of(base_.rep(i)) == P_.pattern_block(count);
            tail_flags_.push_back(keep);
            if (keep)
                ++kept_in_tail_;
        }
        return tail_flags_[static_cast<size_t>(idx - tail_base)];
    }

    EqRelStream base_;
    FiniteEqRel head_;
    int s0_;
    std::vector<Directive> directives_;
    Partition P_;
    std::vector<int> group_first_;
    int start_count_ = 0;
    mutable std::mutex mu_;
    mutable std::vector<bool> tail_flags_;
    mutable long long kept_in_tail_ = 0;
};

}  // namespace detail

EqRelStream build_F(const CodingContext& ctx, const ExpandedCertificate& cert, bool constrained) {
    if (constrained && !ctx.constrained())
        throw Error("build_F: constrained mode needs a context with a constraint");
    if (cert.ys.empty())
        throw Error("build_F: truncation must contain at least one variable block");
    int n = ctx.n();
    auto check_flat = [&](const Word& w, bool allow_var) {
        for (const auto& cell : w.cells()) {
            if (!cell) {
                if (!allow_var)
                    throw Error("build_F: u0 must be variable-free");
                continue;
            }
            if (cell->size() != 1 || (*cell)[0] < 0 || (*cell)[0] > n)
                throw Error("build_F: expanded words use single coordinates over {0..n}");
        }
    };
    check_flat(cert.u0, false);
    for (const auto& y : cert.ys) {
        check_flat(y, true);
        if (!y.has_variable())
            throw Error("build_F: every variable block must contain the variable");
    }

    std::vector<detail::Directive> directives;
    directives.push_back({detail::Directive::keep, 0});  // class n stays a representative
    int pos = 0;
    auto emit = [&](const Word& w, int group) {
        for (const auto& cell : w.cells()) {
            if (!cell) {
                directives.push_back({detail::Directive::var_group, group});
            } else {
                int k = (*cell)[0];
                if (constrained && !ctx.can_join(n + 1 + pos, k))
                    k = 0;
                directives.push_back({detail::Directive::join, k});
            }
            ++pos;
        }
    };
    emit(cert.u0, -1);
    for (size_t g = 0; g < cert.ys.size(); ++g)
        emit(cert.ys[g], static_cast<int>(g));

    return EqRelStream(
        std::make_shared<detail::BuiltStream>(ctx.stream(), ctx.base_approx(), n,
                                              std::move(directives), ctx.partition()),
        "word-defined(truncated," + ctx.stream().provenance() + ")");
}

EqRelStream extend_greedily(const FiniteEqRel& a, const EqRelStream& base, const Partition& P,
                            const std::optional<ConstraintSeq>& constraint) {
    // dom(a) must be an approximation domain of base with a coarser there.
    int d = 0;
    while (true) {
        int p = base.rep(d);
        if (p == a.size())
            break;
        if (p > a.size())
            throw Error("extend_greedily: dom(a) is not an approximation domain of base");
        ++d;
    }
    if (!leq_fin(a, base.approx(d)))
        throw Error("extend_greedily: a is not a coarsening of the base approximation");
    if (auto v = validate_approximation(a, P, constraint))
        throw Error("extend_greedily: a is not an approximation of a space member (" + v->detail +
                    ")");
    return EqRelStream(
        std::make_shared<detail::BuiltStream>(base, a, d, std::vector<detail::Directive>{}, P),
        "pattern-canonical(extension-of," + base.provenance() + ")");
}

std::vector<FiniteEqRel> enumerate_end_extensions(const CodingContext& ctx, int letters) {
    const EqRelStream& E = ctx.stream();
    int n = ctx.n();
    int B = ctx.block_size();
    long long joined = static_cast<long long>(B) * letters;
    double space = 1;
    for (long long i = 0; i < joined; ++i) {
        space *= n + 1;
        if (space > 2e6)
            throw Error("enumerate_end_extensions: state space too large");
    }
    int m = n + 1 + static_cast<int>(joined);
    int dom = E.rep(m);
    std::vector<FiniteEqRel> out;
    std::vector<int> targets(static_cast<size_t>(joined), 0);
    while (true) {
        bool legal = true;
        if (ctx.constrained()) {
            for (size_t s = 0; s < targets.size(); ++s)
                if (!ctx.can_join(n + 1 + static_cast<int>(s), targets[s])) {
                    legal = false;
                    break;
                }
        }
        if (legal) {
            std::vector<int> assign(static_cast<size_t>(dom));
            for (int x = 0; x < dom; ++x) {
                int idx = E.rep_index(E.class_of(x));
                if (idx <= n)
                    assign[static_cast<size_t>(x)] = E.class_of(x);
                else
                    assign[static_cast<size_t>(x)] =
                        E.rep(targets[static_cast<size_t>(idx) - static_cast<size_t>(n) - 1]);
            }
            out.push_back(FiniteEqRel::from_assign(std::move(assign)));
        }
        // Next target map, lexicographic.
        size_t j = targets.size();
        while (j > 0 && targets[j - 1] == n) {
            targets[j - 1] = 0;
            --j;
        }
        if (j == 0)
            break;
        ++targets[j - 1];
    }
    return out;
}

}  // namespace altrel
