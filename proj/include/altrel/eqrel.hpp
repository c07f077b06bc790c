#ifndef ALTREL_EQREL_HPP
#define ALTREL_EQREL_HPP

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace altrel {

/// Canonical finite equivalence relation on {0..m-1}, stored as the array
/// mapping each element to the minimal representative of its class.
/// assign[i] <= i and assign[assign[i]] = assign[i]; the fixed points are
/// exactly the representatives.
class FiniteEqRel {
public:
    FiniteEqRel() = default;

    // Canonicalize an arbitrary element -> class-label map on {0..m-1}.
    // Two inputs with the same class partition yield identical results.
    static FiniteEqRel canonical_form(std::span<const int> labels);

    // Accepts only arrays already in canonical rep-array form.
    static FiniteEqRel from_assign(std::vector<int> assign);

    int size() const { return static_cast<int>(assign_.size()); }  // m
    int num_classes() const { return num_classes_; }               // |a|
    bool empty() const { return assign_.empty(); }

    int rep_of(int i) const;
    bool same_class(int i, int j) const { return rep_of(i) == rep_of(j); }
    bool is_rep(int i) const { return rep_of(i) == i; }

    // Representatives in increasing order.
    std::vector<int> reps() const;

    // Restriction to {0..new_m-1}. Every class min below new_m stays a rep,
    // so the result is again canonical.
    FiniteEqRel restrict_to(int new_m) const;

    const std::vector<int>& assign() const { return assign_; }

    bool operator==(const FiniteEqRel& other) const { return assign_ == other.assign_; }

    // Space-separated rep array, e.g. "0 0 2 0 2". Empty relation prints "".
    std::string to_text() const;
    static FiniteEqRel parse_text(const std::string& text);

    // {"m":5,"assign":[0,0,2,0,2]}
    std::string to_json() const;
    static FiniteEqRel from_json(const std::string& json_text);

private:
    std::vector<int> assign_;
    int num_classes_ = 0;
};

// dom(a) = dom(b) and a is coarser than b (every class of b lies inside a
// class of a).
bool leq_fin(const FiniteEqRel& a, const FiniteEqRel& b);

namespace detail {

// Backing object of a lazily approximated equivalence relation on omega.
// class_of must be pure: x -> minimal representative of the class of x.
class StreamImpl {
public:
    virtual ~StreamImpl() = default;
    virtual int class_of(int x) const = 0;
    // Number of classes when known to be finite (coarsenings that absorb
    // every late class). nullopt means infinitely many by construction.
    virtual std::optional<long long> finite_classes() const { return std::nullopt; }
};

}  // namespace detail

/// Lazily approximated equivalence relation on omega. Values are immutable
/// and cheap to copy; evaluation is memoized behind a shared impl and safe
/// to use from several threads.
class EqRelStream {
public:
    EqRelStream() = default;
    EqRelStream(std::shared_ptr<const detail::StreamImpl> impl, std::string provenance);

    // Pure function constructor; fn(x) must return the minimal element of
    // the class of x (in particular fn(x) <= x and fn(fn(x)) = fn(x)).
    static EqRelStream from_function(std::function<int(int)> fn, std::string provenance);

    static EqRelStream identity();

    int class_of(int x) const;
    bool same_class(int x, int y) const { return class_of(x) == class_of(y); }

    // k-th minimal representative p_k, in increasing order. p_0 is always 0.
    int rep(int k) const;

    // Index k with rep(k) == r; the element must be a representative.
    int rep_index(int r) const;

    // n-th approximation r_n: the restriction to {0..p_n-1}.
    FiniteEqRel approx(int n) const;

    std::optional<long long> finite_classes() const { return impl_->finite_classes(); }
    const std::string& provenance() const { return provenance_; }

    explicit operator bool() const { return static_cast<bool>(impl_); }

private:
    struct Cache;
    std::shared_ptr<const detail::StreamImpl> impl_;
    std::shared_ptr<Cache> cache_;
    std::string provenance_;
};

/// Coarsening directive on class indices. head maps a class index to a
/// strictly smaller one; for k >= tail_start (when set) the eventually
/// periodic pattern applies: entry nullopt keeps class k, entry j joins it
/// to the (absolute) class index j.
struct JoinSpec {
    std::map<int, int> head;
    int tail_start = -1;  // -1: no tail
    std::vector<std::optional<int>> tail_pattern;

    bool has_tail() const { return tail_start >= 0; }
    // Raw target for class index k before chain resolution, nullopt = keep.
    std::optional<int> target(int k) const;
    void validate() const;
    // Number of classes of the coarsened relation when the spec absorbs
    // every sufficiently late class.
    std::optional<long long> result_classes() const;
    // All indices are determined by the spec restricted to [0, bound):
    // two specs that agree on resolved roots below the bound agree
    // everywhere.
    int discrimination_bound(const JoinSpec& other) const;
    // Resolved root of the join chain starting at k.
    int resolve(int k) const;
};

// Merge classes of E as directed by the spec. Class k of E is absorbed into
// the class of the resolved target; minimal representatives of surviving
// classes are preserved.
EqRelStream coarsen(const EqRelStream& E, const JoinSpec& joins);

// Bounded check of "every class of F is a union of classes of E": for each
// n <= probe_depth, finds the unique m with matching domain and tests the
// finite coarsening there. Returns the failing level on refutation.
struct CoarseningCheck {
    bool ok = true;
    int failing_level = -1;
};
CoarseningCheck is_coarsening(const EqRelStream& F, const EqRelStream& E, int probe_depth);

// Least n with dom(r_n(B)) = dom(a) and a coarser than r_n(B); nullopt
// plays the role of infinity. Domains of approximations are strictly
// increasing, so at most one n is a candidate.
std::optional<int> depth(const FiniteEqRel& a, const EqRelStream& B);

// r_{|a|}(A) = a together with a bounded coarsening check of A against B.
bool in_bracket(const FiniteEqRel& a, const EqRelStream& B, const EqRelStream& A,
                int probe_depth);

}  // namespace altrel

#endif
