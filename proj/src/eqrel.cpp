#include "altrel/eqrel.hpp"

#include <algorithm>
#include <mutex>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "altrel/util.hpp"
#include "json.hpp"

namespace altrel {

FiniteEqRel FiniteEqRel::canonical_form(std::span<const int> labels) {
    std::vector<int> assign(labels.size());
    std::unordered_map<int, int> first_seen;
    for (size_t i = 0; i < labels.size(); ++i) {
        auto [it, fresh] = first_seen.try_emplace(labels[i], static_cast<int>(i));
        assign[i] = it->second;
        (void)fresh;
    }
    FiniteEqRel result;
    result.assign_ = std::move(assign);
    result.num_classes_ = static_cast<int>(first_seen.size());
    return result;
}

FiniteEqRel FiniteEqRel::from_assign(std::vector<int> assign) {
    int classes = 0;
    for (size_t i = 0; i < assign.size(); ++i) {
        int r = assign[i];
        if (r < 0 || r > static_cast<int>(i))
            throw Error("rep array: assign[" + std::to_string(i) + "] out of range");
        if (assign[static_cast<size_t>(r)] != r)
            throw Error("rep array: representative " + std::to_string(r) + " is not a fixed point");
        if (r == static_cast<int>(i))
            ++classes;
    }
    FiniteEqRel result;
    result.assign_ = std::move(assign);
    result.num_classes_ = classes;
    return result;
}

int FiniteEqRel::rep_of(int i) const {
    if (i < 0 || i >= size())
        throw Error("rep_of: element " + std::to_string(i) + " outside domain of size " +
                    std::to_string(size()));
    return assign_[static_cast<size_t>(i)];
}

std::vector<int> FiniteEqRel::reps() const {
    std::vector<int> out;
    out.reserve(static_cast<size_t>(num_classes_));
    for (int i = 0; i < size(); ++i)
        if (assign_[static_cast<size_t>(i)] == i)
            out.push_back(i);
    return out;
}

FiniteEqRel FiniteEqRel::restrict_to(int new_m) const {
    if (new_m < 0 || new_m > size())
        throw Error("restrict_to: bad domain size");
    std::vector<int> assign(assign_.begin(), assign_.begin() + new_m);
    return from_assign(std::move(assign));
}

std::string FiniteEqRel::to_text() const {
    std::string out;
    for (int i = 0; i < size(); ++i) {
        if (i) out += ' ';
        out += std::to_string(assign_[static_cast<size_t>(i)]);
    }
    return out;
}

FiniteEqRel FiniteEqRel::parse_text(const std::string& text) {
    std::istringstream in(text);
    std::vector<int> assign;
    int v;
    while (in >> v)
        assign.push_back(v);
    if (!in.eof()) {
        std::string rest;
        in.clear();
        in >> rest;
        if (!rest.empty())
            throw Error("rep array: unexpected token '" + rest + "'");
    }
    return from_assign(std::move(assign));
}

std::string FiniteEqRel::to_json() const {
    nlohmann::json j;
    j["m"] = size();
    j["assign"] = assign_;
    return j.dump();
}

FiniteEqRel FiniteEqRel::from_json(const std::string& json_text) {
    nlohmann::json j = nlohmann::json::parse(json_text);
    std::vector<int> assign = j.at("assign").get<std::vector<int>>();
    if (j.contains("m") && j.at("m").get<int>() != static_cast<int>(assign.size()))
        throw Error("rep array json: m does not match assign length");
    return from_assign(std::move(assign));
}

bool leq_fin(const FiniteEqRel& a, const FiniteEqRel& b) {
    if (a.size() != b.size())
        return false;
    // a is coarser iff a's rep map is constant on each b-class.
    for (int x = 0; x < a.size(); ++x)
        if (a.rep_of(x) != a.rep_of(b.rep_of(x)))
            return false;
    return true;
}

// --- EqRelStream ------------------------------------------------------

namespace {

// Hard cap on linear scans for representatives; our constructors always
// find the next representative far earlier. Hitting this means a stream
// with finitely many classes was queried past its end without metadata.
constexpr int kScanCap = 1 << 22;

class FnStream final : public detail::StreamImpl {
public:
    explicit FnStream(std::function<int(int)> fn) : fn_(std::move(fn)) {}
    int class_of(int x) const override {
        int r = fn_(x);
        if (r < 0 || r > x)
            throw Error("stream function returned non-minimal representative");
        return r;
    }

private:
    std::function<int(int)> fn_;
};

}  // namespace

struct EqRelStream::Cache {
    mutable std::mutex mu;
    mutable std::vector<int> reps;    // p_0, p_1, ...
    mutable int scanned_upto = 0;     // all x < scanned_upto classified
};

EqRelStream::EqRelStream(std::shared_ptr<const detail::StreamImpl> impl, std::string provenance)
    : impl_(std::move(impl)), cache_(std::make_shared<Cache>()), provenance_(std::move(provenance)) {}

EqRelStream EqRelStream::from_function(std::function<int(int)> fn, std::string provenance) {
    return EqRelStream(std::make_shared<FnStream>(std::move(fn)), std::move(provenance));
}

EqRelStream EqRelStream::identity() {
    return from_function([](int x) { return x; }, "identity");
}

int EqRelStream::class_of(int x) const {
    if (x < 0)
        throw Error("class_of: negative element");
    return impl_->class_of(x);
}

int EqRelStream::rep(int k) const {
    if (k < 0)
        throw Error("rep: negative index");
    auto fin = impl_->finite_classes();
    if (fin && k >= *fin)
        throw Error("rep: stream has only " + std::to_string(*fin) + " classes");
    std::lock_guard<std::mutex> lock(cache_->mu);
    while (static_cast<int>(cache_->reps.size()) <= k) {
        int x = cache_->scanned_upto;
        if (x >= kScanCap)
            throw Error("rep: scan cap exceeded while searching for representative " +
                        std::to_string(k));
        if (impl_->class_of(x) == x)
            cache_->reps.push_back(x);
        cache_->scanned_upto = x + 1;
    }
    return cache_->reps[static_cast<size_t>(k)];
}

int EqRelStream::rep_index(int r) const {
    if (class_of(r) != r)
        throw Error("rep_index: element " + std::to_string(r) + " is not a representative");
    // Extend the rep cache until it covers r, then binary search.
    int k = 0;
    while (true) {
        int p = rep(k);
        if (p == r)
            return k;
        if (p > r)
            throw Error("rep_index: representative not found");
        ++k;
    }
}

FiniteEqRel EqRelStream::approx(int n) const {
    int bound = rep(n);  // p_n
    std::vector<int> assign(static_cast<size_t>(bound));
    for (int x = 0; x < bound; ++x)
        assign[static_cast<size_t>(x)] = impl_->class_of(x);
    return FiniteEqRel::from_assign(std::move(assign));
}

// --- coarsening -------------------------------------------------------

std::optional<int> JoinSpec::target(int k) const {
    auto it = head.find(k);
    if (it != head.end())
        return it->second;
    if (has_tail() && k >= tail_start && !tail_pattern.empty())
        return tail_pattern[static_cast<size_t>((k - tail_start) % static_cast<int>(tail_pattern.size()))];
    return std::nullopt;
}

void JoinSpec::validate() const {
    if (head.count(0) || (has_tail() && tail_start == 0 && !tail_pattern.empty() && tail_pattern[0]))
        throw Error("join spec: class 0 cannot be joined");
    for (const auto& [k, j] : head) {
        if (j >= k || j < 0)
            throw Error("join spec: class " + std::to_string(k) +
                        " may only join a strictly earlier class");
        if (has_tail() && k >= tail_start)
            throw Error("join spec: head entry inside tail region");
    }
    if (has_tail()) {
        if (tail_pattern.empty())
            throw Error("join spec: tail with empty pattern");
        for (size_t i = 0; i < tail_pattern.size(); ++i)
            if (tail_pattern[i] && *tail_pattern[i] >= tail_start + static_cast<int>(i))
                throw Error("join spec: tail target not strictly earlier");
    }
}

int JoinSpec::resolve(int k) const {
    int cur = k;
    while (true) {
        auto t = target(cur);
        if (!t)
            return cur;
        cur = *t;  // strictly decreasing, so this terminates
    }
}

std::optional<long long> JoinSpec::result_classes() const {
    if (!has_tail())
        return std::nullopt;
    for (const auto& entry : tail_pattern)
        if (!entry)
            return std::nullopt;
    long long kept = 0;
    for (int k = 0; k < tail_start; ++k)
        if (!target(k))
            ++kept;
    return kept;
}

int JoinSpec::discrimination_bound(const JoinSpec& other) const {
    auto reach = [](const JoinSpec& s) {
        int m = 1;
        for (const auto& [k, j] : s.head) {
            (void)j;
            m = std::max(m, k + 1);
        }
        if (s.has_tail())
            m = std::max(m, s.tail_start);
        return m;
    };
    int pre = std::max(reach(*this), reach(other));
    long long period = 1;
    if (has_tail())
        period = static_cast<long long>(tail_pattern.size());
    if (other.has_tail()) {
        long long q = static_cast<long long>(other.tail_pattern.size());
        period = period / std::gcd(period, q) * q;
    }
    return pre + static_cast<int>(period);
}

namespace {

class CoarsenStream final : public detail::StreamImpl {
public:
    CoarsenStream(EqRelStream base, JoinSpec spec)
        : base_(std::move(base)), spec_(std::move(spec)), classes_(spec_.result_classes()) {}

    int class_of(int x) const override {
        int r = base_.class_of(x);
        int idx = base_.rep_index(r);
        return base_.rep(spec_.resolve(idx));
    }

    std::optional<long long> finite_classes() const override {
        if (classes_)
            return classes_;
        return base_.finite_classes();
    }

private:
    EqRelStream base_;
    JoinSpec spec_;
    std::optional<long long> classes_;
};

}  // namespace

EqRelStream coarsen(const EqRelStream& E, const JoinSpec& joins) {
    joins.validate();
    return EqRelStream(std::make_shared<CoarsenStream>(E, joins),
                       "coarsening-of(" + E.provenance() + ")");
}

CoarseningCheck is_coarsening(const EqRelStream& F, const EqRelStream& E, int probe_depth) {
    if (probe_depth < 1)
        throw Error("is_coarsening: probe_depth must be >= 1");
    for (int n = 0; n <= probe_depth; ++n) {
        if (auto fin = F.finite_classes(); fin && n > *fin)
            break;
        int bound = F.rep(n);
        // Unique m with p_m(E) = p_n(F), if any.
        int m = 0;
        bool found = false;
        while (true) {
            if (auto fin = E.finite_classes(); fin && m >= *fin)
                break;
            int p = E.rep(m);
            if (p == bound) {
                found = true;
                break;
            }
            if (p > bound)
                break;
            ++m;
        }
        if (!found)
            return {false, n};
        if (!leq_fin(F.approx(n), E.approx(m)))
            return {false, n};
    }
    return {true, -1};
}

std::optional<int> depth(const FiniteEqRel& a, const EqRelStream& B) {
    int m = a.size();
    int n = 0;
    while (true) {
        if (auto fin = B.finite_classes(); fin && n >= *fin)
            return std::nullopt;
        int p = B.rep(n);
        if (p == m)
            break;
        if (p > m)
            return std::nullopt;
        ++n;
    }
    if (leq_fin(a, B.approx(n)))
        return n;
    return std::nullopt;
}

bool in_bracket(const FiniteEqRel& a, const EqRelStream& B, const EqRelStream& A,
                int probe_depth) {
    if (probe_depth < a.num_classes())
        throw Error("in_bracket: probe_depth below |a|");
    if (!(A.approx(a.num_classes()) == a))
        return false;
    return is_coarsening(A, B, probe_depth).ok;
}

}  // namespace altrel
