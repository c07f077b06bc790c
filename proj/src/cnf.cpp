#include "altrel/cnf.hpp"

#include <algorithm>
#include <map>
#include <mutex>

#include "altrel/util.hpp"

namespace altrel {

const Cnf& Cnf::Term::exponent() const {
    static const Cnf zero;
    return exp_box.empty() ? zero : exp_box[0];
}

bool Cnf::Term::operator==(const Term& other) const {
    return coefficient == other.coefficient && exponent() == other.exponent();
}

Cnf::Term Cnf::term(const Cnf& exponent, long long coefficient) {
    Term t;
    if (!exponent.is_zero())
        t.exp_box.push_back(exponent);
    t.coefficient = coefficient;
    return t;
}

Cnf Cnf::nat(long long n) {
    if (n < 0)
        throw Error("cnf: negative natural");
    Cnf c;
    if (n > 0)
        c.terms_.push_back(term(Cnf(), n));
    return c;
}

Cnf Cnf::omega() { return omega_pow(nat(1)); }

Cnf Cnf::omega_pow(const Cnf& e) {
    Cnf c;
    c.terms_.push_back(term(e, 1));
    return c;
}

Cnf Cnf::from_terms(std::vector<Term> terms) {
    for (size_t i = 0; i < terms.size(); ++i) {
        if (terms[i].coefficient <= 0)
            throw Error("cnf: coefficients must be positive");
        if (i > 0 && !(terms[i].exponent() < terms[i - 1].exponent()))
            throw Error("cnf: exponents must be strictly decreasing");
    }
    Cnf c;
    c.terms_ = std::move(terms);
    return c;
}

bool Cnf::is_finite() const {
    return terms_.empty() || (terms_.size() == 1 && terms_[0].exponent().is_zero());
}

long long Cnf::as_nat() const {
    if (!is_finite())
        throw Error("cnf: not a natural number");
    return terms_.empty() ? 0 : terms_[0].coefficient;
}

bool Cnf::is_limit() const {
    return !terms_.empty() && !terms_.back().exponent().is_zero();
}

const Cnf& Cnf::leading_exponent() const {
    if (terms_.empty())
        throw Error("cnf: zero has no leading term");
    return terms_[0].exponent();
}

long long Cnf::leading_coefficient() const {
    if (terms_.empty())
        throw Error("cnf: zero has no leading term");
    return terms_[0].coefficient;
}

Cnf Cnf::tail() const {
    if (terms_.empty())
        throw Error("cnf: zero has no leading term");
    Cnf c;
    c.terms_.assign(terms_.begin() + 1, terms_.end());
    return c;
}

std::strong_ordering Cnf::operator<=>(const Cnf& other) const {
    size_t n = std::min(terms_.size(), other.terms_.size());
    for (size_t i = 0; i < n; ++i) {
        auto c = terms_[i].exponent() <=> other.terms_[i].exponent();
        if (c != std::strong_ordering::equal)
            return c;
        if (terms_[i].coefficient != other.terms_[i].coefficient)
            return terms_[i].coefficient <=> other.terms_[i].coefficient;
    }
    return terms_.size() <=> other.terms_.size();
}

Cnf Cnf::add(const Cnf& other) const {
    if (other.is_zero())
        return *this;
    const Cnf& lead = other.terms_[0].exponent();
    std::vector<Term> out;
    for (const auto& t : terms_) {
        if (t.exponent() > lead)
            out.push_back(t);
        else if (t.exponent() == lead) {
            out.push_back(term(lead, t.coefficient + other.terms_[0].coefficient));
            out.insert(out.end(), other.terms_.begin() + 1, other.terms_.end());
            Cnf c;
            c.terms_ = std::move(out);
            return c;
        } else {
            break;
        }
    }
    out.insert(out.end(), other.terms_.begin(), other.terms_.end());
    Cnf c;
    c.terms_ = std::move(out);
    return c;
}

Cnf Cnf::times_omega_left() const {
    std::vector<Term> out;
    out.reserve(terms_.size());
    Cnf one = nat(1);
    for (const auto& t : terms_)
        out.push_back(term(one.add(t.exponent()), t.coefficient));
    Cnf c;
    c.terms_ = std::move(out);
    return c;
}

std::string Cnf::to_text() const {
    if (terms_.empty())
        return "0";
    std::string out;
    for (size_t i = 0; i < terms_.size(); ++i) {
        if (i) out += " + ";
        const Term& t = terms_[i];
        if (t.exponent().is_zero()) {
            out += std::to_string(t.coefficient);
            continue;
        }
        if (t.exponent() == nat(1)) {
            out += "w";
        } else if (t.exponent().is_finite()) {
            out += "w^" + std::to_string(t.exponent().as_nat());
        } else {
            out += "w^{" + t.exponent().to_text() + "}";
        }
        if (t.coefficient > 1)
            out += "*" + std::to_string(t.coefficient);
    }
    return out;
}

namespace {

std::string strip(const std::string& s) {
    size_t b = s.find_first_not_of(" \t");
    if (b == std::string::npos)
        return "";
    size_t e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

// Split on '+' at brace depth zero.
std::vector<std::string> split_terms(const std::string& text) {
    std::vector<std::string> out;
    int depth = 0;
    std::string cur;
    for (char ch : text) {
        if (ch == '{') ++depth;
        if (ch == '}') --depth;
        if (ch == '+' && depth == 0) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

}  // namespace

Cnf Cnf::parse_text(const std::string& text) {
    std::string body = strip(text);
    if (body.empty())
        throw Error("cnf: empty input");
    if (body == "0")
        return Cnf();
    std::vector<Term> terms;
    for (const std::string& raw : split_terms(body)) {
        std::string tok = strip(raw);
        if (tok.empty())
            throw Error("cnf: empty term");
        if (tok[0] != 'w') {
            terms.push_back(term(Cnf(), std::stoll(tok)));
            continue;
        }
        size_t pos = 1;
        Cnf exponent = nat(1);
        if (pos < tok.size() && tok[pos] == '^') {
            ++pos;
            if (pos < tok.size() && tok[pos] == '{') {
                int depth = 1;
                size_t end = pos + 1;
                while (end < tok.size() && depth > 0) {
                    if (tok[end] == '{') ++depth;
                    if (tok[end] == '}') --depth;
                    ++end;
                }
                if (depth != 0)
                    throw Error("cnf: unbalanced braces");
                exponent = parse_text(tok.substr(pos + 1, end - pos - 2));
                pos = end;
            } else if (pos < tok.size() && tok[pos] == 'w') {
                // bare ordinal exponent, e.g. "w^w" or "w^w*3": it extends
                // to the coefficient marker
                size_t end = tok.find('*', pos);
                exponent = parse_text(tok.substr(pos, end == std::string::npos
                                                          ? std::string::npos
                                                          : end - pos));
                pos = end == std::string::npos ? tok.size() : end;
            } else {
                size_t end = pos;
                while (end < tok.size() && isdigit(tok[end]))
                    ++end;
                if (end == pos)
                    throw Error("cnf: missing exponent");
                exponent = nat(std::stoll(tok.substr(pos, end - pos)));
                pos = end;
            }
        }
        long long coeff = 1;
        if (pos < tok.size() && tok[pos] == '*') {
            coeff = std::stoll(tok.substr(pos + 1));
            pos = tok.size();
        } else if (pos != tok.size()) {
            throw Error("cnf: trailing characters in term '" + tok + "'");
        }
        terms.push_back(term(exponent, coeff));
    }
    return from_terms(std::move(terms));
}

long long Cnf::norm() const {
    long long total = 0;
    for (const auto& t : terms_)
        total += t.coefficient * (1 + t.exponent().norm());
    return total;
}

Cnf divide_by_omega(const Cnf& alpha) {
    if (!alpha.is_limit())
        throw Error("divide_by_omega: ordinal is not a limit");
    if (alpha < Cnf::omega_pow(Cnf::nat(2)))
        throw Error("divide_by_omega: ordinal below w^2");
    std::vector<Cnf::Term> out;
    for (const auto& t : alpha.terms()) {
        Cnf e = t.exponent();
        if (e.is_finite())
            e = Cnf::nat(e.as_nat() - 1);
        out.push_back(Cnf::term(e, t.coefficient));
    }
    return Cnf::from_terms(std::move(out));
}

namespace {

struct NormKey {
    long long norm;
    Cnf bound;
    bool operator<(const NormKey& other) const {
        if (norm != other.norm)
            return norm < other.norm;
        return bound < other.bound;
    }
};

std::map<NormKey, std::vector<Cnf>>& norm_memo() {
    static std::map<NormKey, std::vector<Cnf>> memo;
    return memo;
}

std::mutex& norm_memo_mu() {
    static std::mutex mu;
    return mu;
}

}  // namespace

std::vector<Cnf> ordinals_with_norm(long long norm, const Cnf& bound) {
    if (norm < 0)
        throw Error("ordinals_with_norm: negative norm");
    if (norm == 0)
        return bound.is_zero() ? std::vector<Cnf>{} : std::vector<Cnf>{Cnf()};
    if (bound.is_zero())
        return {};
    {
        std::lock_guard<std::mutex> lock(norm_memo_mu());
        auto it = norm_memo().find(NormKey{norm, bound});
        if (it != norm_memo().end())
            return it->second;
    }
    std::vector<Cnf> out;
    const Cnf& lead_exp = bound.leading_exponent();
    long long lead_coeff = bound.leading_coefficient();
    // Candidate leading exponents e <= lead_exp, by their norm.
    Cnf exp_bound = lead_exp.add(Cnf::nat(1));
    for (long long ne = 0; ne < norm; ++ne) {
        for (const Cnf& e : ordinals_with_norm(ne, exp_bound)) {
            long long unit = 1 + ne;
            for (long long c = 1; c * unit <= norm; ++c) {
                bool at_bound_head;
                if (e < lead_exp)
                    at_bound_head = false;
                else if (c < lead_coeff)
                    at_bound_head = false;
                else if (c == lead_coeff)
                    at_bound_head = true;
                else
                    continue;  // leading term already exceeds the bound
                Cnf rest_bound = at_bound_head ? bound.tail() : Cnf::omega_pow(e);
                long long rem = norm - c * unit;
                for (const Cnf& rest : ordinals_with_norm(rem, rest_bound)) {
                    std::vector<Cnf::Term> terms;
                    terms.push_back(Cnf::term(e, c));
                    for (const auto& t : rest.terms())
                        terms.push_back(t);
                    out.push_back(Cnf::from_terms(std::move(terms)));
                }
            }
        }
    }
    std::sort(out.begin(), out.end());
    {
        std::lock_guard<std::mutex> lock(norm_memo_mu());
        norm_memo().emplace(NormKey{norm, bound}, out);
    }
    return out;
}

// --- OrdinalBijection ---------------------------------------------------

struct OrdinalBijection::Enumeration {
    Cnf beta;
    std::mutex mu;
    std::vector<Cnf> list;
    long long next_norm = 0;

    void extend(size_t upto) {
        std::lock_guard<std::mutex> lock(mu);
        while (list.size() <= upto) {
            auto level = ordinals_with_norm(next_norm, beta);
            ++next_norm;
            list.insert(list.end(), level.begin(), level.end());
            if (next_norm > (1 << 20))
                throw Error("ordinal enumeration norm cap exceeded");
        }
    }

    Cnf at(size_t i) {
        extend(i);
        std::lock_guard<std::mutex> lock(mu);
        return list[i];
    }

    int index_of(const Cnf& gamma) {
        long long target_norm = gamma.norm();
        std::lock_guard<std::mutex> lock(mu);
        while (next_norm <= target_norm) {
            auto level = ordinals_with_norm(next_norm, beta);
            ++next_norm;
            list.insert(list.end(), level.begin(), level.end());
        }
        for (size_t i = 0; i < list.size(); ++i)
            if (list[i] == gamma)
                return static_cast<int>(i);
        throw Error("ordinal bijection: value not below beta");
    }
};

OrdinalBijection OrdinalBijection::canonical(const Cnf& beta) {
    if (beta < Cnf::omega())
        throw Error("ordinal bijection: beta must be >= w");
    OrdinalBijection f;
    f.beta_ = beta;
    f.enum_ = std::make_shared<Enumeration>();
    f.enum_->beta = beta;
    f.name_ = "id";
    return f;
}

OrdinalBijection OrdinalBijection::with_swap(const Cnf& beta, int i, int j) {
    if (i < 1 || j < 1 || i == j)
        throw Error("ordinal bijection: swap positions must be distinct and >= 1");
    std::vector<int> perm(static_cast<size_t>(std::max(i, j)) + 1);
    for (size_t t = 0; t < perm.size(); ++t)
        perm[t] = static_cast<int>(t);
    std::swap(perm[static_cast<size_t>(i)], perm[static_cast<size_t>(j)]);
    OrdinalBijection f = with_permutation(beta, std::move(perm));
    f.name_ = "swap:" + std::to_string(i) + ":" + std::to_string(j);
    return f;
}

OrdinalBijection OrdinalBijection::with_permutation(const Cnf& beta, std::vector<int> perm) {
    if (!perm.empty()) {
        std::vector<bool> seen(perm.size(), false);
        for (int v : perm) {
            if (v < 0 || v >= static_cast<int>(perm.size()) || seen[static_cast<size_t>(v)])
                throw Error("ordinal bijection: not a permutation");
            seen[static_cast<size_t>(v)] = true;
        }
        if (perm[0] != 0)
            throw Error("ordinal bijection: permutation must fix 0");
    }
    OrdinalBijection f = canonical(beta);
    f.perm_ = std::move(perm);
    f.name_ = "perm";
    return f;
}

int OrdinalBijection::permuted(int n) const {
    if (n >= 0 && n < static_cast<int>(perm_.size()))
        return perm_[static_cast<size_t>(n)];
    return n;
}

int OrdinalBijection::permuted_inverse(int n) const {
    for (size_t i = 0; i < perm_.size(); ++i)
        if (perm_[i] == n)
            return static_cast<int>(i);
    return n;
}

Cnf OrdinalBijection::value(int n) const {
    if (n < 0)
        throw Error("ordinal bijection: negative position");
    if (!enum_)
        throw Error("ordinal bijection: default-constructed");
    return enum_->at(static_cast<size_t>(permuted(n)));
}

int OrdinalBijection::inverse(const Cnf& gamma) const {
    if (!enum_)
        throw Error("ordinal bijection: default-constructed");
    return permuted_inverse(enum_->index_of(gamma));
}

}  // namespace altrel
