#ifndef ALTREL_CNF_HPP
#define ALTREL_CNF_HPP

#include <compare>
#include <memory>
#include <string>
#include <vector>

namespace altrel {

/// Ordinal below epsilon_0 in Cantor normal form: a sum of terms
/// w^exponent * coefficient with strictly decreasing exponents and positive
/// coefficients. Zero is the empty sum.
class Cnf {
public:
    // exp_box holds the exponent boxed in a vector so the type can nest;
    // an empty box means exponent zero (a finite term).
    struct Term {
        std::vector<Cnf> exp_box;
        long long coefficient = 0;

        const Cnf& exponent() const;
        bool operator==(const Term& other) const;
    };

    Cnf() = default;  // zero

    static Term term(const Cnf& exponent, long long coefficient);
    static Cnf nat(long long n);
    static Cnf omega();                  // w
    static Cnf omega_pow(const Cnf& e);  // w^e
    static Cnf from_terms(std::vector<Term> terms);

    bool is_zero() const { return terms_.empty(); }
    bool is_finite() const;              // a natural number
    long long as_nat() const;            // requires is_finite()
    bool is_limit() const;               // nonzero with no finite tail

    const std::vector<Term>& terms() const { return terms_; }
    const Cnf& leading_exponent() const;
    long long leading_coefficient() const;
    Cnf tail() const;                    // everything after the leading term

    std::strong_ordering operator<=>(const Cnf& other) const;
    bool operator==(const Cnf& other) const { return terms_ == other.terms_; }

    Cnf add(const Cnf& other) const;     // ordinal addition (not commutative)
    Cnf times_omega_left() const;        // w * this

    // "w^2*3 + w*5 + 7"; nested exponents in braces: "w^{w + 1}*2".
    std::string to_text() const;
    static Cnf parse_text(const std::string& text);

    // Finite combinatorial size used for the canonical enumeration of
    // ordinals: norm(0) = 0, norm(sum w^e*c) = sum c * (1 + norm(e)).
    // Every norm level below a fixed bound is finite.
    long long norm() const;

private:
    std::vector<Term> terms_;
};

// The unique beta with w * beta = alpha, for limit alpha >= w^2.
Cnf divide_by_omega(const Cnf& alpha);

// All ordinals strictly below bound with the given norm, increasing.
std::vector<Cnf> ordinals_with_norm(long long norm, const Cnf& bound);

/// Bijection f : omega -> beta with f(0) = 0, for beta >= w. The canonical
/// bijection enumerates ordinals below beta by (norm, order); for
/// beta = omega it degenerates to the identity. A finitely supported
/// permutation of positions (fixing 0) can be laid over it.
class OrdinalBijection {
public:
    OrdinalBijection() = default;

    static OrdinalBijection canonical(const Cnf& beta);
    static OrdinalBijection with_swap(const Cnf& beta, int i, int j);
    static OrdinalBijection with_permutation(const Cnf& beta, std::vector<int> perm);

    const Cnf& beta() const { return beta_; }
    Cnf value(int n) const;  // f(n)
    int inverse(const Cnf& gamma) const;
    const std::string& name() const { return name_; }

private:
    struct Enumeration;

    int permuted(int n) const;
    int permuted_inverse(int n) const;

    Cnf beta_;
    std::shared_ptr<Enumeration> enum_;
    std::vector<int> perm_;  // finitely supported; identity beyond
    std::string name_;
};

}  // namespace altrel

#endif
