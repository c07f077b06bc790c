#include "doctest.h"

#include "altrel/cnf.hpp"
#include "altrel/util.hpp"

using namespace altrel;

namespace {

Cnf C(const std::string& s) { return Cnf::parse_text(s); }

}  // namespace

TEST_CASE("cnf basics and ordering") {
    CHECK(Cnf().is_zero());
    CHECK(Cnf::nat(3).as_nat() == 3);
    CHECK(Cnf::nat(0) == Cnf());
    CHECK(Cnf::nat(2) < Cnf::omega());
    CHECK(Cnf::omega() < Cnf::omega_pow(Cnf::nat(2)));
    CHECK(C("w*2") < C("w*3"));
    CHECK(C("w + 5") < C("w*2"));
    CHECK(C("w^2") < C("w^w"));
    CHECK(!Cnf::omega().is_finite());
    CHECK(Cnf::omega().is_limit());
    CHECK(!C("w + 1").is_limit());
}

TEST_CASE("cnf text round trip") {
    for (const char* s : {"0", "5", "w", "w*2", "w + 1", "w^2*3 + w*5", "w^{w}",
                          "w^{w + 1}*2 + w^3 + 4"}) {
        Cnf c = C(s);
        CHECK(c.to_text() == s);
        CHECK(Cnf::parse_text(c.to_text()) == c);
    }
    CHECK(C("w^w") == C("w^{w}"));
    CHECK(C("w^w*3") == Cnf::omega_pow(Cnf::omega()).add(Cnf::omega_pow(Cnf::omega())).add(
                            Cnf::omega_pow(Cnf::omega())));
    CHECK_THROWS_AS(C("w^"), Error);
    CHECK_THROWS_AS(C(""), Error);
    CHECK_THROWS_AS(C("w + w"), Error);  // exponents must strictly decrease
}

TEST_CASE("ordinal addition") {
    CHECK(Cnf::nat(2).add(Cnf::nat(3)) == Cnf::nat(5));
    CHECK(Cnf::nat(5).add(Cnf::omega()) == Cnf::omega());      // absorption
    CHECK(Cnf::omega().add(Cnf::nat(1)) == C("w + 1"));
    CHECK(C("w^2 + w").add(C("w*2 + 1")) == C("w^2 + w*3 + 1"));
}

TEST_CASE("left multiplication by omega") {
    CHECK(C("1").times_omega_left() == C("w"));
    CHECK(C("w").times_omega_left() == C("w^2"));
    CHECK(C("w*3 + 5").times_omega_left() == C("w^2*3 + w*5"));
    CHECK(C("w^w").times_omega_left() == C("w^w"));  // 1 + w = w in the exponent
}

TEST_CASE("divide_by_omega inverts left multiplication") {
    CHECK(divide_by_omega(C("w^2")) == C("w"));
    CHECK(divide_by_omega(C("w^2*3 + w*5")) == C("w*3 + 5"));
    CHECK(divide_by_omega(C("w^w")) == C("w^w"));
    CHECK_THROWS_AS(divide_by_omega(C("w + 1")), Error);
    CHECK_THROWS_AS(divide_by_omega(C("w")), Error);
}

TEST_CASE("divide_by_omega against the multiplication oracle, generated") {
    Rng rng(99);
    for (int trial = 0; trial < 50; ++trial) {
        // random beta >= w with a couple of terms
        std::vector<Cnf::Term> terms;
        int top = 2 + static_cast<int>(rng.below(3));
        for (int e = top; e >= 0; --e)
            if (rng.chance(2, 3))
                terms.push_back(Cnf::term(Cnf::nat(e), 1 + static_cast<long long>(rng.below(4))));
        if (terms.empty() || terms[0].exponent().is_zero())
            terms.insert(terms.begin(), Cnf::term(Cnf::nat(top + 1), 1));
        Cnf beta = Cnf::from_terms(terms);
        Cnf alpha = beta.times_omega_left();
        CHECK(divide_by_omega(alpha) == beta);
    }
}

TEST_CASE("norm levels enumerate every ordinal below the bound exactly once") {
    SUBCASE("below omega the enumeration is the identity") {
        for (long long k = 0; k < 30; ++k) {
            auto level = ordinals_with_norm(k, Cnf::omega());
            REQUIRE(level.size() == 1);
            CHECK(level[0] == Cnf::nat(k));
        }
    }
    SUBCASE("below w*2") {
        Cnf bound = C("w*2");
        CHECK(ordinals_with_norm(0, bound) == std::vector<Cnf>{Cnf()});
        CHECK(ordinals_with_norm(2, bound) == std::vector<Cnf>{Cnf::nat(2), C("w")});
        CHECK(ordinals_with_norm(4, bound) == std::vector<Cnf>{Cnf::nat(4), C("w + 2")});
    }
    SUBCASE("levels below w^2 are disjoint and complete for small norms") {
        Cnf bound = C("w^2");
        std::vector<Cnf> seen;
        for (long long k = 0; k <= 8; ++k)
            for (const Cnf& c : ordinals_with_norm(k, bound)) {
                CHECK(c < bound);
                CHECK(c.norm() == k);
                for (const Cnf& prev : seen)
                    CHECK(!(prev == c));
                seen.push_back(c);
            }
        // every w*a + b with norm <= 8 shows up
        for (int a = 0; a <= 3; ++a)
            for (int b = 0; b <= 3; ++b) {
                Cnf v = a == 0 ? Cnf::nat(b) : C("w*" + std::to_string(a)).add(Cnf::nat(b));
                if (v.norm() <= 8)
                    CHECK(std::count(seen.begin(), seen.end(), v) == 1);
            }
    }
}

TEST_CASE("canonical bijection") {
    OrdinalBijection f = OrdinalBijection::canonical(Cnf::omega());
    for (int n = 0; n < 40; ++n) {
        CHECK(f.value(n) == Cnf::nat(n));
        CHECK(f.inverse(Cnf::nat(n)) == n);
    }
    CHECK(f.value(0).is_zero());

    OrdinalBijection g = OrdinalBijection::canonical(C("w*2"));
    CHECK(g.value(0).is_zero());
    for (int n = 0; n < 30; ++n)
        CHECK(g.inverse(g.value(n)) == n);
    CHECK_THROWS_AS(OrdinalBijection::canonical(Cnf::nat(5)), Error);
}

TEST_CASE("swapped bijection") {
    OrdinalBijection f = OrdinalBijection::with_swap(Cnf::omega(), 1, 2);
    CHECK(f.value(0) == Cnf::nat(0));
    CHECK(f.value(1) == Cnf::nat(2));
    CHECK(f.value(2) == Cnf::nat(1));
    CHECK(f.value(3) == Cnf::nat(3));
    CHECK(f.inverse(Cnf::nat(2)) == 1);
    CHECK_THROWS_AS(OrdinalBijection::with_swap(Cnf::omega(), 0, 1), Error);
}
