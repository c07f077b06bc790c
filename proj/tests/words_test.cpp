#include "doctest.h"

#include <algorithm>

#include "altrel/util.hpp"
#include "altrel/words.hpp"

using namespace altrel;

namespace {

Word W(const std::string& s) { return Word::parse_text(s); }

std::vector<std::string> texts(const std::vector<Word>& ws) {
    std::vector<std::string> out;
    for (const auto& w : ws)
        out.push_back(w.to_text());
    return out;
}

}  // namespace

TEST_CASE("word text format") {
    CHECK(W("0110").size() == 4);
    CHECK(W("v0v").to_text() == "v0v");
    CHECK(W("").empty());
    Word tup({Word::Cell(Letter{0, 1}), Word::Cell(std::nullopt), Word::Cell(Letter{2, 0})});
    CHECK(tup.to_text() == "(0,1).v.(2,0)");
    CHECK(Word::parse_text("(0,1).v.(2,0)") == tup);
    CHECK(W("v").left_variable());
    CHECK(!W("0v").left_variable());
}

TEST_CASE("concat and substitution") {
    CHECK(W("01").concat(W("10")) == W("0110"));
    CHECK(W("").concat(W("10")) == W("10"));
    CHECK(W("0v").concat(W("1")) == W("0v1"));

    CHECK(W("v0v").substitute(Word::Cell(Letter{1})) == W("101"));
    CHECK(W("v0v").substitute(Word::Cell(std::nullopt)) == W("v0v"));
    CHECK(W("v").substitute(Word::Cell(Letter{0})) == W("0"));
}

TEST_CASE("substitution is a homomorphism and fixes variable-free words") {
    Rng rng(7);
    Alphabet L = Alphabet::tuples(2, 1);
    for (int trial = 0; trial < 300; ++trial) {
        auto random_word = [&](bool allow_var) {
            Word w;
            int len = static_cast<int>(rng.below(5));
            for (int i = 0; i < len; ++i) {
                int c = static_cast<int>(rng.below(allow_var ? 3 : 2));
                if (c == 2)
                    w.push_variable();
                else
                    w.push_letter(Letter{c});
            }
            return w;
        };
        Word x = random_word(true);
        Word y = random_word(true);
        Word::Cell lambda(Letter{static_cast<int>(rng.below(2))});
        CHECK(x.concat(y).substitute(lambda) == x.substitute(lambda).concat(y.substitute(lambda)));
        Word plain = random_word(false);
        CHECK(plain.substitute(lambda) == plain);
    }
}

TEST_CASE("alphabet construction") {
    Alphabet bits = Alphabet::tuples(2, 2);
    CHECK(bits.level(0).size() == 4);
    CHECK(bits.contains(Letter{1, 0}, 0));
    CHECK(!bits.contains(Letter{2, 0}, 0));
    CHECK_THROWS_AS(Alphabet::tuples(4, 20), Error);

    Alphabet chain = Alphabet::graded({{Letter{0}}, {Letter{0}, Letter{1}}});
    CHECK(chain.graded_mode());
    CHECK(chain.level(0).size() == 1);
    CHECK(chain.level(1).size() == 2);
    CHECK_THROWS_AS(chain.level(2), Error);
    CHECK_THROWS_AS(Alphabet::graded({{Letter{0}}, {Letter{1}}}), Error);

    Alphabet parsed = Alphabet::from_json(bits.to_json());
    CHECK(parsed.level(0) == bits.level(0));
    CHECK(Alphabet::from_json(R"({"base":2,"arity":1})").level(0).size() == 2);
}

TEST_CASE("semigroup enumeration, plain mode") {
    Alphabet L = Alphabet::tuples(2, 1);
    SUBCASE("single generator, single factor") {
        auto words = enumerate_semigroup({W("v")}, L, SemigroupMode::plain, 0);
        CHECK(texts(words) == std::vector<std::string>{"0", "1"});
    }
    SUBCASE("two generators, up to two factors") {
        auto words = enumerate_semigroup({W("v"), W("v0")}, L, SemigroupMode::plain, 1);
        std::vector<std::string> expect{"0", "00", "000", "010", "1", "10", "100", "110"};
        CHECK(texts(words) == expect);
    }
}

TEST_CASE("semigroup enumeration, graded mode pins the i-th letter to level i") {
    Alphabet chain = Alphabet::graded({{Letter{0}}, {Letter{0}, Letter{1}}});
    auto words = enumerate_semigroup({W("v"), W("v")}, chain, SemigroupMode::graded, 1);
    CHECK(texts(words) == std::vector<std::string>{"0", "00", "01"});
}

TEST_CASE("translate walk includes the prefix and respects the budget") {
    Alphabet L = Alphabet::tuples(2, 1);
    std::vector<Word> seen;
    for_each_translate(W("1"), {W("v")}, L, SemigroupMode::plain, 2, [&](const Word& w) {
        seen.push_back(w);
        return true;
    });
    CHECK(texts(seen) == std::vector<std::string>{"1", "10", "11"});

    seen.clear();
    for_each_translate(W("111"), {W("v")}, L, SemigroupMode::plain, 2, [&](const Word& w) {
        seen.push_back(w);
        return true;
    });
    CHECK(seen.empty());
}

TEST_CASE("translate membership") {
    Alphabet L = Alphabet::tuples(2, 1);
    VarSequence X{W("v"), W("v0")};
    Word w0 = W("1");
    CHECK(translate_contains(w0, X, L, SemigroupMode::plain, W("1")));
    CHECK(translate_contains(w0, X, L, SemigroupMode::plain, W("110")));   // x_1[1]
    CHECK(translate_contains(w0, X, L, SemigroupMode::plain, W("1010")));  // x_0[0] x_1[1]
    CHECK(!translate_contains(w0, X, L, SemigroupMode::plain, W("011")));
    CHECK(!translate_contains(w0, X, L, SemigroupMode::plain, W("101")));

    Alphabet chain = Alphabet::graded({{Letter{0}}, {Letter{0}, Letter{1}}});
    VarSequence G{W("v"), W("v")};
    CHECK(translate_contains(W(""), G, chain, SemigroupMode::graded, W("01")));
    CHECK(!translate_contains(W(""), G, chain, SemigroupMode::graded, W("1")));
    CHECK(!translate_contains(W(""), G, chain, SemigroupMode::graded, W("10")));
}

TEST_CASE("verify_monochromatic") {
    Alphabet L = Alphabet::tuples(2, 1);
    Colouring constant = [](const Word&) { return 7; };
    CHECK(verify_monochromatic(W("0"), {W("v")}, L, SemigroupMode::plain, 4, constant).ok);

    Colouring first = [](const Word& w) { return w.empty() || !w.at(0) ? 0 : (*w.at(0))[0]; };
    auto bad = verify_monochromatic(W(""), {W("v")}, L, SemigroupMode::plain, 4, first);
    CHECK(!bad.ok);
    REQUIRE(bad.counterexample.has_value());
    CHECK(bad.counterexample->to_text() == "1");
}
