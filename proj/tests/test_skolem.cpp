#include <catch2/catch_amalgamated.hpp>

#include "glv/parser.hpp"
#include "glv/skolem.hpp"
#include "helpers.hpp"

using namespace glv;

namespace {

const char* kDrinker = "=> exists x. (A(x) -> forall y. A(y))";

SkolemTree drinker_tree() {
    return build_tree(parse_hypersequent(kDrinker), Signature{});
}

}  // namespace

TEST_CASE("removal tree for the drinker formula") {
    SkolemTree t = drinker_tree();
    REQUIRE(t.height() == 6);
    REQUIRE(t.steps.size() == 5);
    CHECK(t.steps[0].kind == StepKind::RightExists);
    CHECK(t.steps[1].kind == StepKind::RightImp);
    CHECK(t.steps[2].kind == StepKind::RightImp);
    CHECK(t.steps[3].kind == StepKind::LeftExists);
    CHECK(t.steps[4].kind == StepKind::LeftImp);

    CHECK(t.xbar == std::vector<std::string>{"x#1"});
    CHECK(t.steps[3].skargs == std::vector<std::string>{"x#1"});

    auto leaves = level_set(t, t.height());
    REQUIRE(leaves.size() == 3);
    CHECK(leaves[0] ==
          parse_hypersequent("A(x#1) => bot | bot, A(x#1) => bot, A(sk#2(x#1))"));
    CHECK(leaves[1] == parse_hypersequent("A(x#1) =>"));
    CHECK(leaves[2] == parse_hypersequent("=>"));

    CHECK(check_sync(t).ok);
}

TEST_CASE("tree construction requires a closed input") {
    CHECK_THROWS(build_tree(parse_hypersequent("=> P(x#1)"), Signature{}));
    CHECK_NOTHROW(build_tree(parse_hypersequent("=> P(c)"), Signature{}));
}

TEST_CASE("tree construction is deterministic") {
    SkolemTree a = drinker_tree();
    SkolemTree b = drinker_tree();
    REQUIRE(a.height() == b.height());
    for (size_t i = 0; i < a.height(); ++i) {
        REQUIRE(a.levels[i].size() == b.levels[i].size());
        for (size_t j = 0; j < a.levels[i].size(); ++j)
            CHECK(a.levels[i][j].hyp() == b.levels[i][j].hyp());
    }
    CHECK(a.xbar == b.xbar);
}

TEST_CASE("level sets deduplicate") {
    SkolemTree t = drinker_tree();
    auto l1 = level_set(t, 1);
    REQUIRE(l1.size() == 1);
    CHECK(l1[0] == parse_hypersequent(kDrinker));
    for (size_t i = 1; i <= t.height(); ++i)
        CHECK(level_set(t, i).size() <= t.levels[i - 1].size());
    CHECK_THROWS(level_set(t, 0));
    CHECK_THROWS(level_set(t, t.height() + 1));
}

TEST_CASE("sync check passes on random closed inputs") {
    testgen::Rng rng(2024);
    for (int i = 0; i < 50; ++i) {
        Hypersequent h = testgen::rand_closed_hypersequent(rng, 2, 2, 2);
        SkolemTree t = build_tree(h, Signature{});
        auto r = check_sync(t);
        INFO(print(h) << ": " << r.message);
        CHECK(r.ok);
        CHECK(detail::is_clean(t.levels.back()[0].hyp()));
    }
}

TEST_CASE("ground term enumeration by depth") {
    Signature sig;
    sig.scan(parse_hypersequent("=> P(f(c))"));
    sig.ensure_constant();
    auto t0 = enumerate_terms(sig, 0);
    REQUIRE(t0.size() == 1);
    CHECK(print(t0[0]) == "c");
    auto t2 = enumerate_terms(sig, 2);
    REQUIRE(t2.size() == 3);
    CHECK(print(t2[0]) == "c");
    CHECK(print(t2[1]) == "f(c)");
    CHECK(print(t2[2]) == "f(f(c))");
    // one constant and one unary function give depth+1 terms
    for (int d = 0; d <= 5; ++d)
        CHECK(enumerate_terms(sig, d).size() == static_cast<size_t>(d) + 1);
}

TEST_CASE("witness search on the drinker formula") {
    SkolemTree t = drinker_tree();

    auto w1 = find_witnesses(t, 1, 4, 4, 100000);
    REQUIRE(w1.found);
    CHECK(w1.witnesses.k == 1);
    REQUIRE(w1.witnesses.tuples.size() == 1);
    CHECK(print(w1.witnesses.tuples[0][0]) == "c0");

    auto w2 = find_witnesses(t, 2, 4, 4, 100000);
    REQUIRE(w2.found);
    CHECK(w2.witnesses.k == 2);
    REQUIRE(w2.witnesses.tuples.size() == 2);
    CHECK(print(w2.witnesses.tuples[0][0]) == "c0");
    CHECK(print(w2.witnesses.tuples[1][0]) == "sk#2(c0)");

    // the found set satisfies its own acceptance test
    auto leaves = level_set(t, t.height());
    size_t lp = 0;
    CHECK(detail::witnesses_work(leaves, t.xbar, 2, w2.witnesses.tuples, 100000, lp));

    // k = 1 does not suffice at n = 2
    auto none = find_witnesses(t, 2, 1, 4, 100000);
    CHECK_FALSE(none.found);
    CHECK_FALSE(none.budget_exhausted);
    CHECK(none.max_k_tried == 1);

    // a tiny budget reports exhaustion instead
    auto tight = find_witnesses(t, 2, 4, 4, 5);
    CHECK_FALSE(tight.found);
    CHECK(tight.budget_exhausted);
}
