#include <catch2/catch_amalgamated.hpp>

#include <string>
#include <vector>

#include "glv/parser.hpp"
#include "glv/reconstruct.hpp"
#include "helpers.hpp"

using namespace glv;

namespace {

const char* kDrinker = "=> exists x. (A(x) -> forall y. A(y))";

// Pulls the trailing "size N" figures out of the trace: the measure that must
// shrink by one per reduction step.
std::vector<long> sizes_from(const std::vector<std::string>& lines) {
    std::vector<long> out;
    for (auto& l : lines) {
        auto p = l.rfind("size ");
        if (p != std::string::npos) out.push_back(std::stol(l.substr(p + 5)));
    }
    return out;
}

}  // namespace

TEST_CASE("drinker formula at increasing precision") {
    Hypersequent h = parse_hypersequent(kDrinker);
    for (long n = 1; n <= 3; ++n) {
        std::vector<std::string> lines;
        ProveOptions opt;
        opt.n = n;
        opt.trace = [&](const std::string& m) { lines.push_back(m); };
        auto r = prove_approx(h, opt);
        REQUIRE(r.status == ProveResult::Proved);
        CHECK_NOTHROW(check(r.proof, false));
        CHECK_FALSE(uses_cut(r.proof));
        CHECK(r.proof.conclusion() == to_approx(h, n));

        auto mus = sizes_from(lines);
        REQUIRE(mus.size() >= 2);
        for (size_t i = 1; i < mus.size(); ++i) CHECK(mus[i] == mus[i - 1] - 1);
        CHECK(mus.back() == static_cast<long>(r.search.witnesses.k));
    }
}

TEST_CASE("quantifier-free inputs bypass the tree") {
    ProveOptions opt;
    opt.n = 3;
    auto r = prove_approx(parse_hypersequent("=> A -> A"), opt);
    REQUIRE(r.status == ProveResult::Proved);
    CHECK(r.proof.conclusion() == to_approx(parse_hypersequent("=> A -> A"), 3));

    auto r2 = prove_approx(parse_hypersequent("=> A"), opt);
    REQUIRE(r2.status == ProveResult::Refuted);
    CHECK(eval_hypersequent(r2.countermodel,
                            to_approx(parse_hypersequent("=> A"), 3)) > Rational(0));
}

TEST_CASE("open inputs are rejected") {
    ProveOptions opt;
    CHECK_THROWS(prove_approx(parse_hypersequent("=> P(x#1)"), opt));
}

TEST_CASE("search exhaustion is reported") {
    // at n = 1 the approximation of => exists x. P(x) is trivially valid, so
    // use n = 2 where no witness can work
    ProveOptions opt;
    opt.n = 2;
    opt.max_k = 2;
    opt.max_depth = 1;
    auto r = prove_approx(parse_hypersequent("=> exists x. P(x)"), opt);
    CHECK(r.status == ProveResult::Exhausted);
    CHECK_FALSE(r.search.found);

    ProveOptions none;
    none.max_k = 0;
    auto r2 = prove_approx(parse_hypersequent(kDrinker), none);
    CHECK(r2.status == ProveResult::Exhausted);
}

TEST_CASE("random closed inputs reconstruct or report honestly") {
    testgen::Rng rng(5150);
    int proved = 0, exhausted = 0;
    for (int i = 0; i < 20; ++i) {
        Hypersequent h = testgen::rand_closed_hypersequent(rng, 2, 2, 2, 4);
        std::vector<std::string> lines;
        ProveOptions opt;
        opt.n = 1 + i % 2;
        opt.max_k = 2;
        opt.max_depth = 1;
        opt.lp_budget = 3000;
        opt.trace = [&](const std::string& m) { lines.push_back(m); };
        ProveResult r;
        INFO(print(h));
        REQUIRE_NOTHROW(r = prove_approx(h, opt));
        if (r.status == ProveResult::Proved) {
            ++proved;
            CHECK_NOTHROW(check(r.proof, false));
            CHECK_FALSE(uses_cut(r.proof));
            CHECK(r.proof.conclusion() == to_approx(h, opt.n));
            if (has_quantifier(h)) {
                auto mus = sizes_from(lines);
                REQUIRE_FALSE(mus.empty());
                for (size_t j = 1; j < mus.size(); ++j) CHECK(mus[j] == mus[j - 1] - 1);
            }
        } else if (r.status == ProveResult::Exhausted) {
            ++exhausted;
        }
    }
    CHECK(proved > 0);
}
