#include "doctest.h"
#include "support/corpus.hpp"
#include "support/gen.hpp"

using namespace cyclometer;

TEST_CASE("generated programs parse, validate and are reproducible") {
    for (uint64_t seed = 1; seed <= 50; ++seed) {
        const std::string text = testing::random_program(seed);
        CHECK(text == testing::random_program(seed));
        const il::Program p = il::parse(text);
        CHECK(il::validate(p).empty());
        CHECK(il::parse(il::print(p)) == p);
    }
}

TEST_CASE("corpus properties on a sample") {
    for (uint64_t seed = 1000; seed < 1040; ++seed) {
        CAPTURE(seed);
        const auto r = testing::check_program(testing::random_program(seed), seed % 2 == 0);
        for (const auto& p : r.problems) MESSAGE(p);
        CHECK(r.neutral);
        CHECK(r.oracle);
        CHECK(r.rules);
        CHECK(r.flame_conserved);
        CHECK(r.stats_match_timeline);
        CHECK(r.par_normalized);
    }
}
