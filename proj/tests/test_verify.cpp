#include <doctest.h>

#include "bifree/errors.hpp"
#include "bifree/verify.hpp"

using namespace bifree;

TEST_CASE("verify suite passes and is deterministic")
{
    const VerifyReport a = run_verify(1, 5, {3, false});
    for (const auto& r : a.results) {
        INFO(r.name << ": " << r.detail);
        CHECK(r.passed);
        CHECK(r.cases > 0);
    }
    CHECK(a.passed());
    CHECK(a.first_failure() == nullptr);
    CHECK(a.results.size() == verify_property_names().size());

    const VerifyReport b = run_verify(1, 5, {3, false});
    REQUIRE(b.results.size() == a.results.size());
    for (std::size_t i = 0; i < a.results.size(); ++i) {
        CHECK(a.results[i].name == b.results[i].name);
        CHECK(a.results[i].cases == b.results[i].cases);
    }
    CHECK_THROWS_AS(run_verify(1, 1), Error);
}
