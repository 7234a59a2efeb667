#include <doctest.h>

#include "fracimp/errors.hpp"
#include "fracimp/partition.hpp"

using namespace fracimp;

TEST_CASE("valid partitions") {
    CHECK(validate_partition(Partition::without_impulses(2.0)));
    CHECK(validate_partition(Partition{{1.0, 3.0}, {2.0}}));
    CHECK(validate_partition(Partition{{1.0, 2.0, 4.0}, {1.0, 3.0}}));
    CHECK(validate_partition(Partition{{1.0, 2.0, 4.0}, {2.0, 3.0}}));
}

TEST_CASE("invalid partitions name the violated relation") {
    auto chk = validate_partition(Partition{{2.0, 3.0}, {1.0}});
    CHECK_FALSE(chk);
    CHECK(chk.violation == "tau_1 <= sigma_1 fails");
    chk = validate_partition(Partition{{1.0, 3.0}, {3.0}});
    CHECK_FALSE(chk);
    CHECK(chk.violation == "sigma_1 < tau_2 fails");
    CHECK_FALSE(validate_partition(Partition{{0.0}, {}}));
    CHECK_FALSE(validate_partition(Partition{{}, {}}));
    CHECK_FALSE(validate_partition(Partition{{1.0}, {0.5}}));
}

TEST_CASE("segment spans skip empty intervals") {
    const auto spans = segment_spans(Partition{{1.0, 2.0, 4.0}, {1.0, 3.0}});
    REQUIRE(spans.size() == 4);
    CHECK(spans[0].tag == BranchTag{Branch::Differential, 0});
    CHECK(spans[1].tag == BranchTag{Branch::Differential, 1});
    CHECK(spans[1].a == 1.0);
    CHECK(spans[2].tag == BranchTag{Branch::Impulse, 2});
    CHECK(spans[3].b == 4.0);
    double total = 0.0;
    for (const auto& s : spans) total += s.length();
    CHECK(total == doctest::Approx(4.0));
}

TEST_CASE("classify uses half-open intervals") {
    const Partition p{{1.0, 3.0}, {2.0}};
    CHECK(classify(p, 1.0) == BranchTag{Branch::Differential, 0});
    CHECK(classify(p, 1.5) == BranchTag{Branch::Impulse, 1});
    CHECK(classify(p, 2.0) == BranchTag{Branch::Impulse, 1});
    CHECK(classify(p, 2.0001) == BranchTag{Branch::Differential, 1});
    CHECK(classify(p, 3.0) == BranchTag{Branch::Differential, 1});
    CHECK_THROWS_AS(classify(p, 0.0), DomainError);
    CHECK_THROWS_AS(classify(p, 3.1), DomainError);
    CHECK(std::string(branch_name(Branch::Impulse)) == "impulse");
}
