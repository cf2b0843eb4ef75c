#include <catch2/catch_amalgamated.hpp>

#include "gyron/params.hpp"

using namespace gyron;

TEST_CASE("parameter validation") {
    CHECK_NOTHROW(validate_params(2, 3, 0.1));
    CHECK_NOTHROW(validate_params(1, 1, 1.0));
    CHECK_THROWS_AS(validate_params(2, 4, 1.0), NonCoprimeError);
    CHECK_THROWS_AS(validate_params(0, 1, 1.0), NonPositiveError);
    CHECK_THROWS_AS(validate_params(1, -2, 1.0), NonPositiveError);
    CHECK_THROWS_AS(validate_params(1, 1, 0.0), NonPositiveError);
    CHECK_THROWS_AS(validate_params(1, 1, -0.5), NonPositiveError);
}

TEST_CASE("label validation and energy") {
    const auto pr = validate_params(2, 3, 1.0);
    const auto lb = make_label(pr, 1, 1, 2);
    CHECK(lb.dim() == 2);
    CHECK(rep_energy(pr, lb) == 13.0);
    CHECK_THROWS_AS(make_label(pr, 1, 2, 0), InvalidLabelError);  // q > l-1
    CHECK_THROWS_AS(make_label(pr, 1, 0, 3), InvalidLabelError);  // p > m-1
    CHECK_THROWS_AS(make_label(pr, -1, 0, 0), InvalidLabelError);
}

TEST_CASE("shell enumeration") {
    SECTION("ground state only") {
        const auto pr = validate_params(1, 1, 1.0);
        const auto labels = enumerate_reps(pr, 0.0);
        REQUIRE(labels.size() == 1);
        CHECK(labels[0] == RepLabel{0, 0, 0});
        CHECK(rep_energy(pr, labels[0]) == 0.0);
    }
    SECTION("1:2 shell up to E=2") {
        const auto pr = validate_params(1, 2, 1.0);
        const auto labels = enumerate_reps(pr, 2.0);
        REQUIRE(labels.size() == 3);
        CHECK(labels[0] == RepLabel{0, 0, 0});
        CHECK(labels[1] == RepLabel{0, 0, 1});
        CHECK(labels[2] == RepLabel{1, 0, 0});
        CHECK(rep_energy(pr, labels[0]) == 0.0);
        CHECK(rep_energy(pr, labels[1]) == 1.0);
        CHECK(rep_energy(pr, labels[2]) == 2.0);
    }
    SECTION("sorted by energy then label") {
        const auto pr = validate_params(2, 3, 0.5);
        const auto labels = enumerate_reps(pr, 20.0);
        for (std::size_t i = 0; i + 1 < labels.size(); ++i) {
            CHECK(rep_energy(pr, labels[i]) <= rep_energy(pr, labels[i + 1]));
        }
    }
    SECTION("each oscillator level is covered exactly once") {
        // multiplicities of the enumerated blocks match the count of
        // occupation pairs in the shell
        const auto pr = validate_params(2, 3, 1.0);
        const double e_max = 40.0;
        const auto labels = enumerate_reps(pr, e_max);
        std::int64_t total = 0;
        for (const auto& lb : labels) total += lb.dim();
        std::int64_t count = 0;
        for (int n1 = 0; pr.l * n1 <= e_max; ++n1)
            for (int n2 = 0; pr.l * n1 + pr.m * n2 <= e_max; ++n2) ++count;
        CHECK(total == count);
        // energies are distinct per label (label is a function of the energy)
        for (std::size_t i = 0; i + 1 < labels.size(); ++i)
            CHECK(energy_units(pr, labels[i]) != energy_units(pr, labels[i + 1]));
    }
}
