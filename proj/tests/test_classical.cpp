#include <entropic/classical.hpp>

#include <catch2/catch_amalgamated.hpp>

using namespace entropic;

TEST_CASE("strategy enumeration order", "[classical]") {
    const VariableList v{"A", "B", "C"};
    std::vector<DeterministicStrategy> all(enumerate_strategies(v).begin(), enumerate_strategies(v).end());
    REQUIRE(all.size() == 8);
    CHECK(all.front().values == std::vector<int>{1, 1, 1});
    CHECK(all[1].values == std::vector<int>{1, 1, -1});
    CHECK(all[4].values == std::vector<int>{-1, 1, 1});
    CHECK(all.back().values == std::vector<int>{-1, -1, -1});
    CHECK(enumerate_strategies(pm_variables()).size() == 512);
    VariableList many;
    for (int i = 0; i < 25; ++i) many.push_back("x" + std::to_string(i));
    CHECK_THROWS_AS(enumerate_strategies(many), argument_error);
}

TEST_CASE("strategy point masses", "[classical]") {
    const VariableList v{"A", "B"};
    const auto d = strategy_to_distribution(v, DeterministicStrategy{{1, -1}});
    CHECK(product_expectation(d, ProductTerm::of({0, 1})) == -1.0);
    CHECK(delta(d, ProductTerm::of({0, 1})) == 0.0);
}

TEST_CASE("Mermin vertex maximum", "[classical]") {
    const auto r = classical_max_violation(build_mermin_correlation(), {true, 0, 0, 1});
    REQUIRE(r.vertex_max_value.has_value());
    CHECK(*r.vertex_max_value == 2);
    CHECK(r.vertices == 64);
    CHECK(r.max_violation == 0.0);
    CHECK(r.witness_is_vertex);
}

TEST_CASE("Cabello noncontextual maximum", "[classical]") {
    const auto r = classical_max_violation(build_cabello_correlation(), {true, 0, 0, 1});
    CHECK(*r.vertex_max_value == 4);
    CHECK(r.vertices == 512);
}

TEST_CASE("entropic inequalities hold on vertices and mixtures", "[classical][property]") {
    for (const auto& q : {build_tripartite_entropic(), build_pm_entropic(), build_multipartite_entropic(4)}) {
        const auto r = classical_max_violation(q, {false, 2000, 3, 2});
        CHECK(r.max_violation <= 1e-12);
        CHECK(r.vertex_max_violation == 0.0);
        CHECK(r.mixtures == 2000);
        CHECK_FALSE(r.vertex_max_value.has_value());
    }
}

TEST_CASE("certification is reproducible and independent of job count", "[classical]") {
    const auto q = build_tripartite_entropic();
    const auto a = classical_max_violation(q, {false, 3000, 11, 1});
    const auto b = classical_max_violation(q, {false, 3000, 11, 4});
    CHECK(a.max_violation == b.max_violation);
    CHECK(a.witness == b.witness);
    CHECK(a.max_lhs == b.max_lhs);
}

TEST_CASE("enumeration over a relabeled variable set", "[classical]") {
    const auto q = build_mermin_correlation();
    VariableList v{"C2", "C1", "B2", "B1", "A2", "A1"};
    const auto r = classical_max_violation(q, v, {true, 0, 0, 1});
    CHECK(*r.vertex_max_value == 2);
    CHECK_THROWS_AS(classical_max_violation(q, VariableList{"A1", "A2"}), argument_error);
}

TEST_CASE("product constraint of the square", "[classical][pm]") {
    const auto r = pm_product_constraint_check();
    CHECK(r.holds);
    CHECK(r.assignments == 512);
    // q6 = q1 q2 q3 q4 q5 leaves 32 reachable product patterns
    CHECK(r.reachable.size() == 32);
    const std::array<int, 6> quantum{1, 1, 1, 1, 1, -1};
    CHECK(std::find(r.reachable.begin(), r.reachable.end(), quantum) == r.reachable.end());
}
