#include "oracles.hpp"

#include <entropic/distribution.hpp>
#include <entropic/inequality.hpp>

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace entropic;
using Catch::Approx;

namespace {

std::vector<double> to_vec(std::span<const double> s) { return {s.begin(), s.end()}; }

JointDistribution random_table(std::size_t n, std::uint64_t seed) {
    detail::Rng rng(seed);
    VariableList vars;
    for (std::size_t i = 0; i < n; ++i) vars.push_back("V" + std::to_string(i));
    return JointDistribution::random(vars, rng);
}

} // namespace

TEST_CASE("product terms are GF(2) parity vectors", "[dist]") {
    const auto a = ProductTerm::of({0, 2});
    const auto b = ProductTerm::of({2, 3});
    CHECK((a ^ b) == ProductTerm::of({0, 3}));
    CHECK((a ^ a).empty());
    CHECK(a.size() == 2);
    CHECK(a.contains(2));
    CHECK_FALSE(a.contains(1));
    CHECK(ProductTerm::of({5}).span_width() == 6);
    CHECK(a.indices() == std::vector<std::size_t>{0, 2});
}

TEST_CASE("labels resolve to terms and back", "[dist]") {
    const VariableList vars{"A", "B", "C"};
    const auto t = term_from_labels(vars, {"C", "A"});
    CHECK(t == ProductTerm::of({0, 2}));
    CHECK(term_label(t, vars) == "A*C");
    CHECK(term_label(ProductTerm{}, vars) == "1");
    CHECK_THROWS_AS(term_from_labels(vars, {"D"}), argument_error);
    CHECK_THROWS_AS(term_from_labels(vars, {"A", "A"}), argument_error);
    CHECK_THROWS_AS(validate_variables({"A", "A"}, 8), argument_error);
    CHECK_THROWS_AS(validate_variables({"A", ""}, 8), argument_error);
}

TEST_CASE("binary entropy", "[dist]") {
    CHECK(binary_entropy(0.0) == 0.0);
    CHECK(binary_entropy(1.0) == 0.0);
    CHECK(binary_entropy(0.5) == 1.0);
    for (double p : {0.01, 0.1, 0.25, 0.3, 0.77, 0.999})
        CHECK(binary_entropy(p) == Approx(oracle::binary_entropy(p)).epsilon(1e-14));
    CHECK(binary_entropy(0.2) == Approx(binary_entropy(0.8)).epsilon(1e-15));
    CHECK_THROWS_AS(binary_entropy(-0.1), domain_error);
    CHECK_THROWS_AS(binary_entropy(1.1), domain_error);
}

TEST_CASE("distribution construction validates input", "[dist]") {
    CHECK_THROWS_AS(JointDistribution({"A"}, {0.5, 0.6}), argument_error);
    CHECK_THROWS_AS(JointDistribution({"A"}, {1.0}), argument_error);
    CHECK_THROWS_AS(JointDistribution({"A"}, {1.5, -0.5}), argument_error);
    CHECK_THROWS_AS(JointDistribution({"A", "A"}, {1, 0, 0, 0}), argument_error);
    CHECK_NOTHROW(JointDistribution({"A"}, {0.5, 0.5 + 1e-13}));
    const auto pm = JointDistribution::point_mass({"A", "B"}, {1, -1});
    CHECK(pm.probability(pm.cell_of(std::vector<int>{1, -1})) == 1.0);
    CHECK(pm.outcome(pm.cell_of(std::vector<int>{1, -1}), 1) == -1);
}

TEST_CASE("entropies agree with the histogram oracle", "[dist][oracle]") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const std::size_t n = 2 + seed % 5;
        const auto d = random_table(n, seed);
        const auto p = to_vec(d.probabilities());
        std::vector<std::size_t> all(n);
        std::iota(all.begin(), all.end(), std::size_t{0});
        CHECK(shannon_entropy(d) == Approx(oracle::marginal_entropy(p, n, all)).margin(1e-12));
        for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
            const ProductTerm t(mask);
            const auto idx = t.indices();
            CHECK(delta(d, t) == Approx(oracle::product_entropy(p, n, idx)).margin(1e-12));
            CHECK(delta(d, t, DistanceKind::covariance) == Approx(1.0 - oracle::product_mean(p, n, idx)).margin(1e-12));
            CHECK(shannon_entropy(marginal(d, idx)) == Approx(oracle::marginal_entropy(p, n, idx)).margin(1e-12));
        }
    }
}

TEST_CASE("delta and the expectation share one code path", "[dist]") {
    const auto d = random_table(5, 99);
    for (std::uint64_t mask = 1; mask < 32; ++mask) {
        const ProductTerm t(mask);
        CHECK(delta(d, t) == binary_entropy((1.0 + product_expectation(d, t)) / 2.0));
    }
}

TEST_CASE("product marginal is a one-variable table", "[dist]") {
    const auto d = random_table(4, 5);
    const auto t = ProductTerm::of({1, 3});
    const auto m = product_marginal(d, t);
    REQUIRE(m.size() == 1);
    CHECK(m.variables()[0] == "V1*V3");
    CHECK(m.probability(0) - m.probability(1) == Approx(product_expectation(d, t)).margin(1e-14));
}

TEST_CASE("bipartite distance", "[dist]") {
    const VariableList v{"A", "B"};
    const auto same = JointDistribution({"A", "B"}, {0.5, 0, 0, 0.5});
    CHECK(distance(same, ProductTerm::of({0}), ProductTerm::of({1})) == 0.0);
    const auto anti = JointDistribution({"A", "B"}, {0, 0.5, 0.5, 0});
    CHECK(distance(anti, ProductTerm::of({0}), ProductTerm::of({1})) == 0.0);
    CHECK(distance(anti, ProductTerm::of({0}), ProductTerm::of({1}), DistanceKind::covariance) == 2.0);
    const auto indep = JointDistribution::uniform(v);
    CHECK(distance(indep, ProductTerm::of({0}), ProductTerm::of({1})) == 1.0);
    CHECK(distance(indep, ProductTerm::of({0}), ProductTerm::of({0})) == 0.0);
    CHECK_THROWS_AS(delta(indep, ProductTerm{}), argument_error);
    CHECK_THROWS_AS(delta(indep, ProductTerm::of({2})), argument_error);
}

TEST_CASE("distance is symmetric under variable relabeling", "[dist][property]") {
    const auto d = random_table(4, 11);
    const std::size_t order[] = {2, 0, 3, 1};
    const auto q = permute_variables(d, order);
    for (std::uint64_t mask = 1; mask < 16; ++mask) {
        const ProductTerm t(mask);
        std::vector<std::string> labels = labels_of(t, d.variables());
        CHECK(delta(q, q.term(labels)) == Approx(delta(d, t)).margin(1e-14));
    }
}

TEST_CASE("triangle and axiom checks on random tables", "[dist][property]") {
    for (auto kind : {DistanceKind::entropic, DistanceKind::covariance}) {
        const auto r = check_axioms_random(3, 6, 500, kind, 20, 7);
        CHECK(r.passed());
        CHECK(r.worst_slack <= triangle_tolerance);
        CHECK(r.distributions == 500);
        CHECK(r.trials == 10000);
    }
    const auto single = check_axioms(random_table(4, 1), DistanceKind::entropic, 1000, 3);
    CHECK(single.passed());
    CHECK_THROWS_AS(check_axioms(random_table(2, 1), DistanceKind::entropic, 10, 0), argument_error);
}

TEST_CASE("axiom reports are seed reproducible", "[dist][property]") {
    const auto a = check_axioms_random(3, 6, 50, DistanceKind::entropic, 10, 42);
    const auto b = check_axioms_random(3, 6, 50, DistanceKind::entropic, 10, 42);
    CHECK(a.worst_slack == b.worst_slack);
}

TEST_CASE("triangle holds exhaustively on a random 4-variable table", "[dist][property]") {
    const auto d = random_table(4, 123);
    for (std::uint64_t v = 1; v < 16; ++v)
        for (std::uint64_t w = 1; w < 16; ++w) {
            if (v == w) continue;
            const ProductTerm tv(v), tw(w);
            CHECK(delta(d, tv ^ tw) <= delta(d, tv) + delta(d, tw) + triangle_tolerance);
            CHECK(delta(d, tv ^ tw, DistanceKind::covariance) <=
                  delta(d, tv, DistanceKind::covariance) + delta(d, tw, DistanceKind::covariance) + triangle_tolerance);
        }
}

TEST_CASE("E_max substitute against the oracle", "[dist][oracle]") {
    const auto d = random_table(3, 8);
    const auto p = to_vec(d.probabilities());
    const double h = oracle::marginal_entropy(p, 3, {0, 1, 2});
    double best = 0.0;
    for (std::size_t i = 0; i < 3; ++i) best = std::max(best, h - oracle::marginal_entropy(p, 3, {i}));
    CHECK(emax_shannon(d) == Approx(best).margin(1e-12));
}

TEST_CASE("mixing", "[dist]") {
    const auto a = JointDistribution::point_mass({"A", "B"}, {1, 1});
    const auto b = JointDistribution::point_mass({"A", "B"}, {-1, 1});
    const auto m = mix_distributions(a, b, 0.25);
    CHECK(m.probability(0) == 0.25);
    CHECK(m.probability(1) == 0.75);
    CHECK_THROWS_AS(mix_distributions(a, b, 1.5), argument_error);
    CHECK_THROWS_AS(mix_distributions(a, JointDistribution::uniform({"A", "C"}), 0.5), argument_error);
}

TEST_CASE("figure tables", "[dist][canonical]") {
    const auto f1a = canonical_distribution("fig1a_classical");
    const auto f1b = canonical_distribution("fig1b_anticorrelated");
    CHECK(distance(f1a, f1a.term({"A"}), f1a.term({"B"})) == 0.0);
    CHECK(product_expectation(f1a, f1a.term({"A", "B"})) == 1.0);
    CHECK(product_expectation(f1b, f1b.term({"A", "B"})) == -1.0);
    CHECK(std::abs(emax_shannon(f1a) - emax_shannon(f1b)) <= 1e-12);
    const auto f2a = canonical_distribution("fig2a_classical");
    const auto f2b = canonical_distribution("fig2b_uncorrelated");
    CHECK(delta(f2a, f2a.term({"A", "B", "C"})) == 0.0);
    CHECK(delta(f2b, f2b.term({"A", "B", "C"})) == 1.0);
    const auto gp = canonical_distribution("fig2b_ghz_paradox");
    CHECK(product_expectation(gp, gp.term({"A", "B", "C"})) == -1.0);
    CHECK(product_expectation(gp, gp.term({"A", "B'", "C'"})) == 1.0);
    for (const auto& name : canonical_names()) CHECK_NOTHROW(canonical_distribution(name));
    CHECK_THROWS_AS(canonical_distribution("nope"), argument_error);
}
