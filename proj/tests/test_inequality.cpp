#include "oracles.hpp"

#include <entropic/classical.hpp>
#include <entropic/inequality.hpp>
#include <entropic/optimizer.hpp>

#include <catch2/catch_amalgamated.hpp>

#include <numbers>

using namespace entropic;
using Catch::Approx;
constexpr double pi = std::numbers::pi;

TEST_CASE("built-in inequalities carry XOR certificates", "[ineq]") {
    std::vector<EntropicInequality> all{build_tripartite_entropic(), build_mermin_correlation(), build_pm_entropic(),
                                        build_cabello_correlation()};
    for (std::size_t n = 4; n <= 12; n += 2) all.push_back(build_multipartite_entropic(n));
    for (const auto& q : all) {
        CHECK(xor_sum_check(q.target(), q.rhs_terms()));
        CHECK(verify_chain(q.certificate()).accepted);
    }
}

TEST_CASE("make refuses inequalities without a derivation", "[ineq]") {
    const VariableList v{"A", "B", "C"};
    CHECK_THROWS_AS(EntropicInequality::make("bad", v, ProductTerm::of({0, 1}), {ProductTerm::of({0})}), argument_error);
    CHECK_THROWS_AS(EntropicInequality::make("bad", v, ProductTerm{}, {ProductTerm::of({0})}), argument_error);
    CHECK_THROWS_AS(EntropicInequality::make("bad", v, ProductTerm::of({0}), {}), argument_error);
    CHECK_THROWS_AS(EntropicInequality::make("bad", v, ProductTerm::of({5}), {ProductTerm::of({5})}), argument_error);
    const auto ok = EntropicInequality::make("ok", v, ProductTerm::of({0, 1}), {ProductTerm::of({0, 2}), ProductTerm::of({1, 2})});
    CHECK(ok.classical_bound() == 1.0);
}

TEST_CASE("inequality shapes", "[ineq]") {
    const auto t = build_tripartite_entropic();
    CHECK(t.rhs_terms().size() == 3);
    CHECK(t.party_count() == 3);
    CHECK(t.setting_count() == 2);
    CHECK(term_label(t.target(), t.variables()) == "A1*B1*C1");
    for (std::size_t n = 4; n <= 12; n += 2) {
        const auto m = build_multipartite_entropic(n);
        CHECK(m.rhs_terms().size() == n + 1);
        CHECK(m.party_count() == n);
        CHECK(m.target().size() == n);
    }
    CHECK_THROWS_AS(build_multipartite_entropic(5), argument_error);
    CHECK_THROWS_AS(build_multipartite_entropic(2), argument_error);
    CHECK_THROWS_AS(build_multipartite_entropic(14), argument_error);
    CHECK(build_pm_entropic().rhs_terms().size() == 5);
    CHECK(build_cabello_correlation().classical_bound() == 4.0);
    CHECK(build_mermin_correlation().classical_bound() == 2.0);
    CHECK(inequality_by_name("multipartite-6").name() == "multipartite-6");
    CHECK(inequality_by_name("multipartite:4").party_count() == 4);
    CHECK_THROWS_AS(inequality_by_name("multipartite-x"), argument_error);
    CHECK_THROWS_AS(inequality_by_name("chsh"), argument_error);
}

TEST_CASE("tripartite violation at the maximal angles", "[ineq][quantum]") {
    const auto q = build_tripartite_entropic();
    const auto r = evaluate(q, ghz_xy_scenario(q, tripartite_violation_angles()));
    REQUIRE(r.terms.size() == 4);
    CHECK(r.terms[0].target);
    CHECK(r.lhs == Approx(1.0).margin(1e-9));
    for (std::size_t i = 1; i < 4; ++i) CHECK(r.terms[i].value < 1e-9);
    CHECK(r.violation == Approx(1.0).margin(1e-9));
    CHECK(r.violated());
}

TEST_CASE("Mermin quantum value", "[ineq][quantum]") {
    const auto q = build_mermin_correlation();
    const auto r = evaluate(q, ghz_xy_scenario(q, mermin_violation_angles()));
    CHECK(r.lhs == Approx(4.0).margin(1e-9));
    CHECK(r.rhs == 2.0);
    CHECK(r.violation == Approx(2.0).margin(1e-9));
}

TEST_CASE("multipartite closed form matches simulation", "[ineq][quantum]") {
    detail::Rng rng(31);
    std::uniform_real_distribution<double> u(-pi, pi);
    for (std::size_t n : {4, 6, 8}) {
        const auto q = build_multipartite_entropic(n);
        const auto std_angles = standard_multipartite_angles(n);
        CHECK(objective(q, std_angles, n) == Approx(1.0).margin(1e-9));
        CHECK(objective_simulated(q, std_angles, n) == Approx(1.0).margin(1e-9));
        for (int trial = 0; trial < (n == 8 ? 5 : 20); ++trial) {
            AngleConfig c(n, 3);
            for (std::size_t p = 0; p < n; ++p)
                for (std::size_t s = 0; s < 3; ++s) c.set(p, s, u(rng));
            CHECK(std::abs(objective(q, c, n) - objective_simulated(q, c, n)) <= 1e-10);
        }
    }
}

TEST_CASE("quantum and classical evaluation paths agree", "[ineq][quantum]") {
    // materialize each term's outcome table and re-evaluate classically
    const auto q = build_tripartite_entropic();
    detail::Rng rng(4);
    std::uniform_real_distribution<double> u(-pi, pi);
    for (int trial = 0; trial < 10; ++trial) {
        AngleConfig c(3, 2);
        for (std::size_t p = 0; p < 3; ++p)
            for (std::size_t s = 0; s < 2; ++s) c.set(p, s, u(rng));
        const auto sc = ghz_xy_scenario(q, c);
        const auto quantum = evaluate(q, sc);
        const auto& qb = std::get<QuantumBinding>(sc.binding);
        for (std::size_t i = 0; i < quantum.terms.size(); ++i) {
            const auto& labels = quantum.terms[i].variables;
            std::vector<qsim::TensorOperator> ops;
            for (const auto& l : labels) ops.push_back(qb.observables.at(l));
            const auto d = qsim::outcome_distribution(qb.state, ops, labels);
            CHECK(delta(d, d.term(labels)) == Approx(quantum.terms[i].value).margin(1e-10));
        }
    }
}

TEST_CASE("Cabello value is state independent", "[ineq][pm]") {
    const auto q = build_cabello_correlation();
    detail::Rng rng(8);
    for (int i = 0; i < 10; ++i) {
        qsim::QuantumState s = i % 2 ? qsim::QuantumState(qsim::random_mixed_state(2, rng))
                                     : qsim::QuantumState(qsim::random_pure_state(2, rng));
        const auto r = evaluate(q, pm_quantum_scenario(s));
        CHECK(r.lhs == Approx(6.0).margin(1e-10));
        CHECK(r.violation == Approx(2.0).margin(1e-10));
    }
    CHECK_THROWS_AS(pm_quantum_scenario(qsim::ghz_state(3)), argument_error);
}

TEST_CASE("square entropies vanish on the quantum state", "[ineq][pm]") {
    // deterministic products: every entropy is 0, so there is no direct violation
    detail::Rng rng(9);
    const auto r = evaluate(build_pm_entropic(), pm_quantum_scenario(qsim::random_pure_state(2, rng)));
    for (const auto& t : r.terms) CHECK(t.value < 1e-9);
    CHECK(std::abs(r.violation) < 1e-9);
}

TEST_CASE("mixing demonstration", "[ineq][pm]") {
    const auto half = pm_mixing_violation(0.5);
    CHECK(half.lhs == 1.0);
    CHECK(half.rhs == 0.0);
    CHECK(half.violation == 1.0);
    for (int k = 0; k <= 20; ++k) {
        const double lambda = k / 20.0;
        const auto r = pm_mixing_violation(lambda);
        CHECK(std::abs(r.lhs - oracle::binary_entropy(1.0 - lambda)) <= 1e-12);
        CHECK(r.rhs == 0.0);
    }
    CHECK_THROWS_AS(pm_mixing_violation(-0.1), argument_error);
}

TEST_CASE("classical distributions never violate", "[ineq][property]") {
    detail::Rng rng(12);
    const auto t = build_tripartite_entropic();
    for (int i = 0; i < 200; ++i) {
        const auto d = JointDistribution::random(t.variables(), rng);
        CHECK(evaluate(t, d).violation <= 1e-12);
    }
    const auto m = build_multipartite_entropic(4);
    for (int i = 0; i < 50; ++i) CHECK(evaluate(m, JointDistribution::random(m.variables(), rng)).violation <= 1e-12);
}

TEST_CASE("evaluation errors", "[ineq]") {
    const auto t = build_tripartite_entropic();
    CHECK_THROWS_AS(evaluate(t, JointDistribution::uniform({"A1", "A2", "B1"})), argument_error);
    // non-commuting observables in one term
    QuantumBinding qb{qsim::ghz_state(3), {}};
    for (const auto& v : t.variables()) qb.observables.emplace(v, qsim::TensorOperator::from_pauli(qsim::PauliString("XII")));
    qb.observables.at("B1") = qsim::TensorOperator::from_pauli(qsim::PauliString("ZII"));
    CHECK_THROWS_AS(evaluate(t, Scenario{"bad", {}, {}, qb}), precondition_error);
    Scenario undeclared{"s", {"A"}, {{"A", {"A1"}}}, JointDistribution::uniform(t.variables())};
    CHECK_THROWS_AS(evaluate(t, undeclared), argument_error);
}

TEST_CASE("figure scenarios on the tripartite inequality", "[ineq][canonical]") {
    // the GHZ paradox table is the entropic violation pattern: three zeros and a one
    const auto gp = canonical_distribution("fig2b_ghz_paradox");
    const auto uncor = canonical_distribution("fig2b_uncorrelated");
    const auto cls = canonical_distribution("fig2a_classical");
    const auto d = [](const JointDistribution& x, std::initializer_list<std::string> l) { return delta(x, x.term(l)); };
    CHECK(d(gp, {"A", "B'", "C'"}) == 0.0);
    CHECK(d(gp, {"A'", "B", "C'"}) == 0.0);
    CHECK(d(gp, {"A", "B", "C"}) == 0.0);
    CHECK(d(uncor, {"A", "B", "C"}) == 1.0);
    CHECK(d(cls, {"A", "B", "C"}) == 0.0);
    CHECK(d(cls, {"A'", "B'", "C"}) == 0.0);
}
