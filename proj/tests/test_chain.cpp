#include <entropic/chain.hpp>
#include <entropic/distribution.hpp>
#include <entropic/inequality.hpp>

#include <catch2/catch_amalgamated.hpp>

#include <set>

using namespace entropic;

namespace {

DerivationChain tripartite_chain() {
    const auto v = tripartite_variables();
    auto t = [&](std::initializer_list<std::string> l) { return term_from_labels(v, l); };
    DerivationChain c{v, t({"A1", "B1", "C1"}), {}, {}};
    c.steps.push_back({t({"A1", "B1", "C1"}), t({"A1", "B2", "C2"}), t({"B1", "B2", "C1", "C2"})});
    c.steps.push_back({t({"B1", "B2", "C1", "C2"}), t({"A2", "B2", "C1"}), t({"A2", "B1", "C2"})});
    c.leaves = {t({"A1", "B2", "C2"}), t({"A2", "B2", "C1"}), t({"A2", "B1", "C2"})};
    return c;
}

DerivationChain pm_chain() {
    const auto v = pm_variables();
    std::vector<ProductTerm> leaves;
    const auto triples = pm_triples();
    for (std::size_t i = 0; i < 5; ++i) leaves.push_back(term_from_labels(v, triples[i]));
    return fold_chain(v, term_from_labels(v, triples[5]), leaves);
}

std::vector<DerivationChain> with_one_leaf_deleted(const DerivationChain& c) {
    std::vector<DerivationChain> out;
    for (std::size_t i = 0; i < c.leaves.size(); ++i) {
        auto copy = c;
        copy.leaves.erase(copy.leaves.begin() + static_cast<std::ptrdiff_t>(i));
        out.push_back(copy);
    }
    return out;
}

/// Every subset of `terms` whose XOR equals target, by enumeration.
std::vector<std::uint64_t> subset_solutions(ProductTerm target, const std::vector<ProductTerm>& terms) {
    std::vector<std::uint64_t> sols;
    for (std::uint64_t s = 1; s < (std::uint64_t{1} << terms.size()); ++s) {
        ProductTerm acc;
        for (std::size_t i = 0; i < terms.size(); ++i)
            if ((s >> i) & 1U) acc ^= terms[i];
        if (acc == target) sols.push_back(s);
    }
    return sols;
}

} // namespace

TEST_CASE("the tripartite two-step chain", "[chain]") {
    const auto c = tripartite_chain();
    CHECK(verify_chain(c).accepted);
    for (const auto& bad : with_one_leaf_deleted(c)) {
        const auto v = verify_chain(bad);
        CHECK_FALSE(v.accepted);
        CHECK(v.fault == ChainFault::leaf_mismatch);
    }
}

TEST_CASE("generated multipartite chains", "[chain]") {
    for (std::size_t n = 4; n <= 12; n += 2) {
        const auto c = generate_multipartite_chain(n);
        CHECK(verify_chain(c).accepted);
        CHECK(c.steps.size() == n);
        const auto rhs = build_multipartite_entropic(n).rhs_terms();
        CHECK(std::multiset<ProductTerm>(c.leaves.begin(), c.leaves.end()) ==
              std::multiset<ProductTerm>(rhs.begin(), rhs.end()));
        for (const auto& bad : with_one_leaf_deleted(c)) CHECK_FALSE(verify_chain(bad).accepted);
    }
    CHECK_THROWS_AS(generate_multipartite_chain(7), argument_error);
}

TEST_CASE("the square chain", "[chain]") {
    const auto c = pm_chain();
    CHECK(verify_chain(c).accepted);
    CHECK(c.steps.size() == 4);
    for (const auto& bad : with_one_leaf_deleted(c)) CHECK_FALSE(verify_chain(bad).accepted);
}

TEST_CASE("fault classification", "[chain]") {
    auto c = tripartite_chain();
    {
        auto bad = c;
        bad.steps[0].w = bad.steps[0].w ^ ProductTerm::of({0, 1});
        const auto v = verify_chain(bad);
        CHECK(v.fault == ChainFault::invalid_step);
        CHECK(v.failing_step == std::optional<std::size_t>{0});
    }
    {
        auto bad = c;
        std::swap(bad.steps[0], bad.steps[1]);
        CHECK(verify_chain(bad).fault == ChainFault::unknown_term);
    }
    {
        auto bad = c;
        bad.steps[1].v = ProductTerm{};
        bad.steps[1].w = bad.steps[1].u;
        CHECK(verify_chain(bad).fault == ChainFault::empty_term);
    }
    {
        auto bad = c;
        bad.variables.resize(5);
        CHECK(verify_chain(bad).fault == ChainFault::out_of_range);
    }
    {
        auto bad = c;
        bad.target = ProductTerm{};
        CHECK(verify_chain(bad).fault == ChainFault::empty_term);
    }
    {
        auto dup = c;
        dup.leaves.push_back(dup.leaves.front());
        CHECK(verify_chain(dup).fault == ChainFault::leaf_mismatch);
    }
    // leaf order is irrelevant
    std::reverse(c.leaves.begin(), c.leaves.end());
    CHECK(verify_chain(c).accepted);
}

TEST_CASE("trivial chain", "[chain]") {
    const VariableList v{"A", "B"};
    DerivationChain c{v, ProductTerm::of({0, 1}), {}, {ProductTerm::of({0, 1})}};
    CHECK(verify_chain(c).accepted);
}

TEST_CASE("synthesis recovers the square decomposition", "[chain][synth]") {
    const auto v = pm_variables();
    std::vector<ProductTerm> allowed;
    for (const auto& t : pm_triples()) allowed.push_back(term_from_labels(v, t));
    const auto target = term_from_labels(v, {"alpha", "beta", "gamma"});
    const auto c = synthesize_chain(v, target, allowed);
    REQUIRE(c.has_value());
    CHECK(verify_chain(*c).accepted);
    REQUIRE(c->leaves.size() == 5);
    std::set<ProductTerm> expected(allowed.begin(), allowed.begin() + 5);
    CHECK(std::set<ProductTerm>(c->leaves.begin(), c->leaves.end()) == expected);
}

TEST_CASE("synthesis on the tripartite and multipartite families", "[chain][synth]") {
    const auto t = build_tripartite_entropic();
    const auto c = synthesize_chain(t.variables(), t.target(), t.rhs_terms());
    REQUIRE(c);
    CHECK(verify_chain(*c).accepted);
    CHECK(c->leaves.size() == 3);
    for (std::size_t n = 4; n <= 12; n += 2) {
        const auto m = build_multipartite_entropic(n);
        const auto mc = synthesize_chain(m.variables(), m.target(), m.rhs_terms());
        REQUIRE(mc);
        CHECK(mc->leaves.size() == n + 1);
    }
}

TEST_CASE("synthesis agrees with exhaustive subset search", "[chain][synth][oracle]") {
    detail::Rng rng(77);
    std::uniform_int_distribution<std::uint64_t> term(1, 255);
    std::uniform_int_distribution<std::size_t> count(1, 12);
    const VariableList v{"a", "b", "c", "d", "e", "f", "g", "h"};
    for (int trial = 0; trial < 300; ++trial) {
        std::vector<ProductTerm> terms(count(rng));
        for (auto& x : terms) x = ProductTerm(term(rng));
        const ProductTerm target(term(rng));
        std::vector<ProductTerm> proper;
        for (auto x : terms)
            if (x != target) proper.push_back(x);
        const auto sols = subset_solutions(target, proper);
        const bool target_in = proper.size() != terms.size();
        const auto c = synthesize_chain(v, target, terms);
        CHECK(c.has_value() == (!sols.empty() || target_in));
        if (!c) continue;
        CHECK(verify_chain(*c).accepted);
        if (sols.empty()) {
            CHECK(c->leaves == std::vector<ProductTerm>{target});
            continue;
        }
        // lexicographically smallest selection, first term most significant
        std::uint64_t best = 0;
        bool first = true;
        auto key = [&](std::uint64_t s) {
            std::uint64_t k = 0;
            for (std::size_t i = 0; i < proper.size(); ++i) k = (k << 1) | ((s >> i) & 1U);
            return k;
        };
        for (auto s : sols)
            if (first || key(s) < key(best)) {
                best = s;
                first = false;
            }
        std::vector<ProductTerm> want;
        for (std::size_t i = 0; i < proper.size(); ++i)
            if ((best >> i) & 1U) want.push_back(proper[i]);
        CHECK(c->leaves == want);
    }
}

TEST_CASE("synthesis reports unsolvable targets", "[chain][synth]") {
    const VariableList v{"A", "B", "C"};
    const ProductTerm allowed[] = {ProductTerm::of({0, 1}), ProductTerm::of({1, 2})};
    CHECK_FALSE(synthesize_chain(v, ProductTerm::of({0}), allowed).has_value());
    CHECK_THROWS_AS(synthesize_chain(v, ProductTerm{}, allowed), argument_error);
    CHECK_THROWS_AS(synthesize_chain(v, ProductTerm::of({0}), std::span<const ProductTerm>{}), argument_error);
}

TEST_CASE("accepted chains are sound on random distributions", "[chain][property]") {
    // delta(target) <= sum delta(leaves) for every accepted chain
    detail::Rng rng(5);
    const auto v = pm_variables();
    const auto c = pm_chain();
    const auto t = tripartite_chain();
    for (int i = 0; i < 200; ++i) {
        for (const auto* chain : {&c, &t}) {
            const auto d = JointDistribution::random(chain->variables, rng);
            for (auto kind : {DistanceKind::entropic, DistanceKind::covariance}) {
                double sum = 0.0;
                for (auto l : chain->leaves) sum += delta(d, l, kind);
                CHECK(delta(d, chain->target, kind) <= sum + 1e-12);
                for (const auto& s : chain->steps)
                    CHECK(delta(d, s.u, kind) <= delta(d, s.v, kind) + delta(d, s.w, kind) + 1e-12);
            }
        }
    }
}

TEST_CASE("chain formatting", "[chain]") {
    const auto text = format_chain(tripartite_chain());
    CHECK(text.find("δ(A1,B1,C1) ≤ δ(A1,B2,C2) + δ(B1,B2,C1,C2)") != std::string::npos);
    CHECK(text.find("δ(A1,B1,C1) ≤ δ(A1,B2,C2) + δ(A2,B2,C1) + δ(A2,B1,C2)") != std::string::npos);
}
