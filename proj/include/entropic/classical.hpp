// classical.hpp
// Brute-force certification of classical bounds: deterministic strategies
// (vertices of the classical polytope), their point-mass distributions, and
// the maximum violation over vertices and sampled convex mixtures.

#pragma once

#include "entropic/detail/parallel.hpp"
#include "entropic/detail/random.hpp"
#include "entropic/distribution.hpp"
#include "entropic/errors.hpp"
#include "entropic/inequality.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <iterator>
#include <numeric>
#include <set>
#include <vector>

namespace entropic {

inline constexpr std::size_t max_strategy_variables = 24;
inline constexpr std::size_t mixture_vertex_cap = 1024;

/// One +-1 value per variable.
struct DeterministicStrategy {
    std::vector<int> values;

    friend bool operator==(const DeterministicStrategy&, const DeterministicStrategy&) = default;
};

/// All 2^k assignments in lexicographic order with + before -, the first
/// variable varying slowest.
class StrategyRange {
public:
    explicit StrategyRange(std::size_t variables) : k_(variables) {
        if (k_ > max_strategy_variables)
            throw argument_error("enumerate_strategies: at most 24 variables, got " + std::to_string(k_));
    }

    class iterator {
    public:
        using iterator_category = std::input_iterator_tag;
        using value_type = DeterministicStrategy;
        using difference_type = std::ptrdiff_t;
        using pointer = void;
        using reference = DeterministicStrategy;

        iterator() = default;
        iterator(std::size_t k, std::uint64_t code) : k_(k), code_(code) {}

        DeterministicStrategy operator*() const { return strategy_at(k_, code_); }
        iterator& operator++() {
            ++code_;
            return *this;
        }
        iterator operator++(int) {
            auto tmp = *this;
            ++code_;
            return tmp;
        }
        friend bool operator==(const iterator& a, const iterator& b) { return a.code_ == b.code_; }

    private:
        std::size_t k_ = 0;
        std::uint64_t code_ = 0;
    };

    static DeterministicStrategy strategy_at(std::size_t k, std::uint64_t code) {
        DeterministicStrategy s;
        s.values.resize(k);
        for (std::size_t i = 0; i < k; ++i) s.values[i] = ((code >> (k - 1 - i)) & 1U) ? -1 : 1;
        return s;
    }

    [[nodiscard]] iterator begin() const { return {k_, 0}; }
    [[nodiscard]] iterator end() const { return {k_, std::uint64_t{1} << k_}; }
    [[nodiscard]] std::uint64_t size() const noexcept { return std::uint64_t{1} << k_; }

private:
    std::size_t k_;
};

inline StrategyRange enumerate_strategies(const VariableList& variables) { return StrategyRange(variables.size()); }

inline JointDistribution strategy_to_distribution(const VariableList& variables, const DeterministicStrategy& s) {
    return JointDistribution::point_mass(variables, s.values);
}

struct ClassicalReport {
    std::string inequality;
    double max_violation = 0.0;
    /// Largest value of sum <rhs> - <target> (covariance kind) or lhs (entropic).
    double max_lhs = 0.0;
    /// Vertex maximum from exact integer arithmetic (covariance kind only).
    std::optional<long long> vertex_max_value;
    double vertex_max_violation = 0.0;
    JointDistribution witness = JointDistribution::uniform({"_"});
    bool witness_is_vertex = true;
    std::uint64_t vertices = 0;
    std::size_t mixtures = 0;
    std::uint64_t seed = 0;
};

struct ClassicalOptions {
    bool vertex_only = false;
    std::size_t mixture_samples = 10000;
    std::uint64_t seed = 0;
    std::size_t jobs = 1;
};

namespace detail {

inline std::vector<std::uint64_t> remapped_masks(const EntropicInequality& ineq, const VariableList& variables) {
    std::vector<std::uint64_t> masks;
    for (auto t : ineq.all_terms()) {
        std::uint64_t m = 0;
        for (const auto& l : labels_of(t, ineq.variables())) {
            auto i = find_label(variables, l);
            if (!i) throw argument_error("variable '" + l + "' is missing from the enumeration set");
            m |= std::uint64_t{1} << *i;
        }
        masks.push_back(m);
    }
    return masks;
}

} // namespace detail

/// Evaluates `ineq` on every deterministic assignment of `variables` and,
/// unless vertex_only, on seeded Dirichlet(1) mixtures of the vertices.
/// Vertex order is the cell order of JointDistribution; vertex i is the point
/// mass on cell i.
inline ClassicalReport classical_max_violation(const EntropicInequality& ineq, const VariableList& variables,
                                               ClassicalOptions opts = {}) {
    if (variables.size() > max_strategy_variables) throw argument_error("classical_max_violation: too many variables");
    validate_variables(variables, max_strategy_variables);
    const auto masks = detail::remapped_masks(ineq, variables);
    const std::size_t cells = std::size_t{1} << variables.size();
    const bool entropic = ineq.kind() == DistanceKind::entropic;

    ClassicalReport r;
    r.inequality = ineq.name();
    r.vertices = cells;
    r.seed = opts.seed;

    // vertices: every product is exactly +-1
    std::size_t best_cell = 0;
    long long best_int = std::numeric_limits<long long>::min();
    double best_vertex_violation = -std::numeric_limits<double>::infinity();
    for (std::size_t cell = 0; cell < cells; ++cell) {
        std::vector<double> corr;
        long long value = 0;
        for (std::size_t t = 0; t < masks.size(); ++t) {
            const int sign = (std::popcount(cell & masks[t]) & 1) ? -1 : 1;
            corr.push_back(sign);
            value += t == 0 ? -sign : sign;
        }
        const double violation = report_from_correlators(ineq, corr).violation;
        if (!entropic && value > best_int) best_int = value;
        if (violation > best_vertex_violation) {
            best_vertex_violation = violation;
            best_cell = cell;
        }
    }
    if (!entropic) r.vertex_max_value = best_int;
    r.vertex_max_violation = best_vertex_violation;
    r.max_violation = best_vertex_violation;
    {
        std::vector<double> p(cells, 0.0);
        p[best_cell] = 1.0;
        r.witness = JointDistribution(variables, std::move(p));
        r.max_lhs = report_from_correlators(ineq, term_correlators(ineq, r.witness)).lhs;
    }
    if (opts.vertex_only || opts.mixture_samples == 0) return r;

    // mixtures: weights drawn sequentially, evaluated in parallel
    detail::Rng rng(opts.seed);
    std::vector<std::size_t> support(cells);
    std::iota(support.begin(), support.end(), std::size_t{0});
    if (cells > mixture_vertex_cap) {
        std::shuffle(support.begin(), support.end(), rng);
        support.resize(mixture_vertex_cap);
        std::sort(support.begin(), support.end());
    }
    std::vector<std::vector<double>> weights(opts.mixture_samples);
    for (auto& w : weights) w = detail::dirichlet(rng, support.size());

    struct Best {
        double violation = -std::numeric_limits<double>::infinity();
        std::size_t index = 0;
    };
    std::vector<Best> best(std::max<std::size_t>(1, opts.jobs));
    detail::parallel_chunks(weights.size(), opts.jobs, [&](std::size_t chunk, std::size_t b, std::size_t e) {
        for (std::size_t s = b; s < e; ++s) {
            std::vector<double> corr(masks.size(), 0.0);
            for (std::size_t k = 0; k < support.size(); ++k) {
                const double w = weights[s][k];
                for (std::size_t t = 0; t < masks.size(); ++t)
                    corr[t] += (std::popcount(support[k] & masks[t]) & 1) ? -w : w;
            }
            for (auto& c : corr) c = std::clamp(c, -1.0, 1.0);
            const double v = report_from_correlators(ineq, corr).violation;
            if (v > best[chunk].violation) best[chunk] = {v, s};
        }
    });
    r.mixtures = weights.size();
    Best overall;
    for (const auto& b : best)
        if (b.violation > overall.violation) overall = b;
    if (overall.violation > r.max_violation) {
        r.max_violation = overall.violation;
        std::vector<double> p(cells, 0.0);
        for (std::size_t k = 0; k < support.size(); ++k) p[support[k]] = weights[overall.index][k];
        r.witness = JointDistribution(variables, std::move(p));
        r.witness_is_vertex = false;
        r.max_lhs = report_from_correlators(ineq, term_correlators(ineq, r.witness)).lhs;
    }
    return r;
}

inline ClassicalReport classical_max_violation(const EntropicInequality& ineq, ClassicalOptions opts = {}) {
    return classical_max_violation(ineq, ineq.variables(), opts);
}

struct ProductConstraintReport {
    bool holds = true;        // prod q_i = +1 for every assignment
    std::size_t assignments = 0;
    std::vector<std::array<int, 6>> reachable; // sorted, distinct
};

/// q1..q6 of every noncontextual assignment of the nine square observables.
inline ProductConstraintReport pm_product_constraint_check() {
    const auto vars = pm_variables();
    const auto triples = pm_triples();
    std::vector<std::vector<std::size_t>> idx;
    for (const auto& t : triples) {
        std::vector<std::size_t> row;
        for (const auto& l : t) row.push_back(*find_label(vars, l));
        idx.push_back(std::move(row));
    }
    ProductConstraintReport r;
    std::set<std::array<int, 6>> seen;
    for (const auto& s : enumerate_strategies(vars)) {
        std::array<int, 6> q{};
        int all = 1;
        for (std::size_t i = 0; i < 6; ++i) {
            q[i] = 1;
            for (auto j : idx[i]) q[i] *= s.values[j];
            all *= q[i];
        }
        r.holds = r.holds && all == 1;
        seen.insert(q);
        ++r.assignments;
    }
    r.reachable.assign(seen.begin(), seen.end());
    return r;
}

} // namespace entropic
