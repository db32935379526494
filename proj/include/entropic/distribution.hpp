// distribution.hpp
// Joint distributions of binary +-1 variables and the entropic distance calculus
// built on them: Shannon entropies, product marginals, the multipartite
// distance delta = H(A1 * ... * An), its covariance variant 1 - <A1 * ... * An>,
// and randomized axiom checks.
//
// Cell encoding: bit i of a cell index is set iff variable i took the value -1.
// Cell 0 is therefore the all-(+1) outcome.

#pragma once

#include "entropic/detail/random.hpp"
#include "entropic/errors.hpp"
#include "entropic/product_term.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <vector>

namespace entropic {

inline constexpr double normalization_tolerance = 1e-12;
inline constexpr double triangle_tolerance = 1e-12;

enum class DistanceKind { entropic, covariance };

inline const char* to_string(DistanceKind k) {
    return k == DistanceKind::entropic ? "entropic" : "covariance";
}

/// -p log2 p - (1-p) log2 (1-p), in bits. 0 log 0 is 0.
inline double binary_entropy(double p) {
    if (!(p >= -normalization_tolerance && p <= 1.0 + normalization_tolerance))
        throw domain_error("binary_entropy: probability " + std::to_string(p) + " outside [0,1]");
    if (p <= 0.0 || p >= 1.0) return 0.0;
    const double q = 1.0 - p;
    return -p * std::log2(p) - q * std::log2(q);
}

class JointDistribution {
public:
    static constexpr std::size_t max_variables = 24;

    JointDistribution(VariableList variables, std::vector<double> probabilities)
        : variables_(std::move(variables)), probabilities_(std::move(probabilities)) {
        validate_variables(variables_, max_variables);
        if (probabilities_.size() != (std::size_t{1} << variables_.size()))
            throw argument_error("JointDistribution: expected " +
                                 std::to_string(std::size_t{1} << variables_.size()) +
                                 " cells, got " + std::to_string(probabilities_.size()));
        double total = 0.0;
        for (double p : probabilities_) {
            if (!(p >= 0.0)) throw argument_error("JointDistribution: negative or NaN probability");
            total += p;
        }
        if (std::abs(total - 1.0) > normalization_tolerance)
            throw argument_error("JointDistribution: probabilities sum to " + std::to_string(total));
    }

    /// All mass on one outcome tuple; outcomes[i] is +1 or -1.
    static JointDistribution point_mass(VariableList variables, std::span<const int> outcomes) {
        if (outcomes.size() != variables.size())
            throw argument_error("point_mass: outcome count does not match variable count");
        const std::size_t n = variables.size();
        if (n > max_variables) throw argument_error("point_mass: too many variables");
        std::vector<double> p(std::size_t{1} << n, 0.0);
        p[cell_of(outcomes)] = 1.0;
        return {std::move(variables), std::move(p)};
    }

    static JointDistribution point_mass(VariableList variables, std::initializer_list<int> outcomes) {
        return point_mass(std::move(variables), std::span<const int>(outcomes.begin(), outcomes.size()));
    }

    static JointDistribution uniform(VariableList variables) {
        if (variables.size() > max_variables) throw argument_error("uniform: too many variables");
        const std::size_t cells = std::size_t{1} << variables.size();
        return {std::move(variables), std::vector<double>(cells, 1.0 / static_cast<double>(cells))};
    }

    /// Dirichlet(1) over all cells.
    static JointDistribution random(VariableList variables, detail::Rng& rng) {
        if (variables.size() > max_variables) throw argument_error("random: too many variables");
        auto w = detail::dirichlet(rng, std::size_t{1} << variables.size());
        return {std::move(variables), std::move(w)};
    }

    static std::size_t cell_of(std::span<const int> outcomes) {
        std::size_t cell = 0;
        for (std::size_t i = 0; i < outcomes.size(); ++i) {
            if (outcomes[i] == -1)
                cell |= std::size_t{1} << i;
            else if (outcomes[i] != 1)
                throw argument_error("outcomes must be +1 or -1");
        }
        return cell;
    }

    /// Outcome (+1/-1) of variable i in a cell.
    static int outcome(std::size_t cell, std::size_t i) noexcept { return ((cell >> i) & 1U) ? -1 : 1; }

    [[nodiscard]] std::size_t size() const noexcept { return variables_.size(); }
    [[nodiscard]] std::size_t cell_count() const noexcept { return probabilities_.size(); }
    [[nodiscard]] const VariableList& variables() const noexcept { return variables_; }
    [[nodiscard]] VariableId variable(std::size_t i) const { return {i, variables_.at(i)}; }
    [[nodiscard]] std::span<const double> probabilities() const noexcept { return probabilities_; }
    [[nodiscard]] double probability(std::size_t cell) const { return probabilities_.at(cell); }
    [[nodiscard]] std::optional<std::size_t> index_of(const std::string& label) const {
        return find_label(variables_, label);
    }
    [[nodiscard]] ProductTerm term(std::initializer_list<std::string> labels) const {
        return term_from_labels(variables_, labels);
    }
    [[nodiscard]] ProductTerm term(std::span<const std::string> labels) const {
        return term_from_labels(variables_, labels);
    }

    friend bool operator==(const JointDistribution&, const JointDistribution&) = default;

private:
    VariableList variables_;
    std::vector<double> probabilities_;
};

namespace detail {

inline void check_term(const JointDistribution& dist, ProductTerm term) {
    if (term.empty()) throw argument_error("product term has empty support");
    if (term.span_width() > dist.size())
        throw argument_error("product term references a variable outside the distribution");
}

/// (P(product=+1), P(product=-1)); the empty mask gives the constant +1.
inline std::pair<double, double> sign_masses(const JointDistribution& dist, std::uint64_t mask) {
    double plus = 0.0;
    double minus = 0.0;
    const auto p = dist.probabilities();
    for (std::size_t cell = 0; cell < p.size(); ++cell) {
        if (std::popcount(static_cast<std::uint64_t>(cell) & mask) & 1)
            minus += p[cell];
        else
            plus += p[cell];
    }
    return {plus, minus};
}

inline double expectation_of_mask(const JointDistribution& dist, std::uint64_t mask) {
    if (mask == 0) return 1.0; // d(X, X): the product is identically +1
    auto [plus, minus] = sign_masses(dist, mask);
    return std::clamp(plus - minus, -1.0, 1.0);
}

inline double distance_from_expectation(double e, DistanceKind kind) {
    return kind == DistanceKind::entropic ? binary_entropy((1.0 + e) / 2.0) : 1.0 - e;
}

} // namespace detail

inline double shannon_entropy(const JointDistribution& dist) {
    double h = 0.0;
    for (double p : dist.probabilities())
        if (p > 0.0) h -= p * std::log2(p);
    return h;
}

/// Marginal over the listed variable indices, in the listed order.
inline JointDistribution marginal(const JointDistribution& dist, std::span<const std::size_t> keep) {
    VariableList vars;
    for (auto i : keep) {
        if (i >= dist.size()) throw argument_error("marginal: index out of range");
        vars.push_back(dist.variables()[i]);
    }
    std::vector<double> p(std::size_t{1} << keep.size(), 0.0);
    const auto src = dist.probabilities();
    for (std::size_t cell = 0; cell < src.size(); ++cell) {
        std::size_t out = 0;
        for (std::size_t k = 0; k < keep.size(); ++k)
            if ((cell >> keep[k]) & 1U) out |= std::size_t{1} << k;
        p[out] += src[cell];
    }
    return {std::move(vars), std::move(p)};
}

/// Two-point distribution of the product of the selected outcomes.
inline JointDistribution product_marginal(const JointDistribution& dist, ProductTerm term) {
    detail::check_term(dist, term);
    auto [plus, minus] = detail::sign_masses(dist, term.bits());
    return {{term_label(term, dist.variables())}, {plus, minus}};
}

/// <A_i * A_j * ...> = P(+1) - P(-1), clamped to [-1, 1] against rounding.
inline double product_expectation(const JointDistribution& dist, ProductTerm term) {
    detail::check_term(dist, term);
    return detail::expectation_of_mask(dist, term.bits());
}

/// Multipartite distance of the variables in `term`.
/// Entropic: H(product) in bits, in [0,1]. Covariance: 1 - <product>, in [0,2].
inline double delta(const JointDistribution& dist, ProductTerm term, DistanceKind kind = DistanceKind::entropic) {
    return detail::distance_from_expectation(product_expectation(dist, term), kind);
}

/// Bipartite distance d(X, Y) between two product observables. X and Y may
/// share variables; d(X, X) is exactly 0.
inline double distance(const JointDistribution& dist, ProductTerm x, ProductTerm y,
                       DistanceKind kind = DistanceKind::entropic) {
    detail::check_term(dist, x);
    detail::check_term(dist, y);
    return detail::distance_from_expectation(detail::expectation_of_mask(dist, (x ^ y).bits()), kind);
}

struct AxiomReport {
    DistanceKind kind = DistanceKind::entropic;
    std::size_t distributions = 1;
    std::size_t trials = 0;
    std::uint64_t seed = 0;
    /// max over sampled triples of delta(v^w) - delta(v) - delta(w); <= 1e-12 passes.
    double worst_slack = 0.0;
    bool triangle = true;
    bool non_negative = true;
    bool symmetric = true; // term representation is order-free
    bool self_distance_zero = true;

    [[nodiscard]] bool passed() const noexcept {
        return triangle && non_negative && symmetric && self_distance_zero;
    }
};

/// Samples `trials` triples (u, v, w) with u = v XOR w and checks
/// delta(u) <= delta(v) + delta(w); also non-negativity and d(A, A) = 0.
inline AxiomReport check_axioms(const JointDistribution& dist, DistanceKind kind, std::size_t trials,
                                std::uint64_t seed) {
    const std::size_t n = dist.size();
    if (n < 3) throw argument_error("check_axioms: need at least 3 variables");
    AxiomReport report;
    report.kind = kind;
    report.trials = trials;
    report.seed = seed;

    for (std::size_t i = 0; i < n; ++i) {
        const ProductTerm a = ProductTerm::of({i});
        if (distance(dist, a, a, kind) != 0.0) report.self_distance_zero = false;
    }

    detail::Rng rng(seed);
    const std::uint64_t full = (std::uint64_t{1} << n) - 1;
    std::uniform_int_distribution<std::uint64_t> pick(1, full);
    bool first = true;
    for (std::size_t t = 0; t < trials; ++t) {
        ProductTerm v(pick(rng));
        ProductTerm w(pick(rng));
        while ((v ^ w).empty()) w = ProductTerm(pick(rng));
        const ProductTerm u = v ^ w;
        const double du = delta(dist, u, kind);
        const double dv = delta(dist, v, kind);
        const double dw = delta(dist, w, kind);
        if (du < 0.0 || dv < 0.0 || dw < 0.0) report.non_negative = false;
        if (distance(dist, v, w, kind) != distance(dist, w, v, kind)) report.symmetric = false;
        const double slack = du - dv - dw;
        if (first || slack > report.worst_slack) report.worst_slack = slack;
        first = false;
    }
    report.triangle = report.worst_slack <= triangle_tolerance;
    return report;
}

/// check_axioms over `distributions` seeded Dirichlet(1) tables whose
/// variable count is drawn uniformly from [min_vars, max_vars].
inline AxiomReport check_axioms_random(std::size_t min_vars, std::size_t max_vars, std::size_t distributions,
                                       DistanceKind kind, std::size_t triples_per_distribution, std::uint64_t seed) {
    if (min_vars < 3 || max_vars < min_vars || max_vars > JointDistribution::max_variables)
        throw argument_error("check_axioms_random: variable range must lie within [3, 24]");
    detail::Rng rng(seed);
    std::uniform_int_distribution<std::size_t> size(min_vars, max_vars);
    AxiomReport total;
    total.kind = kind;
    total.seed = seed;
    total.distributions = distributions;
    bool first = true;
    for (std::size_t d = 0; d < distributions; ++d) {
        VariableList vars;
        for (std::size_t i = 0, n = size(rng); i < n; ++i) vars.push_back("X" + std::to_string(i));
        const auto dist = JointDistribution::random(vars, rng);
        const auto r = check_axioms(dist, kind, triples_per_distribution, rng());
        total.trials += r.trials;
        total.worst_slack = first ? r.worst_slack : std::max(total.worst_slack, r.worst_slack);
        first = false;
        total.non_negative = total.non_negative && r.non_negative;
        total.symmetric = total.symmetric && r.symmetric;
        total.self_distance_zero = total.self_distance_zero && r.self_distance_zero;
    }
    total.triangle = total.worst_slack <= triangle_tolerance;
    return total;
}

/// Shannon analogue of the max-conditional information distance:
/// max_i H(all | X_i) = H(all) - H(X_i).
inline double emax_shannon(const JointDistribution& dist) {
    if (dist.size() < 2) throw argument_error("emax_shannon: need at least 2 variables");
    const double h_all = shannon_entropy(dist);
    double best = 0.0;
    for (std::size_t i = 0; i < dist.size(); ++i) {
        const std::size_t keep[] = {i};
        best = std::max(best, h_all - shannon_entropy(marginal(dist, keep)));
    }
    return best;
}

/// lambda * d1 + (1 - lambda) * d2, cell by cell.
inline JointDistribution mix_distributions(const JointDistribution& d1, const JointDistribution& d2,
                                           double lambda) {
    if (d1.variables() != d2.variables())
        throw argument_error("mix_distributions: variable lists differ");
    if (!(lambda >= 0.0 && lambda <= 1.0)) throw argument_error("mix_distributions: lambda outside [0,1]");
    const auto a = d1.probabilities();
    const auto b = d2.probabilities();
    std::vector<double> p(a.size());
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = lambda * a[i] + (1.0 - lambda) * b[i];
    return {d1.variables(), std::move(p)};
}

/// Same distribution with variables listed in a new order; order[k] is the old
/// index of the new k-th variable.
inline JointDistribution permute_variables(const JointDistribution& dist, std::span<const std::size_t> order) {
    if (order.size() != dist.size()) throw argument_error("permute_variables: wrong order length");
    std::vector<bool> seen(dist.size(), false);
    for (auto i : order) {
        if (i >= dist.size() || seen[i]) throw argument_error("permute_variables: not a permutation");
        seen[i] = true;
    }
    return marginal(dist, order);
}

} // namespace entropic
