// inequality.hpp
// The five inequalities, their evaluation over classical or quantum
// scenarios, and the canonical correlation tables.
//
// Every inequality has the form  delta(target) <= sum_k delta(rhs_k). With the
// entropic distance this is an entropic inequality. With the covariance
// distance 1 - <.> it rearranges to the correlator inequality
//     sum_k <rhs_k> - <target> <= (#rhs - 1).

#pragma once

#include "entropic/chain.hpp"
#include "entropic/distribution.hpp"
#include "entropic/errors.hpp"
#include "entropic/layout.hpp"
#include "entropic/product_term.hpp"
#include "entropic/qsim.hpp"

#include <map>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace entropic {

class EntropicInequality {
public:
    /// Throws argument_error unless the rhs terms XOR to the target, i.e. unless
    /// a triangle-inequality chain proving the bound exists.
    static EntropicInequality make(std::string name, VariableList variables, ProductTerm target,
                                   std::vector<ProductTerm> rhs, DistanceKind kind = DistanceKind::entropic,
                                   std::vector<Site> sites = {}) {
        validate_variables(variables, ProductTerm::max_variables);
        if (target.empty()) throw argument_error(name + ": empty target term");
        if (rhs.empty()) throw argument_error(name + ": no right-hand-side terms");
        for (auto t : rhs) {
            if (t.empty()) throw argument_error(name + ": empty right-hand-side term");
            if (t.span_width() > variables.size()) throw argument_error(name + ": term outside the variable list");
        }
        if (target.span_width() > variables.size()) throw argument_error(name + ": target outside the variable list");
        if (!sites.empty() && sites.size() != variables.size())
            throw argument_error(name + ": one site per variable required");
        if (!xor_sum_check(target, rhs))
            throw argument_error(name + ": right-hand-side terms do not XOR to the target (no derivation exists)");
        EntropicInequality q;
        q.name_ = std::move(name);
        q.variables_ = std::move(variables);
        q.target_ = target;
        q.rhs_ = std::move(rhs);
        q.kind_ = kind;
        q.sites_ = std::move(sites);
        return q;
    }

    [[nodiscard]] const std::string& name() const noexcept { return name_; }
    [[nodiscard]] const VariableList& variables() const noexcept { return variables_; }
    [[nodiscard]] ProductTerm target() const noexcept { return target_; }
    [[nodiscard]] const std::vector<ProductTerm>& rhs_terms() const noexcept { return rhs_; }
    [[nodiscard]] DistanceKind kind() const noexcept { return kind_; }
    /// Bound on sum <rhs> - <target>; meaningful for the covariance kind.
    [[nodiscard]] double classical_bound() const noexcept { return static_cast<double>(rhs_.size()) - 1.0; }
    [[nodiscard]] const std::vector<Site>& sites() const noexcept { return sites_; }
    [[nodiscard]] std::size_t party_count() const {
        std::size_t n = 0;
        for (const auto& s : sites_) n = std::max(n, s.party + 1);
        return n;
    }
    [[nodiscard]] std::size_t setting_count() const {
        std::size_t n = 0;
        for (const auto& s : sites_) n = std::max(n, s.setting + 1);
        return n;
    }

    /// Same terms under the other distance.
    [[nodiscard]] EntropicInequality with_kind(DistanceKind kind, std::string name) const {
        EntropicInequality q = *this;
        q.kind_ = kind;
        q.name_ = std::move(name);
        return q;
    }

    /// Target first, then the rhs terms in order.
    [[nodiscard]] std::vector<ProductTerm> all_terms() const {
        std::vector<ProductTerm> t{target_};
        t.insert(t.end(), rhs_.begin(), rhs_.end());
        return t;
    }

    [[nodiscard]] DerivationChain certificate() const { return fold_chain(variables_, target_, rhs_); }

private:
    EntropicInequality() = default;

    std::string name_;
    VariableList variables_;
    ProductTerm target_;
    std::vector<ProductTerm> rhs_;
    DistanceKind kind_ = DistanceKind::entropic;
    std::vector<Site> sites_;
};

// --- builders ----------------------------------------------------------------

inline EntropicInequality build_tripartite_entropic() {
    const auto v = tripartite_variables();
    return EntropicInequality::make(
        "tripartite", v, term_from_labels(v, {"A1", "B1", "C1"}),
        {term_from_labels(v, {"A1", "B2", "C2"}), term_from_labels(v, {"A2", "B2", "C1"}),
         term_from_labels(v, {"A2", "B1", "C2"})},
        DistanceKind::entropic, tripartite_sites());
}

inline EntropicInequality build_mermin_correlation() {
    return build_tripartite_entropic().with_kind(DistanceKind::covariance, "mermin");
}

inline EntropicInequality build_multipartite_entropic(std::size_t n) {
    check_multipartite_parties(n);
    return EntropicInequality::make("multipartite-" + std::to_string(n), multipartite_variables(n),
                                    multipartite_uniform_term(n, 0), multipartite_rhs_terms(n),
                                    DistanceKind::entropic, multipartite_sites(n));
}

inline EntropicInequality build_pm_entropic() {
    const auto v = pm_variables();
    const auto triples = pm_triples();
    // q6 is bounded by q1..q5
    std::vector<ProductTerm> rhs;
    for (std::size_t i = 0; i < 5; ++i) rhs.push_back(term_from_labels(v, triples[i]));
    return EntropicInequality::make("pm", v, term_from_labels(v, triples[5]), std::move(rhs));
}

inline EntropicInequality build_cabello_correlation() {
    return build_pm_entropic().with_kind(DistanceKind::covariance, "cabello");
}

/// Names: tripartite, mermin, pm, cabello, multipartite-<n> (also multipartite:<n>).
inline EntropicInequality inequality_by_name(const std::string& name) {
    if (name == "tripartite") return build_tripartite_entropic();
    if (name == "mermin") return build_mermin_correlation();
    if (name == "pm") return build_pm_entropic();
    if (name == "cabello") return build_cabello_correlation();
    for (const char* prefix : {"multipartite-", "multipartite:"}) {
        const std::string p(prefix);
        if (name.rfind(p, 0) == 0) {
            std::size_t n = 0;
            try {
                std::size_t used = 0;
                n = std::stoul(name.substr(p.size()), &used);
                if (used != name.size() - p.size()) throw argument_error("trailing characters");
            } catch (const std::exception&) {
                throw argument_error("bad party count in '" + name + "'");
            }
            return build_multipartite_entropic(n);
        }
    }
    throw argument_error("unknown inequality '" + name + "'");
}

// --- Peres-Mermin observables ----------------------------------------------------

/// Two-qubit observables of the square. The row-2 observable b is Y (x) 1.
inline std::map<std::string, qsim::TensorOperator> pm_observables() {
    using qsim::PauliString;
    using qsim::TensorOperator;
    const std::pair<const char*, const char*> table[] = {
        {"A", "XI"}, {"a", "IX"}, {"alpha", "XX"}, {"B", "IY"}, {"b", "YI"},
        {"beta", "YY"}, {"C", "XY"}, {"c", "YX"}, {"gamma", "ZZ"},
    };
    std::map<std::string, TensorOperator> out;
    for (auto [label, pauli] : table) out.emplace(label, TensorOperator::from_pauli(PauliString(pauli)));
    return out;
}

// --- scenarios -------------------------------------------------------------------

/// State plus one +-1 observable per variable label.
struct QuantumBinding {
    qsim::QuantumState state;
    std::map<std::string, qsim::TensorOperator> observables;
};

/// Distribution over measured product variables, with the map from each
/// product (a sorted set of labels) to the variable that records it.
struct ProductBinding {
    JointDistribution products;
    std::map<std::vector<std::string>, std::string> term_variables;
};

using Binding = std::variant<JointDistribution, QuantumBinding, ProductBinding>;

struct Scenario {
    std::string name;
    std::vector<std::string> parties;
    std::map<std::string, std::vector<std::string>> settings;
    Binding binding;
};

struct TermValue {
    std::string label;
    std::vector<std::string> variables;
    bool target = false;
    double correlator = 0.0; // <product>
    double value = 0.0;      // entropy (entropic) or correlator (covariance)
};

struct EvaluationReport {
    std::string inequality;
    std::string scenario;
    DistanceKind kind = DistanceKind::entropic;
    std::vector<TermValue> terms; // target first
    double lhs = 0.0;
    double rhs = 0.0;
    double violation = 0.0;
    double tolerance = 1e-9;
    std::uint64_t seed = 0;

    [[nodiscard]] bool violated() const noexcept { return violation > tolerance; }
};

struct EvaluateOptions {
    double tolerance = 1e-9;
    std::uint64_t seed = 0;
};

namespace detail {

inline std::vector<std::string> sorted_labels(ProductTerm t, const VariableList& vars) {
    auto l = labels_of(t, vars);
    std::sort(l.begin(), l.end());
    return l;
}

inline void check_declared(const Scenario& sc, const EntropicInequality& ineq) {
    if (sc.settings.empty()) return;
    for (const auto& v : ineq.variables()) {
        bool found = false;
        for (const auto& [party, list] : sc.settings)
            found = found || std::find(list.begin(), list.end(), v) != list.end();
        if (!found) throw argument_error("variable '" + v + "' is not declared in scenario '" + sc.name + "'");
    }
}

struct CorrelatorSource {
    const EntropicInequality& ineq;

    double operator()(const JointDistribution& d, ProductTerm t) const {
        std::vector<std::size_t> idx;
        for (const auto& l : labels_of(t, ineq.variables())) {
            auto i = d.index_of(l);
            if (!i) throw argument_error("variable '" + l + "' is not bound by the distribution");
            idx.push_back(*i);
        }
        return product_expectation(d, ProductTerm::from_indices(idx));
    }

    double operator()(const QuantumBinding& q, ProductTerm t) const {
        std::vector<qsim::TensorOperator> ops;
        for (const auto& l : labels_of(t, ineq.variables())) {
            auto it = q.observables.find(l);
            if (it == q.observables.end()) throw argument_error("variable '" + l + "' has no observable");
            if (it->second.qubit_count() != qsim::qubit_count(q.state))
                throw argument_error("observable '" + l + "' acts on the wrong number of qubits");
            ops.push_back(it->second);
        }
        auto product = qsim::product_operator(ops);
        return std::clamp(qsim::expectation(q.state, product.op), -1.0, 1.0);
    }

    double operator()(const ProductBinding& p, ProductTerm t) const {
        auto key = sorted_labels(t, ineq.variables());
        auto it = p.term_variables.find(key);
        if (it == p.term_variables.end())
            throw argument_error("product " + term_label(t, ineq.variables()) + " is not recorded by the binding");
        auto i = p.products.index_of(it->second);
        if (!i) throw argument_error("product variable '" + it->second + "' missing from the distribution");
        return product_expectation(p.products, ProductTerm::of({*i}));
    }
};

} // namespace detail

/// <product> of every term (target first) under the scenario binding.
inline std::vector<double> term_correlators(const EntropicInequality& ineq, const Binding& binding) {
    detail::CorrelatorSource src{ineq};
    std::vector<double> out;
    for (auto t : ineq.all_terms()) out.push_back(std::visit([&](const auto& b) { return src(b, t); }, binding));
    return out;
}

/// Builds the report from per-term correlators (target first).
inline EvaluationReport report_from_correlators(const EntropicInequality& ineq, std::span<const double> correlators,
                                                std::string scenario_name = {}, EvaluateOptions opts = {}) {
    const auto terms = ineq.all_terms();
    if (correlators.size() != terms.size()) throw argument_error("report_from_correlators: wrong term count");
    EvaluationReport r;
    r.inequality = ineq.name();
    r.scenario = std::move(scenario_name);
    r.kind = ineq.kind();
    r.tolerance = opts.tolerance;
    r.seed = opts.seed;
    const bool entropic = ineq.kind() == DistanceKind::entropic;
    double target_value = 0.0;
    double rhs_sum = 0.0;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        TermValue tv;
        tv.label = term_label(terms[i], ineq.variables());
        tv.variables = labels_of(terms[i], ineq.variables());
        tv.target = i == 0;
        tv.correlator = correlators[i];
        tv.value = entropic ? binary_entropy((1.0 + correlators[i]) / 2.0) : correlators[i];
        (i == 0 ? target_value : rhs_sum) += tv.value;
        r.terms.push_back(std::move(tv));
    }
    if (entropic) {
        r.lhs = target_value;
        r.rhs = rhs_sum;
    } else {
        r.lhs = rhs_sum - target_value;
        r.rhs = ineq.classical_bound();
    }
    r.violation = r.lhs - r.rhs;
    return r;
}

inline EvaluationReport evaluate(const EntropicInequality& ineq, const Scenario& scenario, EvaluateOptions opts = {}) {
    detail::check_declared(scenario, ineq);
    const auto c = term_correlators(ineq, scenario.binding);
    return report_from_correlators(ineq, c, scenario.name, opts);
}

inline EvaluationReport evaluate(const EntropicInequality& ineq, const JointDistribution& dist,
                                 EvaluateOptions opts = {}) {
    return evaluate(ineq, Scenario{"distribution", {}, {}, dist}, opts);
}

/// GHZ state on one qubit per party, each variable measured as
/// cos(a) X + sin(a) Y with a taken from `angles` at its site.
inline Scenario ghz_xy_scenario(const EntropicInequality& ineq, const AngleConfig& angles, std::string name = "ghz-xy") {
    if (ineq.sites().empty()) throw argument_error(ineq.name() + " has no party/setting layout");
    const std::size_t n = ineq.party_count();
    if (angles.parties() != n || angles.settings() < ineq.setting_count())
        throw argument_error("angle configuration does not cover " + ineq.name());
    QuantumBinding q{qsim::ghz_state(n), {}};
    for (std::size_t i = 0; i < ineq.variables().size(); ++i) {
        const Site s = ineq.sites()[i];
        q.observables.emplace(ineq.variables()[i],
                              qsim::TensorOperator::xy(n, s.party, qsim::XYMeasurement{angles.at(s)}));
    }
    return Scenario{std::move(name), {}, {}, std::move(q)};
}

/// Peres-Mermin observables on an arbitrary two-qubit state.
inline Scenario pm_quantum_scenario(qsim::QuantumState state, std::string name = "pm-square") {
    if (qsim::qubit_count(state) != 2) throw argument_error("the Peres-Mermin square needs a two-qubit state");
    return Scenario{std::move(name), {}, {}, QuantumBinding{std::move(state), pm_observables()}};
}

/// Binding that reads each square triple from the q1..q6 product variables.
inline ProductBinding pm_product_binding(JointDistribution q_distribution) {
    ProductBinding b{std::move(q_distribution), {}};
    const auto triples = pm_triples();
    const auto qs = pm_product_variables();
    for (std::size_t i = 0; i < triples.size(); ++i) {
        auto key = triples[i];
        std::sort(key.begin(), key.end());
        b.term_variables.emplace(std::move(key), qs[i]);
    }
    return b;
}

// --- canonical tables --------------------------------------------------------

inline const std::vector<std::string>& canonical_names() {
    static const std::vector<std::string> names{
        "fig1a_classical",   "fig1b_anticorrelated", "fig1b_uncorrelated",   "fig2a_classical",
        "fig2b_ghz_paradox", "fig2b_uncorrelated",   "pm_quantum_products", "pm_classical_products"};
    return names;
}

struct ParityConstraint {
    std::vector<std::string> variables;
    int sign = 1; // required value of the product
};

/// Uniform distribution over the assignments that satisfy every constraint.
inline JointDistribution constrained_uniform(VariableList variables, std::span<const ParityConstraint> constraints) {
    validate_variables(variables, JointDistribution::max_variables);
    std::vector<std::pair<std::uint64_t, bool>> masks; // (mask, product must be -1)
    for (const auto& c : constraints) masks.emplace_back(term_from_labels(variables, c.variables).bits(), c.sign < 0);
    std::vector<double> p(std::size_t{1} << variables.size(), 0.0);
    std::size_t count = 0;
    for (std::size_t cell = 0; cell < p.size(); ++cell) {
        bool ok = true;
        for (auto [m, negative] : masks) ok = ok && ((std::popcount(cell & m) & 1) != 0) == negative;
        if (ok) {
            p[cell] = 1.0;
            ++count;
        }
    }
    if (count == 0) throw argument_error("constrained_uniform: constraints are unsatisfiable");
    for (auto& x : p) x /= static_cast<double>(count);
    return {std::move(variables), std::move(p)};
}

/// Correlation tables of the figures. Non-transitive tables have no joint
/// distribution; for those the table keeps every constraint except the one
/// closing the cycle (A'B in fig1b, A'B'C in fig2b), which then takes the
/// value forced by the others.
inline JointDistribution canonical_distribution(const std::string& name) {
    const VariableList bi{"A", "B", "A'", "B'"};
    const VariableList tri{"A", "B", "C", "A'", "B'", "C'"};
    using C = ParityConstraint;
    if (name == "fig1a_classical") {
        const C c[] = {{{"A", "B'"}, 1}, {{"B'", "A'"}, 1}, {{"A'", "B"}, 1}};
        return constrained_uniform(bi, c);
    }
    if (name == "fig1b_anticorrelated") {
        const C c[] = {{{"A", "B'"}, 1}, {{"B'", "A'"}, 1}, {{"A", "B"}, -1}};
        return constrained_uniform(bi, c);
    }
    if (name == "fig1b_uncorrelated") {
        const C c[] = {{{"A", "B'"}, 1}, {{"B'", "A'"}, 1}};
        return constrained_uniform(bi, c);
    }
    if (name == "fig2a_classical") {
        const C c[] = {{{"A", "B'", "C'"}, 1}, {{"A'", "B", "C'"}, 1}, {{"A'", "B'", "C"}, 1}};
        return constrained_uniform(tri, c);
    }
    if (name == "fig2b_ghz_paradox") {
        const C c[] = {{{"A", "B'", "C'"}, 1}, {{"A'", "B", "C'"}, 1}, {{"A", "B", "C"}, -1}};
        return constrained_uniform(tri, c);
    }
    if (name == "fig2b_uncorrelated") {
        const C c[] = {{{"A", "B'", "C'"}, 1}, {{"A'", "B", "C'"}, 1}};
        return constrained_uniform(tri, c);
    }
    if (name == "pm_quantum_products") return JointDistribution::point_mass(pm_product_variables(), {1, 1, 1, 1, 1, -1});
    if (name == "pm_classical_products") return JointDistribution::point_mass(pm_product_variables(), {1, 1, 1, 1, 1, 1});
    throw argument_error("unknown canonical distribution '" + name + "'");
}

/// Mixes the state-independent quantum product table (q6 = -1) with the
/// classical one (all +1) at weight lambda and evaluates the square inequality
/// on the product variables.
inline EvaluationReport pm_mixing_violation(double lambda, EvaluateOptions opts = {}) {
    if (!(lambda >= 0.0 && lambda <= 1.0)) throw argument_error("pm_mixing_violation: lambda outside [0,1]");
    auto mixed = mix_distributions(canonical_distribution("pm_quantum_products"),
                                   canonical_distribution("pm_classical_products"), lambda);
    Scenario sc{"pm-mix", {}, {}, pm_product_binding(std::move(mixed))};
    return evaluate(build_pm_entropic(), sc, opts);
}

} // namespace entropic
