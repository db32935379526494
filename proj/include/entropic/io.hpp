// io.hpp
// JSON and CSV encodings of distributions, scenarios, chains and reports.
// Depends on nlohmann/json; the rest of the library does not.

#pragma once

#include "entropic/chain.hpp"
#include "entropic/classical.hpp"
#include "entropic/distribution.hpp"
#include "entropic/inequality.hpp"
#include "entropic/optimizer.hpp"
#include "entropic/qsim.hpp"

#include <json.hpp>

#include <cstdio>
#include <iomanip>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace entropic::io {

using json = nlohmann::json;

/// Schema version written into every report.
inline constexpr int schema_version = 1;

namespace detail {

template <class T>
T get(const json& j, const char* key, const std::string& where) {
    if (!j.is_object() || !j.contains(key)) throw argument_error(where + ": missing field '" + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw argument_error(where + ": field '" + key + "' has the wrong type");
    }
}

inline qsim::cplx complex_from(const json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw argument_error(where + ": complex numbers are [re, im] pairs");
    return {j[0].get<double>(), j[1].get<double>()};
}

} // namespace detail

// --- distributions ---------------------------------------------------------

/// "+-+" in variable order; '-' is variable value -1.
inline std::string outcome_key(std::size_t cell, std::size_t n) {
    std::string s(n, '+');
    for (std::size_t i = 0; i < n; ++i)
        if ((cell >> i) & 1U) s[i] = '-';
    return s;
}

/// Accepts '+', '-' and the Unicode minus sign U+2212.
inline std::size_t cell_from_key(std::string_view key, std::size_t n) {
    std::size_t cell = 0;
    std::size_t i = 0;
    for (std::size_t pos = 0; pos < key.size(); ++i) {
        if (i >= n) throw argument_error("outcome key '" + std::string(key) + "' is too long");
        if (key[pos] == '+') {
            ++pos;
        } else if (key[pos] == '-') {
            cell |= std::size_t{1} << i;
            ++pos;
        } else if (key.substr(pos, 3) == "\xE2\x88\x92") {
            cell |= std::size_t{1} << i;
            pos += 3;
        } else {
            throw argument_error("outcome key '" + std::string(key) + "' contains a character other than + or -");
        }
    }
    if (i != n) throw argument_error("outcome key '" + std::string(key) + "' has the wrong length");
    return cell;
}

inline json to_json(const JointDistribution& d) {
    json probs = json::object();
    for (std::size_t c = 0; c < d.cell_count(); ++c)
        if (d.probability(c) != 0.0) probs[outcome_key(c, d.size())] = d.probability(c);
    return {{"variables", d.variables()}, {"probabilities", probs}};
}

inline JointDistribution distribution_from_json(const json& j) {
    auto vars = detail::get<VariableList>(j, "variables", "distribution");
    if (vars.size() > JointDistribution::max_variables) throw argument_error("distribution: too many variables");
    const auto& probs = j.contains("probabilities") ? j.at("probabilities") : json();
    if (!probs.is_object()) throw argument_error("distribution: 'probabilities' must be an object");
    std::vector<double> p(std::size_t{1} << vars.size(), 0.0);
    for (const auto& [key, value] : probs.items()) {
        if (!value.is_number()) throw argument_error("distribution: probability for '" + key + "' is not a number");
        const std::size_t cell = cell_from_key(key, vars.size());
        p[cell] += value.get<double>();
    }
    return {std::move(vars), std::move(p)};
}

// --- quantum states and observables ---------------------------------------------

inline qsim::QuantumState state_from_json(const json& j) {
    if (!j.is_object()) throw argument_error("state: expected an object");
    if (j.contains("ghz")) {
        if (!j["ghz"].is_number_unsigned()) throw argument_error("state: 'ghz' must be a qubit count");
        return qsim::ghz_state(j["ghz"].get<std::size_t>());
    }
    if (j.contains("amplitudes")) {
        const auto& a = j["amplitudes"];
        if (!a.is_array()) throw argument_error("state: 'amplitudes' must be an array");
        qsim::Vector v(static_cast<Eigen::Index>(a.size()));
        for (std::size_t i = 0; i < a.size(); ++i) v(static_cast<Eigen::Index>(i)) = detail::complex_from(a[i], "amplitudes");
        return qsim::StateVector(std::move(v));
    }
    if (j.contains("density")) {
        const auto& rows = j["density"];
        if (!rows.is_array()) throw argument_error("state: 'density' must be an array of rows");
        const auto dim = static_cast<Eigen::Index>(rows.size());
        qsim::Matrix m(dim, dim);
        for (Eigen::Index r = 0; r < dim; ++r) {
            const auto& row = rows[static_cast<std::size_t>(r)];
            if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != dim)
                throw argument_error("state: density matrix must be square");
            for (Eigen::Index c = 0; c < dim; ++c) m(r, c) = detail::complex_from(row[static_cast<std::size_t>(c)], "density");
        }
        return qsim::DensityMatrix(std::move(m));
    }
    throw argument_error("state: expected one of 'ghz', 'amplitudes', 'density'");
}

inline qsim::TensorOperator observable_from_json(const json& j, std::size_t qubits) {
    if (!j.is_object()) throw argument_error("observable: expected an object");
    if (j.contains("pauli")) {
        const int phase = qsim::PauliString::parse_phase(j.value("phase", std::string("+1")));
        qsim::PauliString p(detail::get<std::string>(j, "pauli", "observable"), phase);
        if (p.size() != qubits) throw argument_error("observable: Pauli string length differs from the qubit count");
        if (!p.hermitian()) throw argument_error("observable: phase must be +1 or -1");
        return qsim::TensorOperator::from_pauli(p);
    }
    if (j.contains("xy_angle")) {
        const double angle = detail::get<double>(j, "xy_angle", "observable");
        const auto qubit = detail::get<std::size_t>(j, "qubit", "observable");
        if (qubit >= qubits) throw argument_error("observable: qubit index out of range");
        return qsim::TensorOperator::xy(qubits, qubit, qsim::XYMeasurement{angle});
    }
    throw argument_error("observable: expected 'pauli' or 'xy_angle'");
}

// --- scenarios ---------------------------------------------------------------------

inline Scenario scenario_from_json(const json& j) {
    if (!j.is_object()) throw argument_error("scenario: expected an object");
    std::string name = j.value("name", std::string("scenario"));
    std::vector<std::string> parties;
    if (j.contains("parties")) parties = detail::get<std::vector<std::string>>(j, "parties", "scenario");
    std::map<std::string, std::vector<std::string>> settings;
    if (j.contains("settings"))
        settings = detail::get<std::map<std::string, std::vector<std::string>>>(j, "settings", "scenario");
    for (const auto& [party, list] : settings)
        if (!parties.empty() && std::find(parties.begin(), parties.end(), party) == parties.end())
            throw argument_error("scenario: settings reference undeclared party '" + party + "'");

    const auto binding = detail::get<json>(j, "binding", "scenario");
    if (binding.contains("distribution"))
        return Scenario{name, parties, settings, distribution_from_json(binding["distribution"])};
    if (binding.contains("quantum")) {
        const auto& q = binding["quantum"];
        auto state = state_from_json(detail::get<json>(q, "state", "quantum binding"));
        const std::size_t n = qsim::qubit_count(state);
        QuantumBinding qb{std::move(state), {}};
        const auto obs = detail::get<json>(q, "observables", "quantum binding");
        if (!obs.is_object()) throw argument_error("quantum binding: 'observables' must be an object");
        for (const auto& [label, desc] : obs.items()) qb.observables.emplace(label, observable_from_json(desc, n));
        return Scenario{name, parties, settings, std::move(qb)};
    }
    if (binding.contains("products")) {
        const auto& p = binding["products"];
        ProductBinding pb{distribution_from_json(detail::get<json>(p, "distribution", "products binding")), {}};
        const auto terms = detail::get<json>(p, "terms", "products binding");
        if (!terms.is_array()) throw argument_error("products binding: 'terms' must be an array");
        for (const auto& t : terms) {
            auto vars = detail::get<std::vector<std::string>>(t, "variables", "products term");
            std::sort(vars.begin(), vars.end());
            pb.term_variables[vars] = detail::get<std::string>(t, "product", "products term");
        }
        return Scenario{name, parties, settings, std::move(pb)};
    }
    throw argument_error("scenario: binding must be 'distribution', 'quantum' or 'products'");
}

// --- reports -----------------------------------------------------------------------

inline json to_json(const EvaluationReport& r) {
    json terms = json::array();
    for (const auto& t : r.terms)
        terms.push_back({{"label", t.label},
                         {"variables", t.variables},
                         {"role", t.target ? "target" : "rhs"},
                         {"correlator", t.correlator},
                         {"value", t.value}});
    return {{"inequality", r.inequality}, {"scenario", r.scenario}, {"kind", to_string(r.kind)},
            {"terms", terms},             {"lhs", r.lhs},           {"rhs", r.rhs},
            {"violation", r.violation},   {"violated", r.violated()}, {"tolerance", r.tolerance},
            {"seed", r.seed}};
}

inline json to_json(const AxiomReport& r) {
    return {{"kind", to_string(r.kind)},
            {"distributions", r.distributions},
            {"trials", r.trials},
            {"seed", r.seed},
            {"worst_slack", r.worst_slack},
            {"triangle", r.triangle},
            {"non_negative", r.non_negative},
            {"symmetric", r.symmetric},
            {"self_distance_zero", r.self_distance_zero},
            {"passed", r.passed()}};
}

inline json to_json(const ClassicalReport& r) {
    json j{{"inequality", r.inequality},
           {"max_violation", r.max_violation},
           {"max_lhs", r.max_lhs},
           {"vertex_max_violation", r.vertex_max_violation},
           {"witness", to_json(r.witness)},
           {"witness_is_vertex", r.witness_is_vertex},
           {"vertices", r.vertices},
           {"mixtures", r.mixtures},
           {"seed", r.seed}};
    j["vertex_max_value"] = r.vertex_max_value ? json(*r.vertex_max_value) : json(nullptr);
    return j;
}

inline json to_json(const AngleConfig& c) {
    json parties = json::array();
    for (std::size_t p = 0; p < c.parties(); ++p) {
        json row = json::array();
        for (std::size_t s = 0; s < c.settings(); ++s) row.push_back(c.at(p, s));
        parties.push_back(row);
    }
    return parties;
}

inline json to_json(const OptimizerSettings& s) {
    return {{"grid_points_per_angle", s.grid_points_per_angle},
            {"max_refinement_iters", s.max_refinement_iters},
            {"step_shrink", s.step_shrink},
            {"convergence_tol", s.convergence_tol},
            {"seed", s.seed},
            {"tied", s.tied}};
}

inline json to_json(const OptimizationReport& r) {
    return {{"settings", to_json(r.settings)},
            {"grid", {{"angles", to_json(r.grid.config)}, {"objective", r.grid.objective}, {"evaluations", r.grid.evaluations}}},
            {"best", {{"angles", to_json(r.refined.config)}, {"term_angle_sums", r.term_angle_sums}}},
            {"objective", r.refined.objective},
            {"iterations", r.refined.iterations},
            {"final_step", r.refined.final_step},
            {"evaluation", to_json(r.evaluation)}};
}

inline json to_json(const ProductConstraintReport& r) {
    return {{"holds", r.holds}, {"assignments", r.assignments}, {"reachable", r.reachable}};
}

// --- chains ----------------------------------------------------------------------

inline json to_json(const DerivationChain& c) {
    auto labels = [&](ProductTerm t) { return labels_of(t, c.variables); };
    json steps = json::array();
    for (const auto& s : c.steps) steps.push_back({{"u", labels(s.u)}, {"v", labels(s.v)}, {"w", labels(s.w)}});
    json leaves = json::array();
    for (auto l : c.leaves) leaves.push_back(labels(l));
    return {{"variables", c.variables}, {"target", labels(c.target)}, {"steps", steps}, {"leaves", leaves}};
}

/// Variables are taken from "variables" when present, otherwise collected
/// in order of first appearance.
inline DerivationChain chain_from_json(const json& j) {
    if (!j.is_object()) throw argument_error("chain: expected an object");
    VariableList vars;
    auto collect = [&](const json& list) {
        if (!list.is_array()) throw argument_error("chain: terms are arrays of labels");
        for (const auto& l : list) {
            if (!l.is_string()) throw argument_error("chain: labels must be strings");
            if (!find_label(vars, l.get<std::string>())) vars.push_back(l.get<std::string>());
        }
    };
    if (j.contains("variables")) {
        vars = detail::get<VariableList>(j, "variables", "chain");
        validate_variables(vars, ProductTerm::max_variables);
    } else {
        collect(detail::get<json>(j, "target", "chain"));
        if (j.contains("steps"))
            for (const auto& s : j["steps"])
                for (const char* k : {"u", "v", "w"}) collect(detail::get<json>(s, k, "chain step"));
        if (j.contains("leaves"))
            for (const auto& l : j["leaves"]) collect(l);
        validate_variables(vars, ProductTerm::max_variables);
    }
    auto term = [&](const json& list) {
        return term_from_labels(vars, detail::get<std::vector<std::string>>(json{{"t", list}}, "t", "chain term"));
    };
    DerivationChain c{vars, term(detail::get<json>(j, "target", "chain")), {}, {}};
    if (j.contains("steps"))
        for (const auto& s : j["steps"]) c.steps.push_back({term(s.at("u")), term(s.at("v")), term(s.at("w"))});
    for (const auto& l : detail::get<json>(j, "leaves", "chain")) c.leaves.push_back(term(l));
    return c;
}

// --- CSV ------------------------------------------------------------------------

/// RFC 4180 field: quoted when it contains a comma, quote or line break.
inline std::string csv_field(std::string_view s) {
    if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

inline std::string csv_number(double v) {
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

/// Records end in CRLF.
inline std::string csv_row(const std::vector<std::string>& fields) {
    std::string line;
    for (std::size_t i = 0; i < fields.size(); ++i) line += (i ? "," : "") + csv_field(fields[i]);
    return line + "\r\n";
}

// --- digests -----------------------------------------------------------------------

/// FNV-1a 64-bit, hex encoded.
inline std::string digest(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

} // namespace entropic::io
