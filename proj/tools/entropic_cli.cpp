// entropic: command-line front end.
//
//   entropic eval SCENARIO [--inequality NAME] [--distance X,Y]...
//   entropic sweep --param lambda|n|angle:LABEL (--from A --to B --steps K | --values V,...)
//   entropic optimize --inequality NAME [--grid G] [--untied]
//   entropic certify NAME [--vertex-only] [--mixtures M]
//   entropic axioms [--variables N] [--distributions D] [--kind entropic|covariance|both]
//   entropic derive (--target T --allowed T ... | --preset NAME | --verify CHAIN)
//   entropic canonical NAME
//
// Exit codes: 0 success, 2 invalid input, 3 numerical failure, 4 invariant breach.

#include <entropic/entropic.hpp>
#include <entropic/io.hpp>

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace entropic;
using entropic::io::json;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_input = 2;
constexpr int exit_numerical = 3;
constexpr int exit_invariant = 4;

struct Common {
    std::uint64_t seed = 0;
    double tolerance = 1e-9;
    std::string format = "json";
    std::string output;
    std::size_t jobs = 1;
};

std::size_t default_jobs() {
    if (const char* env = std::getenv("ENTROPIC_JOBS")) {
        try {
            const auto v = std::stoul(env);
            if (v > 0) return v;
        } catch (const std::exception&) {
        }
    }
    return 1;
}

void add_common(CLI::App* cmd, Common& c, bool csv) {
    cmd->add_option("--seed", c.seed, "RNG seed")->capture_default_str();
    cmd->add_option("--tolerance", c.tolerance, "Violation tolerance")->capture_default_str();
    auto* f = cmd->add_option("--format", c.format, "Report format")->capture_default_str();
    f->check(CLI::IsMember(csv ? std::vector<std::string>{"json", "csv"} : std::vector<std::string>{"json"}));
    cmd->add_option("--output,-o", c.output, "Report path (default: stdout)");
    cmd->add_option("--jobs,-j", c.jobs, "Worker threads (default: $ENTROPIC_JOBS or 1)")->check(CLI::PositiveNumber);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw argument_error("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json parse_json(const std::string& text, const std::string& path) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw argument_error(path + ": " + e.what());
    }
}

/// Input digest over the command, its result-relevant arguments and the bytes
/// of every input file.
struct Digest {
    std::string bytes;
    void add(const std::string& s) {
        bytes += s;
        bytes += '\x1f';
    }
    [[nodiscard]] std::string value() const { return io::digest(bytes); }
};

class Emitter {
public:
    Emitter(const Common& c, std::string command) : c_(c), command_(std::move(command)) {}

    /// Report goes to --output or stdout; the human summary goes to stdout
    /// when a file is written and to stderr otherwise.
    std::ostream& human() { return c_.output.empty() ? std::cerr : std::cout; }

    void write(const std::string& text) const {
        if (c_.output.empty()) {
            std::cout << text;
            std::cout.flush();
            return;
        }
        std::ofstream out(c_.output, std::ios::binary);
        if (!out) throw argument_error("cannot write '" + c_.output + "'");
        out << text;
    }

    void json_report(const json& result, const Digest& d) const {
        json j;
        j["tool"] = {{"name", "entropic"}, {"version", entropic::version}};
        j["schema_version"] = io::schema_version;
        j["command"] = command_;
        j["seed"] = c_.seed;
        j["tolerance"] = c_.tolerance;
        j["input_digest"] = d.value();
        j["result"] = result;
        write(j.dump(2) + "\n");
    }

private:
    const Common& c_;
    std::string command_;
};

json common_args(const Common& c) { return {{"seed", c.seed}, {"tolerance", c.tolerance}, {"format", c.format}}; }

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
        if (ch == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

void check_report(const EvaluationReport& r) {
    if (!std::isfinite(r.lhs) || !std::isfinite(r.rhs)) throw numerical_error("non-finite evaluation result");
    if (r.violation != r.lhs - r.rhs) throw invariant_error("violation differs from lhs - rhs");
    for (const auto& t : r.terms) {
        if (t.correlator < -1.0 || t.correlator > 1.0) throw invariant_error("correlator outside [-1, 1]");
        if (r.kind == DistanceKind::entropic && (t.value < 0.0 || t.value > 1.0))
            throw invariant_error("entropy outside [0, 1]");
    }
}

std::string summary(const EvaluationReport& r) {
    std::ostringstream s;
    s << r.inequality << " on " << r.scenario << ": lhs=" << r.lhs << " rhs=" << r.rhs << " violation=" << r.violation
      << (r.violated() ? " (violated)" : " (satisfied)");
    return s.str();
}

// --- eval ----------------------------------------------------------------------

struct EvalArgs {
    std::string scenario;
    std::string inequality;
    std::vector<std::string> distances;
};

/// d(X, Y) where X and Y are '*'-joined products of scenario variables.
json bipartite_distance(const Scenario& sc, const std::string& x, const std::string& y) {
    const auto xs = split(x, '*');
    const auto ys = split(y, '*');
    JointDistribution d = JointDistribution::uniform({"_"});
    VariableList vars;
    if (const auto* dist = std::get_if<JointDistribution>(&sc.binding)) {
        d = *dist;
    } else if (const auto* q = std::get_if<QuantumBinding>(&sc.binding)) {
        std::vector<qsim::TensorOperator> ops;
        for (const auto* side : {&xs, &ys})
            for (const auto& l : *side) {
                if (find_label(vars, l)) continue;
                auto it = q->observables.find(l);
                if (it == q->observables.end()) throw argument_error("variable '" + l + "' has no observable");
                vars.push_back(l);
                ops.push_back(it->second);
            }
        d = qsim::outcome_distribution(q->state, ops, vars);
    } else {
        throw argument_error("distances need a distribution or quantum binding");
    }
    const auto tx = d.term(xs);
    const auto ty = d.term(ys);
    return {{"x", xs},
            {"y", ys},
            {"entropic", distance(d, tx, ty, DistanceKind::entropic)},
            {"covariance", distance(d, tx, ty, DistanceKind::covariance)}};
}

int cmd_eval(const Common& c, const EvalArgs& a) {
    const std::string text = read_file(a.scenario);
    const json j = parse_json(text, a.scenario);
    const Scenario sc = io::scenario_from_json(j);
    std::string name = a.inequality;
    if (name.empty() && j.contains("inequality")) name = j["inequality"].get<std::string>();
    std::vector<std::pair<std::string, std::string>> pairs;
    if (j.contains("distances"))
        for (const auto& p : j["distances"]) {
            if (!p.is_array() || p.size() != 2) throw argument_error("distances are [X, Y] pairs");
            pairs.emplace_back(p[0].get<std::string>(), p[1].get<std::string>());
        }
    for (const auto& s : a.distances) {
        const auto parts = split(s, ',');
        if (parts.size() != 2) throw argument_error("--distance expects X,Y");
        pairs.emplace_back(parts[0], parts[1]);
    }
    if (name.empty() && pairs.empty()) throw argument_error("nothing to evaluate: give --inequality or --distance");

    Digest d;
    d.add("eval");
    d.add(json{{"args", common_args(c)}, {"inequality", name}, {"distances", a.distances}}.dump());
    d.add(text);
    Emitter out(c, "eval");

    json result{{"scenario", sc.name}, {"evaluation", nullptr}, {"distances", json::array()}};
    std::optional<EvaluationReport> report;
    if (!name.empty()) {
        report = evaluate(inequality_by_name(name), sc, {c.tolerance, c.seed});
        check_report(*report);
        result["evaluation"] = io::to_json(*report);
    }
    for (const auto& [x, y] : pairs) result["distances"].push_back(bipartite_distance(sc, x, y));

    if (c.format == "csv") {
        std::string csv = io::csv_row({"kind", "label", "role", "correlator", "value"});
        if (report)
            for (const auto& t : report->terms)
                csv += io::csv_row({"term", t.label, t.target ? "target" : "rhs", io::csv_number(t.correlator),
                                    io::csv_number(t.value)});
        for (const auto& r : result["distances"]) {
            std::string x, y;
            for (const auto& l : r["x"]) x += (x.empty() ? "" : "*") + l.get<std::string>();
            for (const auto& l : r["y"]) y += (y.empty() ? "" : "*") + l.get<std::string>();
            csv += io::csv_row({"distance", x + "," + y, "entropic", "", io::csv_number(r["entropic"].get<double>())});
            csv += io::csv_row({"distance", x + "," + y, "covariance", "", io::csv_number(r["covariance"].get<double>())});
        }
        out.write(csv);
    } else {
        out.json_report(result, d);
    }
    if (report) out.human() << summary(*report) << "\n";
    for (const auto& r : result["distances"])
        out.human() << "d(" << r["x"].dump() << ", " << r["y"].dump() << ") = " << r["entropic"].get<double>()
                    << " (entropic), " << r["covariance"].get<double>() << " (covariance)\n";
    return exit_ok;
}

// --- sweep ------------------------------------------------------------------------

struct SweepArgs {
    std::string param;
    std::string scenario;
    std::string inequality;
    std::optional<double> from, to;
    std::size_t steps = 0;
    std::optional<std::string> values;
};

std::vector<double> sweep_points(const SweepArgs& a) {
    std::vector<double> pts;
    if (a.values) {
        if (a.from || a.to) throw argument_error("give either --values or --from/--to/--steps");
        if (a.values->empty()) return pts;
        for (const auto& s : split(*a.values, ',')) {
            try {
                std::size_t used = 0;
                pts.push_back(std::stod(s, &used));
                if (used != s.size()) throw argument_error("trailing characters");
            } catch (const std::exception&) {
                throw argument_error("bad sweep value '" + s + "'");
            }
        }
        return pts;
    }
    if (a.steps == 0) return pts;
    if (!a.from || !a.to) throw argument_error("--from and --to are required with --steps");
    for (std::size_t k = 0; k < a.steps; ++k) {
        const double t = a.steps == 1 ? 0.0 : static_cast<double>(k) / static_cast<double>(a.steps - 1);
        pts.push_back(k + 1 == a.steps && a.steps > 1 ? *a.to : *a.from + t * (*a.to - *a.from));
    }
    return pts;
}

int cmd_sweep(const Common& c, const SweepArgs& a) {
    const auto points = sweep_points(a);
    std::string text;
    json scenario_json;
    if (!a.scenario.empty()) {
        text = read_file(a.scenario);
        scenario_json = parse_json(text, a.scenario);
    }

    std::function<EvaluationReport(double)> eval_at;
    std::string column = a.param;
    const EvaluateOptions opts{c.tolerance, c.seed};
    if (a.param == "lambda") {
        if (!a.scenario.empty()) throw argument_error("the lambda sweep runs the square mixing demonstration; drop --scenario");
        eval_at = [opts](double v) { return pm_mixing_violation(v, opts); };
    } else if (a.param == "n") {
        for (double v : points)
            if (v != std::floor(v)) throw argument_error("party counts must be integers");
        for (double v : points) check_multipartite_parties(static_cast<std::size_t>(v));
        eval_at = [opts](double v) {
            const auto n = static_cast<std::size_t>(v);
            const auto q = build_multipartite_entropic(n);
            return evaluate(q, ghz_xy_scenario(q, standard_multipartite_angles(n), "standard-angles"), opts);
        };
    } else if (a.param.rfind("angle:", 0) == 0) {
        const std::string label = a.param.substr(6);
        if (a.scenario.empty()) throw argument_error("angle sweeps need --scenario");
        std::string name = a.inequality;
        if (name.empty() && scenario_json.contains("inequality")) name = scenario_json["inequality"].get<std::string>();
        if (name.empty()) throw argument_error("angle sweeps need an inequality");
        const auto& obs = scenario_json.at("binding").at("quantum").at("observables");
        if (!obs.contains(label) || !obs[label].contains("xy_angle"))
            throw argument_error("'" + label + "' is not an XY-plane observable of the scenario");
        eval_at = [scenario_json, label, name, opts](double v) {
            json copy = scenario_json;
            copy["binding"]["quantum"]["observables"][label]["xy_angle"] = v;
            return evaluate(inequality_by_name(name), io::scenario_from_json(copy), opts);
        };
    } else {
        throw argument_error("--param must be lambda, n or angle:<label>");
    }

    std::vector<std::optional<EvaluationReport>> rows(points.size());
    detail::parallel_chunks(points.size(), c.jobs, [&](std::size_t, std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) rows[i] = eval_at(points[i]);
    });
    for (const auto& r : rows) check_report(*r);

    Digest d;
    d.add("sweep");
    d.add(json{{"args", common_args(c)}, {"param", a.param}, {"points", points}, {"inequality", a.inequality}}.dump());
    d.add(text);
    Emitter out(c, "sweep");
    auto value_text = [&](double v) {
        return a.param == "n" ? std::to_string(static_cast<long long>(v)) : io::csv_number(v);
    };
    if (c.format == "csv") {
        std::string csv = io::csv_row({column, "lhs", "rhs", "violation"});
        for (std::size_t i = 0; i < rows.size(); ++i)
            csv += io::csv_row({value_text(points[i]), io::csv_number(rows[i]->lhs), io::csv_number(rows[i]->rhs),
                                io::csv_number(rows[i]->violation)});
        out.write(csv);
    } else {
        json list = json::array();
        for (std::size_t i = 0; i < rows.size(); ++i)
            list.push_back({{"value", points[i]},
                            {"lhs", rows[i]->lhs},
                            {"rhs", rows[i]->rhs},
                            {"violation", rows[i]->violation}});
        out.json_report({{"parameter", a.param}, {"rows", list}}, d);
    }
    if (!rows.empty()) {
        std::size_t best = 0;
        for (std::size_t i = 1; i < rows.size(); ++i)
            if (rows[i]->violation > rows[best]->violation) best = i;
        out.human() << rows.size() << " points; largest violation " << rows[best]->violation << " at " << a.param
                    << "=" << value_text(points[best]) << "\n";
    } else {
        out.human() << "empty range\n";
    }
    return exit_ok;
}

// --- optimize -----------------------------------------------------------------------

struct OptimizeArgs {
    std::string inequality = "tripartite";
    OptimizerSettings settings;
    bool untied = false;
};

int cmd_optimize(const Common& c, OptimizeArgs a) {
    a.settings.seed = c.seed;
    a.settings.jobs = c.jobs;
    a.settings.tied = !a.untied;
    const auto q = inequality_by_name(a.inequality);
    if (q.sites().empty()) throw argument_error(q.name() + " has no party/setting layout to optimize");
    const auto rep = optimize(q, q.party_count(), a.settings);
    if (rep.refined.objective < rep.grid.objective) throw invariant_error("refinement lost ground");
    if (!std::isfinite(rep.refined.objective)) throw numerical_error("non-finite objective");

    Digest d;
    d.add("optimize");
    d.add(json{{"args", common_args(c)}, {"inequality", a.inequality}, {"settings", io::to_json(a.settings)}}.dump());
    Emitter out(c, "optimize");
    json result = io::to_json(rep);
    result["inequality"] = q.name();
    out.json_report(result, d);
    out.human() << q.name() << ": grid " << rep.grid.objective << " -> refined " << rep.refined.objective << " after "
                << rep.refined.iterations << " sweeps\n";
    return exit_ok;
}

// --- certify ------------------------------------------------------------------------

struct CertifyArgs {
    std::string inequality;
    bool vertex_only = false;
    std::size_t mixtures = 10000;
};

int cmd_certify(const Common& c, const CertifyArgs& a) {
    const auto q = inequality_by_name(a.inequality);
    const auto r = classical_max_violation(q, {a.vertex_only, a.mixtures, c.seed, c.jobs});
    if (r.vertex_max_violation > r.max_violation) throw invariant_error("mixture search lost the vertex maximum");

    Digest d;
    d.add("certify");
    d.add(json{{"args", common_args(c)}, {"inequality", a.inequality}, {"vertex_only", a.vertex_only},
               {"mixtures", a.mixtures}}
              .dump());
    Emitter out(c, "certify");
    json result = io::to_json(r);
    result["classical_bound"] = q.classical_bound();
    result["kind"] = to_string(q.kind());
    result["within_tolerance"] = r.max_violation <= c.tolerance;
    out.json_report(result, d);
    out.human() << q.name() << ": max classical violation " << r.max_violation << " over " << r.vertices
                << " vertices and " << r.mixtures << " mixtures";
    if (r.vertex_max_value) out.human() << "; vertex maximum " << *r.vertex_max_value << " (bound " << q.classical_bound() << ")";
    out.human() << "\n";
    return exit_ok;
}

// --- axioms -------------------------------------------------------------------------

struct AxiomArgs {
    std::size_t variables = 0;
    std::size_t min_variables = 3;
    std::size_t max_variables = 6;
    std::size_t distributions = 10000;
    std::size_t triples = 10;
    std::string kind = "both";
    std::string distribution;
};

int cmd_axioms(const Common& c, AxiomArgs a) {
    if (a.variables) a.min_variables = a.max_variables = a.variables;
    std::vector<DistanceKind> kinds;
    if (a.kind == "entropic" || a.kind == "both") kinds.push_back(DistanceKind::entropic);
    if (a.kind == "covariance" || a.kind == "both") kinds.push_back(DistanceKind::covariance);

    std::string text;
    std::optional<JointDistribution> given;
    if (!a.distribution.empty()) {
        text = read_file(a.distribution);
        const json j = parse_json(text, a.distribution);
        // a scenario with a distribution binding is accepted too
        const bool scenario = j.is_object() && j.contains("binding") && j["binding"].contains("distribution");
        given = io::distribution_from_json(scenario ? j["binding"]["distribution"] : j);
    }
    std::vector<AxiomReport> reports(kinds.size());
    detail::parallel_chunks(kinds.size(), c.jobs, [&](std::size_t, std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i)
            reports[i] = given ? check_axioms(*given, kinds[i], a.triples, c.seed)
                               : check_axioms_random(a.min_variables, a.max_variables, a.distributions, kinds[i],
                                                     a.triples, c.seed);
    });

    Digest d;
    d.add("axioms");
    d.add(json{{"args", common_args(c)},
               {"min_variables", a.min_variables},
               {"max_variables", a.max_variables},
               {"distributions", given ? 1 : a.distributions},
               {"triples", a.triples},
               {"kind", a.kind}}
              .dump());
    d.add(text);
    Emitter out(c, "axioms");
    json list = json::array();
    bool passed = true;
    for (const auto& r : reports) {
        list.push_back(io::to_json(r));
        passed = passed && r.passed();
        out.human() << to_string(r.kind) << ": " << r.trials << " triples over " << r.distributions
                    << " distributions, worst slack " << r.worst_slack << (r.passed() ? " (pass)" : " (FAIL)") << "\n";
    }
    out.json_report({{"variables", {a.min_variables, a.max_variables}}, {"reports", list}, {"passed", passed}}, d);
    if (!passed) throw invariant_error("distance axioms violated");
    return exit_ok;
}

// --- derive -------------------------------------------------------------------------

struct DeriveArgs {
    std::string target;
    std::vector<std::string> allowed;
    std::string variables;
    std::string preset;
    std::string verify;
};

int cmd_derive(const Common& c, const DeriveArgs& a) {
    Digest d;
    d.add("derive");
    d.add(json{{"args", common_args(c)}, {"target", a.target}, {"allowed", a.allowed}, {"variables", a.variables},
               {"preset", a.preset}}
              .dump());
    Emitter out(c, "derive");

    if (!a.verify.empty()) {
        const std::string text = read_file(a.verify);
        d.add(text);
        const auto chain = io::chain_from_json(parse_json(text, a.verify));
        const auto v = verify_chain(chain);
        json verdict{{"accepted", v.accepted}, {"fault", to_string(v.fault)}, {"message", v.message}};
        verdict["failing_step"] = v.failing_step ? json(*v.failing_step) : json(nullptr);
        out.json_report({{"chain", io::to_json(chain)}, {"verdict", verdict}}, d);
        out.human() << (v.accepted ? "accepted" : "rejected: " + std::string(to_string(v.fault)) + " " + v.message) << "\n";
        if (v.accepted) out.human() << format_chain(chain);
        return exit_ok;
    }

    VariableList vars;
    ProductTerm target;
    std::vector<ProductTerm> allowed;
    if (!a.preset.empty()) {
        if (!a.target.empty() || !a.allowed.empty()) throw argument_error("--preset replaces --target/--allowed");
        const auto q = inequality_by_name(a.preset);
        vars = q.variables();
        target = q.target();
        allowed = q.rhs_terms();
        if (a.preset == "pm" || a.preset == "cabello") allowed.push_back(q.target());
    } else {
        if (a.target.empty() || a.allowed.empty()) throw argument_error("derive needs --target and --allowed");
        std::vector<std::vector<std::string>> lists{split(a.target, ',')};
        for (const auto& s : a.allowed) lists.push_back(split(s, ','));
        if (!a.variables.empty()) {
            vars = split(a.variables, ',');
        } else {
            for (const auto& l : lists)
                for (const auto& x : l)
                    if (!find_label(vars, x)) vars.push_back(x);
        }
        validate_variables(vars, ProductTerm::max_variables);
        target = term_from_labels(vars, lists[0]);
        for (std::size_t i = 1; i < lists.size(); ++i) allowed.push_back(term_from_labels(vars, lists[i]));
    }

    const auto chain = synthesize_chain(vars, target, allowed);
    if (chain && !verify_chain(*chain).accepted) throw invariant_error("synthesized chain failed verification");
    json result{{"target", labels_of(target, vars)}, {"solvable", chain.has_value()}};
    result["chain"] = chain ? io::to_json(*chain) : json(nullptr);
    result["text"] = chain ? format_chain(*chain) : "";
    out.json_report(result, d);
    if (chain)
        out.human() << format_chain(*chain);
    else
        out.human() << "no combination of the allowed terms XORs to the target\n";
    return exit_ok;
}

// --- canonical --------------------------------------------------------------------

int cmd_canonical(const Common& c, const std::string& name) {
    Digest d;
    d.add("canonical");
    d.add(json{{"args", common_args(c)}, {"name", name}}.dump());
    Emitter out(c, "canonical");
    if (name.empty() || name == "list") {
        out.json_report({{"names", canonical_names()}}, d);
        for (const auto& n : canonical_names()) out.human() << n << "\n";
        return exit_ok;
    }
    const auto dist = canonical_distribution(name);
    out.json_report({{"name", name}, {"distribution", io::to_json(dist)}, {"shannon_entropy", shannon_entropy(dist)},
                     {"emax_shannon", emax_shannon(dist)}},
                    d);
    out.human() << name << ": " << dist.size() << " variables, H=" << shannon_entropy(dist) << "\n";
    return exit_ok;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Entropic distance verification engine"};
    app.set_version_flag("--version", std::string(entropic::version));
    app.require_subcommand(1);

    Common common;
    common.jobs = default_jobs();

    EvalArgs eval_args;
    auto* eval = app.add_subcommand("eval", "Evaluate an inequality or distances on a scenario");
    eval->add_option("scenario", eval_args.scenario, "Scenario JSON")->required();
    eval->add_option("--inequality,-i", eval_args.inequality, "tripartite, mermin, pm, cabello, multipartite-N");
    eval->add_option("--distance,-d", eval_args.distances, "Bipartite distance X,Y (products joined by '*')");
    add_common(eval, common, true);

    SweepArgs sweep_args;
    auto* sweep = app.add_subcommand("sweep", "Evaluate over a parameter range");
    sweep->add_option("--param,-p", sweep_args.param, "lambda, n or angle:<label>")->required();
    sweep->add_option("--scenario", sweep_args.scenario, "Scenario template (angle sweeps)");
    sweep->add_option("--inequality,-i", sweep_args.inequality, "Inequality (angle sweeps)");
    sweep->add_option("--from", sweep_args.from, "Range start");
    sweep->add_option("--to", sweep_args.to, "Range end");
    sweep->add_option("--steps", sweep_args.steps, "Number of points, endpoints included");
    sweep->add_option("--values", sweep_args.values, "Comma-separated explicit values");
    add_common(sweep, common, true);

    OptimizeArgs opt_args;
    auto* opt = app.add_subcommand("optimize", "Grid search plus refinement of XY angles on GHZ");
    opt->add_option("--inequality,-i", opt_args.inequality, "Inequality with a party layout")->capture_default_str();
    opt->add_option("--grid", opt_args.settings.grid_points_per_angle, "Grid points per angle")->capture_default_str();
    opt->add_option("--max-iters", opt_args.settings.max_refinement_iters, "Refinement sweep cap")->capture_default_str();
    opt->add_option("--step-shrink", opt_args.settings.step_shrink, "Step factor after a failed sweep")->capture_default_str();
    opt->add_option("--convergence-tol", opt_args.settings.convergence_tol, "Smallest step")->capture_default_str();
    opt->add_flag("--untied", opt_args.untied, "One angle per party and setting");
    add_common(opt, common, false);

    CertifyArgs cert_args;
    auto* cert = app.add_subcommand("certify", "Classical maximum by vertex enumeration and mixtures");
    cert->add_option("inequality", cert_args.inequality, "Inequality name")->required();
    cert->add_flag("--vertex-only", cert_args.vertex_only, "Skip mixtures");
    cert->add_option("--mixtures", cert_args.mixtures, "Dirichlet mixtures")->capture_default_str();
    add_common(cert, common, false);

    AxiomArgs ax_args;
    auto* ax = app.add_subcommand("axioms", "Distance axioms on random or given distributions");
    ax->add_option("--variables", ax_args.variables, "Fixed variable count");
    ax->add_option("--min-variables", ax_args.min_variables, "Smallest variable count")->capture_default_str();
    ax->add_option("--max-variables", ax_args.max_variables, "Largest variable count")->capture_default_str();
    ax->add_option("--distributions", ax_args.distributions, "Random distributions")->capture_default_str();
    ax->add_option("--triples", ax_args.triples, "Sampled triples per distribution")->capture_default_str();
    ax->add_option("--kind", ax_args.kind, "entropic, covariance or both")
        ->check(CLI::IsMember({"entropic", "covariance", "both"}))
        ->capture_default_str();
    ax->add_option("--distribution", ax_args.distribution, "Distribution or scenario JSON instead of random draws");
    add_common(ax, common, false);

    DeriveArgs der_args;
    auto* der = app.add_subcommand("derive", "Synthesize or verify a triangle-inequality chain");
    der->add_option("--target", der_args.target, "Target term, comma-separated labels");
    der->add_option("--allowed", der_args.allowed, "Allowed term (repeatable)");
    der->add_option("--variables", der_args.variables, "Variable order, comma-separated");
    der->add_option("--preset", der_args.preset, "Use an inequality's target and terms");
    der->add_option("--verify", der_args.verify, "Chain JSON to verify");
    add_common(der, common, false);

    std::string canon_name;
    auto* canon = app.add_subcommand("canonical", "Print a figure distribution");
    canon->add_option("name", canon_name, "Table name or 'list'");
    add_common(canon, common, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_input;
    }
    if (*sweep && sweep->count("--format") == 0) common.format = "csv";

    try {
        if (*eval) return cmd_eval(common, eval_args);
        if (*sweep) return cmd_sweep(common, sweep_args);
        if (*opt) return cmd_optimize(common, opt_args);
        if (*cert) return cmd_certify(common, cert_args);
        if (*ax) return cmd_axioms(common, ax_args);
        if (*der) return cmd_derive(common, der_args);
        if (*canon) return cmd_canonical(common, canon_name);
    } catch (const invariant_error& e) {
        std::cerr << "invariant breach: " << e.what() << "\n";
        return exit_invariant;
    } catch (const numerical_error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return exit_numerical;
    } catch (const domain_error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return exit_numerical;
    } catch (const argument_error& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return exit_input;
    } catch (const precondition_error& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return exit_input;
    } catch (const json::exception& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return exit_input;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return exit_invariant;
    }
    return exit_input;
}
