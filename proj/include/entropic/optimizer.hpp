// optimizer.hpp
// Derivative-free search for measurement angles that maximize the violation
// of a Bell-type inequality on the GHZ state.
//
// All measurements lie in the XY plane, so each term's correlator is
// cos(sum of its angles) and the objective only depends on those sums.
// Binary entropy has unbounded slope at P = 0 and P = 1, which rules out
// gradient steps near the optimum; we use a uniform grid followed by cyclic
// coordinate search with a shrinking step.

#pragma once

#include "entropic/detail/parallel.hpp"
#include "entropic/errors.hpp"
#include "entropic/inequality.hpp"
#include "entropic/layout.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

namespace entropic {

struct OptimizerSettings {
    std::size_t grid_points_per_angle = 64;
    std::size_t max_refinement_iters = 100000;
    double step_shrink = 0.5;
    /// Refinement stops once the step falls below this many radians.
    double convergence_tol = 1e-12;
    std::uint64_t seed = 0;
    /// Same angle for every party at a given setting.
    bool tied = true;
    std::size_t jobs = 1;
};

inline constexpr double max_grid_size = 1e8;

namespace detail {

inline void check_settings(const OptimizerSettings& s) {
    if (s.grid_points_per_angle < 2) throw argument_error("grid_points_per_angle must be >= 2");
    if (!(s.convergence_tol > 0.0)) throw argument_error("convergence_tol must be positive");
    if (!(s.step_shrink > 0.0 && s.step_shrink < 1.0)) throw argument_error("step_shrink must be in (0,1)");
}

inline void check_layout(const EntropicInequality& ineq, std::size_t n) {
    if (ineq.sites().empty()) throw argument_error(ineq.name() + " has no party/setting layout");
    if (ineq.party_count() != n)
        throw argument_error(ineq.name() + " has " + std::to_string(ineq.party_count()) + " parties, not " +
                             std::to_string(n));
}

/// Free parameters: one per setting when tied; otherwise every (party,
/// setting) except party 0 / setting 1, which is pinned to 0 to remove the
/// flat direction shifting angles between parties.
struct Parametrization {
    std::size_t parties;
    std::size_t settings;
    bool tied;

    [[nodiscard]] std::size_t size() const { return tied ? settings : parties * settings - (settings > 1 ? 1 : 0); }

    [[nodiscard]] AngleConfig expand(std::span<const double> x) const {
        AngleConfig c(parties, settings);
        if (tied) {
            for (std::size_t s = 0; s < settings; ++s) c.set_all(s, x[s]);
            return c;
        }
        std::size_t k = 0;
        for (std::size_t p = 0; p < parties; ++p)
            for (std::size_t s = 0; s < settings; ++s) {
                if (p == 0 && s == 1 && settings > 1) continue;
                c.set(p, s, x[k++]);
            }
        return c;
    }

    [[nodiscard]] std::vector<double> flatten(const AngleConfig& c) const {
        std::vector<double> x;
        if (tied) {
            for (std::size_t s = 0; s < settings; ++s) x.push_back(c.at(0, s));
            return x;
        }
        for (std::size_t p = 0; p < parties; ++p)
            for (std::size_t s = 0; s < settings; ++s) {
                if (p == 0 && s == 1 && settings > 1) continue;
                x.push_back(c.at(p, s));
            }
        return x;
    }
};

} // namespace detail

/// Per-term angle sums for the GHZ / XY closed form, target first.
inline std::vector<double> term_angle_sums(const EntropicInequality& ineq, const AngleConfig& config) {
    std::vector<double> sums;
    for (auto t : ineq.all_terms()) {
        double s = 0.0;
        for (auto i : t.indices()) s += config.at(ineq.sites().at(i));
        sums.push_back(s);
    }
    return sums;
}

/// Violation (lhs - rhs) on the n-qubit GHZ state from the closed form
/// <(x) XY(a_k)> = cos(sum a_k).
inline double objective(const EntropicInequality& ineq, const AngleConfig& config, std::size_t n) {
    detail::check_layout(ineq, n);
    if (config.parties() != n || config.settings() < ineq.setting_count())
        throw argument_error("angle configuration does not cover " + ineq.name());
    std::vector<double> corr;
    for (double s : term_angle_sums(ineq, config)) corr.push_back(std::cos(s));
    return report_from_correlators(ineq, corr).violation;
}

/// Same objective through the dense state-vector simulation.
inline double objective_simulated(const EntropicInequality& ineq, const AngleConfig& config, std::size_t n) {
    detail::check_layout(ineq, n);
    return evaluate(ineq, ghz_xy_scenario(ineq, config)).violation;
}

struct GridResult {
    AngleConfig config;
    double objective = 0.0;
    std::uint64_t evaluations = 0;
};

/// Exhaustive search over the uniform grid -pi + 2 pi k / G per free angle.
/// Ties go to the lexicographically smallest angle tuple.
inline GridResult grid_search(const EntropicInequality& ineq, std::size_t n, const OptimizerSettings& settings) {
    detail::check_settings(settings);
    detail::check_layout(ineq, n);
    const detail::Parametrization param{n, ineq.setting_count(), settings.tied};
    const std::size_t dims = param.size();
    const std::size_t g = settings.grid_points_per_angle;
    const double total = std::pow(static_cast<double>(g), static_cast<double>(dims));
    if (total > max_grid_size)
        throw argument_error("grid of " + std::to_string(total) + " points exceeds the 1e8 limit");
    const auto count = static_cast<std::uint64_t>(std::llround(total));

    std::vector<double> axis(g);
    for (std::size_t k = 0; k < g; ++k)
        axis[k] = -std::numbers::pi + 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(g);

    auto point = [&](std::uint64_t index) {
        std::vector<double> x(dims);
        for (std::size_t d = dims; d-- > 0;) {
            x[d] = axis[index % g];
            index /= g;
        }
        return x;
    };

    struct Best {
        double value = -std::numeric_limits<double>::infinity();
        std::uint64_t index = 0;
    };
    const std::size_t jobs = std::max<std::size_t>(1, settings.jobs);
    std::vector<Best> best(jobs);
    detail::parallel_chunks(count, jobs, [&](std::size_t chunk, std::size_t b, std::size_t e) {
        for (std::uint64_t i = b; i < e; ++i) {
            const double v = objective(ineq, param.expand(point(i)), n);
            if (v > best[chunk].value) best[chunk] = {v, i};
        }
    });
    Best overall;
    for (const auto& b : best) // chunks ascend in index, so strict > keeps the first maximum
        if (b.value > overall.value) overall = b;
    return {param.expand(point(overall.index)), overall.value, count};
}

struct RefineResult {
    AngleConfig config;
    double objective = 0.0;
    double start_objective = 0.0;
    std::size_t iterations = 0;
    double final_step = 0.0;
};

/// Cyclic coordinate search: each sweep tries +-step on every free angle and
/// keeps strict improvements; a sweep without improvement multiplies the step
/// by step_shrink. Never returns a worse point than `start`.
inline RefineResult refine(const EntropicInequality& ineq, std::size_t n, const AngleConfig& start,
                           const OptimizerSettings& settings) {
    detail::check_settings(settings);
    detail::check_layout(ineq, n);
    const detail::Parametrization param{n, ineq.setting_count(), settings.tied};
    std::vector<double> x = param.flatten(start);
    double fx = objective(ineq, param.expand(x), n);

    RefineResult r;
    r.start_objective = objective(ineq, start, n);
    double step = 2.0 * std::numbers::pi / static_cast<double>(settings.grid_points_per_angle);
    std::size_t it = 0;
    while (it < settings.max_refinement_iters && step >= settings.convergence_tol) {
        ++it;
        bool improved = false;
        for (std::size_t d = 0; d < x.size(); ++d) {
            for (double dir : {1.0, -1.0}) {
                std::vector<double> y = x;
                y[d] = wrap_angle(y[d] + dir * step);
                const double fy = objective(ineq, param.expand(y), n);
                if (fy > fx) {
                    x = std::move(y);
                    fx = fy;
                    improved = true;
                    break;
                }
            }
        }
        if (!improved) step *= settings.step_shrink;
    }
    r.config = param.expand(x);
    r.objective = fx;
    r.iterations = it;
    r.final_step = step;
    // a start that breaks the tying or the gauge pin is projected before the
    // search; keep it if the projection lost ground
    if (r.start_objective > r.objective) {
        r.config = start;
        r.objective = r.start_objective;
    }
    return r;
}

struct OptimizationReport {
    OptimizerSettings settings;
    GridResult grid;
    RefineResult refined;
    EvaluationReport evaluation; // closed-form per-term breakdown at the optimum
    std::vector<double> term_angle_sums;
};

/// grid_search followed by refine.
inline OptimizationReport optimize(const EntropicInequality& ineq, std::size_t n, const OptimizerSettings& settings) {
    OptimizationReport rep;
    rep.settings = settings;
    rep.grid = grid_search(ineq, n, settings);
    rep.refined = refine(ineq, n, rep.grid.config, settings);
    std::vector<double> corr;
    rep.term_angle_sums = term_angle_sums(ineq, rep.refined.config);
    for (double s : rep.term_angle_sums) corr.push_back(std::cos(s));
    rep.evaluation = report_from_correlators(ineq, corr, "ghz-xy", {1e-9, settings.seed});
    return rep;
}

} // namespace entropic
