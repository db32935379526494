// layout.hpp
// Variable layouts of the Bell-type scenarios: which label sits at which
// (party, setting), and the measurement angles used with GHZ states.

#pragma once

#include "entropic/errors.hpp"
#include "entropic/product_term.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

namespace entropic {

/// Party j measuring its setting s (both 0-based).
struct Site {
    std::size_t party = 0;
    std::size_t setting = 0;

    friend bool operator==(const Site&, const Site&) = default;
};

/// XY-plane angle per (party, setting), radians.
class AngleConfig {
public:
    AngleConfig() = default;
    AngleConfig(std::size_t parties, std::size_t settings, double fill = 0.0)
        : parties_(parties), settings_(settings), angles_(parties * settings, fill) {}

    [[nodiscard]] std::size_t parties() const noexcept { return parties_; }
    [[nodiscard]] std::size_t settings() const noexcept { return settings_; }
    [[nodiscard]] const std::vector<double>& values() const noexcept { return angles_; }

    [[nodiscard]] double at(std::size_t party, std::size_t setting) const {
        check(party, setting);
        return angles_[party * settings_ + setting];
    }
    [[nodiscard]] double at(Site s) const { return at(s.party, s.setting); }

    void set(std::size_t party, std::size_t setting, double angle) {
        check(party, setting);
        angles_[party * settings_ + setting] = angle;
    }

    /// Same angle for every party at `setting`.
    void set_all(std::size_t setting, double angle) {
        for (std::size_t p = 0; p < parties_; ++p) set(p, setting, angle);
    }

    friend bool operator==(const AngleConfig&, const AngleConfig&) = default;

private:
    void check(std::size_t party, std::size_t setting) const {
        if (party >= parties_ || setting >= settings_)
            throw argument_error("AngleConfig: (party " + std::to_string(party) + ", setting " +
                                 std::to_string(setting) + ") not configured");
    }

    std::size_t parties_ = 0;
    std::size_t settings_ = 0;
    std::vector<double> angles_;
};

/// Wraps an angle into [-pi, pi).
inline double wrap_angle(double a) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double r = std::fmod(a + std::numbers::pi, two_pi);
    if (r < 0.0) r += two_pi;
    r -= std::numbers::pi;
    return r >= std::numbers::pi ? -std::numbers::pi : r;
}

// --- tripartite: A1 A2 B1 B2 C1 C2 ---------------------------------------------

inline VariableList tripartite_variables() { return {"A1", "A2", "B1", "B2", "C1", "C2"}; }

inline std::vector<Site> tripartite_sites() {
    std::vector<Site> s;
    for (std::size_t p = 0; p < 3; ++p)
        for (std::size_t k = 0; k < 2; ++k) s.push_back({p, k});
    return s;
}

/// Setting 1: pi/6, setting 2: -pi/12, identical for all three parties.
inline AngleConfig tripartite_violation_angles() {
    AngleConfig c(3, 2);
    c.set_all(0, std::numbers::pi / 6.0);
    c.set_all(1, -std::numbers::pi / 12.0);
    return c;
}

/// Setting 1: pi/3, setting 2: -pi/6. Every mixed term sums to 0 and the
/// all-first-setting term to pi, so the correlator combination reaches 4.
inline AngleConfig mermin_violation_angles() {
    AngleConfig c(3, 2);
    c.set_all(0, std::numbers::pi / 3.0);
    c.set_all(1, -std::numbers::pi / 6.0);
    return c;
}

// --- even-N family: M1^(j) M2^(j) M3^(j) per party j --------------------------

inline constexpr std::size_t multipartite_min_parties = 4;
inline constexpr std::size_t multipartite_max_parties = 12;

inline void check_multipartite_parties(std::size_t n) {
    if (n % 2 != 0) throw argument_error("multipartite family is defined for an even number of parties, got " + std::to_string(n));
    if (n < multipartite_min_parties || n > multipartite_max_parties)
        throw argument_error("multipartite party count must be in [4, 12], got " + std::to_string(n));
}

inline std::size_t multipartite_index(std::size_t party, std::size_t setting) { return party * 3 + setting; }

inline VariableList multipartite_variables(std::size_t n) {
    check_multipartite_parties(n);
    VariableList v;
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t s = 0; s < 3; ++s) v.push_back("M" + std::to_string(s + 1) + "^(" + std::to_string(j + 1) + ")");
    return v;
}

inline std::vector<Site> multipartite_sites(std::size_t n) {
    check_multipartite_parties(n);
    std::vector<Site> s;
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < 3; ++k) s.push_back({j, k});
    return s;
}

/// All parties measuring the same setting.
inline ProductTerm multipartite_uniform_term(std::size_t n, std::size_t setting) {
    std::vector<std::size_t> idx;
    for (std::size_t j = 0; j < n; ++j) idx.push_back(multipartite_index(j, setting));
    return ProductTerm::from_indices(idx);
}

/// Cyclic term j: M1 at party j, M2 at party j+1 (mod N), M3 everywhere else.
inline ProductTerm multipartite_cyclic_term(std::size_t n, std::size_t j) {
    std::vector<std::size_t> idx;
    for (std::size_t p = 0; p < n; ++p) {
        std::size_t s = 2;
        if (p == j) s = 0;
        else if (p == (j + 1) % n) s = 1;
        idx.push_back(multipartite_index(p, s));
    }
    return ProductTerm::from_indices(idx);
}

/// N cyclic terms followed by the all-M2 term.
inline std::vector<ProductTerm> multipartite_rhs_terms(std::size_t n) {
    check_multipartite_parties(n);
    std::vector<ProductTerm> rhs;
    for (std::size_t j = 0; j < n; ++j) rhs.push_back(multipartite_cyclic_term(n, j));
    rhs.push_back(multipartite_uniform_term(n, 1));
    return rhs;
}

/// alpha_1 = pi/2N, alpha_2 = 0, alpha_3 = -pi/(2N(N-2)) for every party.
inline AngleConfig standard_multipartite_angles(std::size_t n) {
    check_multipartite_parties(n);
    const double dn = static_cast<double>(n);
    AngleConfig c(n, 3);
    c.set_all(0, std::numbers::pi / (2.0 * dn));
    c.set_all(1, 0.0);
    c.set_all(2, -std::numbers::pi / (2.0 * dn * (dn - 2.0)));
    return c;
}

// --- Peres-Mermin square ----------------------------------------------------------

/// Rows {A,a,alpha}, {B,b,beta}, {C,c,gamma}; columns {A,B,C}, {a,b,c}, {alpha,beta,gamma}.
inline VariableList pm_variables() { return {"A", "a", "alpha", "B", "b", "beta", "C", "c", "gamma"}; }

/// The six compatible triples in the order q1..q6.
inline std::vector<std::vector<std::string>> pm_triples() {
    return {{"A", "a", "alpha"}, {"B", "b", "beta"}, {"C", "c", "gamma"},
            {"A", "B", "C"},     {"a", "b", "c"},    {"alpha", "beta", "gamma"}};
}

inline VariableList pm_product_variables() { return {"q1", "q2", "q3", "q4", "q5", "q6"}; }

} // namespace entropic
