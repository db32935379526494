// product_term.hpp
// Parity vectors over binary +-1 variables.
//
// A ProductTerm selects the variables that enter a product observable
// A_i * A_j * ... . Since every variable squares to +1, a variable that
// appears twice cancels; the term therefore only records parity, and the
// product of two terms is the XOR of their bit vectors.

#pragma once

#include "entropic/errors.hpp"

#include <algorithm>
#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace entropic {

/// Position and name of a binary variable within one scenario.
struct VariableId {
    std::size_t index = 0;
    std::string label;

    friend bool operator==(const VariableId&, const VariableId&) = default;
};

class ProductTerm {
public:
    static constexpr std::size_t max_variables = 64;

    constexpr ProductTerm() = default;
    constexpr explicit ProductTerm(std::uint64_t bits) noexcept : bits_(bits) {}

    static ProductTerm of(std::initializer_list<std::size_t> indices) {
        return from_indices(std::span<const std::size_t>(indices.begin(), indices.size()));
    }

    /// Repeated indices cancel pairwise.
    static ProductTerm from_indices(std::span<const std::size_t> indices) {
        std::uint64_t bits = 0;
        for (auto i : indices) {
            if (i >= max_variables)
                throw argument_error("ProductTerm: variable index " + std::to_string(i) +
                                     " exceeds the 64-variable limit");
            bits ^= std::uint64_t{1} << i;
        }
        return ProductTerm(bits);
    }

    [[nodiscard]] constexpr std::uint64_t bits() const noexcept { return bits_; }
    [[nodiscard]] constexpr bool empty() const noexcept { return bits_ == 0; }
    [[nodiscard]] constexpr std::size_t size() const noexcept {
        return static_cast<std::size_t>(std::popcount(bits_));
    }
    [[nodiscard]] constexpr bool contains(std::size_t i) const noexcept {
        return i < max_variables && ((bits_ >> i) & 1U) != 0;
    }
    /// Highest referenced index + 1 (0 for the empty term).
    [[nodiscard]] constexpr std::size_t span_width() const noexcept {
        return max_variables - static_cast<std::size_t>(std::countl_zero(bits_));
    }

    [[nodiscard]] std::vector<std::size_t> indices() const {
        std::vector<std::size_t> out;
        out.reserve(size());
        for (auto b = bits_; b != 0; b &= b - 1)
            out.push_back(static_cast<std::size_t>(std::countr_zero(b)));
        return out;
    }

    constexpr ProductTerm& operator^=(ProductTerm other) noexcept {
        bits_ ^= other.bits_;
        return *this;
    }
    friend constexpr ProductTerm operator^(ProductTerm a, ProductTerm b) noexcept { return a ^= b; }
    friend constexpr bool operator==(ProductTerm, ProductTerm) = default;
    friend constexpr auto operator<=>(ProductTerm, ProductTerm) = default;

private:
    std::uint64_t bits_ = 0;
};

/// Ordered, duplicate-free variable labels of a scenario.
using VariableList = std::vector<std::string>;

inline std::optional<std::size_t> find_label(const VariableList& vars, const std::string& label) {
    auto it = std::find(vars.begin(), vars.end(), label);
    if (it == vars.end()) return std::nullopt;
    return static_cast<std::size_t>(it - vars.begin());
}

inline void validate_variables(const VariableList& vars, std::size_t limit) {
    if (vars.size() > limit)
        throw argument_error("too many variables: " + std::to_string(vars.size()) + " > " +
                             std::to_string(limit));
    for (std::size_t i = 0; i < vars.size(); ++i) {
        if (vars[i].empty()) throw argument_error("empty variable label");
        for (std::size_t j = 0; j < i; ++j)
            if (vars[i] == vars[j]) throw argument_error("duplicate variable label '" + vars[i] + "'");
    }
}

/// Labels must be distinct; a repeated label is rejected rather than cancelled.
inline ProductTerm term_from_labels(const VariableList& vars, std::span<const std::string> labels) {
    std::vector<std::size_t> idx;
    idx.reserve(labels.size());
    for (const auto& l : labels) {
        auto i = find_label(vars, l);
        if (!i) throw argument_error("unknown variable '" + l + "'");
        if (std::find(idx.begin(), idx.end(), *i) != idx.end()) throw argument_error("variable '" + l + "' listed twice");
        idx.push_back(*i);
    }
    return ProductTerm::from_indices(idx);
}

inline ProductTerm term_from_labels(const VariableList& vars, std::initializer_list<std::string> labels) {
    return term_from_labels(vars, std::span<const std::string>(labels.begin(), labels.size()));
}

inline std::vector<std::string> labels_of(ProductTerm term, const VariableList& vars) {
    std::vector<std::string> out;
    for (auto i : term.indices()) {
        if (i >= vars.size()) throw argument_error("term references variable outside the scenario");
        out.push_back(vars[i]);
    }
    return out;
}

/// "A1*B2*C2"; "1" for the empty product.
inline std::string term_label(ProductTerm term, const VariableList& vars, std::string_view sep = "*") {
    if (term.empty()) return "1";
    std::string out;
    for (const auto& l : labels_of(term, vars)) {
        if (!out.empty()) out += sep;
        out += l;
    }
    return out;
}

} // namespace entropic
