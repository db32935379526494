// chain.hpp
// Derivation chains of triangle-inequality steps over product terms.
//
// A step (u, v, w) is the inequality delta(u) <= delta(v) + delta(w), valid
// for any associative distance whenever u = v XOR w: the variables shared by
// v and w square to +1 and drop out of the product. A chain starts from the
// target, repeatedly replaces one open term u by the pair (v, w), and ends
// with a multiset of open terms equal to its leaves. An accepted chain proves
// delta(target) <= sum of delta(leaf).

#pragma once

#include "entropic/errors.hpp"
#include "entropic/layout.hpp"
#include "entropic/product_term.hpp"

#include <algorithm>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace entropic {

struct TriangleStep {
    ProductTerm u;
    ProductTerm v;
    ProductTerm w;

    friend bool operator==(const TriangleStep&, const TriangleStep&) = default;
};

struct DerivationChain {
    VariableList variables;
    ProductTerm target;
    std::vector<TriangleStep> steps;
    std::vector<ProductTerm> leaves;
};

enum class ChainFault {
    none,
    empty_term,    // a step or leaf with no variables
    invalid_step,  // u != v XOR w
    unknown_term,  // step decomposes a term that is not currently open
    out_of_range,  // term references a variable beyond `variables`
    leaf_mismatch, // open terms at the end differ from the declared leaves
};

inline const char* to_string(ChainFault f) {
    switch (f) {
    case ChainFault::none: return "none";
    case ChainFault::empty_term: return "empty_term";
    case ChainFault::invalid_step: return "invalid_step";
    case ChainFault::unknown_term: return "unknown_term";
    case ChainFault::out_of_range: return "out_of_range";
    case ChainFault::leaf_mismatch: return "leaf_mismatch";
    }
    return "?";
}

struct ChainVerdict {
    bool accepted = false;
    ChainFault fault = ChainFault::none;
    /// Index of the offending step; unset for leaf-level faults.
    std::optional<std::size_t> failing_step;
    std::string message;

    explicit operator bool() const noexcept { return accepted; }
};

inline bool verify_step(const TriangleStep& step) { return step.u == (step.v ^ step.w); }

namespace detail {
inline std::vector<std::uint64_t> sorted_bits(std::span<const ProductTerm> terms) {
    std::vector<std::uint64_t> b;
    b.reserve(terms.size());
    for (auto t : terms) b.push_back(t.bits());
    std::sort(b.begin(), b.end());
    return b;
}
} // namespace detail

inline ChainVerdict verify_chain(const DerivationChain& chain) {
    auto reject = [](ChainFault f, std::optional<std::size_t> at, std::string msg) {
        return ChainVerdict{false, f, at, std::move(msg)};
    };
    const std::size_t width = chain.variables.size();
    auto fits = [&](ProductTerm t) { return t.span_width() <= width; };

    if (chain.target.empty()) return reject(ChainFault::empty_term, std::nullopt, "empty target");
    if (!fits(chain.target)) return reject(ChainFault::out_of_range, std::nullopt, "target out of range");

    std::vector<ProductTerm> open{chain.target};
    for (std::size_t i = 0; i < chain.steps.size(); ++i) {
        const auto& s = chain.steps[i];
        if (!fits(s.u) || !fits(s.v) || !fits(s.w))
            return reject(ChainFault::out_of_range, i, "step references an unknown variable");
        if (s.v.empty() || s.w.empty()) return reject(ChainFault::empty_term, i, "step produces an empty term");
        if (!verify_step(s)) return reject(ChainFault::invalid_step, i, "u != v XOR w");
        auto it = std::find(open.begin(), open.end(), s.u);
        if (it == open.end()) return reject(ChainFault::unknown_term, i, "step decomposes a term that is not open");
        open.erase(it);
        open.push_back(s.v);
        open.push_back(s.w);
    }
    for (auto l : chain.leaves) {
        if (l.empty()) return reject(ChainFault::empty_term, std::nullopt, "empty leaf");
        if (!fits(l)) return reject(ChainFault::out_of_range, std::nullopt, "leaf out of range");
    }
    if (detail::sorted_bits(open) != detail::sorted_bits(chain.leaves))
        return reject(ChainFault::leaf_mismatch, std::nullopt, "open terms do not match the declared leaves");
    return {true, ChainFault::none, std::nullopt, {}};
}

/// XOR of the leaves equals the target.
inline bool xor_sum_check(ProductTerm target, std::span<const ProductTerm> leaves) {
    ProductTerm acc;
    for (auto l : leaves) acc ^= l;
    return acc == target;
}

/// Peels the leaves off the target left to right; the last step splits the
/// remainder into the final two leaves. Requires xor_sum_check(target, leaves).
inline DerivationChain fold_chain(VariableList variables, ProductTerm target, std::vector<ProductTerm> leaves) {
    if (leaves.empty()) throw argument_error("fold_chain: no leaves");
    if (!xor_sum_check(target, leaves)) throw argument_error("fold_chain: leaves do not XOR to the target");
    DerivationChain chain{std::move(variables), target, {}, leaves};
    ProductTerm rest = target;
    for (std::size_t i = 0; i + 1 < leaves.size(); ++i) {
        const ProductTerm next = rest ^ leaves[i];
        chain.steps.push_back({rest, leaves[i], next});
        rest = next;
    }
    return chain;
}

namespace detail {

/// Reduced XOR basis with pivots at the lowest set bit.
class XorBasis {
public:
    void insert(std::uint64_t x) {
        for (auto b : rows_)
            if (x & lowest(b)) x ^= b;
        if (x == 0) return;
        for (auto& b : rows_)
            if (b & lowest(x)) b ^= x;
        rows_.push_back(x);
    }
    [[nodiscard]] bool spans(std::uint64_t x) const {
        for (auto b : rows_)
            if (x & lowest(b)) x ^= b;
        return x == 0;
    }

private:
    static std::uint64_t lowest(std::uint64_t x) { return x & (~x + 1); }
    std::vector<std::uint64_t> rows_;
};

/// Lexicographically smallest 0/1 selection over `terms` (first entry most
/// significant) whose XOR equals target.
inline std::optional<std::vector<bool>> smallest_selection(ProductTerm target, std::span<const ProductTerm> terms) {
    const std::size_t m = terms.size();
    std::vector<XorBasis> suffix(m + 1);
    for (std::size_t i = m; i-- > 0;) {
        suffix[i] = suffix[i + 1];
        suffix[i].insert(terms[i].bits());
    }
    std::uint64_t residual = target.bits();
    if (!suffix[0].spans(residual)) return std::nullopt;
    std::vector<bool> pick(m, false);
    for (std::size_t i = 0; i < m; ++i) {
        if (suffix[i + 1].spans(residual)) continue;
        pick[i] = true;
        residual ^= terms[i].bits();
    }
    if (residual != 0) return std::nullopt;
    return pick;
}

} // namespace detail

/// Finds allowed terms (each used at most once) whose XOR is the target and
/// returns the folded chain. Decompositions into two or more terms are
/// preferred; a copy of the target inside `allowed` only serves as the trivial
/// zero-step chain when nothing else works.
inline std::optional<DerivationChain> synthesize_chain(VariableList variables, ProductTerm target,
                                                       std::span<const ProductTerm> allowed) {
    if (allowed.empty()) throw argument_error("synthesize_chain: empty allowed set");
    if (target.empty()) throw argument_error("synthesize_chain: empty target");
    std::vector<ProductTerm> proper;
    bool target_allowed = false;
    for (auto t : allowed) {
        if (t.empty()) continue;
        if (t == target) target_allowed = true;
        else proper.push_back(t);
    }
    if (auto pick = detail::smallest_selection(target, proper)) {
        std::vector<ProductTerm> leaves;
        for (std::size_t i = 0; i < proper.size(); ++i)
            if ((*pick)[i]) leaves.push_back(proper[i]);
        if (!leaves.empty()) return fold_chain(std::move(variables), target, std::move(leaves));
    }
    if (target_allowed) return DerivationChain{std::move(variables), target, {}, {target}};
    return std::nullopt;
}

/// Replays the even-N derivation: N-1 peels of the cyclic terms followed by the
/// split of the remainder into the last cyclic term and the all-M2 term.
inline DerivationChain generate_multipartite_chain(std::size_t n) {
    check_multipartite_parties(n);
    const ProductTerm target = multipartite_uniform_term(n, 0);
    auto chain = fold_chain(multipartite_variables(n), target, multipartite_rhs_terms(n));
    if (chain.steps.size() != n) throw invariant_error("multipartite chain: unexpected step count");
    return chain;
}

/// Plain-text derivation in delta notation, one step per line, followed by the
/// resulting inequality.
inline std::string format_chain(const DerivationChain& chain) {
    auto d = [&](ProductTerm t) { return "δ(" + term_label(t, chain.variables, ",") + ")"; };
    std::string out;
    for (const auto& s : chain.steps) out += d(s.u) + " ≤ " + d(s.v) + " + " + d(s.w) + "\n";
    out += d(chain.target) + " ≤ ";
    for (std::size_t i = 0; i < chain.leaves.size(); ++i) out += (i ? " + " : "") + d(chain.leaves[i]);
    out += "\n";
    return out;
}

} // namespace entropic
