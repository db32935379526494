// qsim.hpp
// Exact dense simulation of small qubit registers and +-1 observables.
//
// Qubit ordering: qubit 0 is the leftmost tensor factor, and bit i of a
// basis-state index is the value of qubit i. A Pauli string "XZ" therefore
// puts X on qubit 0 (bit 0) and Z on qubit 1 (bit 1).

#pragma once

#include "entropic/detail/random.hpp"
#include "entropic/distribution.hpp"
#include "entropic/errors.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace entropic::qsim {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Mat2 = Eigen::Matrix2cd;

inline constexpr std::size_t max_qubits = 20;
inline constexpr double state_tolerance = 1e-12;
inline constexpr double involution_tolerance = 1e-12;
inline constexpr double commutation_tolerance = 1e-10;
inline constexpr double scalar_tolerance = 1e-10;
inline constexpr double imaginary_tolerance = 1e-10;
inline constexpr double eigenvalue_tolerance = 1e-10;

// --- Pauli algebra -------------------------------------------------------

enum class Pauli : char { I = 'I', X = 'X', Y = 'Y', Z = 'Z' };

inline Mat2 pauli_matrix(Pauli p) {
    Mat2 m;
    switch (p) {
    case Pauli::I: m << 1, 0, 0, 1; break;
    case Pauli::X: m << 0, 1, 1, 0; break;
    case Pauli::Y: m << 0, cplx(0, -1), cplx(0, 1), 0; break;
    case Pauli::Z: m << 1, 0, 0, -1; break;
    }
    return m;
}

/// i^power for power in 0..3.
inline cplx phase_value(int power) {
    switch (power & 3) {
    case 0: return {1, 0};
    case 1: return {0, 1};
    case 2: return {-1, 0};
    default: return {0, -1};
    }
}

/// Single-qubit product a*b = i^power * c.
struct PauliProduct {
    int power;
    Pauli result;
};

inline PauliProduct multiply(Pauli a, Pauli b) {
    if (a == Pauli::I) return {0, b};
    if (b == Pauli::I) return {0, a};
    if (a == b) return {0, Pauli::I};
    // cyclic X -> Y -> Z gives +i, anticyclic gives -i
    auto idx = [](Pauli p) { return p == Pauli::X ? 0 : p == Pauli::Y ? 1 : 2; };
    const int ia = idx(a);
    const int ib = idx(b);
    const Pauli c = static_cast<Pauli>("XYZ"[3 - ia - ib]);
    return {(ib - ia + 3) % 3 == 1 ? 1 : 3, c};
}

class PauliString {
public:
    PauliString() = default;

    /// `text` lists one symbol per qubit ('I' or '1', 'X', 'Y', 'Z');
    /// the string's phase is i^phase_power.
    explicit PauliString(std::string_view text, int phase_power = 0) : phase_(phase_power & 3) {
        factors_.reserve(text.size());
        for (char c : text) {
            switch (c) {
            case 'I':
            case '1': factors_.push_back(Pauli::I); break;
            case 'X': factors_.push_back(Pauli::X); break;
            case 'Y': factors_.push_back(Pauli::Y); break;
            case 'Z': factors_.push_back(Pauli::Z); break;
            default: throw argument_error(std::string("PauliString: bad symbol '") + c + "'");
            }
        }
    }

    PauliString(std::vector<Pauli> factors, int phase_power)
        : factors_(std::move(factors)), phase_(phase_power & 3) {}

    /// Accepts "+1", "-1", "+i", "-i" (also "1", "i").
    static int parse_phase(std::string_view s) {
        if (s == "+1" || s == "1") return 0;
        if (s == "+i" || s == "i") return 1;
        if (s == "-1") return 2;
        if (s == "-i") return 3;
        throw argument_error("PauliString: bad phase '" + std::string(s) + "'");
    }

    [[nodiscard]] std::size_t size() const noexcept { return factors_.size(); }
    [[nodiscard]] Pauli factor(std::size_t q) const { return factors_.at(q); }
    [[nodiscard]] const std::vector<Pauli>& factors() const noexcept { return factors_; }
    [[nodiscard]] int phase_power() const noexcept { return phase_; }
    [[nodiscard]] cplx phase() const { return phase_value(phase_); }
    [[nodiscard]] bool hermitian() const noexcept { return (phase_ & 1) == 0; }

    [[nodiscard]] std::string symbols() const {
        std::string s;
        for (auto f : factors_) s += static_cast<char>(f);
        return s;
    }
    [[nodiscard]] std::string phase_text() const {
        static constexpr const char* names[] = {"+1", "+i", "-1", "-i"};
        return names[phase_];
    }

    friend bool operator==(const PauliString&, const PauliString&) = default;

private:
    std::vector<Pauli> factors_;
    int phase_ = 0;
};

inline PauliString pauli_mul(const PauliString& a, const PauliString& b) {
    if (a.size() != b.size()) throw argument_error("pauli_mul: length mismatch");
    std::vector<Pauli> out(a.size());
    int power = a.phase_power() + b.phase_power();
    for (std::size_t q = 0; q < a.size(); ++q) {
        auto [p, c] = multiply(a.factor(q), b.factor(q));
        power += p;
        out[q] = c;
    }
    return {std::move(out), power};
}

/// cos(angle) X + sin(angle) Y.
struct XYMeasurement {
    double angle = 0.0;

    [[nodiscard]] Mat2 matrix() const {
        Mat2 m;
        m << 0, std::polar(1.0, -angle), std::polar(1.0, angle), 0;
        return m;
    }
};

// --- Tensor-product operators ---------------------------------------------

/// scale * (f_0 (x) f_1 (x) ... ), one 2x2 factor per qubit.
class TensorOperator {
public:
    TensorOperator() = default;

    explicit TensorOperator(std::size_t qubits) : factors_(qubits, Mat2::Identity()) {
        if (qubits == 0 || qubits > max_qubits) throw argument_error("TensorOperator: bad qubit count");
    }

    static TensorOperator local(std::size_t qubits, std::size_t qubit, const Mat2& m) {
        TensorOperator op(qubits);
        op.set_factor(qubit, m);
        return op;
    }

    static TensorOperator from_pauli(const PauliString& p) {
        TensorOperator op(p.size());
        for (std::size_t q = 0; q < p.size(); ++q) op.factors_[q] = pauli_matrix(p.factor(q));
        op.scale_ = p.phase();
        return op;
    }

    static TensorOperator xy(std::size_t qubits, std::size_t qubit, XYMeasurement m) {
        return local(qubits, qubit, m.matrix());
    }

    void set_factor(std::size_t q, const Mat2& m) {
        if (q >= factors_.size())
            throw argument_error("TensorOperator: qubit " + std::to_string(q) + " out of range");
        factors_[q] = m;
    }

    [[nodiscard]] std::size_t qubit_count() const noexcept { return factors_.size(); }
    [[nodiscard]] std::size_t dimension() const noexcept { return std::size_t{1} << factors_.size(); }
    [[nodiscard]] const Mat2& factor(std::size_t q) const { return factors_.at(q); }
    [[nodiscard]] cplx scale() const noexcept { return scale_; }

    /// True when the factor on qubit q differs from the identity.
    [[nodiscard]] bool acts_on(std::size_t q) const {
        return (factors_.at(q) - Mat2::Identity()).cwiseAbs().maxCoeff() > 0.0;
    }

    [[nodiscard]] Matrix dense() const {
        const std::size_t dim = dimension();
        Matrix m(dim, dim);
        for (std::size_t r = 0; r < dim; ++r)
            for (std::size_t c = 0; c < dim; ++c) {
                cplx v = scale_;
                for (std::size_t q = 0; q < factors_.size() && v != cplx(0); ++q)
                    v *= factors_[q]((r >> q) & 1U, (c >> q) & 1U);
                m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = v;
            }
        return m;
    }

    /// O|psi> in O(n 2^n).
    [[nodiscard]] Vector apply(const Vector& psi) const {
        if (static_cast<std::size_t>(psi.size()) != dimension())
            throw argument_error("TensorOperator::apply: dimension mismatch");
        Vector out = psi;
        const std::size_t dim = dimension();
        for (std::size_t q = 0; q < factors_.size(); ++q) {
            if (!acts_on(q)) continue;
            const Mat2& f = factors_[q];
            const std::size_t bit = std::size_t{1} << q;
            for (std::size_t i = 0; i < dim; ++i) {
                if (i & bit) continue;
                const auto i0 = static_cast<Eigen::Index>(i);
                const auto i1 = static_cast<Eigen::Index>(i | bit);
                const cplx a = out(i0);
                const cplx b = out(i1);
                out(i0) = f(0, 0) * a + f(0, 1) * b;
                out(i1) = f(1, 0) * a + f(1, 1) * b;
            }
        }
        return out * scale_;
    }

    /// c when the operator equals c * Identity within tol.
    [[nodiscard]] std::optional<cplx> scalar_value(double tol = scalar_tolerance) const {
        cplx c = scale_;
        for (const auto& f : factors_) {
            const cplx d = f(0, 0);
            if (std::abs(f(0, 1)) > tol || std::abs(f(1, 0)) > tol || std::abs(f(1, 1) - d) > tol)
                return std::nullopt;
            c *= d;
        }
        return c;
    }

    friend TensorOperator operator*(const TensorOperator& a, const TensorOperator& b) {
        if (a.qubit_count() != b.qubit_count()) throw argument_error("TensorOperator: qubit count mismatch");
        TensorOperator out(a.qubit_count());
        for (std::size_t q = 0; q < a.qubit_count(); ++q) out.factors_[q] = a.factors_[q] * b.factors_[q];
        out.scale_ = a.scale_ * b.scale_;
        return out;
    }

private:
    std::vector<Mat2> factors_;
    cplx scale_{1.0, 0.0};
};

/// Dense matrix of a Pauli string on n qubits (the string must have length n
/// and a real phase).
inline Matrix observable_matrix(const PauliString& p, std::size_t n) {
    if (p.size() != n) throw argument_error("observable_matrix: Pauli string length differs from qubit count");
    if (!p.hermitian()) throw argument_error("observable_matrix: phase +-i is not Hermitian");
    return TensorOperator::from_pauli(p).dense();
}

/// Dense matrix of cos(a) X + sin(a) Y on `qubit`, identity elsewhere.
inline Matrix observable_matrix(XYMeasurement m, std::size_t qubit, std::size_t n) {
    if (qubit >= n) throw argument_error("observable_matrix: qubit position out of range");
    return TensorOperator::xy(n, qubit, m).dense();
}

// --- States ---------------------------------------------------------------

namespace detail {
inline std::size_t qubits_for_dimension(std::size_t dim) {
    if (dim < 2 || (dim & (dim - 1)) != 0) throw argument_error("state dimension must be a power of two >= 2");
    const auto n = static_cast<std::size_t>(std::countr_zero(dim));
    if (n > max_qubits) throw argument_error("state exceeds the qubit limit");
    return n;
}
} // namespace detail

class StateVector {
public:
    explicit StateVector(Vector amplitudes) : amplitudes_(std::move(amplitudes)) {
        qubits_ = detail::qubits_for_dimension(static_cast<std::size_t>(amplitudes_.size()));
        const double norm2 = amplitudes_.squaredNorm();
        if (!(std::abs(norm2 - 1.0) <= state_tolerance))
            throw argument_error("StateVector: squared norm " + std::to_string(norm2) + " is not 1");
    }

    [[nodiscard]] std::size_t qubit_count() const noexcept { return qubits_; }
    [[nodiscard]] std::size_t dimension() const noexcept { return static_cast<std::size_t>(amplitudes_.size()); }
    [[nodiscard]] const Vector& amplitudes() const noexcept { return amplitudes_; }

private:
    Vector amplitudes_;
    std::size_t qubits_ = 0;
};

class DensityMatrix {
public:
    explicit DensityMatrix(Matrix rho) : rho_(std::move(rho)) {
        if (rho_.rows() != rho_.cols()) throw argument_error("DensityMatrix: not square");
        qubits_ = detail::qubits_for_dimension(static_cast<std::size_t>(rho_.rows()));
        if ((rho_ - rho_.adjoint()).cwiseAbs().maxCoeff() > state_tolerance)
            throw argument_error("DensityMatrix: not Hermitian");
        const cplx tr = rho_.trace();
        if (std::abs(tr - cplx(1.0)) > state_tolerance) throw argument_error("DensityMatrix: trace is not 1");
        Eigen::SelfAdjointEigenSolver<Matrix> eig(rho_, Eigen::EigenvaluesOnly);
        if (eig.eigenvalues().minCoeff() < -eigenvalue_tolerance)
            throw argument_error("DensityMatrix: negative eigenvalue");
    }

    static DensityMatrix from_pure(const StateVector& psi) {
        return DensityMatrix(psi.amplitudes() * psi.amplitudes().adjoint());
    }

    [[nodiscard]] std::size_t qubit_count() const noexcept { return qubits_; }
    [[nodiscard]] std::size_t dimension() const noexcept { return static_cast<std::size_t>(rho_.rows()); }
    [[nodiscard]] const Matrix& matrix() const noexcept { return rho_; }

private:
    Matrix rho_;
    std::size_t qubits_ = 0;
};

using QuantumState = std::variant<StateVector, DensityMatrix>;

inline std::size_t qubit_count(const QuantumState& s) {
    return std::visit([](const auto& x) { return x.qubit_count(); }, s);
}

/// (|0...0> + |1...1>) / sqrt(2).
inline StateVector ghz_state(std::size_t n) {
    if (n < 2 || n > max_qubits) throw argument_error("ghz_state: qubit count must be in [2, 20]");
    const auto dim = static_cast<Eigen::Index>(std::size_t{1} << n);
    Vector v = Vector::Zero(dim);
    v(0) = v(dim - 1) = std::numbers::sqrt2 / 2.0;
    return StateVector(std::move(v));
}

/// Normalized complex Gaussian amplitudes (Haar-uniform pure state).
inline StateVector random_pure_state(std::size_t n, entropic::detail::Rng& rng) {
    if (n == 0 || n > max_qubits) throw argument_error("random_pure_state: bad qubit count");
    std::normal_distribution<double> g;
    const auto dim = static_cast<Eigen::Index>(std::size_t{1} << n);
    Vector v(dim);
    for (Eigen::Index i = 0; i < dim; ++i) v(i) = cplx(g(rng), g(rng));
    v.normalize();
    return StateVector(std::move(v));
}

/// G G^dagger / Tr(G G^dagger) for a complex Gaussian matrix G.
inline DensityMatrix random_mixed_state(std::size_t n, entropic::detail::Rng& rng) {
    if (n == 0 || n > 10) throw argument_error("random_mixed_state: bad qubit count");
    std::normal_distribution<double> g;
    const auto dim = static_cast<Eigen::Index>(std::size_t{1} << n);
    Matrix m(dim, dim);
    for (Eigen::Index r = 0; r < dim; ++r)
        for (Eigen::Index c = 0; c < dim; ++c) m(r, c) = cplx(g(rng), g(rng));
    Matrix rho = m * m.adjoint();
    rho /= rho.trace().real();
    rho = (rho + rho.adjoint()) / 2.0;
    return DensityMatrix(std::move(rho));
}

// --- Expectations ---------------------------------------------------------

namespace detail {
inline double real_part_checked(cplx v) {
    if (std::abs(v.imag()) >= imaginary_tolerance)
        throw numerical_error("expectation: imaginary residue " + std::to_string(v.imag()) +
                              " (observable not Hermitian?)");
    return v.real();
}
} // namespace detail

inline double expectation(const StateVector& psi, const Matrix& obs) {
    if (static_cast<std::size_t>(obs.rows()) != psi.dimension() || obs.rows() != obs.cols())
        throw argument_error("expectation: dimension mismatch");
    return detail::real_part_checked(psi.amplitudes().dot(obs * psi.amplitudes()));
}

inline double expectation(const DensityMatrix& rho, const Matrix& obs) {
    if (static_cast<std::size_t>(obs.rows()) != rho.dimension() || obs.rows() != obs.cols())
        throw argument_error("expectation: dimension mismatch");
    return detail::real_part_checked((rho.matrix() * obs).trace());
}

inline double expectation(const StateVector& psi, const TensorOperator& obs) {
    if (obs.dimension() != psi.dimension()) throw argument_error("expectation: dimension mismatch");
    return detail::real_part_checked(psi.amplitudes().dot(obs.apply(psi.amplitudes())));
}

inline double expectation(const DensityMatrix& rho, const TensorOperator& obs) {
    if (obs.dimension() != rho.dimension()) throw argument_error("expectation: dimension mismatch");
    // Tr(rho O) = sum_c <c| rho O |c>, with O|c> from the tensor factors
    const auto dim = static_cast<Eigen::Index>(rho.dimension());
    cplx tr = 0.0;
    Vector basis = Vector::Zero(dim);
    for (Eigen::Index c = 0; c < dim; ++c) {
        basis.setZero();
        basis(c) = 1.0;
        tr += (rho.matrix().row(c) * obs.apply(basis))(0);
    }
    return detail::real_part_checked(tr);
}

template <class Obs>
double expectation(const QuantumState& state, const Obs& obs) {
    return std::visit([&](const auto& s) { return expectation(s, obs); }, state);
}

/// cos(sum of angles): <GHZ_N| (x)_k (cos a_k X + sin a_k Y) |GHZ_N>.
inline double ghz_xy_expectation_closed_form(std::span<const double> angles) {
    double sum = 0.0;
    for (double a : angles) sum += a;
    return std::cos(sum);
}

// --- Compatibility and products --------------------------------------------

inline bool commutes(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols() || a.rows() != a.cols())
        throw argument_error("commutes: dimension mismatch");
    return (a * b - b * a).cwiseAbs().maxCoeff() < commutation_tolerance;
}

inline bool commutes(const TensorOperator& a, const TensorOperator& b) {
    if (a.qubit_count() != b.qubit_count()) throw argument_error("commutes: qubit count mismatch");
    bool overlap = false;
    for (std::size_t q = 0; q < a.qubit_count() && !overlap; ++q) overlap = a.acts_on(q) && b.acts_on(q);
    if (!overlap) return true;
    return commutes(a.dense(), b.dense());
}

inline bool is_involution(const Matrix& m) {
    return (m * m - Matrix::Identity(m.rows(), m.cols())).cwiseAbs().maxCoeff() < involution_tolerance;
}

inline bool is_involution(const TensorOperator& m) {
    auto c = (m * m).scalar_value(involution_tolerance);
    return c && std::abs(*c - cplx(1.0)) < involution_tolerance;
}

template <class Op>
struct OperatorProduct {
    Op op;
    /// +1 or -1 when the product is +-Identity within 1e-10.
    std::optional<int> scalar_sign;
};

namespace detail {
inline std::optional<int> sign_of(std::optional<cplx> c) {
    if (!c) return std::nullopt;
    if (std::abs(*c - cplx(1.0)) < scalar_tolerance) return 1;
    if (std::abs(*c + cplx(1.0)) < scalar_tolerance) return -1;
    return std::nullopt;
}

inline std::optional<cplx> scalar_of(const Matrix& m) {
    const cplx c = m(0, 0);
    if ((m - c * Matrix::Identity(m.rows(), m.cols())).cwiseAbs().maxCoeff() > scalar_tolerance) return std::nullopt;
    return c;
}

template <class Op>
void require_mutually_commuting(std::span<const Op> ops) {
    for (std::size_t i = 0; i < ops.size(); ++i)
        for (std::size_t j = i + 1; j < ops.size(); ++j)
            if (!commutes(ops[i], ops[j]))
                throw precondition_error("observables " + std::to_string(i) + " and " + std::to_string(j) +
                                         " do not commute");
}
} // namespace detail

/// Ordered product of mutually commuting observables.
inline OperatorProduct<Matrix> product_operator(std::span<const Matrix> observables) {
    if (observables.empty()) throw argument_error("product_operator: empty list");
    detail::require_mutually_commuting(observables);
    Matrix p = observables[0];
    for (std::size_t i = 1; i < observables.size(); ++i) p = p * observables[i];
    if (observables.size() == 1) return {std::move(p), std::nullopt};
    auto sign = detail::sign_of(detail::scalar_of(p));
    return {std::move(p), sign};
}

inline OperatorProduct<TensorOperator> product_operator(std::span<const TensorOperator> observables) {
    if (observables.empty()) throw argument_error("product_operator: empty list");
    detail::require_mutually_commuting(observables);
    TensorOperator p = observables[0];
    for (std::size_t i = 1; i < observables.size(); ++i) p = p * observables[i];
    if (observables.size() == 1) return {std::move(p), std::nullopt};
    auto sign = detail::sign_of(p.scalar_value());
    return {std::move(p), sign};
}

// --- Outcome distributions ---------------------------------------------------

namespace detail {
inline double clean_probability(double p) {
    if (p < -state_tolerance) throw numerical_error("outcome_distribution: negative probability");
    return p < 0.0 ? 0.0 : p;
}
} // namespace detail

/// Joint distribution of the outcomes of mutually commuting +-1 observables:
/// P(s) = Tr(rho prod_k (I + s_k O_k) / 2).
inline JointDistribution outcome_distribution(const QuantumState& state, std::span<const Matrix> observables,
                                              VariableList labels) {
    if (observables.size() != labels.size())
        throw argument_error("outcome_distribution: label count differs from observable count");
    if (observables.empty()) throw argument_error("outcome_distribution: no observables");
    if (observables.size() > JointDistribution::max_variables)
        throw argument_error("outcome_distribution: too many observables");
    const auto dim = static_cast<Eigen::Index>(std::visit([](const auto& s) { return s.dimension(); }, state));
    for (const auto& o : observables) {
        if (o.rows() != dim || o.cols() != dim) throw argument_error("outcome_distribution: dimension mismatch");
        if (!is_involution(o)) throw precondition_error("outcome_distribution: observable does not square to identity");
    }
    detail::require_mutually_commuting(observables);

    const std::size_t k = observables.size();
    const Matrix id = Matrix::Identity(dim, dim);
    std::vector<double> probs(std::size_t{1} << k, 0.0);

    if (const auto* psi = std::get_if<StateVector>(&state)) {
        // breadth-first projection tree over vectors
        std::vector<Vector> level{psi->amplitudes()};
        for (std::size_t i = 0; i < k; ++i) {
            std::vector<Vector> next(level.size() * 2);
            for (std::size_t c = 0; c < level.size(); ++c) {
                const Vector ov = observables[i] * level[c];
                next[c] = (level[c] + ov) / 2.0;
                next[c | (std::size_t{1} << i)] = (level[c] - ov) / 2.0;
            }
            level = std::move(next);
        }
        for (std::size_t c = 0; c < level.size(); ++c) probs[c] = level[c].squaredNorm();
    } else {
        const auto& rho = std::get<DensityMatrix>(state).matrix();
        std::vector<Matrix> level{id};
        for (std::size_t i = 0; i < k; ++i) {
            std::vector<Matrix> next(level.size() * 2);
            for (std::size_t c = 0; c < level.size(); ++c) {
                next[c] = (id + observables[i]) / 2.0 * level[c];
                next[c | (std::size_t{1} << i)] = (id - observables[i]) / 2.0 * level[c];
            }
            level = std::move(next);
        }
        for (std::size_t c = 0; c < level.size(); ++c)
            probs[c] = detail::clean_probability(detail::real_part_checked((rho * level[c]).trace()));
    }
    return {std::move(labels), std::move(probs)};
}

inline JointDistribution outcome_distribution(const QuantumState& state, std::span<const TensorOperator> observables,
                                              VariableList labels) {
    std::vector<Matrix> dense;
    dense.reserve(observables.size());
    for (const auto& o : observables) dense.push_back(o.dense());
    return outcome_distribution(state, dense, std::move(labels));
}

} // namespace entropic::qsim
