// Bipartite pure/mixed state representation: Schmidt decomposition, partial
// trace, entropies, fidelities, Werner state.
#pragma once

#include <Eigen/Dense>

#include <complex>
#include <span>

namespace entcon::qcore {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

// Global tolerances: state normalization and operator algebra checks.
inline constexpr double kNormTol = 1e-12;
inline constexpr double kOpTol = 1e-10;

enum class Side { A, B };

// -sum p log2 p with 0 log 0 = 0; entries below -1e-10 are rejected upstream,
// small negatives are clamped to 0.
double shannon_entropy_bits(std::span<const double> probs);

// H2(p) = -p log2 p - (1-p) log2 (1-p).
double binary_entropy(double p);

// Joint pure state of two subsystems. Entry (i, j) of the amplitude matrix is
// the coefficient of |i>_A |j>_B. Immutable after construction.
class PureBipartiteState {
public:
    explicit PureBipartiteState(Matrix amplitudes);

    static PureBipartiteState from_joint_vector(const Vector& joint,
                                                Eigen::Index dim_a, Eigen::Index dim_b);
    static PureBipartiteState product(const Vector& a, const Vector& b);
    // (|01> - |10>)/sqrt(2)
    static PureBipartiteState singlet();
    // cos(theta)|0>|1> - sin(theta)|1>|0>, the biased two-qubit pair.
    static PureBipartiteState partly_entangled_pair(double theta);
    // cos(theta)|00> + sin(theta)|11>, the correlated form used to build blocks.
    static PureBipartiteState correlated_pair(double theta);
    // n-fold tensor power of correlated_pair(theta); amplitude matrix is
    // diagonal with entry cos^(n-w) sin^w at each weight-w basis string.
    static PureBipartiteState pair_block(double theta, int pairs);
    // sum_i |ii>/sqrt(d)
    static PureBipartiteState maximally_entangled(Eigen::Index d);

    Eigen::Index dim_a() const { return amps_.rows(); }
    Eigen::Index dim_b() const { return amps_.cols(); }
    const Matrix& amplitudes() const { return amps_; }
    // Row-major flattening: index = i * dim_b + j.
    Vector joint_vector() const;

private:
    Matrix amps_;
};

// Bi-orthogonal expansion with nonnegative, nonincreasing coefficients.
// reconstruct() = sum_i c_i a_i b_i^T (no conjugation on the B columns).
struct SchmidtForm {
    RealVector coefficients;
    Matrix basis_a;
    Matrix basis_b;

    Matrix reconstruct() const;
};

class DensityMatrix {
public:
    explicit DensityMatrix(Matrix rho);

    static DensityMatrix pure(const Vector& psi);
    static DensityMatrix maximally_mixed(Eigen::Index d);

    Eigen::Index dim() const { return rho_.rows(); }
    const Matrix& matrix() const { return rho_; }
    // Descending order.
    RealVector eigenvalues() const;
    double entropy_bits() const;

private:
    Matrix rho_;
};

SchmidtForm schmidt_decompose(const PureBipartiteState& state);
// Values only (descending), via the Hermitian spectrum of M M†.
RealVector schmidt_coefficients(const PureBipartiteState& state);
DensityMatrix partial_trace(const PureBipartiteState& state, Side side);
// Von Neumann entropy of either reduced state, in ebits.
double entanglement_entropy(const PureBipartiteState& state);
// <psi|W|psi>.
double fidelity(const Vector& psi, const DensityMatrix& output);
double fidelity(const PureBipartiteState& psi, const DensityMatrix& output);
// max over maximally entangled |Phi> of |<Phi|Psi>|^2 = (sum_i c_i)^2 / d.
double max_entangled_fidelity(const PureBipartiteState& state);
// (1/8) I + (1/2)|Psi^-><Psi^-| on two qubits.
DensityMatrix werner_state();

Matrix kron(const Matrix& a, const Matrix& b);
Vector kron(const Vector& a, const Vector& b);

} // namespace entcon::qcore
