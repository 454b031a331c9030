#include "entcon/qcore.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace entcon::qcore {

namespace {

constexpr double kEntropyFloor = -1e-10;  // eigenvalues below this are rejected

double clamp01(double v) { return std::min(1.0, std::max(0.0, v)); }

double plog2p(double p) {
    if (p <= 0.0) return 0.0;
    return p * std::log2(p);
}

} // namespace

double shannon_entropy_bits(std::span<const double> probs) {
    double h = 0.0;
    for (double p : probs) {
        if (p < kEntropyFloor) throw std::invalid_argument("shannon_entropy_bits: negative probability");
        h -= plog2p(std::max(p, 0.0));
    }
    return h;
}

double binary_entropy(double p) {
    if (p < -1e-15 || p > 1.0 + 1e-15) throw std::invalid_argument("binary_entropy: p outside [0,1]");
    p = clamp01(p);
    return -plog2p(p) - plog2p(1.0 - p);
}

PureBipartiteState::PureBipartiteState(Matrix amplitudes) : amps_(std::move(amplitudes)) {
    if (amps_.rows() < 1 || amps_.cols() < 1)
        throw std::invalid_argument("PureBipartiteState: dimensions must be >= 1");
    const double sq = amps_.squaredNorm();
    if (std::abs(sq - 1.0) > kNormTol)
        throw std::invalid_argument("PureBipartiteState: squared norm deviates from 1 beyond 1e-12");
}

PureBipartiteState PureBipartiteState::from_joint_vector(const Vector& joint,
                                                         Eigen::Index dim_a, Eigen::Index dim_b) {
    if (joint.size() != dim_a * dim_b)
        throw std::invalid_argument("from_joint_vector: size mismatch");
    Matrix m(dim_a, dim_b);
    for (Eigen::Index i = 0; i < dim_a; ++i)
        for (Eigen::Index j = 0; j < dim_b; ++j) m(i, j) = joint(i * dim_b + j);
    return PureBipartiteState(std::move(m));
}

PureBipartiteState PureBipartiteState::product(const Vector& a, const Vector& b) {
    return PureBipartiteState(a * b.transpose());
}

PureBipartiteState PureBipartiteState::singlet() {
    return partly_entangled_pair(std::numbers::pi / 4.0);
}

PureBipartiteState PureBipartiteState::partly_entangled_pair(double theta) {
    Matrix m = Matrix::Zero(2, 2);
    m(0, 1) = std::cos(theta);
    m(1, 0) = -std::sin(theta);
    return PureBipartiteState(std::move(m));
}

PureBipartiteState PureBipartiteState::correlated_pair(double theta) {
    Matrix m = Matrix::Zero(2, 2);
    m(0, 0) = std::cos(theta);
    m(1, 1) = std::sin(theta);
    return PureBipartiteState(std::move(m));
}

PureBipartiteState PureBipartiteState::pair_block(double theta, int pairs) {
    if (pairs < 1 || pairs > 12)
        throw std::invalid_argument("pair_block: pairs must be in [1, 12] for dense simulation");
    const Eigen::Index dim = Eigen::Index(1) << pairs;
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    Matrix m = Matrix::Zero(dim, dim);
    for (Eigen::Index x = 0; x < dim; ++x) {
        const int w = std::popcount(static_cast<unsigned long long>(x));
        m(x, x) = std::pow(c, pairs - w) * std::pow(s, w);
    }
    return PureBipartiteState(std::move(m));
}

PureBipartiteState PureBipartiteState::maximally_entangled(Eigen::Index d) {
    if (d < 1) throw std::invalid_argument("maximally_entangled: d >= 1 required");
    Matrix m = Matrix::Identity(d, d) / std::sqrt(static_cast<double>(d));
    return PureBipartiteState(std::move(m));
}

Vector PureBipartiteState::joint_vector() const {
    Vector v(dim_a() * dim_b());
    for (Eigen::Index i = 0; i < dim_a(); ++i)
        for (Eigen::Index j = 0; j < dim_b(); ++j) v(i * dim_b() + j) = amps_(i, j);
    return v;
}

Matrix SchmidtForm::reconstruct() const {
    Matrix m = Matrix::Zero(basis_a.rows(), basis_b.rows());
    for (Eigen::Index i = 0; i < coefficients.size(); ++i)
        m += coefficients(i) * basis_a.col(i) * basis_b.col(i).transpose();
    return m;
}

DensityMatrix::DensityMatrix(Matrix rho) : rho_(std::move(rho)) {
    if (rho_.rows() != rho_.cols() || rho_.rows() < 1)
        throw std::invalid_argument("DensityMatrix: square matrix required");
    if ((rho_ - rho_.adjoint()).cwiseAbs().maxCoeff() > kNormTol)
        throw std::invalid_argument("DensityMatrix: not Hermitian within 1e-12");
    if (std::abs(rho_.trace().real() - 1.0) > kNormTol || std::abs(rho_.trace().imag()) > kNormTol)
        throw std::invalid_argument("DensityMatrix: trace deviates from 1 beyond 1e-12");
    Eigen::SelfAdjointEigenSolver<Matrix> solver(rho_, Eigen::EigenvaluesOnly);
    if (solver.eigenvalues().minCoeff() < kEntropyFloor)
        throw std::invalid_argument("DensityMatrix: negative eigenvalue beyond -1e-10");
}

DensityMatrix DensityMatrix::pure(const Vector& psi) {
    return DensityMatrix(psi * psi.adjoint());
}

DensityMatrix DensityMatrix::maximally_mixed(Eigen::Index d) {
    return DensityMatrix(Matrix::Identity(d, d) / static_cast<double>(d));
}

RealVector DensityMatrix::eigenvalues() const {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(rho_, Eigen::EigenvaluesOnly);
    RealVector v = solver.eigenvalues();
    std::sort(v.data(), v.data() + v.size(), std::greater<double>());
    return v;
}

double DensityMatrix::entropy_bits() const {
    RealVector v = eigenvalues();
    double h = 0.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) h -= plog2p(std::max(v(i), 0.0));
    return h;
}

SchmidtForm schmidt_decompose(const PureBipartiteState& state) {
    // Thin SVD M = U S V†, so M = sum_i s_i u_i (conj v_i)^T: the B basis is
    // the conjugate of V's columns and the coefficients are already real
    // nonnegative and nonincreasing.
    Eigen::JacobiSVD<Matrix> svd(state.amplitudes(), Eigen::ComputeThinU | Eigen::ComputeThinV);
    SchmidtForm form;
    form.coefficients = svd.singularValues();
    form.basis_a = svd.matrixU();
    form.basis_b = svd.matrixV().conjugate();
    return form;
}

RealVector schmidt_coefficients(const PureBipartiteState& state) {
    const Matrix& m = state.amplitudes();
    const bool rows_smaller = m.rows() <= m.cols();
    Matrix gram = rows_smaller ? Matrix(m * m.adjoint()) : Matrix(m.adjoint() * m);
    Eigen::SelfAdjointEigenSolver<Matrix> solver(gram, Eigen::EigenvaluesOnly);
    RealVector v = solver.eigenvalues();
    std::sort(v.data(), v.data() + v.size(), std::greater<double>());
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = std::sqrt(std::max(v(i), 0.0));
    return v;
}

DensityMatrix partial_trace(const PureBipartiteState& state, Side side) {
    const Matrix& m = state.amplitudes();
    if (side == Side::A) return DensityMatrix(m * m.adjoint());
    return DensityMatrix(m.transpose() * m.conjugate());
}

double entanglement_entropy(const PureBipartiteState& state) {
    RealVector c = schmidt_coefficients(state);
    double h = 0.0;
    for (Eigen::Index i = 0; i < c.size(); ++i) h -= plog2p(c(i) * c(i));
    const double cap = std::log2(static_cast<double>(c.size()));
    return std::min(std::max(h, 0.0), cap);
}

double fidelity(const Vector& psi, const DensityMatrix& output) {
    if (psi.size() != output.dim()) throw std::invalid_argument("fidelity: dimension mismatch");
    const Complex value = psi.adjoint() * output.matrix() * psi;
    return clamp01(value.real());
}

double fidelity(const PureBipartiteState& psi, const DensityMatrix& output) {
    return fidelity(psi.joint_vector(), output);
}

double max_entangled_fidelity(const PureBipartiteState& state) {
    if (state.dim_a() != state.dim_b())
        throw std::invalid_argument("max_entangled_fidelity: square dimensions required");
    const RealVector c = schmidt_coefficients(state);
    const double sum = c.sum();
    return clamp01(sum * sum / static_cast<double>(state.dim_a()));
}

DensityMatrix werner_state() {
    const Vector singlet = PureBipartiteState::singlet().joint_vector();
    Matrix w = Matrix::Identity(4, 4) / 8.0 + 0.5 * (singlet * singlet.adjoint());
    return DensityMatrix(std::move(w));
}

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

Vector kron(const Vector& a, const Vector& b) {
    Vector out(a.size() * b.size());
    for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
    return out;
}

} // namespace entcon::qcore
