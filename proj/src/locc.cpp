#include "entcon/locc.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace entcon::locc {

namespace {

using qcore::RealVector;
using qcore::Vector;

constexpr double kZeroOutcomeTol = 1e-24;  // squared-norm floor for forced outcomes

// Structural check (exact zeros), used to route diagonal measurements through
// O(d^2) arithmetic instead of dense matrix products. Same math, same values.
bool is_exactly_diagonal(const Matrix& m) {
    if (m.rows() != m.cols()) return false;
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i)
            if (i != j && m(i, j) != qcore::Complex(0.0, 0.0)) return false;
    return true;
}

Matrix apply_operator(const PureBipartiteState& joint, const LocalOperation& op,
                      const Matrix& m_j) {
    const Matrix& amps = joint.amplitudes();
    if (side_of(op.party) == Side::A) {
        if (is_exactly_diagonal(m_j)) return m_j.diagonal().asDiagonal() * amps;
        return m_j * amps;
    }
    // Side B acts on the column index: (I ⊗ M) psi has amplitudes amps * M^T.
    if (is_exactly_diagonal(m_j)) return amps * m_j.diagonal().asDiagonal();
    return amps * m_j.transpose();
}

void check_dimensions(const PureBipartiteState& joint, const LocalOperation& op) {
    const Eigen::Index need = side_of(op.party) == Side::A ? joint.dim_a() : joint.dim_b();
    if (op.dimension() != need)
        throw std::invalid_argument("local operation dimension does not match the party's subsystem");
}

std::string format_probability(double p) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", p);
    return buf;
}

} // namespace

const char* party_name(PartyId p) { return p == PartyId::Alice ? "Alice" : "Bob"; }

const char* op_kind_name(OpKind k) {
    switch (k) {
        case OpKind::Unitary: return "unitary";
        case OpKind::VonNeumann: return "von_neumann";
        case OpKind::Povm: return "povm";
    }
    return "?";
}

LocalOperation LocalOperation::unitary(PartyId party, Matrix u) {
    LocalOperation op{party, OpKind::Unitary, {}};
    op.operators.push_back(std::move(u));
    op.validate();
    return op;
}

LocalOperation LocalOperation::von_neumann(PartyId party, std::vector<Matrix> projectors) {
    LocalOperation op{party, OpKind::VonNeumann, std::move(projectors)};
    op.validate();
    return op;
}

LocalOperation LocalOperation::povm(PartyId party, std::vector<Matrix> measurement_ops) {
    LocalOperation op{party, OpKind::Povm, std::move(measurement_ops)};
    op.validate();
    return op;
}

Eigen::Index LocalOperation::dimension() const {
    if (operators.empty()) throw std::invalid_argument("LocalOperation: no operators");
    return operators.front().rows();
}

void LocalOperation::validate() const {
    if (operators.empty()) throw std::invalid_argument("LocalOperation: no operators");
    const Eigen::Index d = operators.front().rows();
    for (const Matrix& m : operators)
        if (m.rows() != d || m.cols() != d)
            throw std::invalid_argument("LocalOperation: operators must be square and same size");

    const Matrix id = Matrix::Identity(d, d);
    switch (kind) {
        case OpKind::Unitary: {
            if (operators.size() != 1)
                throw std::invalid_argument("unitary operation carries exactly one operator");
            if ((operators[0].adjoint() * operators[0] - id).cwiseAbs().maxCoeff() > qcore::kOpTol)
                throw std::invalid_argument("unitary operator fails U†U = I within 1e-10");
            break;
        }
        case OpKind::VonNeumann: {
            Matrix sum = Matrix::Zero(d, d);
            for (const Matrix& p : operators) {
                if ((p - p.adjoint()).cwiseAbs().maxCoeff() > qcore::kOpTol)
                    throw std::invalid_argument("projector not Hermitian within 1e-10");
                if ((p * p - p).cwiseAbs().maxCoeff() > qcore::kOpTol)
                    throw std::invalid_argument("projector not idempotent within 1e-10");
                sum += p;
            }
            for (std::size_t i = 0; i < operators.size(); ++i)
                for (std::size_t j = i + 1; j < operators.size(); ++j)
                    if ((operators[i] * operators[j]).cwiseAbs().maxCoeff() > qcore::kOpTol)
                        throw std::invalid_argument("projectors not mutually orthogonal within 1e-10");
            if ((sum - id).cwiseAbs().maxCoeff() > qcore::kOpTol)
                throw std::invalid_argument("projectors do not sum to identity within 1e-10");
            break;
        }
        case OpKind::Povm: {
            Matrix sum = Matrix::Zero(d, d);
            for (const Matrix& m : operators) sum += m.adjoint() * m;
            if ((sum - id).cwiseAbs().maxCoeff() > qcore::kOpTol)
                throw std::invalid_argument("measurement operators fail sum M†M = I within 1e-10");
            break;
        }
    }
}

std::vector<double> outcome_probabilities(const PureBipartiteState& joint,
                                          const LocalOperation& op) {
    check_dimensions(joint, op);
    std::vector<double> probs;
    probs.reserve(op.operators.size());
    double total = 0.0;
    for (const Matrix& m_j : op.operators) {
        const double p = apply_operator(joint, op, m_j).squaredNorm();
        probs.push_back(p);
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-9)
        throw std::invalid_argument("outcome probabilities do not sum to 1 within 1e-9");
    return probs;
}

namespace {

MeasurementResult finish_outcome(const PureBipartiteState& joint, const LocalOperation& op,
                                 int outcome, double p) {
    if (p <= kZeroOutcomeTol)
        throw std::domain_error("forced outcome has zero probability");
    Matrix residual = apply_operator(joint, op, op.operators[outcome]);
    residual /= std::sqrt(p);
    return MeasurementResult{outcome, p, PureBipartiteState(std::move(residual))};
}

} // namespace

MeasurementResult apply_local_operation(const PureBipartiteState& joint,
                                        const LocalOperation& op, Rng& rng) {
    const std::vector<double> probs = outcome_probabilities(joint, op);
    const int outcome = rng.sample_discrete(probs);
    return finish_outcome(joint, op, outcome, probs[outcome]);
}

MeasurementResult apply_local_operation(const PureBipartiteState& joint,
                                        const LocalOperation& op, int forced_outcome) {
    const std::vector<double> probs = outcome_probabilities(joint, op);
    if (forced_outcome < 0 || forced_outcome >= op.outcome_count())
        throw std::invalid_argument("forced outcome index out of range");
    return finish_outcome(joint, op, forced_outcome, probs[forced_outcome]);
}

namespace {

// Fast audit path: diagonal amplitude matrix measured by diagonal operators
// keeps everything diagonal, so spectra are available in O(d^2). Produces the
// same quantities as the dense route (meta-tested against it).
bool diagonal_structure(const PureBipartiteState& joint, const LocalOperation& op) {
    if (joint.dim_a() != joint.dim_b()) return false;
    if (!is_exactly_diagonal(joint.amplitudes())) return false;
    for (const Matrix& m : op.operators)
        if (!is_exactly_diagonal(m)) return false;
    return true;
}

double entropy_from_squared(std::vector<double> sq) {
    double h = 0.0;
    for (double v : sq)
        if (v > 0.0) h -= v * std::log2(v);
    return h;
}

} // namespace

EntanglementAudit audit_expected_entanglement(const PureBipartiteState& joint,
                                              const LocalOperation& op) {
    check_dimensions(joint, op);
    EntanglementAudit audit{};

    if (diagonal_structure(joint, op)) {
        const Eigen::Index d = joint.dim_a();
        std::vector<double> before(d);
        for (Eigen::Index i = 0; i < d; ++i) before[i] = std::norm(joint.amplitudes()(i, i));
        audit.entanglement_before = entropy_from_squared(before);

        std::vector<double> probs;
        for (const Matrix& m_j : op.operators) {
            double p = 0.0;
            std::vector<double> sq(d, 0.0);
            for (Eigen::Index i = 0; i < d; ++i) {
                sq[i] = std::norm(m_j(i, i) * joint.amplitudes()(i, i));
                p += sq[i];
            }
            probs.push_back(p);
            if (p > kZeroOutcomeTol) {
                for (double& v : sq) v /= p;
                audit.expected_entanglement_after += p * entropy_from_squared(sq);
            }
        }
        audit.outcome_entropy = qcore::shannon_entropy_bits(probs);
        return audit;
    }

    audit.entanglement_before = qcore::entanglement_entropy(joint);
    const std::vector<double> probs = outcome_probabilities(joint, op);
    for (int j = 0; j < op.outcome_count(); ++j) {
        if (probs[j] <= kZeroOutcomeTol) continue;
        const MeasurementResult r = finish_outcome(joint, op, j, probs[j]);
        audit.expected_entanglement_after += probs[j] * qcore::entanglement_entropy(r.residual);
    }
    audit.outcome_entropy = qcore::shannon_entropy_bits(probs);
    return audit;
}

double verify_no_signaling(const PureBipartiteState& joint, const LocalOperation& op) {
    check_dimensions(joint, op);
    const Side untouched = side_of(op.party) == Side::A ? Side::B : Side::A;

    if (diagonal_structure(joint, op)) {
        const Eigen::Index d = joint.dim_a();
        double worst = 0.0;
        for (Eigen::Index i = 0; i < d; ++i) {
            const double before = std::norm(joint.amplitudes()(i, i));
            double averaged = 0.0;
            for (const Matrix& m_j : op.operators)
                averaged += std::norm(m_j(i, i) * joint.amplitudes()(i, i));
            worst = std::max(worst, std::abs(before - averaged));
        }
        return worst;
    }

    const Matrix before = qcore::partial_trace(joint, untouched).matrix();
    Matrix averaged = Matrix::Zero(before.rows(), before.cols());
    for (const Matrix& m_j : op.operators) {
        const Matrix r = apply_operator(joint, op, m_j);  // unnormalized: carries p_j
        averaged += untouched == Side::A ? Matrix(r * r.adjoint())
                                         : Matrix(r.transpose() * r.conjugate());
    }
    return (before - averaged).cwiseAbs().maxCoeff();
}

void Transcript::record_measurement(PartyId party, OpKind kind, int outcome, double probability) {
    events_.push_back(MeasurementEvent{party, kind, outcome, probability});
}

void Transcript::record_message(PartyId sender, std::string bits) {
    events_.push_back(MessageEvent{sender, std::move(bits)});
}

void Transcript::append(const Transcript& other) {
    events_.insert(events_.end(), other.events_.begin(), other.events_.end());
}

std::string Transcript::to_log() const {
    std::ostringstream out;
    for (std::size_t step = 0; step < events_.size(); ++step) {
        out << step << ' ';
        if (const auto* m = std::get_if<MeasurementEvent>(&events_[step])) {
            out << party_name(m->party) << ' ' << op_kind_name(m->kind) << ' ' << m->outcome
                << ' ' << format_probability(m->probability);
        } else {
            const auto& msg = std::get<MessageEvent>(events_[step]);
            out << party_name(msg.sender) << " msg " << msg.bits;
        }
        out << '\n';
    }
    return out.str();
}

Referee::Referee(PureBipartiteState initial, bool audit_each_step)
    : joint_(std::move(initial)), audit_each_step_(audit_each_step) {}

void Referee::audit(const LocalOperation& op) {
    worst_signaling_ = std::max(worst_signaling_, verify_no_signaling(joint_, op));
    const EntanglementAudit a = audit_expected_entanglement(joint_, op);
    worst_excess_ = std::max(worst_excess_,
                             a.expected_entanglement_after - a.entanglement_before);
    worst_shortfall_ = std::max(worst_shortfall_,
                                (a.entanglement_before - a.outcome_entropy) -
                                    a.expected_entanglement_after);
}

MeasurementResult Referee::apply(const LocalOperation& op, Rng& rng) {
    if (audit_each_step_) audit(op);
    MeasurementResult result = apply_local_operation(joint_, op, rng);
    transcript_.record_measurement(op.party, op.kind, result.outcome, result.probability);
    joint_ = result.residual;
    return result;
}

MeasurementResult Referee::apply(const LocalOperation& op, int forced_outcome) {
    if (audit_each_step_) audit(op);
    MeasurementResult result = apply_local_operation(joint_, op, forced_outcome);
    transcript_.record_measurement(op.party, op.kind, result.outcome, result.probability);
    joint_ = result.residual;
    return result;
}

void Referee::send_message(PartyId sender, std::string bits) {
    transcript_.record_message(sender, std::move(bits));
}

void Referee::replace_joint(PureBipartiteState state) { joint_ = std::move(state); }

} // namespace entcon::locc
