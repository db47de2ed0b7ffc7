#include "mbqs/lindblad.hpp"

#include <Eigen/Eigenvalues>
#include <bit>
#include <cmath>

#include "mbqs/errors.hpp"

namespace mbqs {

LindbladEvolver::LindbladEvolver(const DenseHamiltonian& H, double gamma, double dt_hint)
    : L_(H.L), gamma_(gamma) {
    if (H.L > kMaxLindbladL)
        throw ResourceError("LindbladEvolver: L exceeds dense density-matrix limit " +
                            std::to_string(kMaxLindbladL));
    if (gamma < 0.0) throw ArgumentError("LindbladEvolver: gamma must be >= 0");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H.matrix);
    if (es.info() != Eigen::Success) throw NumericError("LindbladEvolver: eig failed");
    V_ = es.eigenvectors();
    E_ = es.eigenvalues();
    const double escale = std::max(std::abs(E_(0)), std::abs(E_(E_.size() - 1)));
    dt_ = dt_hint > 0.0 ? dt_hint : 0.05 / std::max(escale, 1e-12);
    const std::uint64_t dim = 1ULL << L_;
    hamming_.resize(dim, dim);
    for (std::uint64_t s = 0; s < dim; ++s)
        for (std::uint64_t sp = 0; sp < dim; ++sp)
            hamming_(s, sp) = static_cast<double>(std::popcount(s ^ sp));
}

void LindbladEvolver::step_to(Eigen::MatrixXcd& rho, double t0, double t1) const {
    const double span = t1 - t0;
    if (span <= 0.0) return;
    const int nstep = std::max(1, static_cast<int>(std::ceil(span / dt_)));
    const double h = span / nstep;

    if (h != cached_h_) {
        Eigen::VectorXcd ph(E_.size());
        for (Eigen::Index i = 0; i < E_.size(); ++i)
            ph(i) = std::exp(std::complex<double>(0.0, -E_(i) * h));
        cached_U_ = V_ * ph.asDiagonal() * V_.transpose();
        cached_damp_ = (-gamma_ * h * hamming_.array()).exp();
        cached_h_ = h;
    }
    const Eigen::MatrixXcd& Uh = cached_U_;
    const Eigen::ArrayXXd& damp_half = cached_damp_;

    for (int s = 0; s < nstep; ++s) {
        rho.array() *= damp_half;
        rho = Uh * rho * Uh.adjoint();
        rho.array() *= damp_half;
        const double drift = std::abs(rho.trace().real() - 1.0) + std::abs(rho.trace().imag());
        if (drift > 1e-8)
            throw IntegrationError("LindbladEvolver: trace drift " + std::to_string(drift) +
                                   " at step " + std::to_string(s) + " (h=" +
                                   std::to_string(h) + "); reduce dt_hint");
    }
}

void LindbladEvolver::run(
    const Eigen::VectorXcd& psi0, const std::vector<double>& times,
    const std::function<void(std::size_t, const Eigen::MatrixXcd&)>& observer) const {
    if (std::abs(psi0.norm() - 1.0) > 1e-9)
        throw ArgumentError("LindbladEvolver: state not normalized");
    Eigen::MatrixXcd rho = psi0 * psi0.adjoint();
    double t = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (times[i] < t - 1e-15) throw ArgumentError("LindbladEvolver: times must ascend");
        step_to(rho, t, times[i]);
        t = std::max(t, times[i]);
        observer(i, rho);
    }
}

std::vector<Eigen::MatrixXcd> LindbladEvolver::trajectory(
    const Eigen::VectorXcd& psi0, const std::vector<double>& times) const {
    std::vector<Eigen::MatrixXcd> out;
    out.reserve(times.size());
    run(psi0, times, [&](std::size_t, const Eigen::MatrixXcd& rho) { out.push_back(rho); });
    return out;
}

EdObservables observables_rho(const Eigen::MatrixXcd& rho, int L) {
    const std::uint64_t dim = 1ULL << L;
    if (rho.rows() != static_cast<Eigen::Index>(dim))
        throw ArgumentError("observables_rho: dimension mismatch");
    EdObservables out;
    out.one_point = Eigen::VectorXd::Zero(L);
    out.two_point = Eigen::MatrixXd::Zero(L, L);
    for (std::uint64_t s = 0; s < dim; ++s) {
        const double p = rho(s, s).real();
        for (int i = 0; i < L; ++i) {
            const double zi = 2.0 * static_cast<double>((s >> i) & 1ULL) - 1.0;
            out.one_point(i) += p * zi;
            out.two_point(i, i) += p;
            for (int j = i + 1; j < L; ++j) {
                const double zj = 2.0 * static_cast<double>((s >> j) & 1ULL) - 1.0;
                out.two_point(i, j) += p * zi * zj;
                out.two_point(j, i) += p * zi * zj;
            }
        }
    }
    out.connected = out.two_point - out.one_point * out.one_point.transpose();
    return out;
}

} // namespace mbqs
