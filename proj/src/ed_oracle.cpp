#include "mbqs/ed_oracle.hpp"

#include <Eigen/Eigenvalues>
#include <bit>
#include <cmath>

#include "mbqs/errors.hpp"

namespace mbqs {

namespace {

void check_dense_size(int L, int maxL) {
    if (L < 2) throw ArgumentError("dense Hamiltonian: L must be >= 2");
    if (L > maxL)
        throw ResourceError("dense Hamiltonian: L = " + std::to_string(L) +
                            " exceeds the dense limit " + std::to_string(maxL));
}

inline double sz_of(std::uint64_t s, int j) {
    return 2.0 * static_cast<double>((s >> j) & 1ULL) - 1.0;
}

} // namespace

DenseHamiltonian build_ising_ring(int L, double g, double J) {
    check_dense_size(L, kMaxDenseL);
    if (g < 0.0 || J <= 0.0) throw ArgumentError("build_ising_ring: need g >= 0, J > 0");
    const std::uint64_t dim = 1ULL << L;
    DenseHamiltonian H{L, HamiltonianKind::Ising,
                       Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dim),
                                             static_cast<Eigen::Index>(dim))};
    for (std::uint64_t s = 0; s < dim; ++s) {
        double zz = 0.0;
        for (int i = 0; i < L; ++i) zz += sz_of(s, i) * sz_of(s, (i + 1) % L);
        H.matrix(s, s) = J * zz;
        for (int i = 0; i < L; ++i) H.matrix(s ^ (1ULL << i), s) += g * J;
    }
    return H;
}

DenseHamiltonian build_rydberg_custom(int L, const Eigen::MatrixXd& couplings,
                                      const Eigen::VectorXd& omega_per_site,
                                      double delta) {
    check_dense_size(L, kMaxDenseL);
    const std::uint64_t dim = 1ULL << L;
    DenseHamiltonian H{L, HamiltonianKind::Rydberg,
                       Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dim),
                                             static_cast<Eigen::Index>(dim))};
    for (std::uint64_t s = 0; s < dim; ++s) {
        double diag = 0.0;
        for (int i = 0; i < L; ++i) {
            const double ni = static_cast<double>((s >> i) & 1ULL);
            diag -= delta * ni;
            for (int j = i + 1; j < L; ++j)
                diag += couplings(i, j) * ni * static_cast<double>((s >> j) & 1ULL);
        }
        H.matrix(s, s) = diag;
        for (int i = 0; i < L; ++i)
            if (omega_per_site(i) != 0.0)
                H.matrix(s ^ (1ULL << i), s) += 0.5 * omega_per_site(i);
    }
    return H;
}

DenseHamiltonian build_rydberg_ring(const RydbergParams& params) {
    const int L = params.L;
    check_dense_size(L, kMaxDenseL);
    Eigen::MatrixXd cpl = Eigen::MatrixXd::Zero(L, L);
    for (int i = 0; i < L; ++i)
        for (int j = i + 1; j < L; ++j) {
            const double r = ring_distance(L, params.a, j - i);
            cpl(i, j) = params.C6 / std::pow(r, 6);
        }
    return build_rydberg_custom(L, cpl, Eigen::VectorXd::Constant(L, params.omega),
                                params.delta);
}

Eigen::VectorXcd dense_initial_state(int L, InitialState state) {
    const std::uint64_t dim = 1ULL << L;
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(dim));
    switch (state) {
        case InitialState::Down:
            psi(0) = 1.0;
            break;
        case InitialState::Plus:
            psi.setConstant(1.0 / std::sqrt(static_cast<double>(dim)));
            break;
        case InitialState::Afm: {
            if (L % 2 != 0) throw ArgumentError("AFM state requires even L");
            std::uint64_t s = 0;
            for (int j = 1; j < L; j += 2) s |= (1ULL << j);  // down,up,down,up,...
            psi(static_cast<Eigen::Index>(s)) = 1.0;
            break;
        }
    }
    return psi;
}

std::vector<std::uint64_t> shift_permutation(int L) {
    const std::uint64_t dim = 1ULL << L;
    std::vector<std::uint64_t> perm(dim);
    for (std::uint64_t s = 0; s < dim; ++s) {
        const std::uint64_t wrapped = (s >> (L - 1)) & 1ULL;
        perm[s] = ((s << 1) | wrapped) & (dim - 1);
    }
    return perm;
}

EdEvolver::EdEvolver(const DenseHamiltonian& H) : L_(H.L) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H.matrix);
    if (es.info() != Eigen::Success)
        throw NumericError("EdEvolver: eigendecomposition failed");
    V_ = es.eigenvectors();
    E_ = es.eigenvalues();
}

Eigen::VectorXcd EdEvolver::operator()(const Eigen::VectorXcd& psi0, double t) const {
    if (std::abs(psi0.norm() - 1.0) > 1e-9)
        throw ArgumentError("evolve: state is not normalized");
    Eigen::VectorXcd c = V_.transpose() * psi0;
    for (Eigen::Index i = 0; i < c.size(); ++i)
        c(i) *= std::exp(std::complex<double>(0.0, -E_(i) * t));
    return V_ * c;
}

Eigen::VectorXcd evolve(const DenseHamiltonian& H, const Eigen::VectorXcd& psi0, double t) {
    return EdEvolver(H)(psi0, t);
}

EdObservables observables(const Eigen::VectorXcd& psi, int L) {
    const std::uint64_t dim = 1ULL << L;
    if (psi.size() != static_cast<Eigen::Index>(dim))
        throw ArgumentError("observables: state dimension mismatch");
    EdObservables out;
    out.one_point = Eigen::VectorXd::Zero(L);
    out.two_point = Eigen::MatrixXd::Zero(L, L);
    std::vector<double> prob(dim);
    for (std::uint64_t s = 0; s < dim; ++s) prob[s] = std::norm(psi(s));
    for (std::uint64_t s = 0; s < dim; ++s) {
        const double p = prob[s];
        if (p == 0.0) continue;
        for (int i = 0; i < L; ++i) {
            const double zi = sz_of(s, i);
            out.one_point(i) += p * zi;
            out.two_point(i, i) += p;
            for (int j = i + 1; j < L; ++j) {
                const double v = p * zi * sz_of(s, j);
                out.two_point(i, j) += v;
                out.two_point(j, i) += v;
            }
        }
    }
    out.connected = out.two_point - out.one_point * out.one_point.transpose();
    return out;
}

double half_chain_entropy(const Eigen::VectorXcd& psi, int L) {
    if (L % 2 != 0) throw ArgumentError("half_chain_entropy: L must be even");
    const int half = L / 2;
    const Eigen::Index dA = 1LL << half;
    Eigen::MatrixXcd M(dA, dA);
    for (Eigen::Index b = 0; b < dA; ++b)
        for (Eigen::Index a = 0; a < dA; ++a) M(a, b) = psi(a + (b << half));
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(M);
    double S = 0.0;
    for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) {
        const double lam = svd.singularValues()(i);
        const double p = lam * lam;
        if (p > 1e-15) S -= p * std::log(p);
    }
    return S;
}

} // namespace mbqs
