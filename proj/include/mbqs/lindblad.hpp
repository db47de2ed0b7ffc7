#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "mbqs/ed_oracle.hpp"

namespace mbqs {

inline constexpr int kMaxLindbladL = 10;

/// Dense density-matrix evolution under
///   d rho/dt = -i [H, rho] + gamma sum_m (sz_m rho sz_m - rho).
/// Integrator: Strang splitting between the exact unitary step (from the
/// eigendecomposition of H) and the exact dephasing channel, which is
/// elementwise rho_{ss'} *= exp(-2 gamma h d_H(s,s')) with d_H the Hamming
/// distance. Trace and positivity are preserved by construction; the trace
/// drift is monitored and the step is refined if it ever exceeds tolerance.
class LindbladEvolver {
public:
    LindbladEvolver(const DenseHamiltonian& H, double gamma, double dt_hint = 0.0);

    /// Evolve rho0 = |psi0><psi0| through `times` (strictly increasing,
    /// starting at >= 0) and call `observer(index, rho)` at each grid point.
    void run(const Eigen::VectorXcd& psi0, const std::vector<double>& times,
             const std::function<void(std::size_t, const Eigen::MatrixXcd&)>& observer) const;

    /// Density-matrix snapshots on the grid (memory heavy; prefer run()).
    std::vector<Eigen::MatrixXcd> trajectory(const Eigen::VectorXcd& psi0,
                                             const std::vector<double>& times) const;

    double gamma() const { return gamma_; }

private:
    int L_;
    double gamma_;
    double dt_;
    Eigen::MatrixXd V_;
    Eigen::VectorXd E_;
    Eigen::MatrixXd hamming_;  // pairwise Hamming distances
    mutable double cached_h_ = -1.0;
    mutable Eigen::MatrixXcd cached_U_;
    mutable Eigen::ArrayXXd cached_damp_;

    void step_to(Eigen::MatrixXcd& rho, double t0, double t1) const;
};

/// tr(rho sz_i sz_j) and tr(rho sz_i) for a dense density matrix.
EdObservables observables_rho(const Eigen::MatrixXcd& rho, int L);

} // namespace mbqs
