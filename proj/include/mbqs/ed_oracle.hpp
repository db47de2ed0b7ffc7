#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "mbqs/quench_model.hpp"

namespace mbqs {

enum class HamiltonianKind { Ising, Rydberg };

/// Dense 2^L x 2^L Hamiltonian in the sz product basis. Basis convention:
/// bit j of the index is n_j, i.e. sz_j = 2 b_j - 1, so |down...down> has
/// index 0.
struct DenseHamiltonian {
    int L = 0;
    HamiltonianKind kind = HamiltonianKind::Ising;
    Eigen::MatrixXd matrix;  // real symmetric
};

inline constexpr int kMaxDenseL = 14;

/// H = J sum_i sz_i sz_{i+1} + g J sum_i sx_i on a periodic ring.
DenseHamiltonian build_ising_ring(int L, double g, double J);

/// Rydberg ring with chord-distance van der Waals couplings:
/// H = sum_{i<j} C6/r_ij^6 n_i n_j + (Omega/2) sum sx_i - delta sum n_i.
DenseHamiltonian build_rydberg_ring(const RydbergParams& params);

/// Same with explicit pairwise couplings (rad/us), per-site drive amplitudes
/// and detuning; used by the noisy sampler.
DenseHamiltonian build_rydberg_custom(int L, const Eigen::MatrixXd& couplings,
                                      const Eigen::VectorXd& omega_per_site,
                                      double delta);

/// Product states in the dense basis.
Eigen::VectorXcd dense_initial_state(int L, InitialState state);

/// Cyclic shift permutation: site j -> j+1. Returns the image index of each
/// basis state.
std::vector<std::uint64_t> shift_permutation(int L);

/// One-time eigendecomposition, then phase application per time.
class EdEvolver {
public:
    explicit EdEvolver(const DenseHamiltonian& H);
    Eigen::VectorXcd operator()(const Eigen::VectorXcd& psi0, double t) const;
    const Eigen::VectorXd& eigenvalues() const { return E_; }

private:
    int L_;
    Eigen::MatrixXd V_;
    Eigen::VectorXd E_;
};

/// Single-shot convenience wrapper around EdEvolver.
Eigen::VectorXcd evolve(const DenseHamiltonian& H, const Eigen::VectorXcd& psi0, double t);

struct EdObservables {
    Eigen::VectorXd one_point;  // <sz_j>
    Eigen::MatrixXd two_point;  // <sz_i sz_j>
    Eigen::MatrixXd connected;  // two_point - outer(one_point)
};

EdObservables observables(const Eigen::VectorXcd& psi, int L);

/// Von Neumann entropy (nats) of the reduced state of sites 0..L/2-1.
double half_chain_entropy(const Eigen::VectorXcd& psi, int L);

} // namespace mbqs
