#pragma once

#include <Eigen/Dense>
#include <complex>
#include <memory>
#include <vector>

#include "mbqs/pfaffian.hpp"
#include "mbqs/quench_model.hpp"

namespace mbqs {

enum class Sector { NS, R };  // NS: even parity / antiperiodic fermions; R: odd / periodic

std::string to_string(Sector s);

/// Per-momentum free-fermion data for the quench from the down state.
struct ModeData {
    double k = 0.0;        // rad
    double epsilon = 0.0;  // rad/us, <= 0
    double theta = 0.0;    // rad
    double K = 0.0;        // dimensionless pair amplitude
};

/// Momenta of sector `sector` for L sites, sorted, in [-pi, pi).
std::vector<double> momenta(int L, Sector sector);

/// eps_k = -2 J sqrt(1 + g^2 - 2 g cos k).
double dispersion(double g, double J, double k);

/// theta_k from e^{i theta_k} = (g - e^{ik}) / sqrt(1 + g^2 - 2 g cos k).
double bogoliubov_angle(double g, double k);

/// K(k) = g sin k / (1 - g cos k + sqrt(1 + g^2 - 2 g cos k)).
double excitation_amplitude(double g, double k);

/// Mode table for one sector.
std::vector<ModeData> mode_table(int L, double g, double J, Sector sector);

/// z_k(t) = i K(k) e^{-2 i eps_k t}; |z_k| is conserved.
cplx pair_amplitude(const ModeData& mode, double t);

/// Group velocity |d eps / d k| at momentum k.
double group_velocity(double g, double J, double k);

/// Vacuum energy -1/2 sum_k eps_k of the sector (the maximal-energy state).
double sector_vacuum_energy(int L, double g, double J, Sector sector);

/// Time-dependent real-space fermionic two-point matrices of one parity
/// sector of the quench.
struct SectorCorrelators {
    Sector sector;
    double t = 0.0;
    Eigen::MatrixXcd C;  // <c_i^dag c_j>, Hermitian
    Eigen::MatrixXcd F;  // <c_i c_j>, antisymmetric
};

/// Ordered Majorana string block: contraction matrix for Wick evaluation.
/// M(a,b) = <m_a m_b> for a<b over the ordered operator list, antisymmetric.
struct MajoranaBlock {
    std::vector<int> sites;  // participating sites, ordered
    Eigen::MatrixXcd M;
};

/// Exact reference engine for one QuenchSpec: sector-resolved Gaussian
/// states evolved in the Bogoliubov-de Gennes picture, spin correlators by
/// Pfaffian contraction, and the cross-sector one-point function for the
/// down quench. All evaluation methods are const and safe to call
/// concurrently once constructed.
class FreeFermionEngine {
public:
    explicit FreeFermionEngine(const QuenchSpec& spec);
    ~FreeFermionEngine();
    FreeFermionEngine(FreeFermionEngine&&) noexcept;
    FreeFermionEngine& operator=(FreeFermionEngine&&) noexcept;

    const QuenchSpec& spec() const;

    /// Full 2L x 2L Nambu correlation matrix <alpha_p alpha_q^dag> at time t,
    /// alpha = (c_1..c_L, c_1^dag..c_L^dag), for the state's component in
    /// `sector` (for the plus state the R entry is the formal evolution of
    /// the plus covariance under the periodic-sector Hamiltonian).
    Eigen::MatrixXcd nambu_matrix(Sector sector, double t) const;

    SectorCorrelators sector_correlators(Sector sector, double t) const;

    /// Weight of each sector in the physical expectation values:
    /// plus -> (1, 0); down -> (1/2, 1/2).
    double sector_weight(Sector sector) const;

    /// Majorana contraction block for the string sz_1 sz_{1+ell} in `sector`.
    MajoranaBlock string_block(Sector sector, double t, int ell) const;

    /// <sz_i sz_{i+ell}> (t), sector averaged. 1 <= ell <= L/2.
    double string_two_point(double t, int ell) const;

    /// <sz_j>(t): exactly 0 for the plus state; cross-sector Pfaffian value
    /// for the down state (validated against ED for L <= 12; even L only).
    double one_point_sigma_z(double t) const;

    /// Connected correlator g2(t, ell) = <szsz> - <sz>^2.
    double connected_g2(double t, int ell) const;

    /// True when one_point values at this L fall outside the ED-validated
    /// range and should be cross-checked before use (down state, L > 12).
    bool one_point_advisory() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// One row of the reference table artifact.
struct ReferenceRow {
    double t_us;
    int ell;
    double g2_connected;
    double g2_disconnected;
    double one_point;
};

/// Batch evaluation over spec.time_grid x ell = 1..L/2.
std::vector<ReferenceRow> reference_table(const QuenchSpec& spec);

} // namespace mbqs
