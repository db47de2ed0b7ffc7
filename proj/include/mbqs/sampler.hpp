#pragma once

#include <cmath>
#include <cstdint>

#include "mbqs/quench_model.hpp"
#include "mbqs/shot_record.hpp"

namespace mbqs {

inline constexpr int kMaxSamplerL = 12;

/// Device noise model parameters. Defaults are the characterized values of a
/// neutral-atom machine: T1/T2 lifetimes, shot-to-shot Gaussian register
/// noise on the 3d atom positions, SPAM probabilities and laser
/// amplitude/detuning fluctuations.
struct NoiseParams {
    double T1 = 100.0;             // us
    double T2 = 20.0;              // us
    double sigma_r_xy = 0.18;      // um
    double sigma_r_z = 0.67;       // um
    double p_prep = 0.01;
    double p_fn = 0.07;
    double p_fp = 0.01;
    double sigma_omega_rel = 0.02;          // relative amplitude fluctuation
    double sigma_delta = 2.0 * M_PI * 0.05; // rad/us
    double gamma_dephasing = 0.0;           // 1/us, used by the Lindblad model

    static NoiseParams none();
    /// Equivalent dephasing rate gamma = 2/T2 (modeling convenience, not a
    /// hardware formula).
    static double gamma_from_T2(double T2);

    void validate() const;
    /// True when no shot-to-shot Hamiltonian variation is present, so one
    /// evolution serves every shot.
    bool hamiltonian_static() const;
};

/// Shot-level Monte Carlo of the Rydberg quench: per shot, displace atoms in
/// 3d, jitter the laser amplitude and detuning, drop prepared-error atoms
/// from interactions and drive, evolve |down...down>, sample a bitstring from
/// |psi|^2 and apply readout flips. Deterministic given `seed` (per-shot
/// streams are derived from (seed, shot index)).
ShotRecordSet noisy_shot_sampler(const RydbergParams& params, const NoiseParams& noise,
                                 double t, int n_shots, std::uint64_t seed);

} // namespace mbqs
