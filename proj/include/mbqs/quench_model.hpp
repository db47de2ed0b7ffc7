#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "mbqs/errors.hpp"

namespace mbqs {

enum class InitialState { Plus, Down, Afm };

std::string to_string(InitialState s);
InitialState initial_state_from_string(const std::string& name);

/// One protocol instance: ring size, transverse field ratio, coupling and
/// the measurement time grid. Units: hbar = 1, angular frequencies in
/// rad/us, times in us, lengths in um.
struct QuenchSpec {
    int L = 0;
    double g = 1.0;          // transverse-field ratio, dimensionless
    double J = 1.0;          // coupling, rad/us
    InitialState initial_state = InitialState::Down;
    std::vector<double> time_grid;  // us, strictly increasing, non-negative

    void validate() const;
};

/// Laser/geometry parameters of the Rydberg realization of a QuenchSpec.
struct RydbergParams {
    double C6 = 0.0;     // rad um^6 / us
    double a = 0.0;      // um
    double omega = 0.0;  // rad/us
    double delta = 0.0;  // rad/us
    int L = 0;
    std::vector<std::array<double, 2>> positions;  // um, ring layout

    double coupling_J() const;  // C6 / (4 a^6)
};

/// Chord distance between sites i and i+ell on a ring of L atoms with
/// nearest-neighbour spacing a.
double ring_distance(int L, double a, int ell);

/// Induced longitudinal field m_hat(L) = sum_ell (a / r_ell)^6, closed form.
double induced_field_hatm(int L);

/// Same sum evaluated term by term (oracle for the closed form).
double induced_field_hatm_direct(int L);

/// Map an Ising-ring instance onto Rydberg laser parameters: |Omega| = 2 J g,
/// delta chosen so the induced longitudinal field cancels exactly for this L.
/// `delta_override` replaces the per-L detuning when supplied (the fixed
/// machine setting mode).
RydbergParams ising_to_rydberg(const QuenchSpec& spec, double C6, double a,
                               std::optional<double> delta_override = {});

/// R_b = (C6 / Omega)^(1/6).
double blockade_radius(double C6, double omega);

} // namespace mbqs
