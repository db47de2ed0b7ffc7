#include "mbqs/quench_model.hpp"

#include <cmath>

namespace mbqs {

std::string to_string(InitialState s) {
    switch (s) {
        case InitialState::Plus: return "plus";
        case InitialState::Down: return "down";
        case InitialState::Afm: return "afm";
    }
    return "?";
}

InitialState initial_state_from_string(const std::string& name) {
    if (name == "plus") return InitialState::Plus;
    if (name == "down") return InitialState::Down;
    if (name == "afm") return InitialState::Afm;
    throw ArgumentError("unknown initial state '" + name + "' (expected plus|down|afm)");
}

void QuenchSpec::validate() const {
    if (L < 3) throw ArgumentError("QuenchSpec: L must be >= 3, got " + std::to_string(L));
    if (g < 0.0) throw ArgumentError("QuenchSpec: g must be >= 0");
    if (J <= 0.0) throw ArgumentError("QuenchSpec: J must be > 0");
    if (initial_state == InitialState::Afm && L % 2 != 0)
        throw ArgumentError("QuenchSpec: AFM initial state is ill-defined on an odd ring");
    for (std::size_t i = 0; i < time_grid.size(); ++i) {
        if (time_grid[i] < 0.0)
            throw ArgumentError("QuenchSpec: times must be non-negative");
        if (i > 0 && time_grid[i] <= time_grid[i - 1])
            throw ArgumentError("QuenchSpec: times must be strictly increasing");
    }
}

double RydbergParams::coupling_J() const {
    return C6 / (4.0 * std::pow(a, 6));
}

double ring_distance(int L, double a, int ell) {
    if (L < 2) throw ArgumentError("ring_distance: L must be >= 2");
    if (ell < 1 || ell > L - 1)
        throw ArgumentError("ring_distance: ell out of range [1, L-1], got " +
                            std::to_string(ell));
    return a * std::sin(M_PI * ell / L) / std::sin(M_PI / L);
}

double induced_field_hatm(int L) {
    if (L < 3) throw ArgumentError("induced_field_hatm: L must be >= 3");
    const double Ld = static_cast<double>(L);
    const double s = std::sin(M_PI / Ld);
    return (Ld * Ld - 1.0) / 945.0 * (191.0 + 23.0 * Ld * Ld + 2.0 * std::pow(Ld, 4)) *
           std::pow(s, 6);
}

double induced_field_hatm_direct(int L) {
    if (L < 3) throw ArgumentError("induced_field_hatm_direct: L must be >= 3");
    double sum = 0.0;
    for (int ell = 1; ell <= L - 1; ++ell) {
        const double r = ring_distance(L, 1.0, ell);
        sum += 1.0 / std::pow(r, 6);
    }
    return sum;
}

RydbergParams ising_to_rydberg(const QuenchSpec& spec, double C6, double a,
                               std::optional<double> delta_override) {
    spec.validate();
    if (C6 <= 0.0 || a <= 0.0) throw ArgumentError("ising_to_rydberg: C6 and a must be > 0");
    RydbergParams p;
    p.C6 = C6;
    p.a = a;
    p.L = spec.L;
    const double J = p.coupling_J();
    p.omega = 2.0 * J * spec.g;
    p.delta = delta_override ? *delta_override : 2.0 * J * induced_field_hatm(spec.L);
    const double R = a / (2.0 * std::sin(M_PI / spec.L));
    p.positions.resize(spec.L);
    for (int i = 0; i < spec.L; ++i) {
        const double phi = 2.0 * M_PI * i / spec.L;
        p.positions[i] = {R * std::cos(phi), R * std::sin(phi)};
    }
    return p;
}

double blockade_radius(double C6, double omega) {
    if (omega <= 0.0) throw DomainError("blockade_radius: omega must be > 0");
    if (C6 <= 0.0) throw DomainError("blockade_radius: C6 must be > 0");
    return std::pow(C6 / omega, 1.0 / 6.0);
}

} // namespace mbqs
