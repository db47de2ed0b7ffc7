#include "mbqs/sampler.hpp"

#include <array>
#include <cmath>
#include <map>

#include "mbqs/ed_oracle.hpp"
#include "mbqs/errors.hpp"

namespace mbqs {

namespace {

// splitmix64; fixed algorithm so streams are identical across platforms
std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Deterministic per-shot RNG: xoshiro-free, just splitmix chains.
class ShotRng {
public:
    ShotRng(std::uint64_t seed, std::uint64_t shot)
        : state_(splitmix64(seed ^ splitmix64(shot + 1))) {}

    double uniform() {  // in [0, 1)
        state_ = splitmix64(state_);
        return static_cast<double>(state_ >> 11) * 0x1.0p-53;
    }

    double normal() {  // Box-Muller, one value per call (spare cached)
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = uniform(), u2 = uniform();
        while (u1 <= 1e-300) u1 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * M_PI * u2;
        spare_ = r * std::sin(a);
        has_spare_ = true;
        return r * std::cos(a);
    }

private:
    std::uint64_t state_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

} // namespace

NoiseParams NoiseParams::none() {
    NoiseParams p;
    p.T1 = 0.0; p.T2 = 0.0;
    p.sigma_r_xy = 0.0; p.sigma_r_z = 0.0;
    p.p_prep = 0.0; p.p_fn = 0.0; p.p_fp = 0.0;
    p.sigma_omega_rel = 0.0; p.sigma_delta = 0.0;
    p.gamma_dephasing = 0.0;
    return p;
}

double NoiseParams::gamma_from_T2(double T2) {
    if (T2 <= 0.0) throw ArgumentError("gamma_from_T2: T2 must be > 0");
    return 2.0 / T2;
}

void NoiseParams::validate() const {
    auto nonneg = [](double v, const char* name) {
        if (v < 0.0) throw ArgumentError(std::string("NoiseParams: ") + name + " must be >= 0");
    };
    nonneg(T1, "T1"); nonneg(T2, "T2");
    nonneg(sigma_r_xy, "sigma_r_xy"); nonneg(sigma_r_z, "sigma_r_z");
    nonneg(p_prep, "p_prep"); nonneg(p_fn, "p_fn"); nonneg(p_fp, "p_fp");
    nonneg(sigma_omega_rel, "sigma_omega_rel"); nonneg(sigma_delta, "sigma_delta");
    nonneg(gamma_dephasing, "gamma_dephasing");
    if (p_prep > 1.0 || p_fn > 1.0 || p_fp > 1.0)
        throw ArgumentError("NoiseParams: probabilities must be <= 1");
}

void ShotRecordSet::validate() const {
    if (L < 1) throw FormatError("ShotRecordSet: L must be >= 1");
    if (bits.empty()) throw FormatError("ShotRecordSet: need n_shots >= 1");
    for (const auto& row : bits)
        if (static_cast<int>(row.size()) != L)
            throw FormatError("ShotRecordSet: row length != L");
}

namespace {

std::vector<std::uint8_t> sample_bitstring(const Eigen::VectorXcd& psi, int L, ShotRng& rng) {
    const double u = rng.uniform();
    double acc = 0.0;
    std::uint64_t chosen = (1ULL << L) - 1;
    for (Eigen::Index s = 0; s < psi.size(); ++s) {
        acc += std::norm(psi(s));
        if (u < acc) {
            chosen = static_cast<std::uint64_t>(s);
            break;
        }
    }
    std::vector<std::uint8_t> bits(L);
    for (int j = 0; j < L; ++j) bits[j] = static_cast<std::uint8_t>((chosen >> j) & 1ULL);
    return bits;
}

} // namespace

ShotRecordSet noisy_shot_sampler(const RydbergParams& params, const NoiseParams& noise,
                                 double t, int n_shots, std::uint64_t seed) {
    const int L = params.L;
    if (L < 2 || L > kMaxSamplerL)
        throw ResourceError("noisy_shot_sampler: L must be in [2, " +
                            std::to_string(kMaxSamplerL) + "]");
    if (n_shots < 1) throw ArgumentError("noisy_shot_sampler: n_shots must be >= 1");
    noise.validate();

    ShotRecordSet rec;
    rec.device_id = "mbqs-sampler";
    rec.L = L;
    rec.a_um = params.a;
    rec.J = params.coupling_J();
    rec.g = params.omega / (2.0 * rec.J);
    rec.initial_state = InitialState::Down;
    rec.t_us = t;
    rec.seed = seed;
    rec.bits.resize(n_shots);

    const Eigen::VectorXcd psi0 = dense_initial_state(L, InitialState::Down);

    // static-Hamiltonian fast path: one evolution for all shots
    const bool static_H = noise.hamiltonian_static();
    Eigen::VectorXcd psi_static;
    if (static_H) {
        // prep errors keep atoms in the ground state; cache per error mask
        std::map<std::uint64_t, Eigen::VectorXcd> cache;
        auto psi_for_mask = [&](std::uint64_t mask) -> const Eigen::VectorXcd& {
            auto it = cache.find(mask);
            if (it != cache.end()) return it->second;
            Eigen::MatrixXd cpl = Eigen::MatrixXd::Zero(L, L);
            Eigen::VectorXd om = Eigen::VectorXd::Constant(L, params.omega);
            for (int i = 0; i < L; ++i)
                for (int j = i + 1; j < L; ++j) {
                    const bool dead = ((mask >> i) & 1ULL) || ((mask >> j) & 1ULL);
                    if (!dead)
                        cpl(i, j) = params.C6 / std::pow(ring_distance(L, params.a, j - i), 6);
                }
            for (int i = 0; i < L; ++i)
                if ((mask >> i) & 1ULL) om(i) = 0.0;
            const DenseHamiltonian H = build_rydberg_custom(L, cpl, om, params.delta);
            return cache.emplace(mask, evolve(H, psi0, t)).first->second;
        };
        for (int s = 0; s < n_shots; ++s) {
            ShotRng rng(seed, static_cast<std::uint64_t>(s));
            std::uint64_t mask = 0;
            for (int j = 0; j < L; ++j)
                if (noise.p_prep > 0.0 && rng.uniform() < noise.p_prep) mask |= (1ULL << j);
            auto bits = sample_bitstring(psi_for_mask(mask), L, rng);
            for (int j = 0; j < L; ++j) {
                if (bits[j] == 1 && noise.p_fn > 0.0 && rng.uniform() < noise.p_fn) bits[j] = 0;
                else if (bits[j] == 0 && noise.p_fp > 0.0 && rng.uniform() < noise.p_fp) bits[j] = 1;
            }
            rec.bits[s] = std::move(bits);
        }
        return rec;
    }

    const double R = params.a / (2.0 * std::sin(M_PI / L));
#ifdef MBQS_HAVE_OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (int s = 0; s < n_shots; ++s) {
        ShotRng rng(seed, static_cast<std::uint64_t>(s));
        // 3d positions: nominal ring + Gaussian displacement
        std::vector<std::array<double, 3>> pos(L);
        for (int i = 0; i < L; ++i) {
            const double phi = 2.0 * M_PI * i / L;
            pos[i] = {R * std::cos(phi) + noise.sigma_r_xy * rng.normal(),
                      R * std::sin(phi) + noise.sigma_r_xy * rng.normal(),
                      noise.sigma_r_z * rng.normal()};
        }
        const double omega_shot = params.omega * (1.0 + noise.sigma_omega_rel * rng.normal());
        const double delta_shot = params.delta + noise.sigma_delta * rng.normal();
        std::uint64_t mask = 0;
        for (int j = 0; j < L; ++j)
            if (noise.p_prep > 0.0 && rng.uniform() < noise.p_prep) mask |= (1ULL << j);

        Eigen::MatrixXd cpl = Eigen::MatrixXd::Zero(L, L);
        for (int i = 0; i < L; ++i)
            for (int j = i + 1; j < L; ++j) {
                const bool dead = ((mask >> i) & 1ULL) || ((mask >> j) & 1ULL);
                if (dead) continue;
                const double dx = pos[i][0] - pos[j][0];
                const double dy = pos[i][1] - pos[j][1];
                const double dz = pos[i][2] - pos[j][2];
                const double r2 = dx * dx + dy * dy + dz * dz;
                cpl(i, j) = params.C6 / (r2 * r2 * r2);
            }
        Eigen::VectorXd om = Eigen::VectorXd::Constant(L, omega_shot);
        for (int i = 0; i < L; ++i)
            if ((mask >> i) & 1ULL) om(i) = 0.0;

        const DenseHamiltonian H = build_rydberg_custom(L, cpl, om, delta_shot);
        const Eigen::VectorXcd psi = evolve(H, psi0, t);
        auto bits = sample_bitstring(psi, L, rng);
        for (int j = 0; j < L; ++j) {
            if (bits[j] == 1 && noise.p_fn > 0.0 && rng.uniform() < noise.p_fn) bits[j] = 0;
            else if (bits[j] == 0 && noise.p_fp > 0.0 && rng.uniform() < noise.p_fp) bits[j] = 1;
        }
        rec.bits[s] = std::move(bits);
    }
    return rec;
}

bool NoiseParams::hamiltonian_static() const {
    return sigma_r_xy == 0.0 && sigma_r_z == 0.0 && sigma_omega_rel == 0.0 &&
           sigma_delta == 0.0;
}

} // namespace mbqs
