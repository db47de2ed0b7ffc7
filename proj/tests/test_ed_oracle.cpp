#include <doctest.h>

#include <cmath>
#include <set>

#include "mbqs/ed_oracle.hpp"
#include "mbqs/lindblad.hpp"
#include "mbqs/sampler.hpp"
#include "mbqs/scoring.hpp"

using namespace mbqs;

TEST_CASE("ising ring: L=2 classical spectrum and L=3 manifolds") {
    const DenseHamiltonian H2 = build_ising_ring(2, 0.0, 1.0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H2.matrix);
    CHECK(es.eigenvalues()(0) == doctest::Approx(-2.0));
    CHECK(es.eigenvalues()(1) == doctest::Approx(-2.0));
    CHECK(es.eigenvalues()(2) == doctest::Approx(2.0));
    CHECK(es.eigenvalues()(3) == doctest::Approx(2.0));

    // classical ring of 3: energies are J * (sum of three bonds)
    const DenseHamiltonian H3 = build_ising_ring(3, 0.0, 1.0);
    std::multiset<double> eigs;
    for (int i = 0; i < 8; ++i) eigs.insert(H3.matrix(i, i));
    CHECK(eigs.count(3.0) == 2);   // ferromagnetic top manifold
    CHECK(eigs.count(-1.0) == 6);  // one frustrated bond
}

TEST_CASE("ising ring commutes with the cyclic shift") {
    for (int L : {3, 6}) {
        const DenseHamiltonian H = build_ising_ring(L, 0.8, 1.3);
        const auto perm = shift_permutation(L);
        const Eigen::Index dim = H.matrix.rows();
        // [H, P] = 0 <=> P H P^-1 = H <=> H(perm r, perm c) = H(r, c)
        double worst = 0.0;
        for (Eigen::Index c = 0; c < dim; ++c)
            for (Eigen::Index r = 0; r < dim; ++r)
                worst = std::max(worst,
                                 std::abs(H.matrix(static_cast<Eigen::Index>(perm[r]),
                                                   static_cast<Eigen::Index>(perm[c])) -
                                          H.matrix(r, c)));
        CHECK(worst < 1e-10);
    }
}

TEST_CASE("dense size limit raises a resource error") {
    CHECK_THROWS_AS(build_ising_ring(15, 1.0, 1.0), ResourceError);
}

TEST_CASE("rydberg ring: L=3 equals Ising after field cancellation") {
    QuenchSpec spec;
    spec.L = 3;
    spec.g = 1.0;
    const RydbergParams p = ising_to_rydberg(spec, 865723.02, 7.5);
    const double J = p.coupling_J();
    const DenseHamiltonian HR = build_rydberg_ring(p);
    // expand to sz operators: H = J sum sz sz + (omega/2) sum sx + const
    QuenchSpec ispec;
    ispec.L = 3;
    ispec.g = 1.0;
    ispec.J = J;
    const DenseHamiltonian HI = build_ising_ring(3, 1.0, J);
    Eigen::MatrixXd diff = HR.matrix - HI.matrix;
    const double c = diff(0, 0);
    diff -= c * Eigen::MatrixXd::Identity(8, 8);
    CHECK(diff.cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("rydberg ring: sz-field coefficient vanishes with the exact detuning") {
    for (int L : {4, 6, 9}) {
        QuenchSpec spec;
        spec.L = L;
        spec.g = 1.0;
        const RydbergParams p = ising_to_rydberg(spec, 865723.02, 7.5);
        const DenseHamiltonian H = build_rydberg_ring(p);
        // coefficient of sum_i sz_i: project the diagonal onto the sz pattern
        const Eigen::Index dim = H.matrix.rows();
        double acc = 0.0;
        for (Eigen::Index s = 0; s < dim; ++s) {
            double ztot = 0.0;
            for (int i = 0; i < L; ++i) ztot += 2.0 * ((s >> i) & 1) - 1.0;
            acc += H.matrix(s, s) * ztot;
        }
        // <sum sz, diag> over the trace inner product; zero iff no linear field
        CHECK(std::abs(acc) / dim < 1e-9);
    }
}

TEST_CASE("rydberg second-neighbor ratios: chord distances at L=6 and large L") {
    QuenchSpec spec;
    spec.L = 6;
    spec.g = 1.0;
    const double r1 = ring_distance(6, 7.5, 1), r2 = ring_distance(6, 7.5, 2);
    CHECK(std::pow(r1 / r2, 6) == doctest::Approx(1.0 / 27.0).epsilon(1e-12));
    const double q1 = ring_distance(400, 7.5, 1), q2 = ring_distance(400, 7.5, 2);
    CHECK(std::pow(q1 / q2, 6) == doctest::Approx(1.0 / 64.0).epsilon(1e-3));
}

TEST_CASE("evolve: identity at t=0, diagonal case, norm preservation") {
    const DenseHamiltonian H = build_ising_ring(4, 0.0, 1.0);
    const Eigen::VectorXcd psi0 = dense_initial_state(4, InitialState::Down);
    const Eigen::VectorXcd psi = evolve(H, psi0, 0.7);
    CHECK(std::abs(std::abs(psi(0)) - 1.0) < 1e-12);  // only a global phase
    CHECK(std::abs(psi.norm() - 1.0) < 1e-10);

    Eigen::VectorXcd bad = psi0 * 2.0;
    CHECK_THROWS_AS(evolve(H, bad, 0.1), ArgumentError);
}

TEST_CASE("gauge check: conjugation by prod sz flips the sx sign, sz correlators invariant") {
    const int L = 6;
    const DenseHamiltonian Hp = build_ising_ring(L, 1.0, 1.0);
    DenseHamiltonian Hm = Hp;
    // H(-g) = U H(+g) U^dag with U = prod_j sz_j; verify sz observables agree
    Hm.matrix = Eigen::MatrixXd::Zero(Hp.matrix.rows(), Hp.matrix.cols());
    const Eigen::Index dim = Hp.matrix.rows();
    for (Eigen::Index s = 0; s < dim; ++s) {
        Hm.matrix(s, s) = Hp.matrix(s, s);
        for (int i = 0; i < L; ++i) Hm.matrix(s ^ (1ULL << i), s) -= 1.0;
    }
    const Eigen::VectorXcd psi0 = dense_initial_state(L, InitialState::Down);
    const auto o1 = observables(evolve(Hp, psi0, 0.8), L);
    const auto o2 = observables(evolve(Hm, psi0, 0.8), L);
    CHECK((o1.two_point - o2.two_point).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((o1.one_point - o2.one_point).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("half-chain entropy: product states, Bell pair, argument checks") {
    CHECK(half_chain_entropy(dense_initial_state(6, InitialState::Down), 6) ==
          doctest::Approx(0.0).epsilon(1e-12));
    Eigen::VectorXcd bell = Eigen::VectorXcd::Zero(4);
    bell(0) = 1.0 / std::sqrt(2.0);
    bell(3) = 1.0 / std::sqrt(2.0);
    CHECK(half_chain_entropy(bell, 2) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    CHECK_THROWS_AS(half_chain_entropy(dense_initial_state(5, InitialState::Down), 5),
                    ArgumentError);
}

TEST_CASE("lindblad: gamma=0 matches unitary evolution") {
    const int L = 4;
    const DenseHamiltonian H = build_ising_ring(L, 1.0, 1.0);
    const Eigen::VectorXcd psi0 = dense_initial_state(L, InitialState::Down);
    LindbladEvolver lb(H, 0.0);
    const std::vector<double> times{0.3, 0.9};
    const auto traj = lb.trajectory(psi0, times);
    for (std::size_t i = 0; i < times.size(); ++i) {
        const Eigen::VectorXcd psi = evolve(H, psi0, times[i]);
        const Eigen::MatrixXcd rho_ref = psi * psi.adjoint();
        CHECK((traj[i] - rho_ref).cwiseAbs().maxCoeff() < 1e-8);
    }
}

TEST_CASE("lindblad: trace preserved, positivity, monotone suppression in gamma") {
    const int L = 4;
    const DenseHamiltonian H = build_ising_ring(L, 1.0, 1.0);
    const Eigen::VectorXcd psi0 = dense_initial_state(L, InitialState::Down);
    const double t_probe = 0.9;
    double prev = 1e9;
    for (double gamma : {0.05, 0.2, 1.0}) {
        LindbladEvolver lb(H, gamma);
        const auto traj = lb.trajectory(psi0, {t_probe});
        const Eigen::MatrixXcd& rho = traj[0];
        CHECK(std::abs(rho.trace().real() - 1.0) < 1e-8);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho);
        CHECK(es.eigenvalues().minCoeff() > -1e-8);
        const auto obs = observables_rho(rho, L);
        const double g2 = std::abs(obs.connected(0, 2));
        CHECK(g2 < prev);
        prev = g2;
    }
}

TEST_CASE("sampler: noiseless down state at t=0 gives all-zero bitstrings") {
    QuenchSpec spec;
    spec.L = 4;
    spec.g = 1.0;
    const RydbergParams p = ising_to_rydberg(spec, 865723.02, 7.5);
    const auto rec = noisy_shot_sampler(p, NoiseParams::none(), 0.0, 50, 7);
    for (const auto& row : rec.bits)
        for (auto b : row) CHECK(b == 0);
}

TEST_CASE("sampler: deterministic given the seed, size guard") {
    QuenchSpec spec;
    spec.L = 4;
    spec.g = 1.0;
    const RydbergParams p = ising_to_rydberg(spec, 865723.02, 7.5);
    NoiseParams noise;  // full defaults
    const auto r1 = noisy_shot_sampler(p, noise, 0.4, 40, 123);
    const auto r2 = noisy_shot_sampler(p, noise, 0.4, 40, 123);
    CHECK(r1.bits == r2.bits);
    const auto r3 = noisy_shot_sampler(p, noise, 0.4, 40, 124);
    CHECK(r1.bits != r3.bits);

    QuenchSpec big;
    big.L = 13;
    big.g = 1.0;
    const RydbergParams pb = ising_to_rydberg(big, 865723.02, 7.5);
    CHECK_THROWS_AS(noisy_shot_sampler(pb, noise, 0.1, 1, 1), ResourceError);
}

TEST_CASE("sampler: noiseless estimates converge to ED values within 3 stderr") {
    const int L = 6;
    QuenchSpec spec;
    spec.L = L;
    spec.g = 1.0;
    const RydbergParams p = ising_to_rydberg(spec, 865723.02, 7.5);
    const double J = p.coupling_J();
    const double t = 0.26 * L / J;  // near the surge time
    const auto rec = noisy_shot_sampler(p, NoiseParams::none(), t, 4000, 99);
    const auto est = estimate_correlators(rec);

    const DenseHamiltonian H = build_rydberg_ring(p);
    const auto obs = observables(evolve(H, dense_initial_state(L, InitialState::Down), t), L);
    // translation-averaged ED references
    for (int ell = 1; ell <= L / 2; ++ell) {
        double ref = 0.0;
        for (int i = 0; i < L; ++i) ref += obs.connected(i, (i + ell) % L);
        ref /= L;
        const auto& e = est.g2[ell - 1];
        CHECK(std::abs(e.value - ref) < 3.0 * e.stderr_ + 1e-12);
    }
    double ref1 = obs.one_point.mean();
    CHECK(std::abs(est.one_point.value - ref1) < 3.0 * est.one_point.stderr_ + 1e-12);
}

TEST_CASE("sampler + readout channel + mitigation recovers truth within 3 stderr") {
    const int L = 6;
    QuenchSpec spec;
    spec.L = L;
    spec.g = 1.0;
    const RydbergParams p = ising_to_rydberg(spec, 865723.02, 7.5);
    const double t = 0.2 * L / p.coupling_J();
    NoiseParams noise = NoiseParams::none();
    noise.p_fn = 0.07;
    noise.p_fp = 0.01;
    const auto rec = noisy_shot_sampler(p, noise, t, 6000, 2024);
    const auto est = readout_mitigate(estimate_correlators(rec), noise.p_fp, noise.p_fn);

    const DenseHamiltonian H = build_rydberg_ring(p);
    const auto obs = observables(evolve(H, dense_initial_state(L, InitialState::Down), t), L);
    for (int ell = 1; ell <= L / 2; ++ell) {
        double ref = 0.0;
        for (int i = 0; i < L; ++i) ref += obs.connected(i, (i + ell) % L);
        ref /= L;
        const auto& e = est.g2[ell - 1];
        CHECK(std::abs(e.value - ref) < 3.0 * e.stderr_ + 1e-12);
    }
}
