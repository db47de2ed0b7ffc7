#include "mbqs/freefermion.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "mbqs/errors.hpp"

namespace mbqs {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Boundary sign of the quadratic sector Hamiltonian: even parity (NS) sees
// antiperiodic fermions, odd parity (R) periodic ones.
double boundary_sign(Sector s) { return s == Sector::NS ? -1.0 : +1.0; }

Eigen::MatrixXd build_hbdg(int L, double g, double J, Sector sector) {
    const double bs = boundary_sign(sector);
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(L, L);
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(L, L);
    for (int i = 0; i + 1 < L; ++i) {
        A(i, i + 1) += J; A(i + 1, i) += J;
        B(i, i + 1) += J; B(i + 1, i) -= J;
    }
    A(L - 1, 0) += bs * J; A(0, L - 1) += bs * J;
    B(L - 1, 0) += bs * J; B(0, L - 1) -= bs * J;
    for (int i = 0; i < L; ++i) A(i, i) = -2.0 * g * J;
    Eigen::MatrixXd H(2 * L, 2 * L);
    H << A, B, -B, -A;
    return H;
}

// <alpha_p alpha_q^dag> of the initial product state's component in the
// sector. Plus state: c vacuum. Down state: the parity projections
// (|down...> +/- |up...>)/sqrt(2), written directly in the fermionic picture.
Eigen::MatrixXcd initial_nambu(int L, InitialState state, Sector sector) {
    Eigen::MatrixXcd G = Eigen::MatrixXcd::Zero(2 * L, 2 * L);
    if (state == InitialState::Plus) {
        G.topLeftCorner(L, L).setIdentity();
        return G;
    }
    const double s = sector == Sector::NS ? +1.0 : -1.0;
    auto Q = G.topLeftCorner(L, L);
    auto F = G.topRightCorner(L, L);
    auto P = G.bottomLeftCorner(L, L);
    auto C = G.bottomRightCorner(L, L);
    for (int i = 0; i < L; ++i) { Q(i, i) = 0.5; C(i, i) = 0.5; }
    for (int i = 0; i + 1 < L; ++i) {
        Q(i, i + 1) = -0.25; Q(i + 1, i) = -0.25;
        F(i, i + 1) = -0.25; F(i + 1, i) = +0.25;
        P(i, i + 1) = +0.25; P(i + 1, i) = -0.25;
        C(i, i + 1) = +0.25; C(i + 1, i) = +0.25;
    }
    Q(0, L - 1) = s * 0.25;  Q(L - 1, 0) = s * 0.25;
    F(0, L - 1) = -s * 0.25; F(L - 1, 0) = +s * 0.25;
    P(0, L - 1) = +s * 0.25; P(L - 1, 0) = -s * 0.25;
    C(0, L - 1) = -s * 0.25; C(L - 1, 0) = -s * 0.25;
    return G;
}

enum MajoranaKind { MajX = 0, MajY = 1 };

// <m_a m_b> from the four Nambu blocks of a (sub)matrix whose index map is
// pos[site] for c and pos[site]+offset for c^dag.
cplx majorana_pair(const Eigen::MatrixXcd& G, int ia, int ib, int off,
                   MajoranaKind ka, MajoranaKind kb) {
    const cplx Q = G(ia, ib);
    const cplx F = G(ia, ib + off);
    const cplx P = G(ia + off, ib);
    const cplx C = G(ia + off, ib + off);
    const cplx I(0.0, 1.0);
    if (ka == MajX && kb == MajX) return F + Q + C + P;
    if (ka == MajX && kb == MajY) return I * (Q - F + P - C);
    if (ka == MajY && kb == MajX) return I * (C + P - F - Q);
    return -P + C + Q - F;
}

} // namespace

std::string to_string(Sector s) { return s == Sector::NS ? "NS" : "R"; }

std::vector<double> momenta(int L, Sector sector) {
    if (L < 2) throw ArgumentError("momenta: L must be >= 2");
    std::vector<double> ks;
    ks.reserve(L);
    for (int n = -(L / 2); n < L - L / 2; ++n) {
        double k = sector == Sector::NS ? 2.0 * (n + 0.5) * kPi / L : 2.0 * n * kPi / L;
        if (k >= kPi - 1e-12) k -= 2.0 * kPi;
        ks.push_back(k);
    }
    std::sort(ks.begin(), ks.end());
    return ks;
}

double dispersion(double g, double J, double k) {
    if (g < 0.0) throw ArgumentError("dispersion: g must be >= 0");
    return -2.0 * J * std::sqrt(1.0 + g * g - 2.0 * g * std::cos(k));
}

double bogoliubov_angle(double g, double k) {
    if (g < 0.0) throw ArgumentError("bogoliubov_angle: g must be >= 0");
    return std::arg(cplx(g - std::cos(k), -std::sin(k)));
}

double excitation_amplitude(double g, double k) {
    if (g < 0.0) throw ArgumentError("excitation_amplitude: g must be >= 0");
    const double den = 1.0 - g * std::cos(k) + std::sqrt(1.0 + g * g - 2.0 * g * std::cos(k));
    if (den == 0.0) return 0.0;  // only at g=1, k=0 where sin k = 0 as well
    return g * std::sin(k) / den;
}

std::vector<ModeData> mode_table(int L, double g, double J, Sector sector) {
    std::vector<ModeData> out;
    for (double k : momenta(L, sector))
        out.push_back({k, dispersion(g, J, k), bogoliubov_angle(g, k),
                       excitation_amplitude(g, k)});
    return out;
}

cplx pair_amplitude(const ModeData& mode, double t) {
    if (mode.k <= 0.0) throw ArgumentError("pair_amplitude: requires k > 0");
    return cplx(0.0, 1.0) * mode.K * std::exp(cplx(0.0, -2.0 * mode.epsilon * t));
}

double group_velocity(double g, double J, double k) {
    const double e = std::sqrt(1.0 + g * g - 2.0 * g * std::cos(k));
    if (e == 0.0) return 0.0;
    return std::abs(2.0 * J * g * std::sin(k) / e);
}

double sector_vacuum_energy(int L, double g, double J, Sector sector) {
    double E = 0.0;
    for (double k : momenta(L, sector)) E -= 0.5 * dispersion(g, J, k);
    return E;
}

// ----------------------------------------------------------------------
// engine implementation
// ----------------------------------------------------------------------

struct SectorBasis {
    Eigen::MatrixXd U;     // eigenvectors of H_bdg (real orthogonal)
    Eigen::VectorXd E;     // eigenvalues
    Eigen::MatrixXcd G0t;  // U^T G(0) U
};

// Cross-sector machinery for the down one-point function: one Pfaffian per
// time over a fixed contraction matrix. Built for even L.
struct CrossSectorOnePoint {
    std::vector<double> ns_k, r_k;       // paired momenta 0<k<pi per sector
    std::vector<double> ns_eps, r_eps;
    std::vector<double> ns_K, r_K;
    Eigen::MatrixXcd M;                  // slot contraction matrix
    double dE = 0.0;                     // E_NS - E_R
    cplx lambda{1.0, 0.0};

    int nslots() const { return static_cast<int>(M.rows()); }

    cplx raw_pf(double t) const {
        const int nns = static_cast<int>(ns_k.size());
        const int nr = static_cast<int>(r_k.size());
        const int m = nslots();
        Eigen::VectorXcd s = Eigen::VectorXcd::Ones(m);
        Eigen::MatrixXcd Y = M;
        const cplx I(0.0, 1.0);
        for (int i = 0; i < nns; ++i) {
            const cplx w = std::conj(I * ns_K[i] * std::exp(cplx(0.0, -2.0 * ns_eps[i] * t)));
            s(2 * i) = s(2 * i + 1) = std::sqrt(w);
        }
        const int off = 2 * nns + 2;
        for (int i = 0; i < nr; ++i) {
            const cplx w = I * r_K[i] * std::exp(cplx(0.0, -2.0 * r_eps[i] * t));
            s(off + 2 * i) = s(off + 2 * i + 1) = std::sqrt(w);
        }
        for (int a = 0; a < m; ++a)
            for (int b = 0; b < m; ++b) Y(a, b) *= s(a) * s(b);
        for (int i = 0; i < nns; ++i) {
            Y(2 * i, 2 * i + 1) += 1.0;
            Y(2 * i + 1, 2 * i) -= 1.0;
        }
        for (int i = 0; i < nr; ++i) {
            Y(off + 2 * i, off + 2 * i + 1) += 1.0;
            Y(off + 2 * i + 1, off + 2 * i) -= 1.0;
        }
        return pfaffian_unchecked(std::move(Y));
    }

    double value(double t) const {
        const cplx z = lambda * std::exp(cplx(0.0, dE * t)) * raw_pf(t);
        return z.real();
    }
};

struct FreeFermionEngine::Impl {
    QuenchSpec spec;
    SectorBasis ns, r;
    std::unique_ptr<CrossSectorOnePoint> cross;

    const SectorBasis& basis(Sector s) const { return s == Sector::NS ? ns : r; }
};

namespace {

SectorBasis make_basis(const QuenchSpec& spec, Sector sector) {
    SectorBasis b;
    const Eigen::MatrixXd H = build_hbdg(spec.L, spec.g, spec.J, sector);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
    b.U = es.eigenvectors();
    b.E = es.eigenvalues();
    const Eigen::MatrixXcd G0 = initial_nambu(spec.L, spec.initial_state, sector);
    b.G0t = b.U.transpose() * G0 * b.U;
    return b;
}

// Nambu coefficient rows of the Bogoliubov pair (gamma_k, gamma_{-k}) for
// 0 < k < pi; paper site convention j = 1..L.
void gamma_rows(int L, double g, double k, Eigen::VectorXcd& gk, Eigen::VectorXcd& gmk) {
    const double th = bogoliubov_angle(g, k);
    const double u = std::cos(0.5 * th), v = std::sin(0.5 * th);
    gk = Eigen::VectorXcd::Zero(2 * L);
    gmk = Eigen::VectorXcd::Zero(2 * L);
    const cplx I(0.0, 1.0);
    for (int j = 1; j <= L; ++j) {
        const cplx ph = std::exp(I * (k * j)) / std::sqrt(double(L));
        const cplx phm = std::conj(ph);
        gk(j - 1) += u * ph;
        gk(L + j - 1) += -I * v * ph;
        gmk(j - 1) += u * phm;
        gmk(L + j - 1) += I * v * phm;
    }
}

Eigen::VectorXcd mode_row(int L, double k, bool dagger) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(2 * L);
    const cplx I(0.0, 1.0);
    for (int j = 1; j <= L; ++j) {
        const cplx ph = std::exp(I * (k * j)) / std::sqrt(double(L));
        if (dagger) v(L + j - 1) = std::conj(ph);
        else v(j - 1) = ph;
    }
    return v;
}

Eigen::VectorXcd dagger_row(const Eigen::VectorXcd& o) {
    const int L = static_cast<int>(o.size()) / 2;
    Eigen::VectorXcd out(2 * L);
    out.head(L) = o.tail(L).conjugate();
    out.tail(L) = o.head(L).conjugate();
    return out;
}

std::unique_ptr<CrossSectorOnePoint> make_cross(const QuenchSpec& spec) {
    const int L = spec.L;
    const double g = spec.g, J = spec.J;
    auto cp = std::make_unique<CrossSectorOnePoint>();
    for (double k : momenta(L, Sector::NS))
        if (k > 1e-12 && k < kPi - 1e-12) {
            cp->ns_k.push_back(k);
            cp->ns_eps.push_back(dispersion(g, J, k));
            cp->ns_K.push_back(excitation_amplitude(g, k));
        }
    for (double k : momenta(L, Sector::R))
        if (k > 1e-12 && k < kPi - 1e-12) {
            cp->r_k.push_back(k);
            cp->r_eps.push_back(dispersion(g, J, k));
            cp->r_K.push_back(excitation_amplitude(g, k));
        }
    cp->dE = sector_vacuum_energy(L, g, J, Sector::NS) -
             sector_vacuum_energy(L, g, J, Sector::R);

    // annihilator rows of the two reference vacua: NS maximal state (bra) and
    // the R maximal state with the unpaired k=0 mode emptied (ket)
    std::vector<Eigen::VectorXcd> bra_ann, ket_ann;
    Eigen::VectorXcd gk, gmk;
    for (double k : cp->ns_k) {
        gamma_rows(L, g, k, gk, gmk);
        bra_ann.push_back(gk);
        bra_ann.push_back(gmk);
    }
    for (double k : cp->r_k) {
        gamma_rows(L, g, k, gk, gmk);
        ket_ann.push_back(gk);
        ket_ann.push_back(gmk);
    }
    ket_ann.push_back(mode_row(L, 0.0, false));
    ket_ann.push_back(mode_row(L, -kPi, false));

    // transition contractions S_pq = <v1| alpha_p alpha_q |v2> / <v1|v2>
    const int n2 = 2 * L;
    Eigen::MatrixXcd N(n2, n2);
    for (int i = 0; i < L; ++i) N.row(i) = dagger_row(bra_ann[i]).transpose();
    for (int i = 0; i < L; ++i) N.row(L + i) = ket_ann[i].transpose();
    Eigen::MatrixXcd U = Eigen::MatrixXcd::Zero(n2, n2);
    for (int r = 0; r < L; ++r)
        for (int s = 0; s < L; ++s) {
            // {b_r, a_s^dag} with K = [[0,I],[I,0]]
            const auto& br = N.row(L + r);
            const auto& as = N.row(s);
            cplx acc(0.0, 0.0);
            for (int j = 0; j < L; ++j)
                acc += br(j) * as(L + j) + br(L + j) * as(j);
            U(L + r, s) = acc;
        }
    Eigen::FullPivLU<Eigen::MatrixXcd> lu(N);
    if (!lu.isInvertible())
        throw NumericError("one_point: degenerate sector-vacuum pair (annihilator stack "
                           "singular); rcond=" + std::to_string(lu.rcond()));
    const Eigen::MatrixXcd Ninv = lu.inverse();
    const Eigen::MatrixXcd S = Ninv * U * Ninv.transpose();

    // ordered slot operators: NS pairs (gamma_k, gamma_-k), x_1, c_0^dag,
    // R pairs (gamma_-q^dag, gamma_q^dag)
    std::vector<Eigen::VectorXcd> slots;
    for (double k : cp->ns_k) {
        gamma_rows(L, g, k, gk, gmk);
        slots.push_back(gk);
        slots.push_back(gmk);
    }
    Eigen::VectorXcd x1 = Eigen::VectorXcd::Zero(2 * L);
    x1(0) = 1.0; x1(L) = 1.0;
    slots.push_back(x1);
    slots.push_back(mode_row(L, 0.0, true));
    for (double k : cp->r_k) {
        gamma_rows(L, g, k, gk, gmk);
        slots.push_back(dagger_row(gmk));
        slots.push_back(dagger_row(gk));
    }

    const int m = static_cast<int>(slots.size());
    cp->M.resize(m, m);
    cp->M.setZero();
    for (int a = 0; a < m; ++a)
        for (int b = a + 1; b < m; ++b) {
            const cplx v = slots[a].transpose() * S * slots[b];
            cp->M(a, b) = v;
            cp->M(b, a) = -v;
        }

    const cplx pf0 = cp->raw_pf(0.0);
    if (std::abs(pf0) < 1e-14)
        throw NumericError("one_point: vanishing t=0 contraction Pfaffian");
    cp->lambda = -1.0 / pf0;
    return cp;
}

} // namespace

FreeFermionEngine::FreeFermionEngine(const QuenchSpec& spec) : impl_(new Impl) {
    spec.validate();
    if (spec.initial_state == InitialState::Afm)
        throw FeatureError("freefermion: AFM initial state is served by the ED oracle only");
    impl_->spec = spec;
    impl_->ns = make_basis(spec, Sector::NS);
    impl_->r = make_basis(spec, Sector::R);
    if (spec.initial_state == InitialState::Down && spec.L % 2 == 0)
        impl_->cross = make_cross(spec);
}

FreeFermionEngine::~FreeFermionEngine() = default;
FreeFermionEngine::FreeFermionEngine(FreeFermionEngine&&) noexcept = default;
FreeFermionEngine& FreeFermionEngine::operator=(FreeFermionEngine&&) noexcept = default;

const QuenchSpec& FreeFermionEngine::spec() const { return impl_->spec; }

double FreeFermionEngine::sector_weight(Sector sector) const {
    if (impl_->spec.initial_state == InitialState::Plus)
        return sector == Sector::NS ? 1.0 : 0.0;
    return 0.5;
}

Eigen::MatrixXcd FreeFermionEngine::nambu_matrix(Sector sector, double t) const {
    const SectorBasis& b = impl_->basis(sector);
    const int n = static_cast<int>(b.E.size());
    Eigen::VectorXcd ph(n);
    for (int i = 0; i < n; ++i) ph(i) = std::exp(cplx(0.0, -b.E(i) * t));
    Eigen::MatrixXcd mid = ph.asDiagonal() * b.G0t * ph.conjugate().asDiagonal();
    return b.U * mid * b.U.transpose();
}

namespace {

// Nambu submatrix over index set idx (positions in the 2L basis):
// G_sub = V * G0t * V^H with V = U[idx,:] * diag(e^{-iEt}).
Eigen::MatrixXcd nambu_submatrix(const SectorBasis& b, double t,
                                 const std::vector<int>& idx) {
    const int n = static_cast<int>(b.E.size());
    const int s = static_cast<int>(idx.size());
    Eigen::MatrixXcd V(s, n);
    for (int r = 0; r < s; ++r)
        for (int c = 0; c < n; ++c)
            V(r, c) = b.U(idx[r], c) * std::exp(cplx(0.0, -b.E(c) * t));
    return V * b.G0t * V.adjoint();
}

} // namespace

SectorCorrelators FreeFermionEngine::sector_correlators(Sector sector, double t) const {
    const int L = impl_->spec.L;
    const Eigen::MatrixXcd G = nambu_matrix(sector, t);
    SectorCorrelators out;
    out.sector = sector;
    out.t = t;
    out.C = G.bottomRightCorner(L, L);
    out.F = G.topRightCorner(L, L);
    return out;
}

MajoranaBlock FreeFermionEngine::string_block(Sector sector, double t, int ell) const {
    const int L = impl_->spec.L;
    if (ell < 1 || ell > L / 2)
        throw ArgumentError("string_block: ell must be in [1, L/2]");
    // sites 0..ell contribute; operator list (y_0, x_1, y_1, ..., x_ell)
    std::vector<int> idx;
    for (int s = 0; s <= ell; ++s) idx.push_back(s);
    for (int s = 0; s <= ell; ++s) idx.push_back(L + s);
    const Eigen::MatrixXcd G = nambu_submatrix(impl_->basis(sector), t, idx);
    const int off = ell + 1;  // c^dag offset inside the submatrix

    std::vector<std::pair<MajoranaKind, int>> ops;
    ops.emplace_back(MajY, 0);
    for (int s = 1; s < ell; ++s) {
        ops.emplace_back(MajX, s);
        ops.emplace_back(MajY, s);
    }
    ops.emplace_back(MajX, ell);

    MajoranaBlock blk;
    blk.sites.resize(ell + 1);
    for (int s = 0; s <= ell; ++s) blk.sites[s] = s;
    const int m = static_cast<int>(ops.size());
    blk.M.resize(m, m);
    blk.M.setZero();
    for (int a = 0; a < m; ++a)
        for (int b = a + 1; b < m; ++b) {
            const cplx v = majorana_pair(G, ops[a].second, ops[b].second, off,
                                         ops[a].first, ops[b].first);
            blk.M(a, b) = v;
            blk.M(b, a) = -v;
        }
    return blk;
}

double FreeFermionEngine::string_two_point(double t, int ell) const {
    const cplx I(0.0, 1.0);
    cplx acc(0.0, 0.0);
    for (Sector sec : {Sector::NS, Sector::R}) {
        const double w = sector_weight(sec);
        if (w == 0.0) continue;
        MajoranaBlock blk = string_block(sec, t, ell);
        acc += w * std::pow(-I, ell) * pfaffian_unchecked(std::move(blk.M));
    }
    if (std::abs(acc.imag()) > 1e-9)
        throw NumericError("string_two_point: imaginary residue " +
                           std::to_string(acc.imag()) + " exceeds 1e-9");
    return acc.real();
}

double FreeFermionEngine::one_point_sigma_z(double t) const {
    const auto& spec = impl_->spec;
    if (spec.initial_state == InitialState::Plus) return 0.0;
    if (!impl_->cross)
        throw FeatureError("one_point_sigma_z: down-state one-point function is "
                           "implemented for even L only (odd rings via the ED oracle)");
    return impl_->cross->value(t);
}

double FreeFermionEngine::connected_g2(double t, int ell) const {
    const double zz = string_two_point(t, ell);
    const double z1 = one_point_sigma_z(t);
    return zz - z1 * z1;
}

bool FreeFermionEngine::one_point_advisory() const {
    return impl_->spec.initial_state == InitialState::Down && impl_->spec.L > 12;
}

std::vector<ReferenceRow> reference_table(const QuenchSpec& spec) {
    FreeFermionEngine eng(spec);
    std::vector<ReferenceRow> rows;
    rows.reserve(spec.time_grid.size() * (spec.L / 2));
    for (double t : spec.time_grid) {
        const double z1 = eng.one_point_sigma_z(t);
        for (int ell = 1; ell <= spec.L / 2; ++ell) {
            const double zz = eng.string_two_point(t, ell);
            rows.push_back({t, ell, zz - z1 * z1, zz, z1});
        }
    }
    return rows;
}

} // namespace mbqs
