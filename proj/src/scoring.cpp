#include "mbqs/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mbqs/errors.hpp"

namespace mbqs {

namespace {

// per-shot translation-averaged raw moments: m1[s] = mean_i sz_i,
// m2[s][ell-1] = mean_i sz_i sz_{i+ell}
struct ShotMoments {
    std::vector<double> m1;
    std::vector<std::vector<double>> m2;
};

ShotMoments shot_moments(const ShotRecordSet& rec) {
    const int L = rec.L;
    const int lmax = L / 2;
    const int n = rec.n_shots();
    ShotMoments m;
    m.m1.resize(n);
    m.m2.assign(n, std::vector<double>(lmax, 0.0));
    for (int s = 0; s < n; ++s) {
        const auto& row = rec.bits[s];
        double acc1 = 0.0;
        for (int i = 0; i < L; ++i) acc1 += 2.0 * row[i] - 1.0;
        m.m1[s] = acc1 / L;
        for (int ell = 1; ell <= lmax; ++ell) {
            double acc2 = 0.0;
            for (int i = 0; i < L; ++i) {
                const double zi = 2.0 * row[i] - 1.0;
                const double zj = 2.0 * row[(i + ell) % L] - 1.0;
                acc2 += zi * zj;
            }
            m.m2[s][ell - 1] = acc2 / L;
        }
    }
    return m;
}

double mean(const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

// jackknife standard error of a statistic given its delete-one values
double jackknife_se(const std::vector<double>& loo, double /*full*/) {
    const double n = static_cast<double>(loo.size());
    const double m = mean(loo);
    double acc = 0.0;
    for (double v : loo) acc += (v - m) * (v - m);
    return std::sqrt((n - 1.0) / n * acc);
}

} // namespace

CorrelatorEstimates estimate_correlators(const ShotRecordSet& rec) {
    rec.validate();
    const int L = rec.L;
    const int lmax = L / 2;
    const int n = rec.n_shots();
    const ShotMoments m = shot_moments(rec);

    CorrelatorEstimates out;
    const double m1 = mean(m.m1);
    out.one_point.value = m1;
    out.one_point.n_shots = n;
    if (n > 1) {
        double var = 0.0;
        for (double v : m.m1) var += (v - m1) * (v - m1);
        var /= (n - 1);
        out.one_point.stderr_ = std::sqrt(var / n);
    }

    out.g2.resize(lmax);
    std::vector<double> sum2(lmax, 0.0);
    for (int s = 0; s < n; ++s)
        for (int e = 0; e < lmax; ++e) sum2[e] += m.m2[s][e];
    const double sum1 = m1 * n;

    for (int e = 0; e < lmax; ++e) {
        const double m2full = sum2[e] / n;
        out.g2[e].value = m2full - m1 * m1;
        out.g2[e].n_shots = n;
        if (n > 1) {
            std::vector<double> loo(n);
            for (int s = 0; s < n; ++s) {
                const double m1s = (sum1 - m.m1[s]) / (n - 1);
                const double m2s = (sum2[e] * 1.0 - m.m2[s][e]) / (n - 1);
                loo[s] = m2s - m1s * m1s;
            }
            out.g2[e].stderr_ = jackknife_se(loo, out.g2[e].value);
        }
    }
    return out;
}

CorrelatorEstimates readout_mitigate(const CorrelatorEstimates& est, double p_fp, double p_fn) {
    const double s = p_fp + p_fn;
    const double d = p_fp - p_fn;
    if (s >= 1.0)
        throw ArgumentError("readout_mitigate: channel not invertible (p_fp + p_fn >= 1)");
    CorrelatorEstimates out = est;
    out.one_point.value = (est.one_point.value - d) / (1.0 - s);
    out.one_point.stderr_ = est.one_point.stderr_ / (1.0 - s);
    const double c2 = (1.0 - s) * (1.0 - s);
    for (std::size_t e = 0; e < est.g2.size(); ++e) {
        out.g2[e].value = est.g2[e].value / c2;
        out.g2[e].stderr_ = est.g2[e].stderr_ / c2;
    }
    return out;
}

P2Score p2_score(const std::vector<CorrelationEstimate>& exp_g2,
                 const std::vector<double>& theory_g2, int L) {
    if (L < 3) throw ArgumentError("p2_score: L must be >= 3");
    const int lmax = L / 2;
    if (static_cast<int>(exp_g2.size()) < lmax || static_cast<int>(theory_g2.size()) < lmax)
        throw ArgumentError("p2_score: need estimates for ell = 1..floor(L/2)");
    int ell_lo = 2;
    bool fallback = false;
    if (lmax < 2) {  // L = 3: the formula has no terms; fall back to ell = 1
        ell_lo = 1;
        fallback = true;
    }
    double acc = 0.0, var = 0.0;
    int nterm = 0;
    int n_shots = 0;
    for (int ell = ell_lo; ell <= lmax; ++ell) {
        const double th = theory_g2[ell - 1];
        if (std::abs(th) < 1e-12)
            throw DomainError("p2_score: |theory g2| below 1e-12 floor at ell = " +
                              std::to_string(ell));
        const auto& e = exp_g2[ell - 1];
        acc += std::abs((e.value - th) / th);
        var += (e.stderr_ * e.stderr_) / (th * th);
        ++nterm;
        n_shots = std::max(n_shots, e.n_shots);
    }
    P2Score out;
    out.value.value = acc / nterm;
    out.value.stderr_ = std::sqrt(var) / nterm;
    out.value.n_shots = n_shots;
    out.ell1_fallback = fallback;
    return out;
}

std::string to_string(CellStatus s) {
    switch (s) {
        case CellStatus::Pass: return "pass";
        case CellStatus::Inconclusive: return "inconclusive";
        case CellStatus::Fail: return "fail";
    }
    return "?";
}

std::string to_string(ScorePolicy p) {
    return p == ScorePolicy::Strict ? "strict" : "lenient";
}

ScoreReport mbqs_score(const std::map<int, P2Score>& p2_per_L, double epsilon,
                       ScorePolicy policy, const std::vector<int>& exclude_L) {
    if (p2_per_L.empty()) throw ArgumentError("mbqs_score: no P2 values");
    ScoreReport rep;
    rep.p2 = p2_per_L;
    rep.epsilon = epsilon;
    rep.policy = policy;
    rep.excluded_L = exclude_L;

    auto excluded = [&](int L) {
        return std::find(exclude_L.begin(), exclude_L.end(), L) != exclude_L.end();
    };

    for (const auto& [L, p2] : p2_per_L) {
        const double m = p2.value.value, se = p2.value.stderr_;
        CellStatus st;
        if (m + se <= epsilon) st = CellStatus::Pass;
        else if (m <= epsilon) st = CellStatus::Inconclusive;
        else st = CellStatus::Fail;
        rep.cells.push_back({L, epsilon, st});
    }

    // contiguity over the non-excluded ascending L set
    int prev = 0;
    for (const auto& [L, p2] : p2_per_L) {
        if (excluded(L)) continue;
        if (prev != 0 && L > prev + 1) {
            bool gap_excluded = true;
            for (int M = prev + 1; M < L; ++M)
                if (!excluded(M)) gap_excluded = false;
            if (!gap_excluded) {
                rep.S_lower_bound = true;
                for (int M = prev + 1; M < L; ++M)
                    if (!excluded(M)) rep.missing_L.push_back(M);
            }
        }
        prev = L;
    }

    int S = 0;
    for (const auto& cell : rep.cells) {
        if (excluded(cell.L)) continue;
        const bool ok = cell.status == CellStatus::Pass ||
                        (policy == ScorePolicy::Lenient &&
                         cell.status == CellStatus::Inconclusive);
        if (ok) {
            if (S == 0 || cell.L == S + 1 || (S > 0 && [&] {
                    for (int M = S + 1; M < cell.L; ++M)
                        if (!excluded(M)) return false;
                    return true;
                }()))
                S = cell.L;
        } else {
            break;
        }
    }
    rep.S = S;
    return rep;
}

double dephasing_fit(const std::vector<DephasingSample>& samples) {
    if (samples.size() < 2) throw ArgumentError("dephasing_fit: need >= 2 samples");
    double sxx = 0.0, sxy = 0.0;
    for (const auto& s : samples) {
        if (!(s.eta > 0.0) || s.eta > 1.0 + 1e-12)
            throw ArgumentError("dephasing_fit: eta must be in (0, 1]");
        const double x = s.gamma * s.g * s.L * s.L;
        const double y = std::log(s.eta);
        sxx += x * x;
        sxy += x * y;
    }
    if (sxx == 0.0) throw ArgumentError("dephasing_fit: degenerate design");
    return -sxy / sxx;
}

double predicted_score(double gamma, double epsilon, double beta) {
    if (gamma <= 0.0 || beta <= 0.0) throw ArgumentError("predicted_score: gamma, beta > 0");
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw ArgumentError("predicted_score: epsilon must be in (0, 1)");
    return std::sqrt(-std::log(1.0 - epsilon) / (beta * gamma));
}

} // namespace mbqs
