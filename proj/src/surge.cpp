#include "mbqs/surge.hpp"

#include <algorithm>
#include <cmath>

#include "mbqs/errors.hpp"

namespace mbqs {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

double lieb_robinson_velocity(double g, double J) {
    if (g <= 0.0) throw ArgumentError("lieb_robinson_velocity: g must be > 0");
    return 2.0 * J * std::min(g, 1.0);
}

double fermi_time(int L, double g, double J) {
    return L / (2.0 * lieb_robinson_velocity(g, J));
}

std::string to_string(SurgeMethod m) {
    switch (m) {
        case SurgeMethod::NumericPeak: return "numeric_peak";
        case SurgeMethod::Regression: return "regression";
        case SurgeMethod::Analytic: return "analytic";
    }
    return "?";
}

namespace {

struct Peak {
    std::size_t idx;
    double height;
    double prominence;
};

std::vector<Peak> local_maxima(const std::vector<double>& y) {
    std::vector<Peak> peaks;
    const std::size_t n = y.size();
    std::size_t i = 1;
    while (i + 1 < n) {
        if (y[i] > y[i - 1]) {
            // plateau-aware: advance over flat tops
            std::size_t j = i;
            while (j + 1 < n && y[j + 1] == y[j]) ++j;
            if (j + 1 < n && y[j + 1] < y[j]) {
                const std::size_t c = (i + j) / 2;
                peaks.push_back({c, y[c], 0.0});
                i = j + 1;
                continue;
            }
            i = j + 1;
            continue;
        }
        ++i;
    }
    // topographic prominence
    for (auto& p : peaks) {
        double left_min = p.height, right_min = p.height;
        for (std::size_t a = p.idx; a-- > 0;) {
            if (y[a] > p.height) break;
            left_min = std::min(left_min, y[a]);
            if (a == 0) break;
        }
        for (std::size_t a = p.idx + 1; a < n; ++a) {
            if (y[a] > p.height) break;
            right_min = std::min(right_min, y[a]);
        }
        p.prominence = p.height - std::max(left_min, right_min);
    }
    return peaks;
}

double width_at_fraction(const TimeSeries& s, std::size_t peak, double frac) {
    const double level = frac * s.y[peak];
    double t_lo = s.t.front(), t_hi = s.t.back();
    for (std::size_t a = peak; a-- > 0;) {
        if (s.y[a] <= level) {
            const double w = (level - s.y[a]) / (s.y[a + 1] - s.y[a]);
            t_lo = s.t[a] + w * (s.t[a + 1] - s.t[a]);
            break;
        }
        if (a == 0) t_lo = s.t.front();
    }
    for (std::size_t a = peak + 1; a < s.y.size(); ++a) {
        if (s.y[a] <= level) {
            const double w = (s.y[a - 1] - level) / (s.y[a - 1] - s.y[a]);
            t_hi = s.t[a - 1] + w * (s.t[a] - s.t[a - 1]);
            break;
        }
    }
    return t_hi - t_lo;
}

} // namespace

SurgeResult find_surge_time(const TimeSeries& series) {
    if (series.t.size() != series.y.size() || series.t.size() < 5)
        throw ArgumentError("find_surge_time: need a sampled series (>= 5 points)");
    const double gmax = *std::max_element(series.y.begin(), series.y.end());
    auto peaks = local_maxima(series.y);
    for (const auto& p : peaks) {
        if (p.height >= 0.5 * gmax && p.prominence >= 0.10 * gmax) {
            SurgeResult r;
            r.t_star = series.t[p.idx];
            r.method = SurgeMethod::NumericPeak;
            r.peak_height = p.height;
            r.peak_width_75 = width_at_fraction(series, p.idx, 0.75);
            return r;
        }
    }
    throw DetectionError("find_surge_time: no qualifying peak; global max " +
                         std::to_string(gmax) + " at t = " +
                         std::to_string(series.t[static_cast<std::size_t>(
                             std::max_element(series.y.begin(), series.y.end()) -
                             series.y.begin())]));
}

RegressionFit surge_regression(const std::vector<std::pair<double, double>>& pairs) {
    if (pairs.size() < 3) throw ArgumentError("surge_regression: need >= 3 pairs");
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    const double n = static_cast<double>(pairs.size());
    for (auto [x, y] : pairs) {
        sx += x; sy += y; sxx += x * x; sxy += x * y; syy += y * y;
    }
    const double den = n * sxx - sx * sx;
    if (std::abs(den) < 1e-12 * std::max(1.0, sxx))
        throw ArgumentError("surge_regression: degenerate design (all L equal)");
    RegressionFit f;
    f.slope = (n * sxy - sx * sy) / den;
    f.intercept = (sy - f.slope * sx) / n;
    double ss_res = 0.0, ss_tot = 0.0;
    const double ybar = sy / n;
    for (auto [x, y] : pairs) {
        const double e = y - (f.slope * x + f.intercept);
        ss_res += e * e;
        ss_tot += (y - ybar) * (y - ybar);
    }
    f.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    return f;
}

double SurgeLookup::Jt_star(int L) const {
    auto it = exact_Jt.find(L);
    if (it != exact_Jt.end()) return it->second;
    return fit.slope * L + fit.intercept;
}

FClosedForm f_closed_form(double k, int ell, int L, double t, double g, double J) {
    if (!(k > 0.0 && k < kPi)) throw ArgumentError("f_closed_form: need 0 < k < pi");
    if (ell < 1 || 2 * ell > L) throw ArgumentError("f_closed_form: need 1 <= ell <= L/2");
    const double x = static_cast<double>(ell) / L;
    const double f0 = kPi * kPi * x * (1.0 - x);
    const double v = group_velocity(g, J, k);
    if (v == 0.0) return {f0, true};
    const double period = L / (2.0 * v);
    double tt = std::fmod(t, period);
    if (tt < 0.0) tt += period;
    const double t1 = ell / (2.0 * v);
    const double t2 = period - t1;
    double val;
    if (tt <= t1) val = f0 - tt * 2.0 * kPi * kPi * v / L;
    else if (tt <= t2) val = -(ell * ell) * kPi * kPi / (L * L);
    else val = f0 - (period - tt) * 2.0 * kPi * kPi * v / L;
    return {val, false};
}

double f_series(double k, int ell, int L, double t, double g, double J, int mmax) {
    const double v = group_velocity(g, J, k);
    double acc = 0.0;
    for (int m = 1; m <= mmax; ++m) {
        acc += (1.0 / (static_cast<double>(m) * m)) *
               std::cos(4.0 * kPi * t * m * v / L) *
               (1.0 - std::cos(2.0 * kPi * m * ell / static_cast<double>(L)));
    }
    return acc;
}

namespace {

// 10-point Gauss-Legendre nodes/weights on [-1, 1]
const double kGlx[5] = {0.1488743389816312, 0.4333953941292472, 0.6794095682990244,
                        0.8650633666889845, 0.9739065285171717};
const double kGlw[5] = {0.2955242247147529, 0.2692667193099963, 0.2190863625159820,
                        0.1494513491505806, 0.0666713443086881};

template <typename F>
double gauss10(F&& f, double a, double b) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    double acc = 0.0;
    for (int i = 0; i < 5; ++i)
        acc += kGlw[i] * (f(c + h * kGlx[i]) + f(c - h * kGlx[i]));
    return acc * h;
}

// velocity profile normalized by v_max; unimodal on (0, pi)
double vel_ratio(double g, double k) {
    return group_velocity(g, 1.0, k) / (2.0 * std::min(g, 1.0));
}

// d f_{k,l}/dt at t = tau t_F in units of 2 pi^2 v_max / L: returns
// -r, 0 or +r with r = v_k/v_max depending on the phase within the period.
double dfdt_reduced(double g, double k, double x, double tau) {
    const double r = vel_ratio(g, k);
    if (r == 0.0) return 0.0;
    double s = std::fmod(tau * r, 1.0);
    if (s < 0.0) s += 1.0;
    if (s < x) return -r;
    if (s < 1.0 - x) return 0.0;
    return r;
}

// k-values where the mode phase s = frac(tau * r(k)) crosses x or 1-x;
// solved on each monotone half of the velocity profile by bisection.
std::vector<double> breakpoint_loci(double g, double x, double tau) {
    std::vector<double> ks;
    const double kc = g < 1.0 ? std::acos(g) : 0.0;  // v peaks at kc (g<1); monotone for g=1
    auto solve_on = [&](double lo, double hi, double target) {
        double flo = vel_ratio(g, lo) * tau - target;
        double fhi = vel_ratio(g, hi) * tau - target;
        if (flo * fhi > 0.0) return;
        for (int it = 0; it < 80; ++it) {
            const double mid = 0.5 * (lo + hi);
            const double fm = vel_ratio(g, mid) * tau - target;
            if (flo * fm <= 0.0) { hi = mid; fhi = fm; }
            else { lo = mid; flo = fm; }
        }
        ks.push_back(0.5 * (lo + hi));
    };
    const int mmax = static_cast<int>(std::ceil(tau)) + 1;
    for (int m = 0; m <= mmax; ++m) {
        for (double frac : {x, 1.0 - x, 1.0}) {
            const double target = m + frac;
            if (target > tau) continue;
            if (kc > 1e-12) solve_on(1e-12, kc, target);
            solve_on(std::max(kc, 1e-12), kPi - 1e-12, target);
        }
    }
    return ks;
}

double surge_integrand_integral(double g, double x, double tau) {
    auto ks = breakpoint_loci(g, x, tau);
    ks.push_back(0.0);
    ks.push_back(kPi);
    std::sort(ks.begin(), ks.end());
    double acc = 0.0;
    auto f = [&](double k) {
        const double K = excitation_amplitude(g, k);
        return K * K * dfdt_reduced(g, k, x, tau);
    };
    for (std::size_t i = 0; i + 1 < ks.size(); ++i) {
        if (ks[i + 1] - ks[i] < 1e-14) continue;
        acc += gauss10(f, ks[i], ks[i + 1]);
    }
    return acc;
}

} // namespace

double surge_estimate(double g, double ell_over_L) {
    if (!(g > 0.0 && g <= 1.0)) throw ArgumentError("surge_estimate: need 0 < g <= 1");
    if (!(ell_over_L > 0.0 && ell_over_L <= 0.5))
        throw ArgumentError("surge_estimate: need 0 < ell/L <= 1/2");
    const double lo = 0.9, hi = 2.0;
    const int nscan = 220;
    double prev_tau = lo;
    double prev_val = surge_integrand_integral(g, ell_over_L, lo);
    for (int i = 1; i <= nscan; ++i) {
        const double tau = lo + (hi - lo) * i / nscan;
        const double val = surge_integrand_integral(g, ell_over_L, tau);
        if (prev_val == 0.0) return prev_tau;
        if (prev_val * val < 0.0) {
            double a = prev_tau, b = tau, fa = prev_val;
            for (int it = 0; it < 60; ++it) {
                const double mid = 0.5 * (a + b);
                const double fm = surge_integrand_integral(g, ell_over_L, mid);
                if (fa * fm <= 0.0) b = mid;
                else { a = mid; fa = fm; }
            }
            return 0.5 * (a + b);
        }
        prev_tau = tau;
        prev_val = val;
    }
    std::string trace = "integrand trace:";
    for (double tau : {0.9, 1.0, 1.2, 1.5, 2.0})
        trace += " I(" + std::to_string(tau) + ")=" +
                 std::to_string(surge_integrand_integral(g, ell_over_L, tau));
    throw EstimationError("surge_estimate: no sign change in t/t_F in [0.9, 2.0]; " + trace);
}

TimeSeries scan_antipodal(const FreeFermionEngine& engine, double Jt_max, double Jt_step) {
    const auto& spec = engine.spec();
    const int ell = spec.L / 2;
    TimeSeries s;
    const int n = static_cast<int>(std::floor(Jt_max / Jt_step)) + 1;
    s.t.reserve(n);
    s.y.reserve(n);
    for (int i = 0; i < n; ++i) {
        const double t = (i * Jt_step) / spec.J;
        s.t.push_back(t);
        s.y.push_back(engine.connected_g2(t, ell));
    }
    return s;
}

SurgeResult numeric_surge(const QuenchSpec& base, double Jt_step, double coarse_step) {
    QuenchSpec spec = base;
    spec.time_grid.clear();
    spec.validate();
    FreeFermionEngine engine(spec);
    const double Jt_F = spec.J * fermi_time(spec.L, spec.g, spec.J);
    const double Jt_max = 1.3 * Jt_F;

    const TimeSeries coarse = scan_antipodal(engine, Jt_max, coarse_step);
    const SurgeResult rough = find_surge_time(coarse);

    // fine window around the coarse peak at full resolution
    const double half_window = std::max(3.0 * coarse_step, 0.02 * Jt_F);
    const double lo = std::max(0.0, spec.J * rough.t_star - half_window);
    const double hi = std::min(Jt_max, spec.J * rough.t_star + half_window);
    TimeSeries fine;
    for (double Jt = lo; Jt <= hi + 1e-12; Jt += Jt_step) {
        const double t = Jt / spec.J;
        fine.t.push_back(t);
        fine.y.push_back(engine.connected_g2(t, spec.L / 2));
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < fine.y.size(); ++i)
        if (fine.y[i] > fine.y[best]) best = i;

    SurgeResult r;
    r.L = spec.L;
    r.method = SurgeMethod::NumericPeak;
    r.t_star = fine.t[best];
    r.peak_height = fine.y[best];
    // 75% width measured on the coarse series (covers the full descent)
    std::size_t cbest = 0;
    for (std::size_t i = 1; i < coarse.y.size(); ++i)
        if (coarse.y[i] > coarse.y[cbest]) cbest = i;
    r.peak_width_75 = width_at_fraction(coarse, cbest, 0.75);
    return r;
}

std::vector<PeakScanRow> peak_height_scan(const std::vector<int>& Ls, double g, double J,
                                          InitialState state) {
    std::vector<PeakScanRow> rows;
    for (int L : Ls) {
        QuenchSpec spec;
        spec.L = L;
        spec.g = g;
        spec.J = J;
        spec.initial_state = state;
        const SurgeResult r = numeric_surge(spec);
        rows.push_back({L, r.t_star, r.peak_height, r.peak_width_75});
    }
    return rows;
}

} // namespace mbqs
