#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mbqs/freefermion.hpp"

namespace mbqs {

/// v_max = 2 J min(g, 1): sup_k |d eps/d k|.
double lieb_robinson_velocity(double g, double J);

/// t_F = L / (2 v_max), us.
double fermi_time(int L, double g, double J);

enum class SurgeMethod { NumericPeak, Regression, Analytic };

std::string to_string(SurgeMethod m);

struct SurgeResult {
    int L = 0;
    double t_star = 0.0;       // us
    SurgeMethod method = SurgeMethod::NumericPeak;
    double peak_height = 0.0;
    double peak_width_75 = 0.0;  // us, width at 75% of peak height
};

struct TimeSeries {
    std::vector<double> t;  // us, strictly increasing
    std::vector<double> y;
};

/// Earliest local maximum with height >= 0.5 x global max and topographic
/// prominence >= 10% of the global max; also reports the width at 75%
/// height. Throws DetectionError (carrying the global max as fallback
/// context) when no sample qualifies.
SurgeResult find_surge_time(const TimeSeries& series);

struct RegressionFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
};

/// Ordinary least squares of t* against L. Requires >= 3 pairs and at least
/// two distinct L values.
RegressionFit surge_regression(const std::vector<std::pair<double, double>>& pairs);

/// Stored-exact-else-regression surge-time lookup (times in Jt units).
struct SurgeLookup {
    std::map<int, double> exact_Jt;
    RegressionFit fit;

    double Jt_star(int L) const;
};

struct FClosedForm {
    double value = 0.0;
    bool degenerate = false;  // group velocity vanished; constant branch
};

/// Closed form of f_{k,l}(t): piecewise linear with period L/(2 v_k),
/// plateau value -(l pi / L)^2 and f(0) = pi^2 (l/L)(1 - l/L).
FClosedForm f_closed_form(double k, int ell, int L, double t, double g, double J);

/// Truncated-series evaluation of f_{k,l}(t) (test oracle).
double f_series(double k, int ell, int L, double t, double g, double J, int mmax = 10000);

/// Root of  int_0^pi K(k)^2 df_{k,l}/dt dk = 0  in t/t_F within [0.9, 2.0],
/// composite Gauss quadrature with subdivision at the breakpoint loci and
/// bracketed bisection. Depends on (g, ell/L) only.
double surge_estimate(double g, double ell_over_L);

/// Antipodal g2 series of the engine on a uniform Jt grid.
TimeSeries scan_antipodal(const FreeFermionEngine& engine, double Jt_max, double Jt_step);

/// Numeric surge time of a spec: coarse scan over [0, 1.3 Jt_F] followed by a
/// fine window at `Jt_step` around the detected peak (defaults follow the
/// ns-level protocol resolution).
SurgeResult numeric_surge(const QuenchSpec& base, double Jt_step = 1e-3,
                          double coarse_step = 1e-2);

struct PeakScanRow {
    int L;
    double t_star;       // us
    double peak_height;
    double width75;      // us
};

/// Antipodal peak height scan over system sizes (plus state path).
std::vector<PeakScanRow> peak_height_scan(const std::vector<int>& Ls, double g, double J,
                                          InitialState state = InitialState::Plus);

} // namespace mbqs
