#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mbqs/shot_record.hpp"

namespace mbqs {

struct CorrelationEstimate {
    double value = 0.0;
    double stderr_ = 0.0;
    int n_shots = 0;
};

struct CorrelatorEstimates {
    CorrelationEstimate one_point;
    std::vector<CorrelationEstimate> g2;  // index 0 <-> ell = 1, ..., floor(L/2)
};

/// Translation-averaged estimators from raw bitstrings: sz = 2b - 1, the
/// connected part uses the plug-in estimator (mean of products minus product
/// of means); standard errors by delete-one-shot jackknife.
CorrelatorEstimates estimate_correlators(const ShotRecordSet& records);

/// Readout-channel inversion: sz_mit = (sz - d)/(1 - s), g2_mit = g2/(1-s)^2
/// with s = p_fp + p_fn, d = p_fp - p_fn. Standard errors scale the same way.
CorrelatorEstimates readout_mitigate(const CorrelatorEstimates& est, double p_fp, double p_fn);

/// P2(L): mean over ell = 2..floor(L/2) of |g2_exp - g2_th| / |g2_th|. For
/// L = 4 the sum has the single ell = 2 term; L = 3 falls back to ell = 1
/// alone and is flagged. Standard error by first-order propagation of the
/// per-ell errors.
struct P2Score {
    CorrelationEstimate value;
    bool ell1_fallback = false;  // L = 3 definition caveat
};

P2Score p2_score(const std::vector<CorrelationEstimate>& exp_g2,
                 const std::vector<double>& theory_g2, int L);

enum class CellStatus { Pass, Inconclusive, Fail };
enum class ScorePolicy { Strict, Lenient };

std::string to_string(CellStatus s);
std::string to_string(ScorePolicy p);

struct VolumetricCell {
    int L;
    double epsilon;
    CellStatus status;
};

struct ScoreReport {
    std::map<int, P2Score> p2;          // per L
    double epsilon = 0.0;
    int S = 0;                          // 0 when no L passes
    bool S_lower_bound = false;         // gaps in the L set
    std::vector<int> missing_L;
    std::vector<int> excluded_L;
    ScorePolicy policy = ScorePolicy::Strict;
    bool mitigated = false;
    std::optional<std::pair<double, double>> mitigation_pfp_pfn;
    std::vector<VolumetricCell> cells;  // at this epsilon
};

/// Volumetric classification and the score S = largest L such that every
/// smaller (non-excluded) L passes under the policy.
ScoreReport mbqs_score(const std::map<int, P2Score>& p2_per_L, double epsilon,
                       ScorePolicy policy = ScorePolicy::Strict,
                       const std::vector<int>& exclude_L = {});

/// Least-squares fit of log eta = -beta * (gamma g L^2) through the origin.
struct DephasingSample {
    double gamma;
    double g;
    int L;
    double eta;
};

double dephasing_fit(const std::vector<DephasingSample>& samples);

/// Predicted score S = sqrt(-log(1 - epsilon) / (beta gamma)).
double predicted_score(double gamma, double epsilon, double beta);

} // namespace mbqs
