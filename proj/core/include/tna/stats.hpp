#pragma once

#include <span>
#include <string>
#include <vector>

namespace tna {

struct GroupSample {
    std::string group_label;
    std::vector<double> values;  // one metric value per participant
};

struct SummaryStats {
    double median = 0.0;
    double q1 = 0.0;
    double q3 = 0.0;
};

/// Median and quartiles by linear interpolation between order statistics at
/// position p*(n-1), zero-indexed (the common "type 7" convention). Throws
/// std::invalid_argument on empty input.
SummaryStats summarize(std::span<const double> values);

struct KwResult {
    double h_statistic = 0.0;   // tie-corrected H
    int df = 0;                 // number of groups - 1
    double p_value = 1.0;       // chi-square upper tail at df
    double tie_correction = 1.0;  // 1 - sum(t^3 - t)/(N^3 - N), in (0, 1]
};

/// Kruskal-Wallis omnibus rank test with midranks for ties. Requires at
/// least two groups, one value per group and total N >= 3; all observations
/// tied is a degenerate input and raises std::invalid_argument.
KwResult kruskal_wallis(std::span<const GroupSample> groups);

/// P(X >= x) for a chi-square variable with df degrees of freedom, evaluated
/// through the regularized upper incomplete gamma function Q(df/2, x/2)
/// (series for x < a+1, Lentz continued fraction otherwise).
double chi_square_upper_tail(double x, int df);

}  // namespace tna
