#include "tna/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tna {

namespace {

// Lower regularized gamma P(a,x) by power series; valid for x < a + 1.
double gamma_p_series(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int n = 0; n < 512; ++n) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::fabs(del) < std::fabs(sum) * 1e-16) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Upper regularized gamma Q(a,x) by modified Lentz continued fraction;
// valid for x >= a + 1.
double gamma_q_continued_fraction(double a, double x) {
    constexpr double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 512; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < 1e-16) break;
    }
    return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double gamma_q(double a, double x) {
    if (x < 0.0 || a <= 0.0) {
        throw std::invalid_argument("gamma_q: requires a > 0 and x >= 0");
    }
    if (x == 0.0) return 1.0;
    return x < a + 1.0 ? 1.0 - gamma_p_series(a, x) : gamma_q_continued_fraction(a, x);
}

double interpolated_quantile(const std::vector<double>& sorted, double p) {
    const std::size_t n = sorted.size();
    if (n == 1) return sorted[0];
    const double pos = p * static_cast<double>(n - 1);
    const auto lo = static_cast<std::size_t>(pos);
    if (lo + 1 >= n) return sorted[n - 1];
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

}  // namespace

SummaryStats summarize(std::span<const double> values) {
    if (values.empty()) {
        throw std::invalid_argument("summarize: empty input");
    }
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    SummaryStats s;
    s.q1 = interpolated_quantile(sorted, 0.25);
    s.median = interpolated_quantile(sorted, 0.5);
    s.q3 = interpolated_quantile(sorted, 0.75);
    return s;
}

KwResult kruskal_wallis(std::span<const GroupSample> groups) {
    if (groups.size() < 2) {
        throw std::invalid_argument("kruskal_wallis: need at least 2 groups");
    }
    std::size_t total = 0;
    for (const auto& g : groups) {
        if (g.values.empty()) {
            throw std::invalid_argument("kruskal_wallis: group '" + g.group_label +
                                        "' is empty");
        }
        for (double v : g.values) {
            if (!std::isfinite(v)) {
                throw std::invalid_argument("kruskal_wallis: non-finite value in group '" +
                                            g.group_label + "'");
            }
        }
        total += g.values.size();
    }
    if (total < 3) {
        throw std::invalid_argument("kruskal_wallis: need total N >= 3");
    }

    struct Obs {
        double value;
        std::size_t group;
    };
    std::vector<Obs> pooled;
    pooled.reserve(total);
    for (std::size_t g = 0; g < groups.size(); ++g) {
        for (double v : groups[g].values) {
            pooled.push_back({v, g});
        }
    }
    std::sort(pooled.begin(), pooled.end(),
              [](const Obs& a, const Obs& b) { return a.value < b.value; });

    // midranks over runs of equal values, plus the tie-correction tally
    std::vector<double> rank_sum(groups.size(), 0.0);
    double tie_sum = 0.0;  // sum of t^3 - t over tie groups
    std::size_t i = 0;
    while (i < pooled.size()) {
        std::size_t j = i;
        while (j < pooled.size() && pooled[j].value == pooled[i].value) ++j;
        const double t = static_cast<double>(j - i);
        const double midrank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
        if (t > 1.0) {
            tie_sum += t * t * t - t;
        }
        for (std::size_t m = i; m < j; ++m) {
            rank_sum[pooled[m].group] += midrank;
        }
        i = j;
    }

    const double n = static_cast<double>(total);
    const double tie_correction = 1.0 - tie_sum / (n * n * n - n);
    if (tie_correction <= 0.0) {
        throw std::invalid_argument("kruskal_wallis: degenerate: all observations tied");
    }

    // Accumulate group terms in a canonical order so that permuting the
    // caller's group list reproduces the statistic bit-for-bit.
    struct Term {
        double mean_rank;
        double count;
    };
    std::vector<Term> terms;
    terms.reserve(groups.size());
    for (std::size_t g = 0; g < groups.size(); ++g) {
        const double ng = static_cast<double>(groups[g].values.size());
        terms.push_back({rank_sum[g] / ng, ng});
    }
    std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) {
        return a.mean_rank != b.mean_rank ? a.mean_rank < b.mean_rank : a.count < b.count;
    });
    const double grand_mean = (n + 1.0) / 2.0;
    double ssq = 0.0;
    for (const Term& t : terms) {
        const double dev = t.mean_rank - grand_mean;
        ssq += t.count * dev * dev;
    }
    double h = 12.0 / (n * (n + 1.0)) * ssq;
    h /= tie_correction;

    KwResult result;
    result.h_statistic = h;
    result.df = static_cast<int>(groups.size()) - 1;
    result.p_value = chi_square_upper_tail(h, result.df);
    result.tie_correction = tie_correction;
    return result;
}

double chi_square_upper_tail(double x, int df) {
    if (df < 1) {
        throw std::invalid_argument("chi_square_upper_tail: df must be >= 1");
    }
    if (x <= 0.0) return 1.0;
    return gamma_q(static_cast<double>(df) / 2.0, x / 2.0);
}

}  // namespace tna
