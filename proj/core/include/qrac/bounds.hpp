#pragma once

#include <optional>

#include "qrac/rac.hpp"

namespace qrac::bounds {

/// All closed-form upper bounds for one setting. corollary is
/// min(result1, result2); best_upper additionally folds in the vicente bound
/// and the trivial cap at 1. Branch values are kept raw (result1 may exceed
/// 1) so the report stays diagnostic.
struct BoundReport {
    RacSetting setting;
    double result1 = 0.0;
    double result2 = 0.0;
    double corollary = 0.0;
    double vicente = 0.0;
    std::optional<double> exact;
    double best_upper = 0.0;
};

/// 1/d + (D-1)/sqrt(n d D).
double result1_bound(const RacSetting& setting);

/// (1/n)(1 + (n-1) sqrt(D)/d).
double result2_bound(const RacSetting& setting);

/// min of result1_bound and result2_bound.
double corollary_bound(const RacSetting& setting);

/// 1/d + (sqrt(d D) - 1)/(d sqrt(n)).
double vicente_bound(const RacSetting& setting);

/// The exactly known optima: (2, d, d) -> (1 + 1/sqrt(d))/2 and
/// (3, 2, 2) -> (1 + 1/sqrt(3))/2. Empty for every other setting.
std::optional<double> known_exact_value(const RacSetting& setting);

BoundReport bound_report(const RacSetting& setting);

} // namespace qrac::bounds
