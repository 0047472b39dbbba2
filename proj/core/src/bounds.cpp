#include "qrac/bounds.hpp"

#include <algorithm>
#include <cmath>

namespace qrac::bounds {

double result1_bound(const RacSetting& setting) {
    const double n = setting.n();
    const double d = setting.d();
    const double dim = setting.D();
    return 1.0 / d + (dim - 1.0) / std::sqrt(n * d * dim);
}

double result2_bound(const RacSetting& setting) {
    const double n = setting.n();
    const double d = setting.d();
    const double dim = setting.D();
    return (1.0 + (n - 1.0) * std::sqrt(dim) / d) / n;
}

double corollary_bound(const RacSetting& setting) {
    return std::min(result1_bound(setting), result2_bound(setting));
}

double vicente_bound(const RacSetting& setting) {
    const double n = setting.n();
    const double d = setting.d();
    const double dim = setting.D();
    return 1.0 / d + (std::sqrt(d * dim) - 1.0) / (d * std::sqrt(n));
}

std::optional<double> known_exact_value(const RacSetting& setting) {
    if (setting.n() == 2 && setting.d() == setting.D()) {
        return 0.5 * (1.0 + 1.0 / std::sqrt(static_cast<double>(setting.d())));
    }
    if (setting.n() == 3 && setting.d() == 2 && setting.D() == 2) {
        return 0.5 * (1.0 + 1.0 / std::sqrt(3.0));
    }
    return std::nullopt;
}

BoundReport bound_report(const RacSetting& setting) {
    BoundReport report{setting};
    report.result1 = result1_bound(setting);
    report.result2 = result2_bound(setting);
    report.corollary = std::min(report.result1, report.result2);
    report.vicente = vicente_bound(setting);
    report.exact = known_exact_value(setting);
    report.best_upper = std::min({report.corollary, report.vicente, 1.0});
    return report;
}

} // namespace qrac::bounds
