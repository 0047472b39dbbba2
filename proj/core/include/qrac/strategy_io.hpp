#pragma once

#include <string>

#include "qrac/rac.hpp"

namespace qrac::io {

/// Serializes a strategy as a JSON object with fields n, d, D, states (d^n
/// matrices in rank order) and measurements (n arrays of d effects). Matrices
/// are row-major arrays of rows; each entry is a [re, im] pair. indent < 0
/// emits the compact single-line form.
std::string strategy_to_json(const Strategy& strategy, int indent = 2);

/// Parses the layout produced by strategy_to_json, checking shapes before
/// building the Strategy. Throws ValidationError naming the offending field
/// or index. The result is structurally sound but not certified
/// PSD/complete; run validate_strategy for that.
Strategy strategy_from_json(const std::string& text);

/// File convenience wrappers. Reading throws ValidationError when the file
/// cannot be opened; writing throws NumericError on I/O failure.
void save_strategy(const Strategy& strategy, const std::string& path, int indent = 2);
Strategy load_strategy(const std::string& path);

} // namespace qrac::io
