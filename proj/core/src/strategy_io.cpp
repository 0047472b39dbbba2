#include "qrac/strategy_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace qrac::io {

namespace {

using nlohmann::json;

json matrix_to_json(const Matrix& m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            row.push_back(json::array({m(r, c).real(), m(r, c).imag()}));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

int require_int(const json& doc, const char* field) {
    if (!doc.contains(field)) {
        throw ValidationError(std::string("strategy JSON: missing field \"") + field + "\"");
    }
    const json& value = doc[field];
    if (!value.is_number_integer()) {
        throw ValidationError(std::string("strategy JSON: field \"") + field +
                              "\" must be an integer");
    }
    return value.get<int>();
}

Matrix matrix_from_json(const json& j, int dim, const std::string& where) {
    if (!j.is_array() || j.size() != static_cast<std::size_t>(dim)) {
        std::ostringstream msg;
        msg << where << ": expected " << dim << " rows";
        throw ValidationError(msg.str());
    }
    Matrix m(dim, dim);
    for (int r = 0; r < dim; ++r) {
        const json& row = j[r];
        if (!row.is_array() || row.size() != static_cast<std::size_t>(dim)) {
            std::ostringstream msg;
            msg << where << " row " << r << ": expected " << dim << " entries";
            throw ValidationError(msg.str());
        }
        for (int c = 0; c < dim; ++c) {
            const json& entry = row[c];
            if (!entry.is_array() || entry.size() != 2 || !entry[0].is_number() ||
                !entry[1].is_number()) {
                std::ostringstream msg;
                msg << where << " entry (" << r << ", " << c << "): expected [re, im]";
                throw ValidationError(msg.str());
            }
            m(r, c) = linalg::Complex(entry[0].get<double>(), entry[1].get<double>());
        }
    }
    return m;
}

} // namespace

std::string strategy_to_json(const Strategy& strategy, int indent) {
    json doc;
    doc["n"] = strategy.setting.n();
    doc["d"] = strategy.setting.d();
    doc["D"] = strategy.setting.D();

    json states = json::array();
    for (const Matrix& rho : strategy.states) states.push_back(matrix_to_json(rho));
    doc["states"] = std::move(states);

    json measurements = json::array();
    for (const Povm& povm : strategy.measurements) {
        json effects = json::array();
        for (const Matrix& effect : povm.effects) effects.push_back(matrix_to_json(effect));
        measurements.push_back(std::move(effects));
    }
    doc["measurements"] = std::move(measurements);

    return indent < 0 ? doc.dump() : doc.dump(indent);
}

Strategy strategy_from_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("strategy JSON: ") + e.what());
    }
    if (!doc.is_object()) {
        throw ValidationError("strategy JSON: top level must be an object");
    }

    const RacSetting setting(require_int(doc, "n"), require_int(doc, "d"),
                             require_int(doc, "D"));

    if (!doc.contains("states") || !doc["states"].is_array()) {
        throw ValidationError("strategy JSON: \"states\" must be an array");
    }
    const json& states_json = doc["states"];
    if (states_json.size() != setting.tuple_count()) {
        std::ostringstream msg;
        msg << "strategy JSON: expected " << setting.tuple_count() << " states, got "
            << states_json.size();
        throw ValidationError(msg.str());
    }

    if (!doc.contains("measurements") || !doc["measurements"].is_array()) {
        throw ValidationError("strategy JSON: \"measurements\" must be an array");
    }
    const json& meas_json = doc["measurements"];
    if (meas_json.size() != static_cast<std::size_t>(setting.n())) {
        std::ostringstream msg;
        msg << "strategy JSON: expected " << setting.n() << " measurements, got "
            << meas_json.size();
        throw ValidationError(msg.str());
    }

    Strategy strategy{setting, {}, {}};
    strategy.states.reserve(states_json.size());
    for (std::size_t x = 0; x < states_json.size(); ++x) {
        std::ostringstream where;
        where << "states[" << x << "]";
        strategy.states.push_back(matrix_from_json(states_json[x], setting.D(), where.str()));
    }

    strategy.measurements.reserve(meas_json.size());
    for (std::size_t y = 0; y < meas_json.size(); ++y) {
        const json& effects_json = meas_json[y];
        std::ostringstream base;
        base << "measurements[" << y << "]";
        if (!effects_json.is_array() ||
            effects_json.size() != static_cast<std::size_t>(setting.d())) {
            std::ostringstream msg;
            msg << base.str() << ": expected " << setting.d() << " effects";
            throw ValidationError(msg.str());
        }
        Povm povm;
        povm.effects.reserve(effects_json.size());
        for (std::size_t b = 0; b < effects_json.size(); ++b) {
            std::ostringstream where;
            where << base.str() << " effect " << b;
            povm.effects.push_back(
                matrix_from_json(effects_json[b], setting.D(), where.str()));
        }
        strategy.measurements.push_back(std::move(povm));
    }
    return strategy;
}

void save_strategy(const Strategy& strategy, const std::string& path, int indent) {
    std::ofstream out(path);
    if (!out) {
        throw NumericError("save_strategy: cannot open \"" + path + "\" for writing");
    }
    out << strategy_to_json(strategy, indent) << '\n';
    if (!out) {
        throw NumericError("save_strategy: write to \"" + path + "\" failed");
    }
}

Strategy load_strategy(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ValidationError("load_strategy: cannot open \"" + path + "\"");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return strategy_from_json(buffer.str());
}

} // namespace qrac::io
