#include "hpland/search_space.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "hpland/errors.hpp"

namespace hpland {

SearchSpace::SearchSpace(std::vector<HyperparameterDef> dims) : dims_(std::move(dims)) {
    if (dims_.empty()) {
        throw ValidationError("search space needs at least one dimension");
    }
    std::set<std::string> seen;
    for (const auto& def : dims_) {
        if (def.name.empty()) {
            throw ValidationError("hyperparameter name must be non-empty");
        }
        if (!seen.insert(def.name).second) {
            throw ValidationError("duplicate hyperparameter name: " + def.name);
        }
        if (!(def.low < def.high)) {
            throw ValidationError("hyperparameter '" + def.name + "': low must be < high");
        }
        if (def.scale == Scale::Log && !(def.low > 0.0)) {
            throw ValidationError("hyperparameter '" + def.name + "': log scale requires low > 0");
        }
    }
}

SearchSpace build_space(std::vector<HyperparameterDef> defs) {
    return SearchSpace(std::move(defs));
}

double SearchSpace::to_config_dim(std::size_t d, double u) const {
    const auto& def = dims_[d];
    if (def.scale == Scale::Linear) {
        return def.low + u * (def.high - def.low);
    }
    double lo = std::log10(def.low);
    double hi = std::log10(def.high);
    return std::pow(10.0, lo + u * (hi - lo));
}

double SearchSpace::to_unit_dim(std::size_t d, double value) const {
    const auto& def = dims_[d];
    if (value < def.low || value > def.high) {
        std::ostringstream msg;
        msg << "value " << value << " out of bounds [" << def.low << ", " << def.high
            << "] for hyperparameter '" << def.name << "'";
        throw ValidationError(msg.str());
    }
    if (def.scale == Scale::Linear) {
        return (value - def.low) / (def.high - def.low);
    }
    double lo = std::log10(def.low);
    double hi = std::log10(def.high);
    return (std::log10(value) - lo) / (hi - lo);
}

ConfigVector SearchSpace::to_config(const UnitVector& u) const {
    if (u.coords.size() != dims_.size()) {
        throw ValidationError("unit vector dimension mismatch");
    }
    ConfigVector out;
    out.values.reserve(dims_.size());
    for (std::size_t d = 0; d < dims_.size(); ++d) {
        double c = u.coords[d];
        if (c < 0.0 || c > 1.0 || !std::isfinite(c)) {
            throw ValidationError("unit coordinate outside [0, 1]");
        }
        out.values.push_back(to_config_dim(d, c));
    }
    return out;
}

UnitVector SearchSpace::to_unit(const ConfigVector& c) const {
    if (c.values.size() != dims_.size()) {
        throw ValidationError("config vector dimension mismatch");
    }
    UnitVector out;
    out.coords.reserve(dims_.size());
    for (std::size_t d = 0; d < dims_.size(); ++d) {
        out.coords.push_back(to_unit_dim(d, c.values[d]));
    }
    return out;
}

double unit_distance(const UnitVector& a, const UnitVector& b) {
    if (a.coords.size() != b.coords.size()) {
        throw ValidationError("unit_distance: dimension mismatch");
    }
    double sum = 0.0;
    for (std::size_t d = 0; d < a.coords.size(); ++d) {
        double diff = a.coords[d] - b.coords[d];
        sum += diff * diff;
    }
    return std::sqrt(sum);
}

namespace {

Scale scale_from_string(const std::string& text) {
    if (text == "linear") return Scale::Linear;
    if (text == "log") return Scale::Log;
    throw ValidationError("unknown scale '" + text + "' (expected \"linear\" or \"log\")");
}

}  // namespace

SearchSpace space_from_json_text(std::string_view text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& err) {
        throw ValidationError(std::string("space JSON parse error: ") + err.what());
    }
    if (!doc.contains("dims") || !doc["dims"].is_array()) {
        throw ValidationError("space JSON must contain a \"dims\" array");
    }
    std::vector<HyperparameterDef> defs;
    for (const auto& entry : doc["dims"]) {
        HyperparameterDef def;
        try {
            def.name = entry.at("name").get<std::string>();
            def.low = entry.at("low").get<double>();
            def.high = entry.at("high").get<double>();
            def.scale = scale_from_string(entry.at("scale").get<std::string>());
        } catch (const nlohmann::json::exception& err) {
            throw ValidationError(std::string("space JSON dim entry: ") + err.what());
        }
        defs.push_back(std::move(def));
    }
    return build_space(std::move(defs));
}

SearchSpace load_space_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ValidationError("cannot open space file: " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return space_from_json_text(buf.str());
}

std::string space_to_json_text(const SearchSpace& space) {
    nlohmann::json dims = nlohmann::json::array();
    for (const auto& def : space.dims()) {
        dims.push_back({{"name", def.name},
                        {"low", def.low},
                        {"high", def.high},
                        {"scale", def.scale == Scale::Linear ? "linear" : "log"}});
    }
    return nlohmann::json{{"dims", dims}}.dump(2);
}

}  // namespace hpland
