#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hpland {

enum class Scale { Linear, Log };

struct HyperparameterDef {
    std::string name;
    double low = 0.0;
    double high = 0.0;
    Scale scale = Scale::Linear;
};

// A point in the unit cube [0,1]^n, ordered as SearchSpace::dims().
struct UnitVector {
    std::vector<double> coords;
};

// A point in raw hyperparameter units, ordered as SearchSpace::dims().
struct ConfigVector {
    std::vector<double> values;
};

// Named hyperparameter axes plus the monotone map between the unit cube and
// raw values: linear axes interpolate directly, log axes interpolate in
// log10 space.
class SearchSpace {
public:
    // Validates: non-empty, unique names, low < high, log scale needs low > 0.
    explicit SearchSpace(std::vector<HyperparameterDef> dims);

    std::size_t dimension() const { return dims_.size(); }
    const std::vector<HyperparameterDef>& dims() const { return dims_; }
    const HyperparameterDef& dim(std::size_t i) const { return dims_[i]; }

    ConfigVector to_config(const UnitVector& u) const;
    UnitVector to_unit(const ConfigVector& c) const;

    // Per-dimension forms of the transform.
    double to_config_dim(std::size_t d, double u) const;
    double to_unit_dim(std::size_t d, double value) const;

private:
    std::vector<HyperparameterDef> dims_;
};

SearchSpace build_space(std::vector<HyperparameterDef> defs);

// Euclidean distance in the unit cube. Throws on dimension mismatch.
double unit_distance(const UnitVector& a, const UnitVector& b);

// JSON file format: { "dims": [ { "name", "low", "high", "scale": "linear"|"log" } ] }
SearchSpace load_space_file(const std::filesystem::path& path);
SearchSpace space_from_json_text(std::string_view text);
std::string space_to_json_text(const SearchSpace& space);

}  // namespace hpland
