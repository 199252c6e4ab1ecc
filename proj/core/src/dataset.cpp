#include "hpland/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

#include "hpland/errors.hpp"

namespace hpland {

namespace {

// Shortest decimal text that parses back to the exact same double.
std::string format_double(double value) {
    char buffer[64];
    auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
    if (ec != std::errc()) {
        throw PipelineError("format_double: conversion failed");
    }
    return std::string(buffer, ptr);
}

double parse_double(const std::string& text, const char* field) {
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw ValidationError(std::string("csv: malformed ") + field + " value '" + text + "'");
    }
    return value;
}

template <typename Int>
Int parse_integer(const std::string& text, const char* field) {
    Int value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw ValidationError(std::string("csv: malformed ") + field + " value '" + text + "'");
    }
    return value;
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return fields;
}

std::string expected_header(const SearchSpace& space) {
    std::string header = "phase_index,checkpoint_step,conf_index,seed,episode,eval_kind";
    for (const auto& dim : space.dims()) {
        header += ",unit." + dim.name;
    }
    for (const auto& dim : space.dims()) {
        header += ",hp." + dim.name;
    }
    header += ",return";
    return header;
}

// Row ordering used for CSV emission: (phase, conf, seed, kind, episode,
// checkpoint). Episode numbers are unique per (pair, kind), so this is a
// total order for pipeline output.
auto row_key(const SampleRow& row) {
    return std::make_tuple(row.phase_index, row.conf_index, row.seed,
                           static_cast<int>(row.eval_kind), row.episode, row.checkpoint_step);
}

}  // namespace

std::string eval_kind_name(EvalKind kind) {
    return kind == EvalKind::Landscape ? "landscape" : "final";
}

EvalKind eval_kind_from_name(const std::string& name) {
    if (name == "landscape") {
        return EvalKind::Landscape;
    }
    if (name == "final") {
        return EvalKind::Final;
    }
    throw ValidationError("csv: unknown eval_kind '" + name + "'");
}

void LandscapeDataset::add_row(SampleRow row) {
    const std::size_t n = space_.dimension();
    if (row.unit.coords.size() != n || row.config.values.size() != n) {
        throw ValidationError("dataset: row dimension does not match the space");
    }
    if (!std::isfinite(row.ret)) {
        throw ValidationError("dataset: non-finite return");
    }
    if (row.conf_index < 0) {
        throw ValidationError("dataset: negative configuration index");
    }
    // to_config re-checks the [0,1] coordinate range.
    const ConfigVector expected = space_.to_config(row.unit);
    for (std::size_t d = 0; d < n; ++d) {
        const double want = expected.values[d];
        const double got = row.config.values[d];
        if (std::abs(got - want) > 1e-9 * std::max(1.0, std::abs(want))) {
            throw ValidationError("dataset: raw value of '" + space_.dims()[d].name +
                                  "' inconsistent with its unit coordinate");
        }
    }
    rows_.push_back(std::move(row));
}

void LandscapeDataset::sort_rows() {
    std::stable_sort(rows_.begin(), rows_.end(),
                     [](const SampleRow& a, const SampleRow& b) { return row_key(a) < row_key(b); });
}

PerConfigStats aggregate(const LandscapeDataset& ds, EvalKind kind, int phase_index) {
    std::map<int, std::vector<double>> pooled;
    int max_conf = -1;
    for (const auto& row : ds.rows()) {
        if (row.phase_index != phase_index) {
            continue;
        }
        max_conf = std::max(max_conf, row.conf_index);
        if (row.eval_kind == kind) {
            pooled[row.conf_index].push_back(row.ret);
        }
    }
    if (pooled.empty()) {
        throw ValidationError("aggregate: no rows for phase " + std::to_string(phase_index) +
                              ", kind " + eval_kind_name(kind));
    }
    std::map<int, UnitVector> units;
    for (const auto& row : ds.rows()) {
        if (row.phase_index == phase_index && row.eval_kind == kind) {
            units.emplace(row.conf_index, row.unit);
        }
    }

    PerConfigStats stats;
    stats.phase_index = phase_index;
    stats.eval_kind = kind;
    for (int conf = 0; conf <= max_conf; ++conf) {
        auto it = pooled.find(conf);
        if (it == pooled.end()) {
            throw ValidationError("aggregate: configuration " + std::to_string(conf) +
                                  " has no rows for phase " + std::to_string(phase_index) +
                                  ", kind " + eval_kind_name(kind));
        }
        const std::vector<double>& returns = it->second;
        ConfigStats entry;
        entry.conf_index = conf;
        entry.unit = units.at(conf);
        entry.iqm = iqm(returns);
        entry.q_lower = quantile(returns, 0.025);
        entry.q_upper = quantile(returns, 0.975);
        entry.sample_count = static_cast<int>(returns.size());
        stats.configs.push_back(std::move(entry));
    }
    return stats;
}

NormalizedStats normalize(const std::vector<PerConfigStats>& stats, NormalizationScope scope) {
    if (stats.empty()) {
        throw ValidationError("normalize: no per-config statistics given");
    }
    auto collect_values = [](const PerConfigStats& phase, std::vector<double>& out) {
        for (const auto& entry : phase.configs) {
            out.push_back(entry.q_lower);
            out.push_back(entry.iqm);
            out.push_back(entry.q_upper);
        }
    };

    NormalizedStats result;
    result.scope = scope;
    result.phases = stats;
    if (scope == NormalizationScope::PooledAllPhases) {
        std::vector<double> values;
        for (const auto& phase : stats) {
            collect_values(phase, values);
        }
        const Normalization affine = fit_normalization(values);
        result.affines.assign(stats.size(), affine);
    } else {
        result.affines.reserve(stats.size());
        for (const auto& phase : stats) {
            std::vector<double> values;
            collect_values(phase, values);
            result.affines.push_back(fit_normalization(values));
        }
    }
    for (std::size_t i = 0; i < result.phases.size(); ++i) {
        const Normalization& affine = result.affines[i];
        for (auto& entry : result.phases[i].configs) {
            entry.iqm = affine.normalize(entry.iqm);
            entry.q_lower = affine.normalize(entry.q_lower);
            entry.q_upper = affine.normalize(entry.q_upper);
        }
    }
    return result;
}

NormalizedDataset normalize(const LandscapeDataset& ds, NormalizationScope scope) {
    if (ds.empty()) {
        throw ValidationError("normalize: empty dataset");
    }
    std::set<int> phases;
    for (const auto& row : ds.rows()) {
        phases.insert(row.phase_index);
    }

    NormalizedDataset result{LandscapeDataset(ds.space()), {}, {}, scope};
    result.phase_order.assign(phases.begin(), phases.end());
    std::map<int, Normalization> by_phase;
    if (scope == NormalizationScope::PooledAllPhases) {
        std::vector<double> values;
        for (const auto& row : ds.rows()) {
            values.push_back(row.ret);
        }
        const Normalization affine = fit_normalization(values);
        for (int phase : result.phase_order) {
            by_phase[phase] = affine;
        }
    } else {
        for (int phase : result.phase_order) {
            std::vector<double> values;
            for (const auto& row : ds.rows()) {
                if (row.phase_index == phase) {
                    values.push_back(row.ret);
                }
            }
            by_phase[phase] = fit_normalization(values);
        }
    }
    for (int phase : result.phase_order) {
        result.affines.push_back(by_phase.at(phase));
    }
    for (SampleRow row : ds.rows()) {
        row.ret = by_phase.at(row.phase_index).normalize(row.ret);
        result.dataset.add_row(std::move(row));
    }
    return result;
}

std::string to_csv(const LandscapeDataset& ds) {
    std::vector<const SampleRow*> ordered;
    ordered.reserve(ds.rows().size());
    for (const auto& row : ds.rows()) {
        ordered.push_back(&row);
    }
    std::stable_sort(ordered.begin(), ordered.end(),
                     [](const SampleRow* a, const SampleRow* b) { return row_key(*a) < row_key(*b); });

    std::string out = expected_header(ds.space());
    out += '\n';
    for (const SampleRow* row : ordered) {
        out += std::to_string(row->phase_index);
        out += ',';
        out += std::to_string(row->checkpoint_step);
        out += ',';
        out += std::to_string(row->conf_index);
        out += ',';
        out += std::to_string(row->seed);
        out += ',';
        out += std::to_string(row->episode);
        out += ',';
        out += eval_kind_name(row->eval_kind);
        for (double coord : row->unit.coords) {
            out += ',';
            out += format_double(coord);
        }
        for (double value : row->config.values) {
            out += ',';
            out += format_double(value);
        }
        out += ',';
        out += format_double(row->ret);
        out += '\n';
    }
    return out;
}

void write_csv(const LandscapeDataset& ds, const std::filesystem::path& path) {
    std::ofstream file(path, std::ios::binary);
    if (!file) {
        throw PipelineError("write_csv: cannot open '" + path.string() + "' for writing");
    }
    file << to_csv(ds);
    if (!file) {
        throw PipelineError("write_csv: failed writing '" + path.string() + "'");
    }
}

LandscapeDataset dataset_from_csv_text(const std::string& text, const SearchSpace& space) {
    std::istringstream stream(text);
    std::string line;
    if (!std::getline(stream, line)) {
        throw ValidationError("csv: empty input");
    }
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
    if (line != expected_header(space)) {
        throw ValidationError("csv: header does not match the expected schema for this space");
    }

    const std::size_t n = space.dimension();
    const std::size_t field_count = 6 + 2 * n + 1;
    LandscapeDataset ds(space);
    std::size_t line_number = 1;
    while (std::getline(stream, line)) {
        ++line_number;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        const std::vector<std::string> fields = split_fields(line);
        if (fields.size() != field_count) {
            throw ValidationError("csv: line " + std::to_string(line_number) + " has " +
                                  std::to_string(fields.size()) + " fields, expected " +
                                  std::to_string(field_count));
        }
        SampleRow row;
        row.phase_index = parse_integer<int>(fields[0], "phase_index");
        row.checkpoint_step = parse_integer<long long>(fields[1], "checkpoint_step");
        row.conf_index = parse_integer<int>(fields[2], "conf_index");
        row.seed = parse_integer<std::uint64_t>(fields[3], "seed");
        row.episode = parse_integer<int>(fields[4], "episode");
        row.eval_kind = eval_kind_from_name(fields[5]);
        row.unit.coords.resize(n);
        row.config.values.resize(n);
        for (std::size_t d = 0; d < n; ++d) {
            row.unit.coords[d] = parse_double(fields[6 + d], "unit coordinate");
            row.config.values[d] = parse_double(fields[6 + n + d], "hp value");
        }
        row.ret = parse_double(fields[6 + 2 * n], "return");
        ds.add_row(std::move(row));
    }
    return ds;
}

LandscapeDataset read_csv(const std::filesystem::path& path, const SearchSpace& space) {
    std::ifstream file(path, std::ios::binary);
    if (!file) {
        throw ValidationError("read_csv: cannot open '" + path.string() + "'");
    }
    std::ostringstream buffer;
    buffer << file.rdbuf();
    return dataset_from_csv_text(buffer.str(), space);
}

}  // namespace hpland
