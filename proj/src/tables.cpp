#include "metacomb/tables.hpp"

#include <cmath>
#include <unordered_set>

namespace metacomb {

const char* split_name(Split s) {
    switch (s) {
        case Split::train: return "train";
        case Split::dev: return "dev";
        case Split::test: return "test";
    }
    return "?";
}

Split parse_split(const std::string& token) {
    if (token == "train") return Split::train;
    if (token == "dev") return Split::dev;
    if (token == "test") return Split::test;
    throw DataError("unknown split token '" + token + "' (expected train|dev|test)");
}

std::vector<double> PredictionTable::column(std::size_t cls) const {
    std::vector<double> col(rows());
    for (std::size_t i = 0; i < rows(); ++i) col[i] = at(i, cls);
    return col;
}

std::size_t PredictionTable::class_index(const std::string& name) const {
    for (std::size_t c = 0; c < class_names.size(); ++c) {
        if (class_names[c] == name) return c;
    }
    throw DataError("prediction table '" + source_model + "' has no class '" + name + "'");
}

void PredictionTable::validate() const {
    if (class_names.empty()) throw DataError("prediction table has no class columns");
    if (scores.size() != rows() * cols()) {
        throw DimensionError("prediction table score matrix size mismatch");
    }
    std::unordered_set<std::string> seen;
    for (const auto& id : sample_ids) {
        if (!seen.insert(id).second) throw DataError("duplicate sample id '" + id + "'");
    }
    for (double v : scores) {
        if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
            throw DataError("score out of range [0,1] in table '" + source_model + "'");
        }
    }
}

double GoldLabels::label_cardinality() const {
    if (rows() == 0) return 0.0;
    std::size_t total = 0;
    for (std::uint8_t v : labels.values) total += v;
    return static_cast<double>(total) / static_cast<double>(rows());
}

std::vector<double> GoldLabels::class_prevalence() const {
    std::vector<double> out(labels.n_classes(), 0.0);
    if (rows() == 0) return out;
    for (std::size_t c = 0; c < labels.n_classes(); ++c) {
        std::size_t count = 0;
        for (std::size_t i = 0; i < rows(); ++i) count += labels.at(i, c);
        out[c] = static_cast<double>(count) / static_cast<double>(rows());
    }
    return out;
}

GoldLabels GoldLabels::subset(std::span<const std::size_t> indices) const {
    GoldLabels out;
    out.labels = LabelMatrix(labels.class_names, indices.size());
    out.sample_ids.reserve(indices.size());
    for (std::size_t r = 0; r < indices.size(); ++r) {
        const std::size_t i = indices[r];
        out.sample_ids.push_back(sample_ids[i]);
        for (std::size_t c = 0; c < labels.n_classes(); ++c) {
            out.labels.set(r, c, labels.at(i, c) != 0);
        }
        if (has_groups()) out.groups.push_back(groups[i]);
        if (has_splits()) out.splits.push_back(splits[i]);
    }
    return out;
}

GoldLabels GoldLabels::filter_split(Split s) const {
    if (!has_splits()) throw DataError("gold labels carry no split column");
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < rows(); ++i) {
        if (splits[i] == s) idx.push_back(i);
    }
    return subset(idx);
}

GoldLabels GoldLabels::select_classes(std::span<const std::string> names) const {
    std::vector<std::size_t> cols;
    cols.reserve(names.size());
    for (const auto& name : names) cols.push_back(labels.class_index(name));
    GoldLabels out;
    out.sample_ids = sample_ids;
    out.groups = groups;
    out.splits = splits;
    out.labels = LabelMatrix(std::vector<std::string>(names.begin(), names.end()), rows());
    for (std::size_t i = 0; i < rows(); ++i) {
        for (std::size_t c = 0; c < cols.size(); ++c) {
            out.labels.set(i, c, labels.at(i, cols[c]) != 0);
        }
    }
    return out;
}

void GoldLabels::validate() const {
    if (labels.n_classes() == 0) throw DataError("gold labels have no class columns");
    if (labels.n_samples != rows() || labels.values.size() != rows() * labels.n_classes()) {
        throw DimensionError("gold label matrix size mismatch");
    }
    std::unordered_set<std::string> seen;
    for (const auto& id : sample_ids) {
        if (!seen.insert(id).second) throw DataError("duplicate sample id '" + id + "'");
    }
    for (std::uint8_t v : labels.values) {
        if (v > 1) throw DataError("non-binary gold label cell");
    }
    if (!groups.empty() && groups.size() != rows()) {
        throw DimensionError("group column length mismatch");
    }
    if (!splits.empty() && splits.size() != rows()) {
        throw DimensionError("split column length mismatch");
    }
}

PredictionTable table_subset(const PredictionTable& table, std::span<const std::size_t> indices) {
    PredictionTable out;
    out.class_names = table.class_names;
    out.source_model = table.source_model;
    out.sample_ids.reserve(indices.size());
    out.scores.resize(indices.size() * table.cols());
    for (std::size_t r = 0; r < indices.size(); ++r) {
        out.sample_ids.push_back(table.sample_ids[indices[r]]);
        for (std::size_t c = 0; c < table.cols(); ++c) {
            out.scores[r * table.cols() + c] = table.at(indices[r], c);
        }
    }
    return out;
}

} // namespace metacomb
