#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "metacomb/tables.hpp"

namespace metacomb {

// CSV schema for predictions: header `sample_id,<class>,...`, one decimal
// score per class cell.  UTF-8, comma-separated, \n or \r\n line endings,
// no quoting.  Scores outside [0,1] or malformed cells are rejected with the
// offending row and column named; a rejected file never yields a table.
PredictionTable load_predictions(const std::filesystem::path& path);
void save_predictions(const PredictionTable& table, const std::filesystem::path& path);

// CSV schema for gold labels: header `sample_id,<class>,...[,group][,split]`.
// Class cells must be 0 or 1; `group` is any non-empty tag; `split` is one of
// train|dev|test.  The reserved column names `group` and `split` cannot be
// used as class names.
GoldLabels load_gold(const std::filesystem::path& path);
void save_gold(const GoldLabels& gold, const std::filesystem::path& path);

// Five-category label taxonomy assumed by the default binary mapping.
extern const std::vector<std::string> kDefaultTaxonomy;

struct BinaryMappingConfig {
    std::vector<std::string> hateful_classes{"Identity-directed", "Affiliation-directed",
                                             "Person-directed"};
    std::vector<std::string> non_hateful_classes{"Neutral", "Counter Speech"};
    std::vector<std::string> drop_classes{};  // rows with any of these set are removed
    std::string positive_name{"Hateful"};
    std::string negative_name{"Non-hateful"};
};

// Collapses a multi-label taxonomy to a single-label binary one: a sample is
// positive iff any hateful class is set, regardless of co-occurring
// non-hateful labels.  Every input class must appear in exactly one of the
// configured lists.  Output columns are [positive, negative] and sum to 1
// per sample.
GoldLabels binary_mapping(const GoldLabels& gold, const BinaryMappingConfig& cfg = {});

// Shortest round-trip decimal formatting used across all CSV/JSON writers.
std::string format_double(double v);

// Whole-file helpers; writes go through a temp file and atomic rename.
std::string read_text_file(const std::filesystem::path& path);
void write_text_file_atomic(const std::filesystem::path& path, const std::string& content);

} // namespace metacomb
