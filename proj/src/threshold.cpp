#include "metacomb/threshold.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>

#include "metacomb/core_math.hpp"

namespace metacomb {

using ordered_json = nlohmann::ordered_json;

void GridSpec::validate() const {
    if (!(base > 0.0 && base < 1.0 && max > 0.0 && max < 1.0)) {
        throw ParameterError("grid base and max must lie in (0,1)");
    }
    if (base > max) throw ParameterError("grid base exceeds max");
    if (!(step > 0.0)) throw ParameterError("grid step must be > 0");
}

std::size_t GridSpec::size() const {
    validate();
    std::size_t m = static_cast<std::size_t>(std::floor((max - base) / step + 1e-9));
    // Guard against the last point drifting past max by more than rounding.
    while (m > 0 && point(m) > max + 1e-12) --m;
    return m + 1;
}

namespace {

void check_threshold_inputs(std::span<const double> scores, std::span<const std::uint8_t> gold,
                            const GridSpec& grid) {
    grid.validate();
    if (scores.empty()) throw ParameterError("threshold training needs at least one sample");
    if (scores.size() != gold.size()) {
        throw DimensionError("threshold training: " + std::to_string(scores.size()) +
                             " scores vs " + std::to_string(gold.size()) + " labels");
    }
    if (grid.size() == 0) throw ParameterError("threshold grid has no points");
}

} // namespace

ThresholdSearchResult train_threshold(std::span<const double> scores,
                                      std::span<const std::uint8_t> gold, const GridSpec& grid) {
    check_threshold_inputs(scores, gold, grid);
    const std::size_t n = scores.size();

    // Sort scores ascending, carrying labels; positives_above[i] counts gold
    // positives among sorted[i..n-1].
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
    std::vector<double> sorted(n);
    std::vector<std::int64_t> positives_above(n + 1, 0);
    for (std::size_t i = 0; i < n; ++i) sorted[i] = scores[order[i]];
    for (std::size_t i = n; i-- > 0;) {
        positives_above[i] = positives_above[i + 1] + (gold[order[i]] ? 1 : 0);
    }
    const std::int64_t total_pos = positives_above[0];

    ThresholdSearchResult best{0.0, -1.0};
    for (std::size_t m = 0; m < grid.size(); ++m) {
        const double t = grid.point(m);
        // Predicted positive: score >= t.
        const auto it = std::lower_bound(sorted.begin(), sorted.end(), t);
        const std::size_t first = static_cast<std::size_t>(it - sorted.begin());
        const std::int64_t tp = positives_above[first];
        const std::int64_t fp = static_cast<std::int64_t>(n - first) - tp;
        const std::int64_t fn = total_pos - tp;
        const double den = static_cast<double>(2 * tp + fp + fn);
        const double f1 = den > 0.0 ? static_cast<double>(2 * tp) / den : 0.0;
        if (f1 > best.f1) best = {t, f1};
    }
    return best;
}

ThresholdSearchResult brute_force_threshold_oracle(std::span<const double> scores,
                                                   std::span<const std::uint8_t> gold,
                                                   const GridSpec& grid) {
    check_threshold_inputs(scores, gold, grid);
    ThresholdSearchResult best{0.0, -1.0};
    for (std::size_t m = 0; m < grid.size(); ++m) {
        const double t = grid.point(m);
        ConfusionCounts c;
        for (std::size_t i = 0; i < scores.size(); ++i) {
            const bool pred = assign_class(scores[i], t);
            const bool g = gold[i] != 0;
            if (g && pred) ++c.tp;
            else if (!g && pred) ++c.fp;
            else if (g && !pred) ++c.fn;
            else ++c.tn;
        }
        const double f1 = f1_from_counts(c).f1;
        if (f1 > best.f1) best = {t, f1};
    }
    return best;
}

double ThresholdVector::threshold_for(const std::string& class_name) const {
    for (std::size_t c = 0; c < class_names.size(); ++c) {
        if (class_names[c] == class_name) return thresholds[c];
    }
    throw DataError("no trained threshold for class '" + class_name + "'");
}

ThresholdVector train_cs_cut(const PredictionTable& combined, const GoldLabels& gold,
                             const GridSpec& grid) {
    grid.validate();
    combined.validate();
    if (combined.sample_ids != gold.sample_ids) {
        throw DataError("combined predictions and gold labels disagree on sample ids");
    }
    if (combined.class_names != gold.class_names()) {
        throw DataError("combined predictions and gold labels disagree on class columns");
    }
    ThresholdVector tv;
    tv.class_names = combined.class_names;
    tv.grid = grid;
    for (std::size_t c = 0; c < combined.cols(); ++c) {
        try {
            const auto r = train_threshold(combined.column(c), gold.labels.column(c), grid);
            tv.thresholds.push_back(r.threshold);
            tv.achieved_f1.push_back(r.f1);
        } catch (const ParameterError& e) {
            throw ParameterError("class '" + combined.class_names[c] + "': " + e.what());
        }
    }
    return tv;
}

LabelMatrix apply_thresholds(const PredictionTable& combined, const ThresholdVector& tv,
                             bool fallback_argmax) {
    std::vector<double> per_class_t(combined.cols());
    for (std::size_t c = 0; c < combined.cols(); ++c) {
        per_class_t[c] = tv.threshold_for(combined.class_names[c]);
    }
    LabelMatrix out(combined.class_names, combined.rows());
    for (std::size_t i = 0; i < combined.rows(); ++i) {
        bool any = false;
        for (std::size_t c = 0; c < combined.cols(); ++c) {
            const bool pos = assign_class(combined.at(i, c), per_class_t[c]);
            out.set(i, c, pos);
            any = any || pos;
        }
        if (!any && fallback_argmax) {
            std::size_t arg = 0;
            for (std::size_t c = 1; c < combined.cols(); ++c) {
                if (combined.at(i, c) > combined.at(i, arg)) arg = c;
            }
            out.set(i, arg, true);
        }
    }
    return out;
}

ThresholdVector uniform_thresholds(std::span<const std::string> class_names, double t) {
    if (!(t > 0.0 && t < 1.0)) throw ParameterError("threshold must lie in (0,1)");
    ThresholdVector tv;
    tv.class_names.assign(class_names.begin(), class_names.end());
    tv.thresholds.assign(class_names.size(), t);
    tv.achieved_f1.assign(class_names.size(), 0.0);
    tv.grid = GridSpec{t, t, 1.0};
    return tv;
}

std::string ThresholdVector::to_json_string() const {
    ordered_json j;
    j["format_version"] = "1";
    j["classes"] = class_names;
    ordered_json per = ordered_json::object();
    for (std::size_t c = 0; c < class_names.size(); ++c) {
        ordered_json e;
        e["threshold"] = thresholds[c];
        e["dev_f1"] = achieved_f1[c];
        per[class_names[c]] = e;
    }
    j["per_class"] = per;
    j["grid"] = {{"base", grid.base}, {"max", grid.max}, {"step", grid.step}};
    return j.dump(2) + "\n";
}

ThresholdVector ThresholdVector::from_json_string(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("invalid threshold JSON: ") + e.what());
    }
    try {
        if (j.at("format_version").get<std::string>() != "1") {
            throw DataError("unsupported threshold format_version");
        }
        ThresholdVector tv;
        tv.class_names = j.at("classes").get<std::vector<std::string>>();
        for (const auto& name : tv.class_names) {
            const auto& e = j.at("per_class").at(name);
            tv.thresholds.push_back(e.at("threshold").get<double>());
            tv.achieved_f1.push_back(e.at("dev_f1").get<double>());
        }
        const auto& g = j.at("grid");
        tv.grid.base = g.at("base").get<double>();
        tv.grid.max = g.at("max").get<double>();
        tv.grid.step = g.at("step").get<double>();
        return tv;
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("invalid threshold JSON: ") + e.what());
    }
}

} // namespace metacomb
