#include "metacomb/metrics.hpp"

#include <json.hpp>

#include <algorithm>

namespace metacomb {

using ordered_json = nlohmann::ordered_json;

const char* accuracy_mode_name(AccuracyMode mode) {
    return mode == AccuracyMode::exact_match ? "exact" : "labelwise";
}

AccuracyMode parse_accuracy_mode(const std::string& token) {
    if (token == "exact") return AccuracyMode::exact_match;
    if (token == "labelwise") return AccuracyMode::label_wise;
    throw ParameterError("unknown accuracy mode '" + token + "' (expected exact|labelwise)");
}

ConfusionCounts confusion(std::span<const std::uint8_t> gold, std::span<const std::uint8_t> pred) {
    if (gold.size() != pred.size()) {
        throw DimensionError("confusion: gold length " + std::to_string(gold.size()) +
                             " vs pred length " + std::to_string(pred.size()));
    }
    ConfusionCounts c;
    for (std::size_t i = 0; i < gold.size(); ++i) {
        const bool g = gold[i] != 0;
        const bool p = pred[i] != 0;
        if (g && p) ++c.tp;
        else if (!g && p) ++c.fp;
        else if (g && !p) ++c.fn;
        else ++c.tn;
    }
    return c;
}

ClassMetrics f1_from_counts(const ConfusionCounts& c) {
    ClassMetrics m;
    const double p_den = static_cast<double>(c.tp + c.fp);
    const double r_den = static_cast<double>(c.tp + c.fn);
    const double f_den = static_cast<double>(2 * c.tp + c.fp + c.fn);
    m.precision = p_den > 0.0 ? static_cast<double>(c.tp) / p_den : 0.0;
    m.recall = r_den > 0.0 ? static_cast<double>(c.tp) / r_den : 0.0;
    m.f1 = f_den > 0.0 ? static_cast<double>(2 * c.tp) / f_den : 0.0;
    return m;
}

double macro_f1(std::span<const ClassMetrics> per_class) {
    if (per_class.empty()) throw ParameterError("macro_f1: empty class list");
    double s = 0.0;
    for (const auto& m : per_class) s += m.f1;
    return s / static_cast<double>(per_class.size());
}

double macro_f1_values(std::span<const double> f1s) {
    if (f1s.empty()) throw ParameterError("macro_f1: empty class list");
    double s = 0.0;
    for (double v : f1s) s += v;
    return s / static_cast<double>(f1s.size());
}

static void check_aligned(const LabelMatrix& gold, const LabelMatrix& pred) {
    if (gold.n_samples != pred.n_samples) {
        throw DimensionError("accuracy: gold has " + std::to_string(gold.n_samples) +
                             " samples, pred has " + std::to_string(pred.n_samples));
    }
    if (gold.class_names != pred.class_names) {
        throw DimensionError("accuracy: gold and pred class sets differ");
    }
}

double accuracy(const LabelMatrix& gold, const LabelMatrix& pred, AccuracyMode mode) {
    check_aligned(gold, pred);
    if (gold.n_samples == 0) throw DimensionError("accuracy: no samples");
    const std::size_t n = gold.n_samples;
    const std::size_t nc = gold.n_classes();
    if (mode == AccuracyMode::exact_match) {
        std::size_t hits = 0;
        for (std::size_t i = 0; i < n; ++i) {
            bool same = true;
            for (std::size_t c = 0; c < nc; ++c) {
                if ((gold.at(i, c) != 0) != (pred.at(i, c) != 0)) { same = false; break; }
            }
            if (same) ++hits;
        }
        return static_cast<double>(hits) / static_cast<double>(n);
    }
    std::size_t hits = 0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t c = 0; c < nc; ++c) {
            if ((gold.at(i, c) != 0) == (pred.at(i, c) != 0)) ++hits;
        }
    }
    return static_cast<double>(hits) / static_cast<double>(n * nc);
}

std::map<std::string, double> grouped_accuracy(const LabelMatrix& gold, const LabelMatrix& pred,
                                               std::span<const std::string> groups,
                                               AccuracyMode mode) {
    check_aligned(gold, pred);
    if (groups.size() != gold.n_samples) {
        throw DataError("grouped_accuracy: " + std::to_string(groups.size()) + " group tags for " +
                        std::to_string(gold.n_samples) + " samples");
    }
    for (std::size_t i = 0; i < groups.size(); ++i) {
        if (groups[i].empty()) {
            throw DataError("grouped_accuracy: sample " + std::to_string(i) + " has no group tag");
        }
    }
    // Partition sample indices, then reuse accuracy() on each slice.
    std::map<std::string, std::vector<std::size_t>> members;
    for (std::size_t i = 0; i < groups.size(); ++i) members[groups[i]].push_back(i);

    std::map<std::string, double> out;
    for (const auto& [tag, idx] : members) {
        LabelMatrix g(gold.class_names, idx.size());
        LabelMatrix p(gold.class_names, idx.size());
        for (std::size_t r = 0; r < idx.size(); ++r) {
            for (std::size_t c = 0; c < gold.n_classes(); ++c) {
                g.set(r, c, gold.at(idx[r], c) != 0);
                p.set(r, c, pred.at(idx[r], c) != 0);
            }
        }
        out[tag] = accuracy(g, p, mode);
    }
    return out;
}

EvaluationReport evaluate_labels(const LabelMatrix& gold, const LabelMatrix& pred,
                                 AccuracyMode mode, std::span<const std::string> groups) {
    check_aligned(gold, pred);
    EvaluationReport report;
    report.class_names = gold.class_names;
    report.accuracy_mode = mode;

    std::vector<double> f1s;
    for (std::size_t c = 0; c < gold.n_classes(); ++c) {
        ClassReport cr;
        cr.counts = confusion(gold.column(c), pred.column(c));
        cr.metrics = f1_from_counts(cr.counts);
        f1s.push_back(cr.metrics.f1);
        report.per_class.push_back(cr);
    }
    report.macro_f1 = macro_f1_values(f1s);
    report.accuracy = accuracy(gold, pred, mode);
    if (!groups.empty()) {
        report.per_group = grouped_accuracy(gold, pred, groups, mode);
    }
    return report;
}

std::string EvaluationReport::to_json_string() const {
    ordered_json j;
    j["format_version"] = "1";
    ordered_json classes = ordered_json::object();
    for (std::size_t c = 0; c < class_names.size(); ++c) {
        const auto& cr = per_class[c];
        ordered_json e;
        e["tp"] = cr.counts.tp;
        e["fp"] = cr.counts.fp;
        e["fn"] = cr.counts.fn;
        e["tn"] = cr.counts.tn;
        e["precision"] = cr.metrics.precision;
        e["recall"] = cr.metrics.recall;
        e["f1"] = cr.metrics.f1;
        classes[class_names[c]] = e;
    }
    j["per_class"] = classes;
    j["macro_f1"] = macro_f1;
    j["accuracy"] = accuracy;
    j["accuracy_mode"] = accuracy_mode_name(accuracy_mode);
    if (!per_group.empty()) {
        ordered_json g = ordered_json::object();
        for (const auto& [tag, acc] : per_group) g[tag] = acc;  // std::map is sorted
        j["per_group"] = g;
    }
    return j.dump(2) + "\n";
}

} // namespace metacomb
