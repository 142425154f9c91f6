#include "metacomb/theorem.hpp"

#include <json.hpp>

#include <cmath>

namespace metacomb {

using ordered_json = nlohmann::ordered_json;

double class_norm(std::span<const std::uint8_t> assignments) {
    std::size_t ones = 0;
    for (std::uint8_t v : assignments) ones += v ? 1 : 0;
    return std::sqrt(static_cast<double>(ones));
}

double class_diff_norm(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b) {
    if (a.size() != b.size()) {
        throw DimensionError("class_diff_norm: vectors of length " + std::to_string(a.size()) +
                             " and " + std::to_string(b.size()));
    }
    std::size_t diff = 0;
    for (std::size_t i = 0; i < a.size(); ++i) diff += (a[i] != 0) != (b[i] != 0) ? 1 : 0;
    return std::sqrt(static_cast<double>(diff));
}

std::vector<double> interpolation_scores(const CombinerParams& params,
                                         const std::vector<std::vector<double>>& columns) {
    const double w_sum = params.weight_sum();
    if (w_sum == 0.0) {
        throw SingularityError("interpolation predictor undefined: weight sum is zero");
    }
    if (columns.empty() || columns.size() != params.weights.size()) {
        throw DimensionError("interpolation_scores: column count does not match weights");
    }
    const std::size_t n = columns.front().size();
    std::vector<double> out(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double y = 0.0;
        for (std::size_t k = 0; k < columns.size(); ++k) y += params.weights[k] * columns[k][i];
        out[i] = y / std::abs(w_sum);
    }
    return out;
}

BoundInterval bound_interval(const ClassNorms& norms, SignCase sign_case) {
    if (norms.u_norm <= 0.0) {
        throw DegenerateClassError("bound_interval: class norm |u| is zero");
    }
    const double u = norms.u_norm;
    const double e_y = norms.err_combined;
    const double e_yh = norms.err_interp;

    BoundInterval iv;
    iv.sign_case = sign_case;
    iv.valid = (u - e_yh) > 0.0;
    if (!iv.valid) return iv;
    if (sign_case == SignCase::positive) {
        iv.lo = (u - e_y) / (u + e_yh);
        iv.hi = (u + e_y) / (u - e_yh);
    } else {
        iv.hi = -(u - e_y) / (u + e_yh);
        iv.lo = -(u + e_y) / (u - e_yh);
    }
    return iv;
}

namespace {

std::vector<std::uint8_t> threshold_assignments(std::span<const double> scores, double t) {
    std::vector<std::uint8_t> out(scores.size());
    for (std::size_t i = 0; i < scores.size(); ++i) out[i] = assign_class(scores[i], t) ? 1 : 0;
    return out;
}

} // namespace

VerificationReport verify_theorem1(const CombinerModel& model,
                                   std::span<const PredictionTable> tables,
                                   const GoldLabels& gold, double t) {
    if (!(t > 0.0 && t < 1.0)) throw ParameterError("norm threshold must lie in (0,1)");
    const auto ordered = align_tables(model.model_ids, tables);
    if (ordered.front()->sample_ids != gold.sample_ids) {
        throw DataError("verification tables and gold labels disagree on sample ids");
    }
    if (ordered.front()->class_names != model.class_names ||
        gold.class_names() != model.class_names) {
        throw DataError("verification tables/gold do not match the model's class columns");
    }

    VerificationReport report;
    report.threshold = t;
    for (std::size_t c = 0; c < model.class_names.size(); ++c) {
        const CombinerParams& params = model.per_class[c];
        ClassVerification v;
        v.class_name = model.class_names[c];
        v.weight_sum = params.weight_sum();
        v.norms.threshold = t;

        const auto u = gold.labels.column(c);
        v.norms.u_norm = class_norm(u);

        if (!params.sign_homogeneous()) {
            v.skip_reason = "mixed_sign_weights";
            report.per_class.push_back(std::move(v));
            continue;
        }
        if (v.weight_sum == 0.0) {
            v.skip_reason = "singular_weight_sum";
            report.per_class.push_back(std::move(v));
            continue;
        }
        if (v.norms.u_norm <= 0.0) {
            v.skip_reason = "degenerate_class";
            report.per_class.push_back(std::move(v));
            continue;
        }

        std::vector<std::vector<double>> columns;
        columns.reserve(ordered.size());
        for (const PredictionTable* tab : ordered) columns.push_back(tab->column(c));

        const std::size_t n = gold.rows();
        std::vector<double> combined(n);
        for (std::size_t i = 0; i < n; ++i) {
            double y = 0.0;
            for (std::size_t k = 0; k < columns.size(); ++k) y += params.weights[k] * columns[k][i];
            combined[i] = biased_sigmoid(params, y);
        }
        const auto interp = interpolation_scores(params, columns);
        std::vector<double> interp_sig(n);
        for (std::size_t i = 0; i < n; ++i) interp_sig[i] = biased_sigmoid(params, interp[i]);

        v.norms.err_combined = class_diff_norm(u, threshold_assignments(combined, t));
        v.norms.err_interp = class_diff_norm(u, threshold_assignments(interp_sig, t));

        const SignCase sc = v.weight_sum > 0.0 ? SignCase::positive : SignCase::negative;
        v.interval = bound_interval(v.norms, sc);
        if (!v.interval.valid) {
            v.skip_reason = "invalid_interval";
            report.per_class.push_back(std::move(v));
            continue;
        }
        v.applicable = true;
        v.contained = v.interval.lo <= v.weight_sum && v.weight_sum <= v.interval.hi;
        report.per_class.push_back(std::move(v));
    }
    return report;
}

std::string VerificationReport::to_json_string() const {
    ordered_json j;
    j["format_version"] = "1";
    j["threshold"] = threshold;
    ordered_json per = ordered_json::object();
    for (const auto& v : per_class) {
        ordered_json e;
        e["weight_sum"] = v.weight_sum;
        e["applicable"] = v.applicable;
        if (v.applicable) {
            e["lo"] = v.interval.lo;
            e["hi"] = v.interval.hi;
            e["sign_case"] = v.interval.sign_case == SignCase::positive ? "positive" : "negative";
            e["contained"] = v.contained;
        } else {
            e["skip_reason"] = v.skip_reason;
        }
        e["norms"] = {{"u", v.norms.u_norm},
                      {"err_combined", v.norms.err_combined},
                      {"err_interp", v.norms.err_interp}};
        per[v.class_name] = e;
    }
    j["per_class"] = per;
    return j.dump(2) + "\n";
}

} // namespace metacomb
