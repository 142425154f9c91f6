#include "metacomb/synthgen.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>

#include "metacomb/data_io.hpp"
#include "metacomb/rng.hpp"

namespace metacomb {

using ordered_json = nlohmann::ordered_json;

void SyntheticSpec::validate() const {
    if (n_samples == 0) throw ParameterError("synthetic spec: n_samples must be > 0");
    if (class_names.empty()) throw ParameterError("synthetic spec: no classes");
    if (priors.size() != class_names.size()) {
        throw ParameterError("synthetic spec: priors not aligned with classes");
    }
    for (double p : priors) {
        if (!(p > 0.0 && p < 1.0)) throw ParameterError("synthetic spec: priors must lie in (0,1)");
    }
    if (label_mode == LabelMode::categorical) {
        double s = 0.0;
        for (double p : priors) s += p;
        if (std::abs(s - 1.0) > 1e-9) {
            throw ParameterError("synthetic spec: categorical priors must sum to 1");
        }
    }
    if (scored_classes.empty()) throw ParameterError("synthetic spec: no scored classes");
    for (const auto& sc : scored_classes) {
        if (std::find(class_names.begin(), class_names.end(), sc) == class_names.end()) {
            throw ParameterError("synthetic spec: scored class '" + sc + "' is not a class");
        }
    }
    if (models.empty()) throw ParameterError("synthetic spec: no models");
    for (const auto& m : models) {
        if (m.id.empty()) throw ParameterError("synthetic spec: model with empty id");
        if (m.shapes.size() != scored_classes.size()) {
            throw ParameterError("synthetic spec: model '" + m.id +
                                 "' shapes not aligned with scored classes");
        }
        for (const auto& s : m.shapes) {
            if (!(s.pos.alpha > 0.0 && s.pos.beta > 0.0 && s.neg.alpha > 0.0 && s.neg.beta > 0.0)) {
                throw ParameterError("synthetic spec: Beta parameters must be > 0");
            }
        }
    }
    for (std::size_t i = 0; i < models.size(); ++i) {
        for (std::size_t j = i + 1; j < models.size(); ++j) {
            if (models[i].id == models[j].id) {
                throw ParameterError("synthetic spec: duplicate model id '" + models[i].id + "'");
            }
        }
    }
    double fs = 0.0;
    for (double f : split_fractions) {
        if (f < 0.0) throw ParameterError("synthetic spec: negative split fraction");
        fs += f;
    }
    if (std::abs(fs - 1.0) > 1e-9) {
        throw ParameterError("synthetic spec: split fractions must sum to 1");
    }
}

SyntheticData generate(const SyntheticSpec& spec) {
    spec.validate();
    Rng rng(spec.seed);

    const std::size_t n = spec.n_samples;
    const std::size_t nc = spec.class_names.size();

    // Zero-padded ids keep lexicographic and row order identical.
    std::size_t width = 1;
    for (std::size_t v = n; v >= 10; v /= 10) ++width;

    GoldLabels gold;
    gold.labels = LabelMatrix(spec.class_names, n);
    gold.sample_ids.reserve(n);
    gold.splits.reserve(n);

    const double dev_edge = spec.split_fractions[0] + spec.split_fractions[1];
    for (std::size_t i = 0; i < n; ++i) {
        std::string id = std::to_string(i);
        id.insert(0, width - id.size(), '0');
        gold.sample_ids.push_back("s" + id);

        if (spec.label_mode == LabelMode::categorical) {
            gold.labels.set(i, rng.categorical(spec.priors), true);
        } else {
            for (std::size_t c = 0; c < nc; ++c) {
                gold.labels.set(i, c, rng.bernoulli(spec.priors[c]));
            }
        }
        const double su = rng.uniform();
        gold.splits.push_back(su < spec.split_fractions[0] ? Split::train
                              : su < dev_edge              ? Split::dev
                                                           : Split::test);
        if (!spec.group_names.empty()) {
            const std::size_t g = static_cast<std::size_t>(rng.uniform() *
                                  static_cast<double>(spec.group_names.size()));
            gold.groups.push_back(spec.group_names[std::min(g, spec.group_names.size() - 1)]);
        }
    }

    std::vector<std::size_t> scored_cols;
    for (const auto& sc : spec.scored_classes) scored_cols.push_back(gold.labels.class_index(sc));

    SyntheticData data;
    for (const auto& m : spec.models) {
        PredictionTable table;
        table.sample_ids = gold.sample_ids;
        table.class_names = spec.scored_classes;
        table.source_model = m.id;
        table.scores.resize(n * spec.scored_classes.size());
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t c = 0; c < scored_cols.size(); ++c) {
                const bool positive = gold.labels.at(i, scored_cols[c]) != 0;
                const BetaShape& sh = positive ? m.shapes[c].pos : m.shapes[c].neg;
                table.set(i, c, rng.beta(sh.alpha, sh.beta));
            }
        }
        table.validate();
        data.model_tables.push_back(std::move(table));
    }
    gold.validate();
    data.gold = std::move(gold);
    return data;
}

SyntheticSpec flip_distribution(const SyntheticSpec& spec,
                                std::optional<std::array<double, 2>> target_priors) {
    spec.validate();
    if (spec.label_mode != LabelMode::categorical || spec.class_names.size() != 2) {
        throw ParameterError("flip_distribution requires a binary categorical spec");
    }
    SyntheticSpec out = spec;
    if (target_priors) {
        const auto& t = *target_priors;
        if (!(t[0] > 0.0 && t[0] < 1.0 && t[1] > 0.0 && t[1] < 1.0) ||
            std::abs(t[0] + t[1] - 1.0) > 1e-9) {
            throw ParameterError("flip_distribution: target priors must be in (0,1) and sum to 1");
        }
        out.priors = {t[0], t[1]};
    } else {
        std::swap(out.priors[0], out.priors[1]);
    }
    return out;
}

std::string SyntheticSpec::to_json_string() const {
    ordered_json j;
    j["format_version"] = "1";
    j["n_samples"] = n_samples;
    j["label_mode"] = label_mode == LabelMode::categorical ? "categorical" : "independent";
    ordered_json classes = ordered_json::array();
    for (std::size_t c = 0; c < class_names.size(); ++c) {
        classes.push_back({{"name", class_names[c]}, {"prior", priors[c]}});
    }
    j["classes"] = classes;
    j["scored_classes"] = scored_classes;
    ordered_json ms = ordered_json::array();
    for (const auto& m : models) {
        ordered_json shapes = ordered_json::object();
        for (std::size_t c = 0; c < scored_classes.size(); ++c) {
            shapes[scored_classes[c]] = {
                {"pos", {m.shapes[c].pos.alpha, m.shapes[c].pos.beta}},
                {"neg", {m.shapes[c].neg.alpha, m.shapes[c].neg.beta}}};
        }
        ms.push_back({{"id", m.id}, {"shapes", shapes}});
    }
    j["models"] = ms;
    j["seed"] = seed;
    j["split_fractions"] = split_fractions;
    if (!group_names.empty()) j["groups"] = group_names;
    return j.dump(2) + "\n";
}

SyntheticSpec SyntheticSpec::from_json_string(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("invalid synthetic spec JSON: ") + e.what());
    }
    try {
        if (j.at("format_version").get<std::string>() != "1") {
            throw DataError("unsupported synthetic spec format_version");
        }
        SyntheticSpec spec;
        spec.n_samples = j.at("n_samples").get<std::size_t>();
        const auto mode = j.at("label_mode").get<std::string>();
        if (mode == "categorical") spec.label_mode = LabelMode::categorical;
        else if (mode == "independent") spec.label_mode = LabelMode::independent;
        else throw DataError("unknown label_mode '" + mode + "'");
        for (const auto& c : j.at("classes")) {
            spec.class_names.push_back(c.at("name").get<std::string>());
            spec.priors.push_back(c.at("prior").get<double>());
        }
        spec.scored_classes = j.at("scored_classes").get<std::vector<std::string>>();
        for (const auto& m : j.at("models")) {
            SyntheticModelSpec ms;
            ms.id = m.at("id").get<std::string>();
            for (const auto& sc : spec.scored_classes) {
                const auto& s = m.at("shapes").at(sc);
                ClassShapes cs;
                cs.pos = {s.at("pos")[0].get<double>(), s.at("pos")[1].get<double>()};
                cs.neg = {s.at("neg")[0].get<double>(), s.at("neg")[1].get<double>()};
                ms.shapes.push_back(cs);
            }
            spec.models.push_back(std::move(ms));
        }
        spec.seed = j.at("seed").get<std::uint64_t>();
        const auto sf = j.at("split_fractions").get<std::vector<double>>();
        if (sf.size() != 3) throw DataError("split_fractions must have 3 entries");
        spec.split_fractions = {sf[0], sf[1], sf[2]};
        if (j.contains("groups")) {
            spec.group_names = j.at("groups").get<std::vector<std::string>>();
        }
        spec.validate();
        return spec;
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("invalid synthetic spec JSON: ") + e.what());
    }
}

namespace {

SyntheticModelSpec symmetric_model(std::string id, double pos_alpha, double pos_beta,
                                   std::size_t n_classes) {
    SyntheticModelSpec m;
    m.id = std::move(id);
    ClassShapes cs;
    cs.pos = {pos_alpha, pos_beta};
    cs.neg = {pos_beta, pos_alpha};
    m.shapes.assign(n_classes, cs);
    return m;
}

} // namespace

SyntheticSpec binary_preset(std::uint64_t seed, std::size_t n_samples) {
    SyntheticSpec spec;
    spec.n_samples = n_samples;
    spec.label_mode = LabelMode::categorical;
    spec.class_names = {"Hateful", "Non-hateful"};
    spec.priors = {0.2, 0.8};
    spec.scored_classes = {"Hateful"};
    // Mixed quality: overlapping score distributions keep the combined
    // classifier imperfect and majority-biased, so threshold training has
    // room to move.  M4 is barely informative, M3 the strongest.
    spec.models.push_back(symmetric_model("M1", 1.5, 1.25, 1));
    spec.models.push_back(symmetric_model("M2", 1.6, 1.25, 1));
    spec.models.push_back(symmetric_model("M3", 1.8, 1.25, 1));
    spec.models.push_back(symmetric_model("M4", 1.1, 1.03, 1));
    spec.models.push_back(symmetric_model("M5", 1.55, 1.28, 1));
    spec.seed = seed;
    spec.group_names = {"group-a", "group-b", "group-c"};
    return spec;
}

SyntheticSpec binary_flipped_preset(std::uint64_t seed, std::size_t n_samples) {
    SyntheticSpec spec = flip_distribution(binary_preset(seed, n_samples),
                                           std::array<double, 2>{0.688, 0.312});
    spec.seed = seed;
    spec.n_samples = n_samples;
    return spec;
}

SyntheticSpec multilabel_preset(std::uint64_t seed, std::size_t n_samples) {
    SyntheticSpec spec;
    spec.n_samples = n_samples;
    spec.label_mode = LabelMode::independent;
    spec.class_names = kDefaultTaxonomy;
    spec.priors = {0.798, 0.099, 0.050, 0.040, 0.008};
    spec.scored_classes = spec.class_names;
    spec.models.push_back(symmetric_model("M1", 1.5, 1.25, 5));
    spec.models.push_back(symmetric_model("M2", 1.6, 1.25, 5));
    spec.models.push_back(symmetric_model("M3", 1.8, 1.25, 5));
    spec.models.push_back(symmetric_model("M4", 1.1, 1.03, 5));
    spec.models.push_back(symmetric_model("M5", 1.55, 1.28, 5));
    spec.seed = seed;
    return spec;
}

SyntheticSpec balanced_binary_spec(std::uint64_t seed, std::size_t n_samples, std::size_t k_models,
                                   double strength, double positive_prior) {
    if (!(positive_prior > 0.0 && positive_prior < 1.0)) {
        throw ParameterError("positive_prior must lie in (0,1)");
    }
    SyntheticSpec spec;
    spec.n_samples = n_samples;
    spec.label_mode = LabelMode::categorical;
    spec.class_names = {"Positive", "Negative"};
    spec.priors = {positive_prior, 1.0 - positive_prior};
    spec.scored_classes = {"Positive"};
    for (std::size_t k = 0; k < k_models; ++k) {
        spec.models.push_back(
            symmetric_model("M" + std::to_string(k + 1), 1.0 + strength, 1.0, 1));
    }
    spec.seed = seed;
    return spec;
}

} // namespace metacomb
