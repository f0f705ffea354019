#include "aep/classifiers.hpp"

#include <cmath>
#include <istream>
#include <ostream>

#include "aep/error.hpp"
#include "aep/models.hpp"
#include "fit_impl.hpp"
#include "model_io.hpp"

namespace aep {

const char* family_name(Family f) {
    switch (f) {
        case Family::svm_rbf: return "svm_rbf";
        case Family::rf: return "rf";
        case Family::brf: return "brf";
        case Family::lr: return "lr";
        case Family::adaboost: return "adaboost";
        case Family::knn: return "knn";
        case Family::dt: return "dt";
        case Family::gnb: return "gnb";
        case Family::qda: return "qda";
    }
    return "?";
}

Family family_from_name(const std::string& name) {
    for (Family f : all_families())
        if (name == family_name(f)) return f;
    fail(Errc::invalid_hyperparameter, "unknown classifier family '" + name + "'");
}

std::vector<Family> all_families() {
    return {Family::svm_rbf, Family::rf, Family::brf,  Family::lr, Family::adaboost,
            Family::knn,     Family::dt, Family::gnb, Family::qda};
}

double ClassifierSpec::get(const std::string& key, double fallback) const {
    const auto it = params.find(key);
    if (it == params.end()) return fallback;
    if (const double* v = std::get_if<double>(&it->second)) return *v;
    fail(Errc::invalid_hyperparameter, "hyperparameter '" + key + "' must be numeric");
}

std::string ClassifierSpec::get(const std::string& key, const std::string& fallback) const {
    const auto it = params.find(key);
    if (it == params.end()) return fallback;
    if (const std::string* v = std::get_if<std::string>(&it->second)) return *v;
    fail(Errc::invalid_hyperparameter, "hyperparameter '" + key + "' must be a string");
}

ClassifierSpec default_spec(Family family) {
    ClassifierSpec spec;
    spec.family = family;
    switch (family) {
        case Family::gnb:
            spec.params["var_smoothing"] = 1e-9;
            break;
        case Family::qda:
            spec.params["reg_param"] = 1e-9;
            break;
        case Family::lr:
            spec.params["l2_strength"] = 1.0;
            spec.params["max_iter"] = 1000.0;
            spec.params["tol"] = 1e-6;
            break;
        case Family::knn:
            spec.params["k"] = 5.0;
            break;
        case Family::dt:
            spec.params["max_depth"] = 0.0;        // unlimited
            spec.params["min_samples_leaf"] = 1.0;
            spec.params["max_features"] = 0.0;     // all features
            break;
        case Family::rf:
            spec.params["n_estimators"] = 100.0;
            spec.params["max_features"] = 0.0;     // ceil(sqrt(p))
            break;
        case Family::brf:
            spec.params["n_estimators"] = 100.0;
            spec.params["max_features"] = 0.0;
            spec.params["sampling_strategy"] = std::string("under");
            break;
        case Family::adaboost:
            spec.params["n_estimators"] = 50.0;
            spec.params["learning_rate"] = 1.0;
            break;
        case Family::svm_rbf:
            spec.params["C"] = 1.0;
            spec.params["gamma"] = 0.0;            // 1 / p
            spec.params["tol"] = 1e-3;
            break;
    }
    return spec;
}

namespace {

struct KeyRule {
    const char* key;
    bool is_string = false;
    double min = 0.0;
    bool integral = false;
    bool strictly_positive = false;
};

const std::vector<KeyRule>& schema(Family f) {
    static const std::vector<KeyRule> gnb{{"var_smoothing", false, 0.0, false, false}};
    static const std::vector<KeyRule> qda{{"reg_param", false, 0.0, false, false}};
    static const std::vector<KeyRule> lr{{"l2_strength", false, 0.0, false, false},
                                         {"max_iter", false, 1.0, true, false},
                                         {"tol", false, 0.0, false, true}};
    static const std::vector<KeyRule> knn{{"k", false, 1.0, true, false}};
    static const std::vector<KeyRule> dt{{"max_depth", false, 0.0, true, false},
                                         {"min_samples_leaf", false, 1.0, true, false},
                                         {"max_features", false, 0.0, true, false}};
    static const std::vector<KeyRule> rf{{"n_estimators", false, 1.0, true, false},
                                         {"max_features", false, 0.0, true, false},
                                         {"max_depth", false, 0.0, true, false},
                                         {"min_samples_leaf", false, 1.0, true, false}};
    static const std::vector<KeyRule> brf{{"n_estimators", false, 1.0, true, false},
                                          {"max_features", false, 0.0, true, false},
                                          {"max_depth", false, 0.0, true, false},
                                          {"min_samples_leaf", false, 1.0, true, false},
                                          {"sampling_strategy", true, 0.0, false, false}};
    static const std::vector<KeyRule> ab{{"n_estimators", false, 1.0, true, false},
                                         {"learning_rate", false, 0.0, false, true}};
    static const std::vector<KeyRule> svm{{"C", false, 0.0, false, true},
                                          {"gamma", false, 0.0, false, false},
                                          {"tol", false, 0.0, false, true},
                                          {"max_iter", false, 0.0, true, false}};
    switch (f) {
        case Family::gnb: return gnb;
        case Family::qda: return qda;
        case Family::lr: return lr;
        case Family::knn: return knn;
        case Family::dt: return dt;
        case Family::rf: return rf;
        case Family::brf: return brf;
        case Family::adaboost: return ab;
        case Family::svm_rbf: return svm;
    }
    return gnb;
}

} // namespace

void validate_spec(const ClassifierSpec& spec) {
    const auto& rules = schema(spec.family);
    for (const auto& [key, value] : spec.params) {
        const KeyRule* rule = nullptr;
        for (const auto& r : rules)
            if (key == r.key) rule = &r;
        if (!rule)
            fail(Errc::invalid_hyperparameter, std::string("family ") + family_name(spec.family) +
                                                   " has no hyperparameter '" + key + "'");
        if (rule->is_string) {
            const std::string* s = std::get_if<std::string>(&value);
            if (!s) fail(Errc::invalid_hyperparameter, "'" + key + "' must be a string");
            if (std::string(rule->key) == "sampling_strategy" && *s != "under" && *s != "over")
                fail(Errc::invalid_hyperparameter, "sampling_strategy must be 'under' or 'over'");
            continue;
        }
        const double* v = std::get_if<double>(&value);
        if (!v) fail(Errc::invalid_hyperparameter, "'" + key + "' must be numeric");
        if (!std::isfinite(*v) || *v < rule->min || (rule->strictly_positive && *v <= 0.0))
            fail(Errc::invalid_hyperparameter, "'" + key + "' out of range");
        if (rule->integral && *v != std::floor(*v))
            fail(Errc::invalid_hyperparameter, "'" + key + "' must be an integer");
    }
}

Family TrainedModel::family() const { return impl_->family(); }
std::size_t TrainedModel::n_features() const { return impl_->meta.n_features; }
std::size_t TrainedModel::n_train() const { return impl_->meta.n_train; }
std::array<double, 2> TrainedModel::class_priors() const { return impl_->meta.class_priors; }

std::vector<double> TrainedModel::predict_proba(const Matrix& x) const {
    if (x.cols != impl_->meta.n_features)
        fail(Errc::dimension_mismatch, "model expects " + std::to_string(impl_->meta.n_features) +
                                           " columns, input has " + std::to_string(x.cols));
    std::vector<double> out(x.rows, 0.0);
    impl_->predict_proba_into(x, out);
    return out;
}

LabelVec TrainedModel::predict_label(const Matrix& x, double threshold) const {
    return labels_from_probabilities(predict_proba(x), threshold);
}

LabelVec labels_from_probabilities(const std::vector<double>& probs, double threshold) {
    LabelVec out(probs.size());
    for (std::size_t i = 0; i < probs.size(); ++i) out[i] = probs[i] >= threshold ? 1 : 0;
    return out;
}

void TrainedModel::save(std::ostream& out) const {
    using models::io::write_kv;
    out << "aep-model 1\n";
    write_kv(out, "family", std::string(family_name(impl_->family())));
    write_kv(out, "n_train", static_cast<std::uint64_t>(impl_->meta.n_train));
    write_kv(out, "n_features", static_cast<std::uint64_t>(impl_->meta.n_features));
    write_kv(out, "prior0", impl_->meta.class_priors[0]);
    write_kv(out, "prior1", impl_->meta.class_priors[1]);
    impl_->save_params(out);
    out << "end\n";
}

TrainedModel TrainedModel::load(std::istream& in) {
    using namespace models;
    io::Reader r{in};
    r.expect("aep-model");
    const std::uint64_t version = r.u64_value();
    if (version != 1) fail(Errc::parse_error, "unsupported model version");
    const Family family = family_from_name(r.str("family"));
    Metadata meta;
    meta.n_train = r.u64("n_train");
    meta.n_features = r.u64("n_features");
    meta.class_priors[0] = r.f64("prior0");
    meta.class_priors[1] = r.f64("prior1");

    std::shared_ptr<Model> model;
    switch (family) {
        case Family::gnb: model = load_gnb(r); break;
        case Family::qda: model = load_qda(r); break;
        case Family::lr: model = load_lr(r); break;
        case Family::knn: model = load_knn(r); break;
        case Family::dt: model = load_dt(r); break;
        case Family::rf: model = load_forest(r, false); break;
        case Family::brf: model = load_forest(r, true); break;
        case Family::adaboost: model = load_adaboost(r); break;
        case Family::svm_rbf: model = load_svm(r); break;
    }
    r.expect("end");
    model->meta = meta;
    return TrainedModel(model);
}

TrainedModel fit(const ClassifierSpec& spec, const Matrix& x, const LabelVec& y) {
    validate_spec(spec);
    if (x.rows == 0) fail(Errc::empty_training_set, "no training patterns");
    if (x.rows != y.size())
        fail(Errc::dimension_mismatch, "label count does not match pattern count");
    for (std::uint8_t v : y)
        if (v > 1) fail(Errc::bad_event_value, "training labels must be 0 or 1");

    std::shared_ptr<models::Model> model;
    switch (spec.family) {
        case Family::gnb: model = models::fit_gnb(spec, x, y); break;
        case Family::qda: model = models::fit_qda(spec, x, y); break;
        case Family::lr: model = models::fit_lr(spec, x, y); break;
        case Family::knn: model = models::fit_knn(spec, x, y); break;
        case Family::dt: model = models::fit_dt(spec, x, y); break;
        case Family::rf: model = models::fit_forest(spec, x, y, false); break;
        case Family::brf: model = models::fit_forest(spec, x, y, true); break;
        case Family::adaboost: model = models::fit_adaboost(spec, x, y); break;
        case Family::svm_rbf: model = models::fit_svm(spec, x, y); break;
    }

    model->meta.n_train = x.rows;
    model->meta.n_features = x.cols;
    std::size_t n_pos = 0;
    for (std::uint8_t v : y) n_pos += v;
    model->meta.class_priors[1] = static_cast<double>(n_pos) / static_cast<double>(y.size());
    model->meta.class_priors[0] = 1.0 - model->meta.class_priors[1];
    return TrainedModel(model);
}

namespace models {

std::array<std::size_t, 2> class_counts(const LabelVec& y, bool require_both, const char* family) {
    std::array<std::size_t, 2> counts{0, 0};
    for (std::uint8_t v : y) ++counts[v];
    if (require_both && (counts[0] == 0 || counts[1] == 0))
        fail(Errc::single_class_training,
             std::string(family) + " requires both classes in the training set");
    return counts;
}

} // namespace models

} // namespace aep
