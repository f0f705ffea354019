#ifndef AEP_CLASSIFIERS_HPP
#define AEP_CLASSIFIERS_HPP

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "aep/matrix.hpp"
#include "aep/timeseries.hpp"

namespace aep {

enum class Family { svm_rbf, rf, brf, lr, adaboost, knn, dt, gnb, qda };

const char* family_name(Family f);
Family family_from_name(const std::string& name);
std::vector<Family> all_families();

using ParamValue = std::variant<double, std::string>;
using ParamMap = std::map<std::string, ParamValue>;

/// Declarative classifier choice: family, hyperparameters, RNG seed for the
/// stochastic families. Identical (spec, data) gives a bitwise-identical
/// model.
struct ClassifierSpec {
    Family family = Family::gnb;
    ParamMap params;
    std::uint64_t seed = 0;

    double get(const std::string& key, double fallback) const;
    std::string get(const std::string& key, const std::string& fallback) const;
};

/// Documented defaults per family (see README for the full table).
ClassifierSpec default_spec(Family family);

/// Validates keys and value ranges against the family's schema; throws
/// invalid_hyperparameter on unknown keys or out-of-range values.
void validate_spec(const ClassifierSpec& spec);

namespace models {
class Model; // defined in aep/models.hpp
}

/// Immutable fitted prediction rule. Cheap to copy and safe to share across
/// threads. predict_proba returns P(warning label = 1) per row; the class-0
/// probability is its complement.
class TrainedModel {
public:
    TrainedModel() = default;
    explicit TrainedModel(std::shared_ptr<const models::Model> impl) : impl_(std::move(impl)) {}

    Family family() const;
    std::size_t n_features() const;
    std::size_t n_train() const;
    std::array<double, 2> class_priors() const;

    std::vector<double> predict_proba(const Matrix& x) const;
    LabelVec predict_label(const Matrix& x, double threshold = 0.5) const;

    /// Versioned self-describing text format; doubles are stored as exact
    /// bit patterns, so save/load round-trips bitwise.
    void save(std::ostream& out) const;
    static TrainedModel load(std::istream& in);

    const models::Model& impl() const { return *impl_; }
    bool valid() const { return impl_ != nullptr; }

private:
    std::shared_ptr<const models::Model> impl_;
};

/// Trains a model. X rows are flattened patterns, y the binary warning
/// labels. Training is deterministic given spec.seed. Families that need
/// both classes (lr, svm_rbf, adaboost, brf) throw single_class_training
/// when y is constant.
TrainedModel fit(const ClassifierSpec& spec, const Matrix& x, const LabelVec& y);

LabelVec labels_from_probabilities(const std::vector<double>& probs, double threshold);

} // namespace aep

#endif
