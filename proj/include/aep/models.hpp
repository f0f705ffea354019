#ifndef AEP_MODELS_HPP
#define AEP_MODELS_HPP

#include <array>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <vector>

#include "aep/classifiers.hpp"
#include "aep/matrix.hpp"
#include "aep/rng.hpp"

namespace aep::models {

struct Metadata {
    std::size_t n_train = 0;
    std::size_t n_features = 0;
    std::array<double, 2> class_priors{0.0, 0.0};
};

/// Base of all fitted models. Concrete types keep their parameters public so
/// tests can inspect them and the serializer can write them out.
class Model {
public:
    virtual ~Model() = default;
    virtual Family family() const = 0;
    /// P(class 1) for each row of x; x column count already validated.
    virtual void predict_proba_into(const Matrix& x, std::vector<double>& out) const = 0;
    virtual void save_params(std::ostream& out) const = 0;

    Metadata meta;
};

// --- Gaussian naive Bayes -------------------------------------------------

struct GnbModel final : Model {
    // log prior per class; classes without training samples get prior 0
    std::array<double, 2> log_prior{0.0, 0.0};
    std::array<bool, 2> class_present{false, false};
    std::vector<double> mean[2];     // per feature
    std::vector<double> variance[2]; // smoothed, per feature

    Family family() const override { return Family::gnb; }
    void predict_proba_into(const Matrix& x, std::vector<double>& out) const override;
    void save_params(std::ostream& out) const override;
    double log_likelihood(std::span<const double> row, int cls) const;
};

// --- Quadratic discriminant analysis ---------------------------------------

struct QdaModel final : Model {
    std::array<double, 2> log_prior{0.0, 0.0};
    std::array<bool, 2> class_present{false, false};
    std::vector<double> mean[2];
    Matrix chol[2];                  // lower Cholesky factor of Sigma_c
    std::array<double, 2> log_det{0.0, 0.0};

    Family family() const override { return Family::qda; }
    void predict_proba_into(const Matrix& x, std::vector<double>& out) const override;
    void save_params(std::ostream& out) const override;
    double log_likelihood(std::span<const double> row, int cls) const;
};

// --- Logistic regression ----------------------------------------------------

struct LrModel final : Model {
    std::vector<double> weights;
    double bias = 0.0;
    std::size_t iterations = 0; // iterations actually run
    bool converged = false;

    Family family() const override { return Family::lr; }
    void predict_proba_into(const Matrix& x, std::vector<double>& out) const override;
    void save_params(std::ostream& out) const override;
};

namespace lr_detail {
/// Sum logistic loss + 0.5 * l2 * |w|^2 (bias unpenalized); gradient written
/// to grad_w / grad_b. Exposed for finite-difference checks.
double loss_and_gradient(const Matrix& x, const LabelVec& y, std::span<const double> w,
                         double b, double l2, std::span<double> grad_w, double& grad_b);
} // namespace lr_detail

// --- k nearest neighbours ----------------------------------------------------

struct KnnModel final : Model {
    std::size_t k = 5;
    Matrix train_x;
    LabelVec train_y;

    Family family() const override { return Family::knn; }
    void predict_proba_into(const Matrix& x, std::vector<double>& out) const override;
    void save_params(std::ostream& out) const override;
};

// --- CART decision tree -------------------------------------------------------

struct TreeNode {
    bool leaf = true;
    std::uint32_t feature = 0;
    double threshold = 0.0;
    std::uint32_t left = 0;  // child indices into TreeModel::nodes
    std::uint32_t right = 0;
    double p1 = 0.0;         // leaf: class-1 frequency
};

struct TreeModel final : Model {
    std::vector<TreeNode> nodes; // node 0 is the root

    Family family() const override { return Family::dt; }
    void predict_proba_into(const Matrix& x, std::vector<double>& out) const override;
    void save_params(std::ostream& out) const override;
    double predict_row(std::span<const double> row) const;
};

/// Tree-growing knobs shared by dt, rf and brf.
struct TreeParams {
    std::size_t max_depth = 0;        // 0 = unlimited
    std::size_t min_samples_leaf = 1;
    std::size_t max_features = 0;     // 0 = all (dt) or ceil(sqrt(p)) (forests)
};

/// Grows a CART tree on the given sample rows with Gini impurity. Candidate
/// features are subsampled per node when max_features < p, drawn from rng.
/// Split ties break on lowest feature index, then lowest threshold.
std::vector<TreeNode> grow_tree(const Matrix& x, const LabelVec& y,
                                std::span<const std::size_t> sample_rows,
                                const TreeParams& params, Rng& rng);

// --- Random forest / balanced random forest -----------------------------------

struct ForestModel final : Model {
    bool balanced = false;            // brf
    std::string sampling_strategy;    // brf: "under" or "over"
    std::vector<std::vector<TreeNode>> trees;

    Family family() const override { return balanced ? Family::brf : Family::rf; }
    void predict_proba_into(const Matrix& x, std::vector<double>& out) const override;
    void save_params(std::ostream& out) const override;
};

// --- AdaBoost (SAMME) with decision stumps --------------------------------------

struct Stump {
    std::uint32_t feature = 0;
    double threshold = 0.0;
    // predicted class on the x >= threshold side; the other side gets 1 - high_class
    std::uint8_t high_class = 1;
    double alpha = 0.0;
    double weighted_error = 0.0; // training-time weighted error, kept for audits

    int predict(std::span<const double> row) const {
        const bool high = row[feature] >= threshold;
        return high ? high_class : 1 - high_class;
    }
};

struct AdaboostModel final : Model {
    std::vector<Stump> stumps;

    Family family() const override { return Family::adaboost; }
    void predict_proba_into(const Matrix& x, std::vector<double>& out) const override;
    void save_params(std::ostream& out) const override;
};

// --- RBF-kernel SVM (SMO dual) ----------------------------------------------------

struct SvmModel final : Model {
    double gamma = 0.0;
    double bias = 0.0;          // decision f(x) = sum coef_i K(sv_i, x) + bias
    Matrix support_vectors;     // one row per SV
    std::vector<double> coef;   // alpha_i * y_i (y in {-1,+1})
    double platt_a = 0.0;       // P(1|f) = 1 / (1 + exp(platt_a * f + platt_b))
    double platt_b = 0.0;
    std::size_t smo_iterations = 0;
    bool converged = false;

    Family family() const override { return Family::svm_rbf; }
    void predict_proba_into(const Matrix& x, std::vector<double>& out) const override;
    void save_params(std::ostream& out) const override;
    double decision_value(std::span<const double> row) const;
};

/// Diagnostics of the converged SMO solve, exposed for feasibility checks:
/// alphas (full length), final KKT violation gap, and the equality-constraint
/// residual sum(alpha_i * y_i).
struct SmoDiagnostics {
    std::vector<double> alpha;
    double kkt_gap = 0.0;
    double equality_residual = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
};

/// Fits the SVM and returns solver diagnostics alongside the model.
std::shared_ptr<SvmModel> fit_svm_with_diagnostics(const ClassifierSpec& spec, const Matrix& x,
                                                   const LabelVec& y, SmoDiagnostics* diag);

/// Platt sigmoid fit on (decision value, label) pairs; returns {a, b}.
std::array<double, 2> fit_platt_sigmoid(std::span<const double> decision_values, const LabelVec& y);

} // namespace aep::models

#endif
