#include <cmath>
#include <memory>
#include <vector>

#include "aep/error.hpp"
#include "aep/models.hpp"
#include "fit_impl.hpp"

namespace aep::models {

namespace {
constexpr double kLog2Pi = 1.8378770664093454835606594728112;
} // namespace

double QdaModel::log_likelihood(std::span<const double> row, int cls) const {
    const std::size_t p = row.size();
    std::vector<double> centered(p), z(p);
    for (std::size_t j = 0; j < p; ++j) centered[j] = row[j] - mean[cls][j];
    cholesky_forward_solve(chol[cls], centered, z);
    double quad = 0.0;
    for (double v : z) quad += v * v;
    return -0.5 * (static_cast<double>(p) * kLog2Pi + log_det[cls] + quad);
}

void QdaModel::predict_proba_into(const Matrix& x, std::vector<double>& out) const {
    for (std::size_t r = 0; r < x.rows; ++r) {
        if (!class_present[0]) {
            out[r] = 1.0;
            continue;
        }
        if (!class_present[1]) {
            out[r] = 0.0;
            continue;
        }
        const double j0 = log_prior[0] + log_likelihood(x.row(r), 0);
        const double j1 = log_prior[1] + log_likelihood(x.row(r), 1);
        const double hi = std::max(j0, j1);
        const double z = std::exp(j0 - hi) + std::exp(j1 - hi);
        out[r] = std::exp(j1 - hi) / z;
    }
}

std::shared_ptr<Model> fit_qda(const ClassifierSpec& spec, const Matrix& x, const LabelVec& y) {
    const double ridge = spec.get("reg_param", 1e-9);
    const auto counts = class_counts(y, false, "qda");
    const std::size_t p = x.cols;

    auto model = std::make_shared<QdaModel>();
    for (int cls = 0; cls < 2; ++cls) {
        model->class_present[cls] = counts[cls] > 0;
        model->mean[cls].assign(p, 0.0);
        if (counts[cls] > 0)
            model->log_prior[cls] =
                std::log(static_cast<double>(counts[cls]) / static_cast<double>(x.rows));
    }

    for (std::size_t r = 0; r < x.rows; ++r) {
        auto& mu = model->mean[y[r]];
        const auto row = x.row(r);
        for (std::size_t j = 0; j < p; ++j) mu[j] += row[j];
    }
    for (int cls = 0; cls < 2; ++cls)
        if (counts[cls] > 0)
            for (std::size_t j = 0; j < p; ++j)
                model->mean[cls][j] /= static_cast<double>(counts[cls]);

    for (int cls = 0; cls < 2; ++cls) {
        if (counts[cls] == 0) {
            model->chol[cls] = Matrix(0, 0);
            continue;
        }
        Matrix cov(p, p);
        std::vector<double> centered(p);
        for (std::size_t r = 0; r < x.rows; ++r) {
            if (y[r] != cls) continue;
            const auto row = x.row(r);
            for (std::size_t j = 0; j < p; ++j) centered[j] = row[j] - model->mean[cls][j];
            for (std::size_t i = 0; i < p; ++i)
                for (std::size_t j = 0; j <= i; ++j) cov(i, j) += centered[i] * centered[j];
        }
        const double denom = counts[cls] > 1 ? static_cast<double>(counts[cls] - 1) : 1.0;
        for (std::size_t i = 0; i < p; ++i)
            for (std::size_t j = 0; j <= i; ++j) {
                cov(i, j) /= denom;
                cov(j, i) = cov(i, j);
            }

        // Ridge escalation: reg_param may be too small to make a singular
        // covariance factorizable in floating point.
        double applied = std::max(ridge, 1e-12);
        Matrix factor;
        bool ok = false;
        for (int attempt = 0; attempt < 40 && !ok; ++attempt) {
            factor = cov;
            for (std::size_t i = 0; i < p; ++i) factor(i, i) += applied;
            ok = cholesky_factor(factor);
            if (!ok) applied *= 10.0;
        }
        if (!ok) fail(Errc::invalid_hyperparameter, "qda covariance could not be regularized");
        model->chol[cls] = std::move(factor);
        double ld = 0.0;
        for (std::size_t i = 0; i < p; ++i) ld += std::log(model->chol[cls](i, i));
        model->log_det[cls] = 2.0 * ld;
    }
    return model;
}

void QdaModel::save_params(std::ostream& out) const {
    io::write_kv(out, "present0", static_cast<std::uint64_t>(class_present[0]));
    io::write_kv(out, "present1", static_cast<std::uint64_t>(class_present[1]));
    io::write_kv(out, "log_prior0", log_prior[0]);
    io::write_kv(out, "log_prior1", log_prior[1]);
    io::write_kv(out, "log_det0", log_det[0]);
    io::write_kv(out, "log_det1", log_det[1]);
    io::write_vec(out, "mean0", mean[0]);
    io::write_vec(out, "mean1", mean[1]);
    io::write_matrix(out, "chol0", chol[0]);
    io::write_matrix(out, "chol1", chol[1]);
}

std::shared_ptr<Model> load_qda(io::Reader& r) {
    auto model = std::make_shared<QdaModel>();
    model->class_present[0] = r.u64("present0") != 0;
    model->class_present[1] = r.u64("present1") != 0;
    model->log_prior[0] = r.f64("log_prior0");
    model->log_prior[1] = r.f64("log_prior1");
    model->log_det[0] = r.f64("log_det0");
    model->log_det[1] = r.f64("log_det1");
    model->mean[0] = r.vec("mean0");
    model->mean[1] = r.vec("mean1");
    model->chol[0] = r.matrix("chol0");
    model->chol[1] = r.matrix("chol1");
    return model;
}

} // namespace aep::models
