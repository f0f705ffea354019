#include <cmath>
#include <memory>

#include "aep/models.hpp"
#include "fit_impl.hpp"

namespace aep::models {

namespace {
constexpr double kLog2Pi = 1.8378770664093454835606594728112;
} // namespace

double GnbModel::log_likelihood(std::span<const double> row, int cls) const {
    const auto& mu = mean[cls];
    const auto& var = variance[cls];
    double acc = 0.0;
    for (std::size_t j = 0; j < row.size(); ++j) {
        const double diff = row[j] - mu[j];
        acc += -0.5 * (kLog2Pi + std::log(var[j])) - diff * diff / (2.0 * var[j]);
    }
    return acc;
}

void GnbModel::predict_proba_into(const Matrix& x, std::vector<double>& out) const {
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

std::shared_ptr<Model> fit_gnb(const ClassifierSpec& spec, const Matrix& x, const LabelVec& y) {
    const double smoothing = spec.get("var_smoothing", 1e-9);
    const auto counts = class_counts(y, false, "gnb");
    const std::size_t p = x.cols;
    const std::size_t n = x.rows;

    auto model = std::make_shared<GnbModel>();
    for (int cls = 0; cls < 2; ++cls) {
        model->class_present[cls] = counts[cls] > 0;
        model->mean[cls].assign(p, 0.0);
        model->variance[cls].assign(p, 0.0);
        if (counts[cls] > 0)
            model->log_prior[cls] =
                std::log(static_cast<double>(counts[cls]) / static_cast<double>(n));
    }

    for (std::size_t r = 0; r < n; ++r) {
        auto& mu = model->mean[y[r]];
        const auto row = x.row(r);
        for (std::size_t j = 0; j < p; ++j) mu[j] += row[j];
    }
    for (int cls = 0; cls < 2; ++cls)
        if (counts[cls] > 0)
            for (std::size_t j = 0; j < p; ++j)
                model->mean[cls][j] /= static_cast<double>(counts[cls]);

    for (std::size_t r = 0; r < n; ++r) {
        auto& var = model->variance[y[r]];
        const auto& mu = model->mean[y[r]];
        const auto row = x.row(r);
        for (std::size_t j = 0; j < p; ++j) {
            const double diff = row[j] - mu[j];
            var[j] += diff * diff;
        }
    }

    // Pooled per-feature variance for the shared smoothing term, as in the
    // smoothing rule sigma^2 + eps * max_j Var_j.
    double max_pooled_var = 0.0;
    {
        std::vector<double> pooled_mean(p, 0.0), pooled_var(p, 0.0);
        for (std::size_t r = 0; r < n; ++r) {
            const auto row = x.row(r);
            for (std::size_t j = 0; j < p; ++j) pooled_mean[j] += row[j];
        }
        for (std::size_t j = 0; j < p; ++j) pooled_mean[j] /= static_cast<double>(n);
        for (std::size_t r = 0; r < n; ++r) {
            const auto row = x.row(r);
            for (std::size_t j = 0; j < p; ++j) {
                const double diff = row[j] - pooled_mean[j];
                pooled_var[j] += diff * diff;
            }
        }
        for (std::size_t j = 0; j < p; ++j)
            max_pooled_var = std::max(max_pooled_var, pooled_var[j] / static_cast<double>(n));
    }
    const double eps = smoothing * max_pooled_var;

    for (int cls = 0; cls < 2; ++cls) {
        if (counts[cls] == 0) continue;
        for (std::size_t j = 0; j < p; ++j) {
            double v = model->variance[cls][j] / static_cast<double>(counts[cls]) + eps;
            if (v <= 0.0) v = 1e-300; // fully constant data; keep densities finite
            model->variance[cls][j] = v;
        }
    }
    return model;
}

void GnbModel::save_params(std::ostream& out) const {
    io::write_kv(out, "present0", static_cast<std::uint64_t>(class_present[0]));
    io::write_kv(out, "present1", static_cast<std::uint64_t>(class_present[1]));
    io::write_kv(out, "log_prior0", log_prior[0]);
    io::write_kv(out, "log_prior1", log_prior[1]);
    io::write_vec(out, "mean0", mean[0]);
    io::write_vec(out, "mean1", mean[1]);
    io::write_vec(out, "var0", variance[0]);
    io::write_vec(out, "var1", variance[1]);
}

std::shared_ptr<Model> load_gnb(io::Reader& r) {
    auto model = std::make_shared<GnbModel>();
    model->class_present[0] = r.u64("present0") != 0;
    model->class_present[1] = r.u64("present1") != 0;
    model->log_prior[0] = r.f64("log_prior0");
    model->log_prior[1] = r.f64("log_prior1");
    model->mean[0] = r.vec("mean0");
    model->mean[1] = r.vec("mean1");
    model->variance[0] = r.vec("var0");
    model->variance[1] = r.vec("var1");
    return model;
}

} // namespace aep::models
