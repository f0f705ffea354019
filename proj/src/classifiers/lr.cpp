#include <cmath>
#include <memory>
#include <vector>

#include "aep/models.hpp"
#include "fit_impl.hpp"

namespace aep::models {

namespace {

double sigmoid(double z) {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

// log(1 + exp(-m)) without overflow
double softplus_neg(double m) {
    if (m >= 0.0) return std::log1p(std::exp(-m));
    return -m + std::log1p(std::exp(m));
}

} // namespace

namespace lr_detail {

double loss_and_gradient(const Matrix& x, const LabelVec& y, std::span<const double> w,
                         double b, double l2, std::span<double> grad_w, double& grad_b) {
    const std::size_t p = x.cols;
    std::fill(grad_w.begin(), grad_w.end(), 0.0);
    grad_b = 0.0;
    double loss = 0.0;
    for (std::size_t r = 0; r < x.rows; ++r) {
        const auto row = x.row(r);
        const double sign = y[r] ? 1.0 : -1.0;
        const double margin = sign * (dot(row, w) + b);
        loss += softplus_neg(margin);
        const double coeff = -sign * sigmoid(-margin);
        for (std::size_t j = 0; j < p; ++j) grad_w[j] += coeff * row[j];
        grad_b += coeff;
    }
    for (std::size_t j = 0; j < p; ++j) {
        loss += 0.5 * l2 * w[j] * w[j];
        grad_w[j] += l2 * w[j];
    }
    return loss;
}

} // namespace lr_detail

void LrModel::predict_proba_into(const Matrix& x, std::vector<double>& out) const {
    for (std::size_t r = 0; r < x.rows; ++r)
        out[r] = sigmoid(dot(x.row(r), std::span<const double>(weights)) + bias);
}

std::shared_ptr<Model> fit_lr(const ClassifierSpec& spec, const Matrix& x, const LabelVec& y) {
    class_counts(y, true, "lr");
    const double l2 = spec.get("l2_strength", 1.0);
    const std::size_t max_iter = static_cast<std::size_t>(spec.get("max_iter", 1000.0));
    const double tol = spec.get("tol", 1e-6);
    const std::size_t p = x.cols;

    auto model = std::make_shared<LrModel>();
    model->weights.assign(p, 0.0);
    model->bias = 0.0;

    std::vector<double> grad(p), trial_w(p), trial_grad(p);
    double grad_b = 0.0, trial_grad_b = 0.0;
    double loss = lr_detail::loss_and_gradient(x, y, model->weights, model->bias, l2, grad, grad_b);
    double step = 1.0;

    for (std::size_t it = 0; it < max_iter; ++it) {
        double grad_inf = std::fabs(grad_b);
        double grad_sq = grad_b * grad_b;
        for (double g : grad) {
            grad_inf = std::max(grad_inf, std::fabs(g));
            grad_sq += g * g;
        }
        if (grad_inf < tol) {
            model->converged = true;
            model->iterations = it;
            break;
        }

        // Backtracking line search along the steepest-descent direction
        // (Armijo condition, halving steps).
        constexpr double armijo = 1e-4;
        double trial_loss = 0.0;
        bool accepted = false;
        step *= 2.0; // allow growth after successful iterations
        while (step > 1e-18) {
            for (std::size_t j = 0; j < p; ++j) trial_w[j] = model->weights[j] - step * grad[j];
            const double trial_b = model->bias - step * grad_b;
            trial_loss = lr_detail::loss_and_gradient(x, y, trial_w, trial_b, l2, trial_grad,
                                                      trial_grad_b);
            if (trial_loss <= loss - armijo * step * grad_sq) {
                model->weights = trial_w;
                model->bias = trial_b;
                loss = trial_loss;
                grad = trial_grad;
                grad_b = trial_grad_b;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        model->iterations = it + 1;
        if (!accepted) break; // no descent step representable
    }
    return model;
}

void LrModel::save_params(std::ostream& out) const {
    io::write_vec(out, "weights", weights);
    io::write_kv(out, "bias", bias);
    io::write_kv(out, "iterations", static_cast<std::uint64_t>(iterations));
    io::write_kv(out, "converged", static_cast<std::uint64_t>(converged));
}

std::shared_ptr<Model> load_lr(io::Reader& r) {
    auto model = std::make_shared<LrModel>();
    model->weights = r.vec("weights");
    model->bias = r.f64("bias");
    model->iterations = r.u64("iterations");
    model->converged = r.u64("converged") != 0;
    return model;
}

} // namespace aep::models
