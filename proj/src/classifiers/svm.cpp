#include <algorithm>
#include <cmath>
#include <limits>
#include <list>
#include <memory>
#include <unordered_map>
#include <vector>

#include "aep/models.hpp"
#include "fit_impl.hpp"

namespace aep::models {

namespace {

/// Bounded LRU cache of kernel matrix rows; SMO touches two rows per
/// iteration, so recomputing everything would dominate the solve.
class KernelCache {
public:
    KernelCache(const Matrix& x, double gamma, std::size_t max_rows)
        : x_(x), gamma_(gamma), max_rows_(std::max<std::size_t>(2, max_rows)) {}

    const std::vector<double>& row(std::size_t i) {
        auto it = cache_.find(i);
        if (it != cache_.end()) {
            lru_.splice(lru_.begin(), lru_, it->second.first);
            return it->second.second;
        }
        if (cache_.size() >= max_rows_) {
            const std::size_t evict = lru_.back();
            lru_.pop_back();
            cache_.erase(evict);
        }
        lru_.push_front(i);
        auto& entry = cache_[i];
        entry.first = lru_.begin();
        entry.second.resize(x_.rows);
        const auto xi = x_.row(i);
        for (std::size_t j = 0; j < x_.rows; ++j)
            entry.second[j] = std::exp(-gamma_ * squared_distance(xi, x_.row(j)));
        return entry.second;
    }

private:
    const Matrix& x_;
    double gamma_;
    std::size_t max_rows_;
    std::list<std::size_t> lru_;
    std::unordered_map<std::size_t, std::pair<std::list<std::size_t>::iterator, std::vector<double>>>
        cache_;
};

} // namespace

double SvmModel::decision_value(std::span<const double> row) const {
    double acc = bias;
    for (std::size_t i = 0; i < support_vectors.rows; ++i)
        acc += coef[i] * std::exp(-gamma * squared_distance(support_vectors.row(i), row));
    return acc;
}

void SvmModel::predict_proba_into(const Matrix& x, std::vector<double>& out) const {
    for (std::size_t r = 0; r < x.rows; ++r) {
        const double f = decision_value(x.row(r));
        const double z = platt_a * f + platt_b;
        out[r] = z >= 0.0 ? std::exp(-z) / (1.0 + std::exp(-z)) : 1.0 / (1.0 + std::exp(z));
    }
}

std::array<double, 2> fit_platt_sigmoid(std::span<const double> decision_values, const LabelVec& y) {
    // Platt's sigmoid fit with the regularized targets and the Newton/
    // backtracking scheme of Lin, Weng and Keerthi.
    const std::size_t n = decision_values.size();
    double prior1 = 0.0;
    for (std::uint8_t v : y) prior1 += v;
    const double prior0 = static_cast<double>(n) - prior1;

    const double hi_target = (prior1 + 1.0) / (prior1 + 2.0);
    const double lo_target = 1.0 / (prior0 + 2.0);
    std::vector<double> target(n);
    for (std::size_t i = 0; i < n; ++i) target[i] = y[i] ? hi_target : lo_target;

    double a = 0.0;
    double b = std::log((prior0 + 1.0) / (prior1 + 1.0));

    auto objective = [&](double pa, double pb) {
        double obj = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double z = pa * decision_values[i] + pb;
            if (z >= 0.0)
                obj += target[i] * z + std::log1p(std::exp(-z));
            else
                obj += (target[i] - 1.0) * z + std::log1p(std::exp(z));
        }
        return obj;
    };

    constexpr int max_iter = 100;
    constexpr double min_step = 1e-10;
    constexpr double sigma = 1e-12;
    double obj = objective(a, b);

    for (int iter = 0; iter < max_iter; ++iter) {
        double h11 = sigma, h22 = sigma, h21 = 0.0, g1 = 0.0, g2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double z = a * decision_values[i] + b;
            double p, q;
            if (z >= 0.0) {
                p = std::exp(-z) / (1.0 + std::exp(-z));
                q = 1.0 / (1.0 + std::exp(-z));
            } else {
                p = 1.0 / (1.0 + std::exp(z));
                q = std::exp(z) / (1.0 + std::exp(z));
            }
            const double d2 = p * q;
            h11 += decision_values[i] * decision_values[i] * d2;
            h22 += d2;
            h21 += decision_values[i] * d2;
            const double d1 = target[i] - p;
            g1 += decision_values[i] * d1;
            g2 += d1;
        }
        if (std::fabs(g1) < 1e-5 && std::fabs(g2) < 1e-5) break;

        const double det = h11 * h22 - h21 * h21;
        const double da = -(h22 * g1 - h21 * g2) / det;
        const double db = -(-h21 * g1 + h11 * g2) / det;
        const double gd = g1 * da + g2 * db;

        double step = 1.0;
        bool accepted = false;
        while (step >= min_step) {
            const double new_a = a + step * da;
            const double new_b = b + step * db;
            const double new_obj = objective(new_a, new_b);
            if (new_obj < obj + 1e-4 * step * gd) {
                a = new_a;
                b = new_b;
                obj = new_obj;
                accepted = true;
                break;
            }
            step /= 2.0;
        }
        if (!accepted) break;
    }
    return {a, b};
}

std::shared_ptr<SvmModel> fit_svm_with_diagnostics(const ClassifierSpec& spec, const Matrix& x,
                                                   const LabelVec& y, SmoDiagnostics* diag) {
    class_counts(y, true, "svm_rbf");
    const std::size_t n = x.rows;
    const double c = spec.get("C", 1.0);
    double gamma = spec.get("gamma", 0.0);
    if (gamma <= 0.0) gamma = 1.0 / static_cast<double>(x.cols);
    const double tol = spec.get("tol", 1e-3);
    std::size_t max_iter = static_cast<std::size_t>(spec.get("max_iter", 0.0));
    if (max_iter == 0) max_iter = std::max<std::size_t>(200 * n, 20000);

    std::vector<double> sign(n);
    for (std::size_t i = 0; i < n; ++i) sign[i] = y[i] ? 1.0 : -1.0;

    std::vector<double> alpha(n, 0.0);
    std::vector<double> grad(n, -1.0); // gradient of 1/2 a'Qa - e'a at a = 0

    const std::size_t cache_rows = std::max<std::size_t>(2, (256ull << 20) / (8 * std::max<std::size_t>(n, 1)));
    KernelCache cache(x, gamma, cache_rows);

    double gap = std::numeric_limits<double>::infinity();
    double m_up = 0.0, m_low = 0.0;
    std::size_t iterations = 0;
    bool converged = false;

    for (; iterations < max_iter; ++iterations) {
        // maximal violating pair
        std::size_t i_up = n, j_low = n;
        m_up = -std::numeric_limits<double>::infinity();
        m_low = std::numeric_limits<double>::infinity();
        for (std::size_t t = 0; t < n; ++t) {
            const double v = -sign[t] * grad[t];
            const bool in_up = (sign[t] > 0.0 && alpha[t] < c) || (sign[t] < 0.0 && alpha[t] > 0.0);
            const bool in_low = (sign[t] > 0.0 && alpha[t] > 0.0) || (sign[t] < 0.0 && alpha[t] < c);
            if (in_up && v > m_up) {
                m_up = v;
                i_up = t;
            }
            if (in_low && v < m_low) {
                m_low = v;
                j_low = t;
            }
        }
        gap = m_up - m_low;
        if (gap < tol || i_up == n || j_low == n) {
            converged = true;
            break;
        }

        const std::size_t i = i_up, j = j_low;
        const auto& ki = cache.row(i);
        const auto& kj = cache.row(j);

        const double old_ai = alpha[i], old_aj = alpha[j];
        double quad = ki[i] + kj[j] - 2.0 * ki[j];
        if (quad <= 0.0) quad = 1e-12;

        if (sign[i] != sign[j]) {
            const double delta = (-grad[i] - grad[j]) / quad;
            const double diff = alpha[i] - alpha[j];
            alpha[i] += delta;
            alpha[j] += delta;
            if (diff > 0.0 && alpha[j] < 0.0) {
                alpha[j] = 0.0;
                alpha[i] = diff;
            } else if (diff <= 0.0 && alpha[i] < 0.0) {
                alpha[i] = 0.0;
                alpha[j] = -diff;
            }
            if (diff > 0.0 && alpha[i] > c) {
                alpha[i] = c;
                alpha[j] = c - diff;
            } else if (diff <= 0.0 && alpha[j] > c) {
                alpha[j] = c;
                alpha[i] = c + diff;
            }
        } else {
            const double delta = (grad[i] - grad[j]) / quad;
            const double sum = alpha[i] + alpha[j];
            alpha[i] -= delta;
            alpha[j] += delta;
            if (sum > c && alpha[i] > c) {
                alpha[i] = c;
                alpha[j] = sum - c;
            } else if (sum <= c && alpha[j] < 0.0) {
                alpha[j] = 0.0;
                alpha[i] = sum;
            }
            if (sum > c && alpha[j] > c) {
                alpha[j] = c;
                alpha[i] = sum - c;
            } else if (sum <= c && alpha[i] < 0.0) {
                alpha[i] = 0.0;
                alpha[j] = sum;
            }
        }

        const double dai = alpha[i] - old_ai;
        const double daj = alpha[j] - old_aj;
        if (dai == 0.0 && daj == 0.0) {
            converged = true; // numerically stuck at the boundary
            break;
        }
        for (std::size_t t = 0; t < n; ++t)
            grad[t] += sign[t] * (sign[i] * ki[t] * dai + sign[j] * kj[t] * daj);
    }

    const double bias = 0.5 * (m_up + m_low);

    auto model = std::make_shared<SvmModel>();
    model->gamma = gamma;
    model->bias = bias;
    model->smo_iterations = iterations;
    model->converged = converged;

    std::vector<std::size_t> sv_rows;
    for (std::size_t i = 0; i < n; ++i)
        if (alpha[i] > 0.0) sv_rows.push_back(i);
    model->support_vectors = x.gather(sv_rows);
    model->coef.reserve(sv_rows.size());
    for (std::size_t i : sv_rows) model->coef.push_back(alpha[i] * sign[i]);

    // Training decision values fall out of the final gradient:
    // sum_j y_j a_j K_ij = y_i (grad_i + 1).
    std::vector<double> decision(n);
    for (std::size_t i = 0; i < n; ++i) decision[i] = sign[i] * (grad[i] + 1.0) + bias;
    const auto platt = fit_platt_sigmoid(decision, y);
    model->platt_a = platt[0];
    model->platt_b = platt[1];

    if (diag) {
        diag->alpha = std::move(alpha);
        diag->kkt_gap = gap;
        double eq = 0.0;
        for (std::size_t i = 0; i < n; ++i) eq += diag->alpha[i] * sign[i];
        diag->equality_residual = eq;
        diag->iterations = iterations;
        diag->converged = converged;
    }
    return model;
}

std::shared_ptr<Model> fit_svm(const ClassifierSpec& spec, const Matrix& x, const LabelVec& y) {
    return fit_svm_with_diagnostics(spec, x, y, nullptr);
}

void SvmModel::save_params(std::ostream& out) const {
    io::write_kv(out, "gamma", gamma);
    io::write_kv(out, "bias", bias);
    io::write_kv(out, "platt_a", platt_a);
    io::write_kv(out, "platt_b", platt_b);
    io::write_kv(out, "iterations", static_cast<std::uint64_t>(smo_iterations));
    io::write_kv(out, "converged", static_cast<std::uint64_t>(converged));
    io::write_vec(out, "coef", coef);
    io::write_matrix(out, "support_vectors", support_vectors);
}

std::shared_ptr<Model> load_svm(io::Reader& r) {
    auto model = std::make_shared<SvmModel>();
    model->gamma = r.f64("gamma");
    model->bias = r.f64("bias");
    model->platt_a = r.f64("platt_a");
    model->platt_b = r.f64("platt_b");
    model->smo_iterations = r.u64("iterations");
    model->converged = r.u64("converged") != 0;
    model->coef = r.vec("coef");
    model->support_vectors = r.matrix("support_vectors");
    return model;
}

} // namespace aep::models
