#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numeric>
#include <vector>

#include "aep/models.hpp"
#include "fit_impl.hpp"

namespace aep::models {

namespace {

struct StumpSearch {
    Stump best;
    double best_error = std::numeric_limits<double>::infinity();
    bool found = false;

    void offer(std::uint32_t feature, double threshold, std::uint8_t high_class, double error) {
        // ties keep the earliest candidate: lowest feature, lowest threshold,
        // high_class = 1 before 0
        if (error < best_error) {
            best_error = error;
            best = Stump{feature, threshold, high_class, 0.0, error};
            found = true;
        }
    }
};

/// Exhaustive weighted-error minimization over (feature, threshold,
/// polarity). Thresholds are midpoints between consecutive distinct values.
bool best_stump(const Matrix& x, const LabelVec& y, const std::vector<double>& w, Stump& out) {
    const std::size_t n = x.rows;
    StumpSearch search;
    std::vector<std::size_t> order(n);

    for (std::size_t f = 0; f < x.cols; ++f) {
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            if (x(a, f) != x(b, f)) return x(a, f) < x(b, f);
            return a < b;
        });

        // err(threshold, high_class=1) = sum of w for positives below + negatives at/above.
        double pos_below = 0.0;
        double neg_at_or_above = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            if (!y[i]) neg_at_or_above += w[i];

        for (std::size_t i = 0; i + 1 < n; ++i) {
            const std::size_t s = order[i];
            if (y[s]) pos_below += w[s];
            else neg_at_or_above -= w[s];
            const double v = x(s, f);
            const double next = x(order[i + 1], f);
            if (v == next) continue;
            const double threshold = 0.5 * (v + next);
            const double err_high1 = pos_below + neg_at_or_above;
            search.offer(static_cast<std::uint32_t>(f), threshold, 1, err_high1);
            search.offer(static_cast<std::uint32_t>(f), threshold, 0, 1.0 - err_high1);
        }
    }
    if (search.found) out = search.best;
    return search.found;
}

} // namespace

void AdaboostModel::predict_proba_into(const Matrix& x, std::vector<double>& out) const {
    double alpha_sum = 0.0;
    for (const auto& s : stumps) alpha_sum += s.alpha;
    for (std::size_t r = 0; r < x.rows; ++r) {
        if (stumps.empty() || alpha_sum <= 0.0) {
            out[r] = 0.5;
            continue;
        }
        double margin = 0.0;
        const auto row = x.row(r);
        for (const auto& s : stumps) margin += s.alpha * (s.predict(row) ? 1.0 : -1.0);
        out[r] = 0.5 * (1.0 + margin / alpha_sum);
    }
}

std::shared_ptr<Model> fit_adaboost(const ClassifierSpec& spec, const Matrix& x, const LabelVec& y) {
    class_counts(y, true, "adaboost");
    const std::size_t n_estimators = static_cast<std::size_t>(spec.get("n_estimators", 50.0));
    const double learning_rate = spec.get("learning_rate", 1.0);
    const std::size_t n = x.rows;

    auto model = std::make_shared<AdaboostModel>();
    std::vector<double> w(n, 1.0 / static_cast<double>(n));

    for (std::size_t m = 0; m < n_estimators; ++m) {
        Stump stump;
        if (!best_stump(x, y, w, stump)) break; // no distinct feature values left

        // SAMME with two classes: stop once no stump beats chance.
        if (stump.weighted_error >= 0.5) break;

        if (stump.weighted_error < 1e-12) {
            stump.alpha = learning_rate * std::log((1.0 - 1e-12) / 1e-12);
            model->stumps.push_back(stump);
            break;
        }

        stump.alpha =
            learning_rate * std::log((1.0 - stump.weighted_error) / stump.weighted_error);
        model->stumps.push_back(stump);

        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const bool miss = stump.predict(x.row(i)) != static_cast<int>(y[i]);
            if (miss) w[i] *= std::exp(stump.alpha);
            total += w[i];
        }
        for (auto& wi : w) wi /= total;
    }
    return model;
}

void AdaboostModel::save_params(std::ostream& out) const {
    io::write_kv(out, "n_stumps", static_cast<std::uint64_t>(stumps.size()));
    for (const auto& s : stumps)
        out << "stump " << s.feature << ' ' << io::f64_to_hex(s.threshold) << ' '
            << static_cast<unsigned>(s.high_class) << ' ' << io::f64_to_hex(s.alpha) << ' '
            << io::f64_to_hex(s.weighted_error) << '\n';
}

std::shared_ptr<Model> load_adaboost(io::Reader& r) {
    auto model = std::make_shared<AdaboostModel>();
    const std::uint64_t n = r.u64("n_stumps");
    model->stumps.resize(n);
    for (auto& s : model->stumps) {
        r.expect("stump");
        s.feature = static_cast<std::uint32_t>(r.u64_value());
        s.threshold = io::hex_to_f64(r.token());
        s.high_class = static_cast<std::uint8_t>(r.u64_value());
        s.alpha = io::hex_to_f64(r.token());
        s.weighted_error = io::hex_to_f64(r.token());
    }
    return model;
}

} // namespace aep::models
