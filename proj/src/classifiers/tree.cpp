#include <algorithm>
#include <limits>
#include <cmath>
#include <memory>
#include <numeric>
#include <vector>

#include "aep/models.hpp"
#include "aep/rng.hpp"
#include "fit_impl.hpp"

namespace aep::models {

namespace {

// Sum of children Gini impurities weighted by child size (parent size
// cancels when comparing candidate splits).
double weighted_child_impurity(std::size_t l1, std::size_t nl, std::size_t r1, std::size_t nr) {
    const double dl = static_cast<double>(nl);
    const double dr = static_cast<double>(nr);
    const double l1d = static_cast<double>(l1);
    const double r1d = static_cast<double>(r1);
    const double gini_l = dl - (l1d * l1d + (dl - l1d) * (dl - l1d)) / dl;
    const double gini_r = dr - (r1d * r1d + (dr - r1d) * (dr - r1d)) / dr;
    return gini_l + gini_r;
}

struct TreeBuilder {
    const Matrix& x;
    const LabelVec& y;
    const TreeParams& params;
    Rng& rng;
    std::vector<TreeNode> nodes;
    std::vector<std::size_t> samples;      // permuted in place while splitting
    std::vector<std::size_t> feature_pool; // scratch for per-node subsampling
    std::vector<std::size_t> sorted;       // scratch for value ordering

    std::size_t effective_max_features() const {
        if (params.max_features == 0 || params.max_features >= x.cols) return x.cols;
        return params.max_features;
    }

    void candidate_features(std::vector<std::size_t>& out) {
        const std::size_t m = effective_max_features();
        out.clear();
        if (m == x.cols) {
            out.resize(m);
            std::iota(out.begin(), out.end(), 0);
            return;
        }
        feature_pool.resize(x.cols);
        std::iota(feature_pool.begin(), feature_pool.end(), 0);
        for (std::size_t i = 0; i < m; ++i) {
            const std::size_t j = i + rng.index(feature_pool.size() - i);
            std::swap(feature_pool[i], feature_pool[j]);
            out.push_back(feature_pool[i]);
        }
        std::sort(out.begin(), out.end());
    }

    std::uint32_t build(std::size_t begin, std::size_t end, std::size_t depth) {
        const std::uint32_t id = static_cast<std::uint32_t>(nodes.size());
        nodes.emplace_back();

        const std::size_t n = end - begin;
        std::size_t n1 = 0;
        for (std::size_t i = begin; i < end; ++i) n1 += y[samples[i]];
        nodes[id].p1 = static_cast<double>(n1) / static_cast<double>(n);

        const bool pure = n1 == 0 || n1 == n;
        const bool depth_capped = params.max_depth > 0 && depth >= params.max_depth;
        if (pure || depth_capped || n < 2 * params.min_samples_leaf) return id;

        std::vector<std::size_t> features;
        candidate_features(features);

        double best_score = std::numeric_limits<double>::infinity();
        std::size_t best_feature = 0;
        double best_threshold = 0.0;
        bool found = false;

        for (std::size_t f : features) {
            sorted.assign(samples.begin() + begin, samples.begin() + end);
            std::sort(sorted.begin(), sorted.end(), [&](std::size_t a, std::size_t b) {
                if (x(a, f) != x(b, f)) return x(a, f) < x(b, f);
                return a < b;
            });
            std::size_t left1 = 0;
            for (std::size_t i = 0; i + 1 < n; ++i) {
                left1 += y[sorted[i]];
                const double v = x(sorted[i], f);
                const double next = x(sorted[i + 1], f);
                if (v == next) continue;
                const std::size_t nl = i + 1;
                const std::size_t nr = n - nl;
                if (nl < params.min_samples_leaf || nr < params.min_samples_leaf) continue;
                const double score = weighted_child_impurity(left1, nl, n1 - left1, nr);
                // iteration order (features then thresholds ascending) makes
                // strict < implement the lowest-feature, lowest-threshold tie rule
                if (score < best_score) {
                    best_score = score;
                    best_feature = f;
                    best_threshold = 0.5 * (v + next);
                    found = true;
                }
            }
        }
        if (!found) return id; // nothing splittable among the candidates

        const auto mid = std::partition(samples.begin() + begin, samples.begin() + end,
                                        [&](std::size_t s) { return x(s, best_feature) < best_threshold; });
        const std::size_t split = static_cast<std::size_t>(mid - samples.begin());
        // A midpoint between distinct values always separates the sides, but
        // guard against degenerate arithmetic anyway.
        if (split == begin || split == end) return id;

        nodes[id].leaf = false;
        nodes[id].feature = static_cast<std::uint32_t>(best_feature);
        nodes[id].threshold = best_threshold;
        const std::uint32_t left = build(begin, split, depth + 1);
        nodes[id].left = left;
        const std::uint32_t right = build(split, end, depth + 1);
        nodes[id].right = right;
        return id;
    }
};

} // namespace

std::vector<TreeNode> grow_tree(const Matrix& x, const LabelVec& y,
                                std::span<const std::size_t> sample_rows,
                                const TreeParams& params, Rng& rng) {
    TreeBuilder builder{x, y, params, rng, {}, {}, {}, {}};
    builder.samples.assign(sample_rows.begin(), sample_rows.end());
    builder.build(0, builder.samples.size(), 0);
    return std::move(builder.nodes);
}

double TreeModel::predict_row(std::span<const double> row) const {
    std::size_t id = 0;
    while (!nodes[id].leaf)
        id = row[nodes[id].feature] < nodes[id].threshold ? nodes[id].left : nodes[id].right;
    return nodes[id].p1;
}

void TreeModel::predict_proba_into(const Matrix& x, std::vector<double>& out) const {
    for (std::size_t r = 0; r < x.rows; ++r) out[r] = predict_row(x.row(r));
}

std::shared_ptr<Model> fit_dt(const ClassifierSpec& spec, const Matrix& x, const LabelVec& y) {
    TreeParams params;
    params.max_depth = static_cast<std::size_t>(spec.get("max_depth", 0.0));
    params.min_samples_leaf = static_cast<std::size_t>(spec.get("min_samples_leaf", 1.0));
    params.max_features = static_cast<std::size_t>(spec.get("max_features", 0.0));

    std::vector<std::size_t> rows(x.rows);
    std::iota(rows.begin(), rows.end(), 0);
    Rng rng(derive_seed(spec.seed, {seed_tag::tree, 0}));

    auto model = std::make_shared<TreeModel>();
    model->nodes = grow_tree(x, y, rows, params, rng);
    return model;
}

void ForestModel::predict_proba_into(const Matrix& x, std::vector<double>& out) const {
    std::vector<double> acc(x.rows, 0.0);
    TreeModel scratch;
    for (const auto& tree : trees) {
        scratch.nodes = tree;
        for (std::size_t r = 0; r < x.rows; ++r) acc[r] += scratch.predict_row(x.row(r));
        scratch.nodes.clear();
    }
    const double inv = 1.0 / static_cast<double>(trees.size());
    for (std::size_t r = 0; r < x.rows; ++r) out[r] = acc[r] * inv;
}

std::shared_ptr<Model> fit_forest(const ClassifierSpec& spec, const Matrix& x, const LabelVec& y,
                                  bool balanced) {
    const std::size_t n_estimators = static_cast<std::size_t>(spec.get("n_estimators", 100.0));
    TreeParams params;
    params.max_depth = static_cast<std::size_t>(spec.get("max_depth", 0.0));
    params.min_samples_leaf = static_cast<std::size_t>(spec.get("min_samples_leaf", 1.0));
    params.max_features = static_cast<std::size_t>(spec.get("max_features", 0.0));
    if (params.max_features == 0)
        params.max_features =
            static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(x.cols))));

    const std::string strategy = spec.get("sampling_strategy", std::string("under"));
    std::vector<std::size_t> class_rows[2];
    if (balanced) {
        class_counts(y, true, "brf");
        for (std::size_t r = 0; r < x.rows; ++r) class_rows[y[r]].push_back(r);
    }

    auto model = std::make_shared<ForestModel>();
    model->balanced = balanced;
    if (balanced) model->sampling_strategy = strategy;
    model->trees.reserve(n_estimators);

    std::vector<std::size_t> sample;
    for (std::size_t t = 0; t < n_estimators; ++t) {
        Rng rng(derive_seed(spec.seed, {seed_tag::tree, t}));
        sample.clear();
        if (balanced) {
            // per-tree class-balanced bootstrap: equal draws from each class
            const std::size_t n0 = class_rows[0].size();
            const std::size_t n1 = class_rows[1].size();
            const std::size_t per_class =
                strategy == "under" ? std::min(n0, n1) : std::max(n0, n1);
            for (int cls = 0; cls < 2; ++cls)
                for (std::size_t i = 0; i < per_class; ++i)
                    sample.push_back(class_rows[cls][rng.index(class_rows[cls].size())]);
        } else {
            for (std::size_t i = 0; i < x.rows; ++i) sample.push_back(rng.index(x.rows));
        }
        model->trees.push_back(grow_tree(x, y, sample, params, rng));
    }
    return model;
}

void write_tree(std::ostream& out, const std::vector<TreeNode>& nodes) {
    out << "tree " << nodes.size();
    for (const auto& n : nodes)
        out << ' ' << (n.leaf ? 1 : 0) << ' ' << n.feature << ' ' << io::f64_to_hex(n.threshold)
            << ' ' << n.left << ' ' << n.right << ' ' << io::f64_to_hex(n.p1);
    out << '\n';
}

std::vector<TreeNode> read_tree(io::Reader& r) {
    r.expect("tree");
    const std::uint64_t count = r.u64_value();
    std::vector<TreeNode> nodes(count);
    for (auto& n : nodes) {
        n.leaf = r.u64_value() != 0;
        n.feature = static_cast<std::uint32_t>(r.u64_value());
        n.threshold = io::hex_to_f64(r.token());
        n.left = static_cast<std::uint32_t>(r.u64_value());
        n.right = static_cast<std::uint32_t>(r.u64_value());
        n.p1 = io::hex_to_f64(r.token());
    }
    return nodes;
}

void TreeModel::save_params(std::ostream& out) const { write_tree(out, nodes); }

std::shared_ptr<Model> load_dt(io::Reader& r) {
    auto model = std::make_shared<TreeModel>();
    model->nodes = read_tree(r);
    return model;
}

void ForestModel::save_params(std::ostream& out) const {
    io::write_kv(out, "sampling_strategy",
                 sampling_strategy.empty() ? std::string("-") : sampling_strategy);
    io::write_kv(out, "n_trees", static_cast<std::uint64_t>(trees.size()));
    for (const auto& t : trees) write_tree(out, t);
}

std::shared_ptr<Model> load_forest(io::Reader& r, bool balanced) {
    auto model = std::make_shared<ForestModel>();
    model->balanced = balanced;
    const std::string strategy = r.str("sampling_strategy");
    model->sampling_strategy = strategy == "-" ? "" : strategy;
    const std::uint64_t n = r.u64("n_trees");
    model->trees.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) model->trees.push_back(read_tree(r));
    return model;
}

} // namespace aep::models
