#include <algorithm>
#include <memory>
#include <numeric>
#include <vector>

#include "aep/models.hpp"
#include "fit_impl.hpp"

namespace aep::models {

void KnnModel::predict_proba_into(const Matrix& x, std::vector<double>& out) const {
    const std::size_t n = train_x.rows;
    const std::size_t k_eff = std::min(k, n);
    std::vector<std::pair<double, std::size_t>> dist(n);
    for (std::size_t r = 0; r < x.rows; ++r) {
        const auto row = x.row(r);
        for (std::size_t i = 0; i < n; ++i)
            dist[i] = {squared_distance(row, train_x.row(i)), i};
        // distance ties break towards the lower training index
        std::partial_sort(dist.begin(), dist.begin() + k_eff, dist.end());
        std::size_t positives = 0;
        for (std::size_t i = 0; i < k_eff; ++i) positives += train_y[dist[i].second];
        out[r] = static_cast<double>(positives) / static_cast<double>(k_eff);
    }
}

std::shared_ptr<Model> fit_knn(const ClassifierSpec& spec, const Matrix& x, const LabelVec& y) {
    auto model = std::make_shared<KnnModel>();
    model->k = static_cast<std::size_t>(spec.get("k", 5.0));
    model->train_x = x;
    model->train_y = y;
    return model;
}

void KnnModel::save_params(std::ostream& out) const {
    io::write_kv(out, "k", static_cast<std::uint64_t>(k));
    io::write_matrix(out, "train_x", train_x);
    out << "train_y " << train_y.size();
    for (std::uint8_t v : train_y) out << ' ' << static_cast<unsigned>(v);
    out << '\n';
}

std::shared_ptr<Model> load_knn(io::Reader& r) {
    auto model = std::make_shared<KnnModel>();
    model->k = r.u64("k");
    model->train_x = r.matrix("train_x");
    r.expect("train_y");
    const std::uint64_t n = r.u64_value();
    model->train_y.resize(n);
    for (auto& v : model->train_y) v = static_cast<std::uint8_t>(r.u64_value());
    return model;
}

} // namespace aep::models
