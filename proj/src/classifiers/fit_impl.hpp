#ifndef AEP_SRC_FIT_IMPL_HPP
#define AEP_SRC_FIT_IMPL_HPP

#include <memory>

#include "aep/classifiers.hpp"
#include "aep/models.hpp"
#include "model_io.hpp"

namespace aep::models {

std::shared_ptr<Model> fit_gnb(const ClassifierSpec& spec, const Matrix& x, const LabelVec& y);
std::shared_ptr<Model> fit_qda(const ClassifierSpec& spec, const Matrix& x, const LabelVec& y);
std::shared_ptr<Model> fit_lr(const ClassifierSpec& spec, const Matrix& x, const LabelVec& y);
std::shared_ptr<Model> fit_knn(const ClassifierSpec& spec, const Matrix& x, const LabelVec& y);
std::shared_ptr<Model> fit_dt(const ClassifierSpec& spec, const Matrix& x, const LabelVec& y);
std::shared_ptr<Model> fit_forest(const ClassifierSpec& spec, const Matrix& x, const LabelVec& y,
                                  bool balanced);
std::shared_ptr<Model> fit_adaboost(const ClassifierSpec& spec, const Matrix& x, const LabelVec& y);
std::shared_ptr<Model> fit_svm(const ClassifierSpec& spec, const Matrix& x, const LabelVec& y);

std::shared_ptr<Model> load_gnb(io::Reader& r);
std::shared_ptr<Model> load_qda(io::Reader& r);
std::shared_ptr<Model> load_lr(io::Reader& r);
std::shared_ptr<Model> load_knn(io::Reader& r);
std::shared_ptr<Model> load_dt(io::Reader& r);
std::shared_ptr<Model> load_forest(io::Reader& r, bool balanced);
std::shared_ptr<Model> load_adaboost(io::Reader& r);
std::shared_ptr<Model> load_svm(io::Reader& r);

/// Tree node list serialization shared by dt and the forests.
void write_tree(std::ostream& out, const std::vector<TreeNode>& nodes);
std::vector<TreeNode> read_tree(io::Reader& r);

/// Class counts; throws single_class_training when `require_both` and one
/// class is absent.
std::array<std::size_t, 2> class_counts(const LabelVec& y, bool require_both, const char* family);

} // namespace aep::models

#endif
