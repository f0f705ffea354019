#ifndef AEP_ERROR_HPP
#define AEP_ERROR_HPP

#include <stdexcept>
#include <string>

namespace aep {

/// Error categories raised by the library. The CLI maps these onto
/// process exit codes (see exit_code_for).
enum class Errc {
    // data model
    all_missing_feature,
    leading_gap,
    tau_too_large,
    empty_training_set,
    shape_mismatch,
    // fold construction / resampling
    no_events,
    beta_non_positive,
    k_too_large,
    bad_fold_index,
    single_class_training,
    // classifiers
    dimension_mismatch,
    invalid_hyperparameter,
    // evaluation
    empty_class,
    all_folds_skipped,
    k_too_small,
    // synthetic data
    infeasible_placement,
    // input/output
    parse_error,
    non_uniform_ticks,
    bad_event_value,
    io_error,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) {
    throw Error(code, what);
}

/// Exit code classes used by the CLI: 2 = bad input/config, 3 = data or
/// shape errors, 4 = protocol infeasibility, 5 = anything else.
int exit_code_for(Errc c);

} // namespace aep

#endif
