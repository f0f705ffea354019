#include "aep/error.hpp"

namespace aep {

const char* errc_name(Errc c) {
    switch (c) {
        case Errc::all_missing_feature: return "AllMissingFeature";
        case Errc::leading_gap: return "LeadingGap";
        case Errc::tau_too_large: return "TauTooLarge";
        case Errc::empty_training_set: return "EmptyTrainingSet";
        case Errc::shape_mismatch: return "ShapeMismatch";
        case Errc::no_events: return "NoEvents";
        case Errc::beta_non_positive: return "BetaNonPositive";
        case Errc::k_too_large: return "KTooLarge";
        case Errc::bad_fold_index: return "BadFoldIndex";
        case Errc::single_class_training: return "SingleClassTraining";
        case Errc::dimension_mismatch: return "DimensionMismatch";
        case Errc::invalid_hyperparameter: return "InvalidHyperparameter";
        case Errc::empty_class: return "EmptyClass";
        case Errc::all_folds_skipped: return "AllFoldsSkipped";
        case Errc::k_too_small: return "KTooSmall";
        case Errc::infeasible_placement: return "InfeasiblePlacement";
        case Errc::parse_error: return "ParseError";
        case Errc::non_uniform_ticks: return "NonUniformTicks";
        case Errc::bad_event_value: return "BadEventValue";
        case Errc::io_error: return "IoError";
    }
    return "UnknownError";
}

int exit_code_for(Errc c) {
    switch (c) {
        case Errc::parse_error:
        case Errc::non_uniform_ticks:
        case Errc::bad_event_value:
        case Errc::invalid_hyperparameter:
            return 2;
        case Errc::all_missing_feature:
        case Errc::leading_gap:
        case Errc::tau_too_large:
        case Errc::empty_training_set:
        case Errc::shape_mismatch:
        case Errc::dimension_mismatch:
            return 3;
        case Errc::no_events:
        case Errc::beta_non_positive:
        case Errc::k_too_large:
        case Errc::bad_fold_index:
        case Errc::single_class_training:
        case Errc::empty_class:
        case Errc::all_folds_skipped:
        case Errc::k_too_small:
        case Errc::infeasible_placement:
            return 4;
        case Errc::io_error:
            return 5;
    }
    return 5;
}

} // namespace aep
