#pragma once

#include <stdexcept>
#include <string>

namespace bsgs {

/// Base of every error thrown by the library.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent input data (files, group maps, shapes).
struct input_error : error {
    using error::error;
};

/// A numerical failure while solving (rank deficiency, stalled search).
struct numeric_error : error {
    using error::error;
};

/// An invalid parameter or an infeasible request.
struct config_error : error {
    using error::error;
};

// --- input ---
struct overlap_error : input_error { using input_error::input_error; };
struct coverage_error : input_error { using input_error::input_error; };
struct empty_group_error : input_error { using input_error::input_error; };
struct shape_error : input_error { using input_error::input_error; };
struct parse_error : input_error { using input_error::input_error; };
struct unknown_column_error : input_error { using input_error::input_error; };
struct unmapped_column_error : input_error { using input_error::input_error; };
struct schema_error : input_error { using input_error::input_error; };

// --- numeric ---
struct rank_error : numeric_error { using numeric_error::numeric_error; };
struct singular_support_error : numeric_error { using numeric_error::numeric_error; };
struct cholesky_error : numeric_error { using numeric_error::numeric_error; };
struct iteration_cap_error : numeric_error { using numeric_error::numeric_error; };
struct search_stall_error : numeric_error { using numeric_error::numeric_error; };

// --- config ---
struct domain_error : config_error { using config_error::config_error; };
struct size_error : config_error { using config_error::config_error; };
struct support_too_large_error : config_error { using config_error::config_error; };
struct too_large_error : config_error { using config_error::config_error; };
struct zero_truth_error : config_error { using config_error::config_error; };

} // namespace bsgs
