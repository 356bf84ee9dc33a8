#pragma once

#include <stdexcept>

namespace rdmodal {

/// Raised when an estimator or bound computation cannot produce a meaningful
/// result for valid-looking input (rank collapse, defective eigenproblem,
/// singular Fisher matrix, ...). Precondition violations use
/// std::invalid_argument instead.
class EstimationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace rdmodal
