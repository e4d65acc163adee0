#pragma once

#include <stdexcept>
#include <string>

namespace ltc {

/// Point outside the state space / probe region, empty search grids, etc.
struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Quadrature non-convergence, Cholesky failure, degenerate numerics.
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Time arguments outside the available horizon.
struct RangeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Not enough samples for a statistical estimate.
struct StatisticsError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Expression / config parse failure.
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Config validated but semantically invalid (e.g. negative g on probe grid).
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace ltc
