#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace stc {

/// Base class for all library errors.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Expression text could not be parsed. Carries the byte offset of the
/// offending token inside the input.
struct parse_error : error {
    parse_error(std::string msg, std::size_t offset_)
        : error(std::move(msg)), offset(offset_) {}
    std::size_t offset;
};

/// Arithmetic domain violation (log of a non-positive value, division by a
/// jet with zero value part, ...).
struct eval_error : error {
    using error::error;
};

/// Metric-level problem: unknown catalog name, parameter out of range,
/// signature violation, point outside the domain box.
struct metric_error : error {
    using error::error;
};

/// A tensor handed to the decomposition does not satisfy the membership
/// conditions (symmetry in the last two slots, vanishing metric trace over
/// the first pair).
struct membership_error : error {
    using error::error;
};

} // namespace stc
