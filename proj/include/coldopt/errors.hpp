#pragma once

#include <stdexcept>

namespace coldopt {

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input violates a schema or format contract; the message names the
/// offending key or line.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace coldopt
