#pragma once

#include <stdexcept>
#include <string>

namespace mtswarm {

/// Bytes on disk or on the wire that do not follow the expected layout.
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace mtswarm
