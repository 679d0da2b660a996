#pragma once

#include <stdexcept>
#include <string>

namespace chaincsg {

// Error taxonomy mirrors the CLI exit codes: validation = 2,
// geometry degeneracy = 3, I/O = 4.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ValidationError : Error {
    using Error::Error;
};

struct GeometryError : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

}  // namespace chaincsg
