#pragma once

#include <stdexcept>

namespace voxtopo {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace voxtopo
