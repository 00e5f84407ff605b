#pragma once

#include <stdexcept>
#include <string>

namespace mrubis::comparch {

/// A model operation was rejected; the model is left unchanged.
class ModelError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The handle's role may not perform the requested mutation.
class PermissionError : public ModelError {
public:
    using ModelError::ModelError;
};

}  // namespace mrubis::comparch
