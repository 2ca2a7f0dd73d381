#pragma once

#include <stdexcept>
#include <string>

namespace mobnil {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Input outside the documented domain of an operation.
class RangeError : public Error { public: using Error::Error; };
class CapacityError : public Error { public: using Error::Error; };
class PreconditionError : public Error { public: using Error::Error; };
class ParameterError : public Error { public: using Error::Error; };
class DomainError : public Error { public: using Error::Error; };
class ConstraintError : public Error { public: using Error::Error; };
class SpecError : public Error { public: using Error::Error; };
class AccuracyError : public Error { public: using Error::Error; };
class ModulusError : public Error { public: using Error::Error; };

// Persistence failures.
class IoError : public Error { public: using Error::Error; };
class FormatError : public Error { public: using Error::Error; };
class ChecksumError : public FormatError { public: using FormatError::FormatError; };

// Bad user input at the command-line or config layer.
class ValidationError : public Error { public: using Error::Error; };

}  // namespace mobnil
