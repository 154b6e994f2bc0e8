#pragma once

#include <stdexcept>
#include <string>

namespace odl {

struct ConstraintViolation : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct ProbabilityEscape : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

struct RegimeMismatch : std::logic_error {
    using std::logic_error::logic_error;
};

struct OracleCapExceeded : std::length_error {
    using std::length_error::length_error;
};

struct OrderCapExceeded : std::length_error {
    using std::length_error::length_error;
};

struct StrideIncompatible : std::logic_error {
    using std::logic_error::logic_error;
};

struct ToleranceUnreachable : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParamsMismatch : std::logic_error {
    using std::logic_error::logic_error;
};

struct ResourceCap : std::length_error {
    using std::length_error::length_error;
};

} // namespace odl
