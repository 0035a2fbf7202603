#pragma once

#include <stdexcept>
#include <string>

namespace nlcl {

/// Base class for all library runtime errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct GridMismatch : Error {
    using Error::Error;
};

struct InvalidInterval : Error {
    using Error::Error;
};

struct KernelNotNormalized : Error {
    using Error::Error;
};

struct WrongKernelFamily : Error {
    using Error::Error;
};

struct UnstableStep : Error {
    using Error::Error;
};

struct NonfiniteState : Error {
    using Error::Error;
};

struct FluxNotGenuinelyNonlinear : Error {
    using Error::Error;
};

struct EntropyUnboundedAtZero : Error {
    using Error::Error;
};

struct TestFunctionOutOfWindow : Error {
    using Error::Error;
};

struct SnapshotMissing : Error {
    using Error::Error;
};

/// Raised for malformed experiment configuration files.
struct ConfigError : Error {
    using Error::Error;
};

}  // namespace nlcl
