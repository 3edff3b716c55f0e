#pragma once

#include <stdexcept>
#include <string>

namespace odolab {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input: symbol files, CLI parameters, invalid words.
class InputError : public Error {
public:
    using Error::Error;
};

/// A precondition of an operation does not hold for the given arguments.
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// The requested truncated basis exceeds the configured size cap.
class CapExceeded : public Error {
public:
    using Error::Error;
};

/// An iterative kernel hit its iteration cap.
class NumericalFailure : public Error {
public:
    using Error::Error;
};

/// A mathematical verdict could not be certified. The CLI maps these to exit code 2.
class CertificateError : public Error {
public:
    using Error::Error;
};

class BoundaryZeroSuspected : public CertificateError {
public:
    BoundaryZeroSuspected(const std::string& what, double min_modulus, double margin)
        : CertificateError(what), min_modulus_(min_modulus), margin_(margin) {}

    double min_modulus() const { return min_modulus_; }
    double margin() const { return margin_; }

private:
    double min_modulus_;
    double margin_;
};

class IdenticallySingular : public CertificateError {
public:
    using CertificateError::CertificateError;
};

/// Two independent computations of the same quantity disagree.
class MethodDisagreement : public CertificateError {
public:
    using CertificateError::CertificateError;
};

class AllNsWord : public PreconditionError {
public:
    using PreconditionError::PreconditionError;
};

class OnesChainWord : public PreconditionError {
public:
    using PreconditionError::PreconditionError;
};

class OffChainSupport : public PreconditionError {
public:
    using PreconditionError::PreconditionError;
};

class NotAProjection : public PreconditionError {
public:
    using PreconditionError::PreconditionError;
};

class NotIsometric : public PreconditionError {
public:
    using PreconditionError::PreconditionError;
};

/// ran L1 is not contained in ran L2; carries the least-squares residual.
class RangeNotContained : public Error {
public:
    RangeNotContained(const std::string& what, double residual)
        : Error(what), residual_(residual) {}

    double residual() const { return residual_; }

private:
    double residual_;
};

}  // namespace odolab
