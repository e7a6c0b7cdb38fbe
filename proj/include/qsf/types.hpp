#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace qsf {

// Base class for every error this library throws.
class QError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DomainError : public QError {
public:
    using QError::QError;
};

// Argument within pole_eps of a nonpositive-integer pole of Gamma_q / psi_q.
class PoleError : public QError {
public:
    using QError::QError;
};

// Series hit max_terms before the stop rule fired.
class ConvergenceError : public QError {
public:
    using QError::QError;
};

// Generic-order q-Neumann requested too close to an integer order.
class NearIntegerError : public QError {
public:
    using QError::QError;
};

// A validity condition of a product formula is violated.
class PreconditionError : public QError {
public:
    using QError::QError;
};

// Bilateral sum terms grew past the guard without turning over.
class DivergenceError : public QError {
public:
    using QError::QError;
};

enum EvalFlag : unsigned {
    NearPole = 1u << 0,
    SlowConvergence = 1u << 1,
    CancellationRisk = 1u << 2,
};

// "-" when empty, otherwise names joined with '|'.
std::string flag_names(unsigned flags);

/// Deformation parameter q in (0,1) with its cached natural log.
struct QParam {
    double value;
    double log_value;

    explicit QParam(double q) : value(q), log_value(0.0) {
        if (!(q > 0.0 && q < 1.0))
            throw DomainError("QParam: q must lie in (0,1), got " + std::to_string(q));
        if (q > 0.9999)
            throw DomainError("QParam: q > 0.9999 not supported by the default policy");
        log_value = std::log(q);
    }
};

/// Governs truncation of every infinite series and product.
struct TruncationPolicy {
    double rel_tol = 1e-14;
    long max_terms = 10000000;
    int stop_run = 3;       // consecutive below-threshold terms required to stop
    double pole_eps = 1e-8; // guard radius around nonpositive-integer poles

    void validate() const {
        if (!(rel_tol > 0.0 && rel_tol < 1.0))
            throw DomainError("TruncationPolicy: rel_tol must be in (0,1)");
        if (max_terms < 1)
            throw DomainError("TruncationPolicy: max_terms must be >= 1");
        if (stop_run < 1)
            throw DomainError("TruncationPolicy: stop_run must be >= 1");
        if (!(pole_eps > 0.0))
            throw DomainError("TruncationPolicy: pole_eps must be positive");
    }
};

/// A computed value plus truncation-error estimate and diagnostics.
struct Evaluation {
    double value = 0.0;
    double est_error = 0.0;
    long terms_used = 0;
    unsigned flags = 0;
};

} // namespace qsf
