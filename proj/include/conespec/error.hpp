#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace conespec {

using cplx = std::complex<double>;

class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Bad input, bad config, violated precondition.
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error(what) {}
};

// A computation ran but did not converge or lost accuracy.
class NumericalError : public Error {
public:
    NumericalError(const std::string& what, double estimate = 0.0)
        : Error(what), estimate_(estimate) {}
    double estimate() const { return estimate_; }

private:
    double estimate_;
};

// A symbol failed a membership or invertibility check; carries the witness.
class SymbolRejected : public Error {
public:
    SymbolRejected(const std::string& what, double r, cplx lambda)
        : Error(what), r_(r), lambda_(lambda) {}
    double r() const { return r_; }
    cplx lambda() const { return lambda_; }

private:
    double r_;
    cplx lambda_;
};

// Evaluation requested exactly at a pole of a meromorphic continuation.
class PoleError : public Error {
public:
    PoleError(const std::string& what, cplx z) : Error(what), z_(z) {}
    cplx z() const { return z_; }

private:
    cplx z_;
};

enum class Verdict { False = 0, True = 1, Undecided = 2 };

inline const char* to_string(Verdict v) {
    switch (v) {
    case Verdict::True: return "true";
    case Verdict::False: return "false";
    default: return "undecided";
    }
}

} // namespace conespec
