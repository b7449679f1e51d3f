#pragma once

#include <stdexcept>
#include <string>

namespace neel {

// Base class for all solver-level failures so callers can catch one type.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Iterative solver ran out of iterations before reaching its tolerance.
class NonConvergence : public Error {
public:
    NonConvergence(const std::string& what, int iterations, double last_residual)
        : Error(what + " (iterations=" + std::to_string(iterations) +
                ", last_residual=" + std::to_string(last_residual) + ")"),
          iterations(iterations),
          last_residual(last_residual) {}

    int iterations;
    double last_residual;
};

// Trajectory norm exceeded the blow-up guard; signals instability or
// resolution failure.
class BlowUp : public Error {
public:
    BlowUp(double norm, double t)
        : Error("state norm " + std::to_string(norm) + " exceeded blow-up guard at t=" +
                std::to_string(t)),
          norm(norm),
          time(t) {}

    double norm;
    double time;
};

// Dense assembly requested above the configured size cap.
class DenseCapExceeded : public Error {
public:
    DenseCapExceeded(int n, int cap)
        : Error("dense assembly for N=" + std::to_string(n) + " exceeds cap " +
                std::to_string(cap)),
          n(n),
          cap(cap) {}

    int n;
    int cap;
};

// Safeguarded scalar root search left its admissible bracket.
class NoRootInBracket : public Error {
public:
    explicit NoRootInBracket(const std::string& msg) : Error(msg) {}
};

// Matrix-free eigensolver failed to lock the requested pairs.
class ArnoldiStagnation : public Error {
public:
    ArnoldiStagnation(const std::string& msg, int converged, int requested, double best_residual)
        : Error(msg + " (converged=" + std::to_string(converged) + "/" +
                std::to_string(requested) + ", best unconverged residual=" +
                std::to_string(best_residual) + ")"),
          converged(converged),
          requested(requested),
          best_residual(best_residual) {}

    int converged;
    int requested;
    double best_residual;
};

// Config file syntax error.
class ParseError : public Error {
public:
    ParseError(int line, const std::string& reason)
        : Error("config parse error at line " + std::to_string(line) + ": " + reason),
          line(line),
          reason(reason) {}

    int line;
    std::string reason;
};

// Config value violates a documented constraint.
class ValidationError : public Error {
public:
    ValidationError(const std::string& key, const std::string& constraint)
        : Error("config validation error: " + key + " violates: " + constraint),
          key(key),
          constraint(constraint) {}

    std::string key;
    std::string constraint;
};

}  // namespace neel
