#pragma once

#include <stdexcept>
#include <string>

namespace cgc {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Argument outside the domain of an operation (non-finite input, modulus range, K = 0, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

// A ratio function or an integrand denominator vanishes. `where` is the located pole.
class PoleError : public Error {
public:
    PoleError(const std::string& what, double where) : Error(what), where_(where) {}
    double where() const noexcept { return where_; }

private:
    double where_;
};

class DivergenceError : public Error {
public:
    using Error::Error;
};

// Integration constant or modulus outside the admissible set of a branch.
class BoundsError : public Error {
public:
    BoundsError(const std::string& what, bool at_boundary = false)
        : Error(what), at_boundary_(at_boundary) {}
    bool at_boundary() const noexcept { return at_boundary_; }

private:
    bool at_boundary_;
};

enum class GeometricLimit { point, geodesic, clifford_torus, ideal_boundary };

const char* to_string(GeometricLimit g);

// Coefficients of a row degenerate at an endpoint of its parameter interval.
class DegenerateCase : public Error {
public:
    DegenerateCase(const std::string& what, GeometricLimit limit) : Error(what), limit_(limit) {}
    GeometricLimit limit() const noexcept { return limit_; }

private:
    GeometricLimit limit_;
};

// Quadric or profile constraint violated (e.g. r^2 < 1 for hyperbolic rotation).
class ConstraintViolation : public Error {
public:
    using Error::Error;
};

// Degenerate first fundamental form at (s, theta).
class SingularPoint : public Error {
public:
    SingularPoint(const std::string& what, double s, double theta)
        : Error(what), s_(s), theta_(theta) {}
    double s() const noexcept { return s_; }
    double theta() const noexcept { return theta_; }

private:
    double s_, theta_;
};

class NoClosedCurve : public Error {
public:
    using Error::Error;
};

class ProjectionError : public Error {
public:
    using Error::Error;
};

}  // namespace cgc
