#pragma once

#include <stdexcept>
#include <string>

namespace metriclab {

// Base class for everything thrown by this library.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// A point or direction has the wrong number of coordinates for the domain.
struct DimensionMismatch : Error {
    explicit DimensionMismatch(const std::string& msg) : Error(msg) {}
};

// Evaluation requested at a point outside the (open) domain.
struct OutsideDomain : Error {
    explicit OutsideDomain(const std::string& msg) : Error(msg) {}
};

// Nearest boundary point is not unique within tolerance.
struct AmbiguousFoot : Error {
    explicit AmbiguousFoot(const std::string& msg) : Error(msg) {}
};

// Adaptive quadrature failed to reach its target.
struct QuadratureFailure : Error {
    explicit QuadratureFailure(const std::string& msg) : Error(msg) {}
};

// Rejection sampler exhausted its attempt budget.
struct SamplingFailure : Error {
    explicit SamplingFailure(const std::string& msg) : Error(msg) {}
};

// Convex solver hit its iteration cap before reaching the requested gap.
struct SolverFailure : Error {
    explicit SolverFailure(const std::string& msg) : Error(msg) {}
};

// Feasibility slack reached 1; no candidate can be certified.
struct InfeasibleSlack : Error {
    explicit InfeasibleSlack(const std::string& msg) : Error(msg) {}
};

// Evaluation on (or too close to) the zero set of K(.,p).
struct KernelZeroSet : Error {
    explicit KernelZeroSet(const std::string& msg) : Error(msg) {}
};

// Truncated metric failed a positivity check.
struct IndefiniteMetric : Error {
    explicit IndefiniteMetric(const std::string& msg) : Error(msg) {}
};

// A computed quantity violated a hard mathematical bound.
struct NumericalFailure : Error {
    explicit NumericalFailure(const std::string& msg) : Error(msg) {}
};

// Bad experiment configuration or CLI usage.
struct ConfigFailure : Error {
    explicit ConfigFailure(const std::string& msg) : Error(msg) {}
};

} // namespace metriclab
