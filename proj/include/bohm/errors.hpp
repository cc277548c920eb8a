#pragma once

#include <stdexcept>
#include <string>

namespace bohm {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Configuration / precondition problems.
class InvalidParameter : public Error { public: using Error::Error; };
class GridTooSmall : public Error { public: using Error::Error; };
class GeometryMismatch : public Error { public: using Error::Error; };
class UnnormalizableDensity : public Error { public: using Error::Error; };
class WindowOutOfRange : public Error { public: using Error::Error; };
class DegenerateWell : public Error { public: using Error::Error; };

// Numerical failures.
class StabilityViolation : public Error { public: using Error::Error; };
class SolverFailure : public Error { public: using Error::Error; };
class ProviderRangeExceeded : public Error { public: using Error::Error; };
class TooFewPeaks : public Error { public: using Error::Error; };
class FitDiverged : public Error { public: using Error::Error; };

}  // namespace bohm
