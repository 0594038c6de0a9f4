#ifndef PADGAN_ERRORS_HPP
#define PADGAN_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace padgan {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DimensionMismatch : Error {
  using Error::Error;
};

// Every rung of the jitter ladder failed; the matrix is numerically indefinite.
struct NotPositiveDefinite : Error {
  using Error::Error;
};

struct TraceMismatch : Error {
  using Error::Error;
};

struct EstimatorFailure : Error {
  using Error::Error;
};

// Raised where an objective has a genuine pole (KNO1 at x1 + x2 = 0).
struct SingularInput : Error {
  using Error::Error;
};

struct EmptySet : Error {
  using Error::Error;
};

}  // namespace padgan

#endif
