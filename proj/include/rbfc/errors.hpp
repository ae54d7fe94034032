#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rbfc {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SingularMatrix : Error {
  explicit SingularMatrix(std::size_t pivot)
      : Error("exact zero pivot at column " + std::to_string(pivot)),
        pivot_column(pivot) {}
  std::size_t pivot_column;
};

struct DimensionMismatch : Error {
  using Error::Error;
};

struct NoConvergence : Error {
  NoConvergence(std::size_t its, double resid)
      : Error("iterative solve stalled after " + std::to_string(its) +
              " iterations, relative residual " + std::to_string(resid)),
        iterations(its),
        residual(resid) {}
  std::size_t iterations;
  double residual;
};

struct InvalidLayout : Error {
  using Error::Error;
};

struct TooFewNodes : Error {
  using Error::Error;
};

struct DegenerateStencil : Error {
  using Error::Error;
};

struct InconsistentLayout : Error {
  using Error::Error;
};

struct UnsupportedBoundaryOperator : Error {
  using Error::Error;
};

struct MissingStateValue : Error {
  using Error::Error;
};

}  // namespace rbfc
