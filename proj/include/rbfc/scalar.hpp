#pragma once

// Scalar abstraction: solvers are templated on T = double (working
// hardware precision) or T = DDouble (extended software precision).

#include <cmath>
#include <string_view>

#include "rbfc/ddouble.hpp"

namespace rbfc {

template <class T>
struct scalar_traits;

template <>
struct scalar_traits<double> {
  static constexpr double unit_roundoff() { return 1.1102230246251565e-16; }  // 2^-53
  static constexpr std::string_view name() { return "double"; }
  static double pi() { return 3.141592653589793; }
};

template <>
struct scalar_traits<DDouble> {
  static constexpr double unit_roundoff() { return DDouble::eps(); }
  static constexpr std::string_view name() { return "extended"; }
  static DDouble pi() { return DDouble::pi(); }
};

template <class T>
concept Scalar = requires { scalar_traits<T>::unit_roundoff(); };

// ADL-friendly math shims so generic code reads the same for both types.
using std::abs;
using std::cos;
using std::isfinite;
using std::sin;
using std::sqrt;

template <Scalar T>
T scalar_infinity() {
  if constexpr (std::is_same_v<T, DDouble>) {
    return DDouble::infinity();
  } else {
    return std::numeric_limits<double>::infinity();
  }
}

}  // namespace rbfc
