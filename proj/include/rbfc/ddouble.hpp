#pragma once

// Double-double ("extended") arithmetic: an unevaluated sum of two IEEE
// doubles giving ~31-32 decimal digits.  Algorithms follow Dekker (1971),
// Knuth TAOCP v2, and the QD library of Hida/Li/Bailey.

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <string>

namespace rbfc {

// Error-free transforms.  These must not be compiled with value-changing
// FP optimizations (-ffast-math breaks them).
inline double two_sum(double a, double b, double& err) {
  double s = a + b;
  double bb = s - a;
  err = (a - (s - bb)) + (b - bb);
  return s;
}

// Requires |a| >= |b| or a == 0.
inline double quick_two_sum(double a, double b, double& err) {
  double s = a + b;
  err = b - (s - a);
  return s;
}

inline double two_prod(double a, double b, double& err) {
#if defined(__FMA__) || defined(FP_FAST_FMA)
  double p = a * b;
  err = std::fma(a, b, -p);
  return p;
#else
  constexpr double kSplit = 134217729.0;  // 2^27 + 1
  double p = a * b;
  double ta = kSplit * a;
  double ahi = ta - (ta - a);
  double alo = a - ahi;
  double tb = kSplit * b;
  double bhi = tb - (tb - b);
  double blo = b - bhi;
  err = ((ahi * bhi - p) + ahi * blo + alo * bhi) + alo * blo;
  return p;
#endif
}

class DDouble {
 public:
  constexpr DDouble() = default;
  constexpr DDouble(double x) : hi_(x) {}
  constexpr DDouble(int x) : hi_(x) {}
  constexpr DDouble(long x) : hi_(static_cast<double>(x)) {}
  constexpr DDouble(std::size_t x) : hi_(static_cast<double>(x)) {}

  static constexpr DDouble from_parts(double hi, double lo) {
    return DDouble(hi, lo, 0);
  }

  constexpr double hi() const { return hi_; }
  constexpr double lo() const { return lo_; }

  // Unit roundoff of the format, 2^-104.
  static constexpr double eps() { return 4.93038065763132e-32; }

  static constexpr DDouble pi() {
    return from_parts(3.141592653589793116e+00, 1.224646799147353207e-16);
  }
  static constexpr DDouble infinity() {
    return from_parts(std::numeric_limits<double>::infinity(), 0.0);
  }

  friend DDouble operator+(const DDouble& a, const DDouble& b) {
    double s2, t2;
    double s1 = two_sum(a.hi_, b.hi_, s2);
    double t1 = two_sum(a.lo_, b.lo_, t2);
    s2 += t1;
    s1 = quick_two_sum(s1, s2, s2);
    s2 += t2;
    s1 = quick_two_sum(s1, s2, s2);
    return from_parts(s1, s2);
  }
  friend DDouble operator+(const DDouble& a, double b) {
    double e;
    double s = two_sum(a.hi_, b, e);
    e += a.lo_;
    s = quick_two_sum(s, e, e);
    return from_parts(s, e);
  }
  friend DDouble operator+(double a, const DDouble& b) { return b + a; }

  friend DDouble operator-(const DDouble& a) {
    return from_parts(-a.hi_, -a.lo_);
  }
  friend DDouble operator-(const DDouble& a, const DDouble& b) { return a + (-b); }
  friend DDouble operator-(const DDouble& a, double b) { return a + (-b); }
  friend DDouble operator-(double a, const DDouble& b) { return (-b) + a; }

  friend DDouble operator*(const DDouble& a, const DDouble& b) {
    double p2;
    double p1 = two_prod(a.hi_, b.hi_, p2);
    p2 += a.hi_ * b.lo_ + a.lo_ * b.hi_;
    p1 = quick_two_sum(p1, p2, p2);
    return from_parts(p1, p2);
  }
  friend DDouble operator*(const DDouble& a, double b) {
    double p2;
    double p1 = two_prod(a.hi_, b, p2);
    p2 += a.lo_ * b;
    p1 = quick_two_sum(p1, p2, p2);
    return from_parts(p1, p2);
  }
  friend DDouble operator*(double a, const DDouble& b) { return b * a; }

  // Long division: three quotient corrections give a full-precision result.
  friend DDouble operator/(const DDouble& a, const DDouble& b) {
    double q1 = a.hi_ / b.hi_;
    DDouble r = a - b * q1;
    double q2 = r.hi_ / b.hi_;
    r = r - b * q2;
    double q3 = r.hi_ / b.hi_;
    double e;
    double s = quick_two_sum(q1, q2, e);
    return DDouble::from_parts(s, e) + q3;
  }
  friend DDouble operator/(const DDouble& a, double b) { return a / DDouble(b); }
  friend DDouble operator/(double a, const DDouble& b) { return DDouble(a) / b; }

  DDouble& operator+=(const DDouble& o) { return *this = *this + o; }
  DDouble& operator-=(const DDouble& o) { return *this = *this - o; }
  DDouble& operator*=(const DDouble& o) { return *this = *this * o; }
  DDouble& operator/=(const DDouble& o) { return *this = *this / o; }
  DDouble& operator+=(double o) { return *this = *this + o; }
  DDouble& operator-=(double o) { return *this = *this - o; }
  DDouble& operator*=(double o) { return *this = *this * o; }
  DDouble& operator/=(double o) { return *this = *this / o; }

  friend constexpr bool operator==(const DDouble& a, const DDouble& b) {
    return a.hi_ == b.hi_ && a.lo_ == b.lo_;
  }
  friend constexpr bool operator!=(const DDouble& a, const DDouble& b) {
    return !(a == b);
  }
  friend constexpr bool operator<(const DDouble& a, const DDouble& b) {
    return a.hi_ < b.hi_ || (a.hi_ == b.hi_ && a.lo_ < b.lo_);
  }
  friend constexpr bool operator>(const DDouble& a, const DDouble& b) { return b < a; }
  friend constexpr bool operator<=(const DDouble& a, const DDouble& b) { return !(b < a); }
  friend constexpr bool operator>=(const DDouble& a, const DDouble& b) { return !(a < b); }

 private:
  constexpr DDouble(double hi, double lo, int) : hi_(hi), lo_(lo) {}
  double hi_ = 0.0;
  double lo_ = 0.0;
};

inline DDouble abs(const DDouble& a) {
  return (a.hi() < 0.0 || (a.hi() == 0.0 && a.lo() < 0.0)) ? -a : a;
}

inline bool isfinite(const DDouble& a) { return std::isfinite(a.hi()); }

inline double to_double(const DDouble& a) { return a.hi(); }
inline double to_double(double a) { return a; }

inline DDouble sqr(const DDouble& a) { return a * a; }

inline DDouble sqrt(const DDouble& a) {
  if (a.hi() == 0.0 && a.lo() == 0.0) return DDouble(0.0);
  if (a.hi() < 0.0) return DDouble(std::numeric_limits<double>::quiet_NaN());
  if (std::isinf(a.hi())) return a;
  // Karp's trick: one Newton step on 1/sqrt applied in double-double.
  double x = 1.0 / std::sqrt(a.hi());
  double ax = a.hi() * x;
  DDouble axd(ax);
  DDouble err = a - sqr(axd);
  return axd + err.hi() * (x * 0.5);
}

namespace detail {

// Taylor sum for |x| <= pi/4 + slack.
inline DDouble sin_taylor(const DDouble& x) {
  if (x.hi() == 0.0) return DDouble(0.0);
  const double thresh = 0.5 * DDouble::eps() * std::fabs(x.hi());
  DDouble x2 = sqr(x);
  DDouble term = x;
  DDouble sum = x;
  int k = 1;
  do {
    term = term * x2 / static_cast<double>((2 * k) * (2 * k + 1));
    term = -term;
    sum += term;
    ++k;
  } while (std::fabs(term.hi()) > thresh && k < 40);
  return sum;
}

inline DDouble cos_taylor(const DDouble& x) {
  if (x.hi() == 0.0) return DDouble(1.0);
  const double thresh = 0.5 * DDouble::eps();
  DDouble x2 = sqr(x);
  DDouble term(1.0);
  DDouble sum(1.0);
  int k = 1;
  do {
    term = term * x2 / static_cast<double>((2 * k - 1) * (2 * k));
    term = -term;
    sum += term;
    ++k;
  } while (std::fabs(term.hi()) > thresh && k < 40);
  return sum;
}

}  // namespace detail

// sin/cos with quadrant reduction; adequate for the moderate arguments
// (|x| well below 1/eps_double) this library produces.
inline DDouble sin(const DDouble& x) {
  const DDouble half_pi = DDouble::pi() * 0.5;
  double k = std::round(x.hi() / (0.5 * 3.141592653589793));
  DDouble r = x - half_pi * k;
  long q = static_cast<long>(k) & 3L;  // k mod 4, k may be negative
  if (q < 0) q += 4;
  switch (q) {
    case 0: return detail::sin_taylor(r);
    case 1: return detail::cos_taylor(r);
    case 2: return -detail::sin_taylor(r);
    default: return -detail::cos_taylor(r);
  }
}

inline DDouble cos(const DDouble& x) {
  const DDouble half_pi = DDouble::pi() * 0.5;
  double k = std::round(x.hi() / (0.5 * 3.141592653589793));
  DDouble r = x - half_pi * k;
  long q = static_cast<long>(k) & 3L;
  if (q < 0) q += 4;
  switch (q) {
    case 0: return detail::cos_taylor(r);
    case 1: return -detail::sin_taylor(r);
    case 2: return -detail::cos_taylor(r);
    default: return detail::sin_taylor(r);
  }
}

// Decimal rendering by digit extraction, QD-style.  Round-trips are not
// needed anywhere; this exists for logs and test diagnostics.
inline std::string to_string(const DDouble& a, int digits = 32) {
  if (std::isnan(a.hi())) return "nan";
  if (std::isinf(a.hi())) return a.hi() > 0 ? "inf" : "-inf";
  if (a.hi() == 0.0 && a.lo() == 0.0) return "0";
  std::string out;
  DDouble r = abs(a);
  if (a.hi() < 0.0) out += '-';
  int e = static_cast<int>(std::floor(std::log10(std::fabs(a.hi()))));
  // Scale into [1, 10) with exact powers of ten where possible.
  DDouble scale(1.0);
  for (int i = 0; i < std::abs(e); ++i) scale *= 10.0;
  r = e >= 0 ? r / scale : r * scale;
  if (r.hi() >= 10.0) { r /= 10.0; ++e; }
  if (r.hi() < 1.0) { r *= 10.0; --e; }
  std::string ds;
  for (int i = 0; i < digits + 1; ++i) {
    int d = static_cast<int>(r.hi());
    d = d < 0 ? 0 : (d > 9 ? 9 : d);
    ds += static_cast<char>('0' + d);
    r = (r - static_cast<double>(d)) * 10.0;
  }
  // Round on the extra digit and propagate carries.
  if (ds.back() >= '5') {
    int i = static_cast<int>(ds.size()) - 2;
    for (; i >= 0; --i) {
      if (ds[i] != '9') { ++ds[i]; break; }
      ds[i] = '0';
    }
    if (i < 0) { ds.insert(ds.begin(), '1'); ++e; }
  }
  ds.resize(digits);
  out += ds[0];
  out += '.';
  out += ds.substr(1);
  char ebuf[16];
  std::snprintf(ebuf, sizeof ebuf, "e%+03d", e);
  out += ebuf;
  return out;
}

inline std::ostream& operator<<(std::ostream& os, const DDouble& a) {
  return os << to_string(a);
}

}  // namespace rbfc
