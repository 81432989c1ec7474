#pragma once

#include <boost/multiprecision/mpfr.hpp>
#include <boost/multiprecision/eigen.hpp>
#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <string>
#include <type_traits>

namespace resbdy {

using Index = std::int64_t;

// Runtime-precision binary floating point, used when conductances span many
// orders of magnitude (deep levels of geometric families).
using Extended = boost::multiprecision::number<
    boost::multiprecision::mpfr_float_backend<0>, boost::multiprecision::et_off>;

template <class Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <class Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <class Scalar>
double to_double(const Scalar& x) {
  return static_cast<double>(x);
}

template <class Scalar>
Vec<double> to_double(const Vec<Scalar>& v) {
  Vec<double> out(v.size());
  for (Index i = 0; i < v.size(); ++i) out[i] = static_cast<double>(v[i]);
  return out;
}

// base^power by repeated squaring, evaluated in Scalar.
template <class Scalar>
Scalar ipow(double base, int power) {
  Scalar result(1);
  Scalar b(base);
  bool invert = power < 0;
  unsigned p = invert ? static_cast<unsigned>(-power) : static_cast<unsigned>(power);
  while (p) {
    if (p & 1u) result *= b;
    b *= b;
    p >>= 1u;
  }
  return invert ? Scalar(1) / result : result;
}

struct Precision {
  enum class Kind { Double, LongDouble, Extended };
  Kind kind = Kind::Double;
  unsigned digits = 15;

  std::string name() const;
};

// Pick the cheapest type whose mantissa can hold a residual of 1e-12 relative
// to unit sources when conductances span 10^log10_range and potentials reach
// 10^log10_scale.
Precision choose_precision(double log10_range, double log10_scale);

// Sets the default mpfr precision for the lifetime of the guard.
class PrecisionGuard {
 public:
  explicit PrecisionGuard(unsigned digits) : saved_(Extended::default_precision()) {
    Extended::default_precision(digits);
  }
  ~PrecisionGuard() { Extended::default_precision(saved_); }
  PrecisionGuard(const PrecisionGuard&) = delete;
  PrecisionGuard& operator=(const PrecisionGuard&) = delete;

 private:
  unsigned saved_;
};

template <class T>
struct ScalarTag {
  using type = T;
};

// Calls f(ScalarTag<S>{}) with S chosen by p. f must return the same type for
// every scalar; results should be converted to double before leaving.
template <class F>
decltype(auto) with_precision(const Precision& p, F&& f) {
  switch (p.kind) {
    case Precision::Kind::Double:
      return f(ScalarTag<double>{});
    case Precision::Kind::LongDouble:
      return f(ScalarTag<long double>{});
    case Precision::Kind::Extended:
    default: {
      PrecisionGuard guard(p.digits);
      return f(ScalarTag<Extended>{});
    }
  }
}

unsigned worker_count();

}  // namespace resbdy
