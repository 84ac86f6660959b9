#pragma once

// Double-double ("dd") arithmetic: an unevaluated sum of two doubles giving
// roughly 32 significant digits.  Used where a computation cancels by more
// than double precision can absorb (Kummer series at large |z^2/2|, stencil
// differentiation at small steps).  Algorithms are the classic error-free
// transformations (Dekker/Knuth) plus QD-style elementary functions.

#include <cmath>
#include <complex>

namespace lz3::detail {

struct DDouble {
  double hi = 0.0;
  double lo = 0.0;

  constexpr DDouble() = default;
  constexpr DDouble(double h) : hi(h), lo(0.0) {}
  constexpr DDouble(double h, double l) : hi(h), lo(l) {}

  double value() const { return hi + lo; }
  explicit operator double() const { return hi + lo; }
};

// Error-free sum of two doubles (Knuth two-sum).
inline DDouble two_sum(double a, double b) {
  double s = a + b;
  double bb = s - a;
  double err = (a - (s - bb)) + (b - bb);
  return {s, err};
}

// Error-free sum assuming |a| >= |b|.
inline DDouble quick_two_sum(double a, double b) {
  double s = a + b;
  double err = b - (s - a);
  return {s, err};
}

// Error-free product via fused multiply-add.
inline DDouble two_prod(double a, double b) {
  double p = a * b;
  double err = std::fma(a, b, -p);
  return {p, err};
}

inline DDouble operator+(DDouble a, DDouble b) {
  DDouble s = two_sum(a.hi, b.hi);
  double lo = s.lo + a.lo + b.lo;
  return quick_two_sum(s.hi, lo);
}

inline DDouble operator+(DDouble a, double b) {
  DDouble s = two_sum(a.hi, b);
  double lo = s.lo + a.lo;
  return quick_two_sum(s.hi, lo);
}

inline DDouble operator+(double a, DDouble b) { return b + a; }

inline DDouble operator-(DDouble a) { return {-a.hi, -a.lo}; }

inline DDouble operator-(DDouble a, DDouble b) { return a + (-b); }
inline DDouble operator-(DDouble a, double b) { return a + (-b); }
inline DDouble operator-(double a, DDouble b) { return DDouble(a) + (-b); }

inline DDouble operator*(DDouble a, DDouble b) {
  DDouble p = two_prod(a.hi, b.hi);
  double lo = p.lo + a.hi * b.lo + a.lo * b.hi;
  return quick_two_sum(p.hi, lo);
}

inline DDouble operator*(DDouble a, double b) {
  DDouble p = two_prod(a.hi, b);
  double lo = p.lo + a.lo * b;
  return quick_two_sum(p.hi, lo);
}

inline DDouble operator*(double a, DDouble b) { return b * a; }

inline DDouble operator/(DDouble a, DDouble b) {
  double q1 = a.hi / b.hi;
  DDouble r = a - b * q1;
  double q2 = r.hi / b.hi;
  r = r - b * q2;
  double q3 = r.hi / b.hi;
  DDouble q = quick_two_sum(q1, q2);
  return q + q3;
}

inline DDouble operator/(DDouble a, double b) { return a / DDouble(b); }
inline DDouble operator/(double a, DDouble b) { return DDouble(a) / b; }

inline bool operator<(DDouble a, DDouble b) {
  return a.hi < b.hi || (a.hi == b.hi && a.lo < b.lo);
}
inline bool operator>(DDouble a, DDouble b) { return b < a; }

inline DDouble dd_abs(DDouble a) { return a.hi < 0.0 ? -a : a; }

inline DDouble dd_sqr(DDouble a) {
  DDouble p = two_prod(a.hi, a.hi);
  double lo = p.lo + 2.0 * a.hi * a.lo;
  return quick_two_sum(p.hi, lo);
}

// exp(x) by (e^{x - k ln2})·2^k with the remainder expanded after /512.
inline DDouble dd_exp(DDouble x) {
  static const DDouble kLn2{6.931471805599453094e-01, 2.319046813846299558e-17};
  if (x.hi > 709.0) return {HUGE_VAL, 0.0};
  if (x.hi < -709.0) return {0.0, 0.0};
  double k = std::floor(x.hi / kLn2.hi + 0.5);
  DDouble r = (x - kLn2 * k) / 512.0;
  // Taylor on |r| <= ln2/1024.
  DDouble sum = DDouble(1.0) + r;
  DDouble term = r;
  for (int i = 2; i <= 9; ++i) {
    term = term * r / static_cast<double>(i);
    sum = sum + term;
  }
  for (int i = 0; i < 9; ++i) sum = dd_sqr(sum);  // ^512
  return sum * std::ldexp(1.0, static_cast<int>(k));
}

namespace dd_detail {
inline DDouble sin_taylor(DDouble r) {
  DDouble r2 = dd_sqr(r);
  DDouble term = r, sum = r;
  for (int i = 1; i <= 14; ++i) {
    term = term * r2 / static_cast<double>((2 * i) * (2 * i + 1));
    sum = (i % 2) ? sum - term : sum + term;
  }
  return sum;
}
inline DDouble cos_taylor(DDouble r) {
  DDouble r2 = dd_sqr(r);
  DDouble term{1.0}, sum{1.0};
  for (int i = 1; i <= 14; ++i) {
    term = term * r2 / static_cast<double>((2 * i - 1) * (2 * i));
    sum = (i % 2) ? sum - term : sum + term;
  }
  return sum;
}
}  // namespace dd_detail

// Simultaneous sin/cos with reduction modulo pi/2.  Adequate for the
// argument ranges used here (|x| up to a few hundred).
inline void dd_sincos(DDouble x, DDouble& s, DDouble& c) {
  static const DDouble kHalfPi{1.570796326794896558e+00, 6.123233995736766036e-17};
  double k = std::floor(x.hi / kHalfPi.hi + 0.5);
  DDouble r = x - kHalfPi * k;
  long q = static_cast<long>(k) % 4;
  if (q < 0) q += 4;
  DDouble sr = dd_detail::sin_taylor(r);
  DDouble cr = dd_detail::cos_taylor(r);
  switch (q) {
    case 0: s = sr; c = cr; break;
    case 1: s = cr; c = -sr; break;
    case 2: s = -sr; c = -cr; break;
    default: s = -cr; c = sr; break;
  }
}

struct DDComplex {
  DDouble re, im;

  DDComplex() = default;
  DDComplex(DDouble r) : re(r), im(0.0) {}
  DDComplex(DDouble r, DDouble i) : re(r), im(i) {}
  DDComplex(double r, double i = 0.0) : re(r), im(i) {}
  DDComplex(std::complex<double> z) : re(z.real()), im(z.imag()) {}

  std::complex<double> value() const { return {re.value(), im.value()}; }
};

inline DDComplex operator+(DDComplex a, DDComplex b) { return {a.re + b.re, a.im + b.im}; }
inline DDComplex operator-(DDComplex a, DDComplex b) { return {a.re - b.re, a.im - b.im}; }
inline DDComplex operator-(DDComplex a) { return {-a.re, -a.im}; }

inline DDComplex operator*(DDComplex a, DDComplex b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
inline DDComplex operator*(DDComplex a, double b) { return {a.re * b, a.im * b}; }
inline DDComplex operator*(double a, DDComplex b) { return b * a; }

inline DDComplex operator/(DDComplex a, DDComplex b) {
  DDouble den = dd_sqr(b.re) + dd_sqr(b.im);
  return {(a.re * b.re + a.im * b.im) / den, (a.im * b.re - a.re * b.im) / den};
}
inline DDComplex operator/(DDComplex a, double b) { return {a.re / b, a.im / b}; }

// |z|^2 and a cheap magnitude bound used for convergence/cancellation checks.
inline double dd_abs2(DDComplex z) {
  double r = z.re.hi, i = z.im.hi;
  return r * r + i * i;
}
inline double dd_mag(DDComplex z) { return std::sqrt(dd_abs2(z)); }

inline DDComplex dd_exp(DDComplex z) {
  DDouble m = dd_exp(z.re), s, c;
  dd_sincos(z.im, s, c);
  return {m * c, m * s};
}

}  // namespace lz3::detail
