// Exact integer/rational helpers for the standardization walk and
// likely-subspace bookkeeping.
#pragma once

#include <boost/multiprecision/cpp_int.hpp>

namespace entcon::exact {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

// C(n, k), exact.
BigInt binomial(long n, long k);

// floor(log2 v) for v >= 1.
long floor_log2(const BigInt& v);

// ceil(log2 v) for v >= 1.
long ceil_log2(const BigInt& v);

// log2 of a positive BigInt, accurate to ~1 ulp (top 53 bits + exponent).
double log2_value(const BigInt& v);

// num/den as double, computed through an exact rational.
double ratio_as_double(const BigInt& num, const BigInt& den);

// True iff 2^ell <= v and (v == 2^ell or v - 2^ell < 2^ell * epsilon),
// evaluated in exact rational arithmetic (epsilon enters as its exact
// binary value). The equality branch makes epsilon == 0 meaningful.
bool within_power_window(const BigInt& v, long ell, double epsilon);

} // namespace entcon::exact
