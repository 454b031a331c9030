#include "entcon/exactmath.hpp"

#include <cmath>
#include <stdexcept>

namespace entcon::exact {

BigInt binomial(long n, long k) {
    if (n < 0 || k < 0 || k > n) throw std::invalid_argument("binomial: need 0 <= k <= n");
    if (k > n - k) k = n - k;
    BigInt result = 1;
    for (long i = 1; i <= k; ++i) {
        result *= (n - k + i);
        result /= i;  // exact: result is always an integer after this step
    }
    return result;
}

long floor_log2(const BigInt& v) {
    if (v <= 0) throw std::invalid_argument("floor_log2: need v >= 1");
    return static_cast<long>(boost::multiprecision::msb(v));
}

long ceil_log2(const BigInt& v) {
    const long floor = floor_log2(v);
    return (BigInt(1) << floor) == v ? floor : floor + 1;
}

double log2_value(const BigInt& v) {
    const long bits = floor_log2(v);
    if (bits <= 52) return std::log2(v.convert_to<double>());
    // Keep the top 53 bits: relative truncation error <= 2^-53.
    const BigInt top = v >> (bits - 52);
    return std::log2(top.convert_to<double>()) + static_cast<double>(bits - 52);
}

double ratio_as_double(const BigInt& num, const BigInt& den) {
    if (den == 0) throw std::invalid_argument("ratio_as_double: zero denominator");
    return BigRational(num, den).convert_to<double>();
}

bool within_power_window(const BigInt& v, long ell, double epsilon) {
    if (epsilon < 0) throw std::invalid_argument("within_power_window: epsilon < 0");
    const BigInt power = BigInt(1) << ell;
    if (v < power) return false;
    if (v == power) return true;
    return BigRational(v - power) < BigRational(power) * BigRational(epsilon);
}

} // namespace entcon::exact
