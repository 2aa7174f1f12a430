#pragma once

#include <boost/multiprecision/cpp_int.hpp>

namespace quadflip {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// n-th Catalan number, exact.
BigInt catalan(int n);

/// |T^(r)_n| = r^n * C_n via the closed form.
BigInt coloured_tree_count(int n, int r);

/// Same count via the convolution recurrence T(n) = sum_k T(k)T(n-1-k),
/// kept independent of the closed form so the two can be checked against
/// each other.
BigInt coloured_tree_count_recurrence(int n, int r);

}  // namespace quadflip
