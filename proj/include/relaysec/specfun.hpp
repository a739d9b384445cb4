#pragma once

namespace relaysec {

// Exponential integral E1(x) = integral_x^inf u^-1 e^-u du for x > 0.
// Relative error <= 1e-10 over [1e-6, 700]; returns 0 once e^-x underflows.
// Throws std::domain_error for x <= 0 or non-finite x.
double exp_integral_e1(double x);

// omega(x) = e^x * E1(x), evaluated so large x never overflows (the
// continued-fraction branch produces the product directly, never the naive
// e^x * E1 product).  Throws std::domain_error for x <= 0 or non-finite x.
double omega(double x);

}  // namespace relaysec
