#ifndef MWK_SRC_KERNELS_HPP
#define MWK_SRC_KERNELS_HPP

#include <cstddef>

// Hot loops over |a|^p. Compiled in their own translation unit with
// vectorized math enabled; inputs must be finite.

namespace mwk::detail {

/// sum_i |values_i - center|^p
double sum_abs_pow(const double* values, std::size_t n, double center, double p);

/// sum_v (w_v |x_v - z_v|)^p
double weighted_pow_distance(const double* x, const double* z, const double* w, std::size_t m, double p);

/// acc_v += |x_v - z_v|^p
void accumulate_abs_pow(const double* x, const double* z, double* acc, std::size_t m, double p);

/// out_i += scale * |column_i - center|^p for i < n
void accumulate_column(const double* column, std::size_t n, double center, double scale, double p, double* out);

}  // namespace mwk::detail

#endif
