#pragma once

#include <cstdint>

namespace voxtdp {

// z-score with the same upper-tail probability as a t statistic on df degrees
// of freedom
double t_to_z(double t, double df);

// standard normal quantile
double normal_quantile(double p);

// two-sided Clopper-Pearson interval for a binomial proportion
struct BinomialCi {
    double lower = 0.0;
    double upper = 1.0;
};
BinomialCi clopper_pearson(std::int64_t successes, std::int64_t trials, double level = 0.95);

// smallest q with P(Bin(n, p) <= q) >= level
std::int64_t binomial_quantile(std::int64_t n, double p, double level);

}  // namespace voxtdp
