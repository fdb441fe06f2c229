#include "voxtdp/stats.hpp"

#include <boost/math/distributions/beta.hpp>
#include <boost/math/distributions/binomial.hpp>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>

#include <algorithm>
#include <stdexcept>

namespace voxtdp {

double t_to_z(double t, double df) {
    if (df <= 0) throw std::invalid_argument("t_to_z: degrees of freedom must be positive");
    boost::math::students_t tdist(df);
    boost::math::normal norm;
    // match the smaller tail for numerical accuracy
    if (t >= 0) {
        double upper = boost::math::cdf(boost::math::complement(tdist, t));
        return -boost::math::quantile(norm, upper);
    }
    double lower = boost::math::cdf(tdist, t);
    return boost::math::quantile(norm, lower);
}

double normal_quantile(double p) {
    boost::math::normal norm;
    return boost::math::quantile(norm, p);
}

BinomialCi clopper_pearson(std::int64_t successes, std::int64_t trials, double level) {
    if (trials <= 0 || successes < 0 || successes > trials)
        throw std::invalid_argument("clopper_pearson: invalid counts");
    const double tail = (1.0 - level) / 2.0;
    BinomialCi ci;
    if (successes == 0)
        ci.lower = 0.0;
    else
        ci.lower = boost::math::quantile(boost::math::beta_distribution<>(successes, trials - successes + 1), tail);
    if (successes == trials)
        ci.upper = 1.0;
    else
        ci.upper =
            boost::math::quantile(boost::math::beta_distribution<>(successes + 1, trials - successes), 1.0 - tail);
    return ci;
}

std::int64_t binomial_quantile(std::int64_t n, double p, double level) {
    boost::math::binomial_distribution<> bin(static_cast<double>(n), p);
    return static_cast<std::int64_t>(boost::math::quantile(bin, level));
}

}  // namespace voxtdp
