#pragma once

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>

namespace agerate::dist {

inline double normal_cdf(double z) {
    static const boost::math::normal d(0.0, 1.0);
    return boost::math::cdf(d, z);
}

/// Upper tail P(Z >= z); accurate far into the tail.
inline double normal_sf(double z) {
    static const boost::math::normal d(0.0, 1.0);
    return boost::math::cdf(boost::math::complement(d, z));
}

inline double chi_squared_sf(double x, double df) {
    boost::math::chi_squared d(df);
    return boost::math::cdf(boost::math::complement(d, x));
}

inline double students_t_sf(double t, double df) {
    boost::math::students_t d(df);
    return boost::math::cdf(boost::math::complement(d, t));
}

inline double students_t_two_sided_p(double t, double df) {
    return 2.0 * students_t_sf(std::abs(t), df);
}

} // namespace agerate::dist
