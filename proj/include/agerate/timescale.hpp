#pragma once

namespace agerate {

/// Chronological age enters every model as age/100 so that biological ages
/// r*t stay in a numerically benign range. Shared by the generator and
/// the aging model; changing it invalidates serialized models.
constexpr double kAgeScale = 0.01;

inline double scaled_age(double age_years) { return age_years * kAgeScale; }

} // namespace agerate
