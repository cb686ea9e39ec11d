#pragma once

#include "agerate/dates.hpp"
#include "agerate/errors.hpp"

#include <Eigen/Core>

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace agerate::ingest {

/// Per-component metadata: units, clinical critical values, healthy
/// reference range, and whether a zero result is physically possible.
struct ComponentSpec {
    std::string component_id;
    std::string unit;
    std::optional<double> critical_low;
    std::optional<double> critical_high;
    std::optional<double> normal_low;
    std::optional<double> normal_high;
    bool zero_allowed = true;

    void validate() const;
};

/// One raw laboratory result in the component's standard unit.
struct LabObservation {
    std::string person_id;
    std::string component_id;
    double value = 0.0;
    Date observed_at;

    bool operator==(const LabObservation &) const = default;
};

enum class FenceRule { critical_iqr, normal_iqr, global_iqr };

const char *fence_rule_name(FenceRule rule);

/// Valid-value fences for one component. Values strictly outside
/// [lower, upper] are outliers. `degenerate` marks a zero-IQR input where
/// the fences collapsed to [Q1, Q3] plus an epsilon guard.
struct OutlierBounds {
    double lower = 0.0;
    double upper = 0.0;
    FenceRule rule_used_low = FenceRule::global_iqr;
    FenceRule rule_used_high = FenceRule::global_iqr;
    bool degenerate = false;
};

/// Complete-case person x component matrix with per-person demographics.
/// `months` records each person's qualifying calendar month.
struct CrossSection {
    std::vector<std::string> person_ids;
    std::vector<std::string> component_ids;
    Eigen::MatrixXd values; // n_persons x n_components
    Eigen::VectorXd age;    // years
    std::vector<int> sex;   // binary covariate
    std::vector<YearMonth> months;

    Eigen::Index n_persons() const { return values.rows(); }
    Eigen::Index n_components() const { return values.cols(); }
    void validate() const;
};

/// Fitted standard scaler; population (divide-by-n) std convention, fixed
/// and serialized so held-out data reuses the training statistics.
struct Scaler {
    std::vector<std::string> component_ids;
    Eigen::VectorXd mean;
    Eigen::VectorXd stddev;

    Eigen::MatrixXd transform(const Eigen::MatrixXd &x) const;
    Eigen::MatrixXd inverse(const Eigen::MatrixXd &x) const;
};

struct Demographics {
    double age = 0.0;
    int sex = 0;
};

/// The three-way IQR fence. Each candidate side comes from the critical-value
/// regions, the normal-range regions, or the whole distribution; the tightest
/// candidate wins per side. Region fences use Q1 - fence_factor*IQR of the
/// points beyond the range boundary (and symmetrically above); the global
/// fence uses k_global. Without critical/normal ranges only the global fence
/// applies.
OutlierBounds compute_outlier_bounds(const std::vector<double> &values, const ComponentSpec &spec,
                                     double k_global = 3.0, double fence_factor = 1.5);

/// Drops exact duplicates, out-of-fence values, and zero values for
/// components that cannot produce a zero. Keeps input order otherwise.
std::vector<LabObservation>
filter_observations(const std::vector<LabObservation> &obs,
                    const std::map<std::string, ComponentSpec> &specs,
                    const std::map<std::string, OutlierBounds> &bounds);

struct MonthlyKey {
    std::string person_id;
    std::string component_id;
    YearMonth month;

    auto operator<=>(const MonthlyKey &) const = default;
};

/// (person, component, month) -> representative value: the maximum among
/// the observations carrying the latest date in that month.
std::map<MonthlyKey, double> aggregate_monthly(const std::vector<LabObservation> &obs);

/// Complete-case assembly: keeps persons having every required component in
/// at least one month and takes the earliest such month. Rows are ordered by
/// person key. Throws EmptyCohortError when nobody qualifies.
CrossSection build_cross_section(const std::map<MonthlyKey, double> &agg,
                                 const std::vector<std::string> &required_components,
                                 const std::map<std::string, Demographics> &demographics);

/// Columnwise standardization to mean 0 / std 1; returns the scaled copy and
/// the fitted scaler. Throws ZeroVarianceError naming any constant column.
std::pair<CrossSection, Scaler> standard_scale(const CrossSection &cs);

// --- file formats -----------------------------------------------------------

/// `person_id,component_id,value,unit,date` (unit must match the spec's).
std::vector<LabObservation> read_observations_csv(const std::string &path,
                                                  const std::map<std::string, ComponentSpec> &specs);

/// Keyed tabular spec file, one component per row:
/// `component_id,unit,critical_low,critical_high,normal_low,normal_high,zero_allowed`
/// (empty cell = bound not defined; zero_allowed in {0,1}).
std::map<std::string, ComponentSpec> read_component_specs_csv(const std::string &path);

/// `person_id,age,sex`
std::map<std::string, Demographics> read_demographics_csv(const std::string &path);

/// `person_id,<component columns>,age,sex,month`
void write_cross_section_csv(const std::string &path, const CrossSection &cs);
CrossSection read_cross_section_csv(const std::string &path);

} // namespace agerate::ingest
