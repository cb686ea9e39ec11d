#include "agerate/ingest.hpp"

#include "agerate/csv.hpp"
#include "agerate/quantiles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

namespace agerate::ingest {

void ComponentSpec::validate() const {
    if (unit.empty()) {
        throw ValidationError("component " + component_id + ": unit must be nonempty");
    }
    if (critical_low && critical_high && !(*critical_low < *critical_high)) {
        throw ValidationError("component " + component_id + ": critical_low >= critical_high");
    }
    if (normal_low && normal_high && !(*normal_low < *normal_high)) {
        throw ValidationError("component " + component_id + ": normal_low >= normal_high");
    }
}

void CrossSection::validate() const {
    auto n = static_cast<std::size_t>(values.rows());
    if (person_ids.size() != n || sex.size() != n || months.size() != n ||
        age.size() != values.rows() ||
        component_ids.size() != static_cast<std::size_t>(values.cols())) {
        throw ShapeError("cross-section: inconsistent row/column metadata");
    }
    if (!values.allFinite()) {
        throw ValidationError("cross-section: non-finite cell");
    }
}

const char *fence_rule_name(FenceRule rule) {
    switch (rule) {
    case FenceRule::critical_iqr:
        return "critical_iqr";
    case FenceRule::normal_iqr:
        return "normal_iqr";
    case FenceRule::global_iqr:
        return "global_iqr";
    }
    return "?";
}

namespace {

struct Candidate {
    double bound;
    FenceRule rule;
};

/// Region fence below a range boundary: Q1 - f*IQR of the points strictly
/// below `cut`. Empty region -> no candidate.
std::optional<double> region_fence_low(const std::vector<double> &values, double cut, double f) {
    std::vector<double> region;
    for (double v : values) {
        if (v < cut) {
            region.push_back(v);
        }
    }
    if (region.empty()) {
        return std::nullopt;
    }
    double q1 = quantile_linear(region, 0.25);
    double q3 = quantile_linear(region, 0.75);
    return q1 - f * (q3 - q1);
}

std::optional<double> region_fence_high(const std::vector<double> &values, double cut, double f) {
    std::vector<double> region;
    for (double v : values) {
        if (v > cut) {
            region.push_back(v);
        }
    }
    if (region.empty()) {
        return std::nullopt;
    }
    double q1 = quantile_linear(region, 0.25);
    double q3 = quantile_linear(region, 0.75);
    return q3 + f * (q3 - q1);
}

} // namespace

OutlierBounds compute_outlier_bounds(const std::vector<double> &values, const ComponentSpec &spec,
                                     double k_global, double fence_factor) {
    if (values.empty()) {
        throw ValidationError("outlier bounds: empty value list");
    }
    if (k_global <= 0.0) {
        throw ValidationError("outlier bounds: k_global must be positive");
    }
    for (double v : values) {
        if (!std::isfinite(v)) {
            throw ValidationError("outlier bounds: non-finite value");
        }
    }
    spec.validate();

    double q1 = quantile_linear(values, 0.25);
    double q3 = quantile_linear(values, 0.75);
    double iqr = q3 - q1;

    OutlierBounds out;
    if (iqr == 0.0) {
        double guard = 4.0 * std::numeric_limits<double>::epsilon() *
                       std::max({1.0, std::abs(q1), std::abs(q3)});
        out.lower = q1 - guard;
        out.upper = q3 + guard;
        out.degenerate = true;
        return out;
    }

    // candidates in critical > normal > global priority; ties keep the
    // higher-priority rule
    std::vector<Candidate> lows;
    std::vector<Candidate> highs;
    if (spec.critical_low) {
        if (auto b = region_fence_low(values, *spec.critical_low, fence_factor)) {
            lows.push_back({*b, FenceRule::critical_iqr});
        }
    }
    if (spec.normal_low) {
        if (auto b = region_fence_low(values, *spec.normal_low, fence_factor)) {
            lows.push_back({*b, FenceRule::normal_iqr});
        }
    }
    lows.push_back({q1 - k_global * iqr, FenceRule::global_iqr});
    if (spec.critical_high) {
        if (auto b = region_fence_high(values, *spec.critical_high, fence_factor)) {
            highs.push_back({*b, FenceRule::critical_iqr});
        }
    }
    if (spec.normal_high) {
        if (auto b = region_fence_high(values, *spec.normal_high, fence_factor)) {
            highs.push_back({*b, FenceRule::normal_iqr});
        }
    }
    highs.push_back({q3 + k_global * iqr, FenceRule::global_iqr});

    // tightest fence wins on each side
    Candidate low = lows.front();
    for (const auto &c : lows) {
        if (c.bound > low.bound) {
            low = c;
        }
    }
    Candidate high = highs.front();
    for (const auto &c : highs) {
        if (c.bound < high.bound) {
            high = c;
        }
    }
    out.lower = low.bound;
    out.rule_used_low = low.rule;
    out.upper = high.bound;
    out.rule_used_high = high.rule;

    if (!(out.lower < out.upper)) {
        double lo = std::min(out.lower, out.upper);
        double hi = std::max(out.lower, out.upper);
        double guard = 4.0 * std::numeric_limits<double>::epsilon() *
                       std::max({1.0, std::abs(lo), std::abs(hi)});
        out.lower = lo - guard;
        out.upper = hi + guard;
        out.degenerate = true;
    }
    return out;
}

std::vector<LabObservation>
filter_observations(const std::vector<LabObservation> &obs,
                    const std::map<std::string, ComponentSpec> &specs,
                    const std::map<std::string, OutlierBounds> &bounds) {
    for (const auto &o : obs) {
        if (!specs.count(o.component_id) || !bounds.count(o.component_id)) {
            throw UnknownComponentError(o.component_id);
        }
    }
    std::vector<LabObservation> kept;
    kept.reserve(obs.size());
    std::set<std::tuple<std::string, std::string, double, Date>> seen;
    for (const auto &o : obs) {
        if (!seen.insert({o.person_id, o.component_id, o.value, o.observed_at}).second) {
            continue;
        }
        const auto &spec = specs.at(o.component_id);
        const auto &b = bounds.at(o.component_id);
        if (o.value == 0.0 && !spec.zero_allowed) {
            continue;
        }
        if (o.value < b.lower || o.value > b.upper) {
            continue;
        }
        kept.push_back(o);
    }
    return kept;
}

std::map<MonthlyKey, double> aggregate_monthly(const std::vector<LabObservation> &obs) {
    struct Rep {
        Date date;
        double value;
    };
    std::map<MonthlyKey, Rep> reps;
    for (const auto &o : obs) {
        MonthlyKey key{o.person_id, o.component_id, o.observed_at.year_month()};
        auto it = reps.find(key);
        if (it == reps.end()) {
            reps.emplace(key, Rep{o.observed_at, o.value});
        } else if (o.observed_at > it->second.date) {
            it->second = {o.observed_at, o.value};
        } else if (o.observed_at == it->second.date && o.value > it->second.value) {
            it->second.value = o.value; // highest among latest-day ties
        }
    }
    std::map<MonthlyKey, double> out;
    for (const auto &[key, rep] : reps) {
        out.emplace(key, rep.value);
    }
    return out;
}

CrossSection build_cross_section(const std::map<MonthlyKey, double> &agg,
                                 const std::vector<std::string> &required_components,
                                 const std::map<std::string, Demographics> &demographics) {
    if (required_components.empty()) {
        throw ValidationError("cross-section: required component list is empty");
    }
    // person -> month -> component -> value
    std::map<std::string, std::map<YearMonth, std::map<std::string, double>>> by_person;
    for (const auto &[key, value] : agg) {
        by_person[key.person_id][key.month][key.component_id] = value;
    }

    CrossSection cs;
    cs.component_ids = required_components;
    std::vector<std::vector<double>> rows;
    for (const auto &[person, months] : by_person) {
        auto demo = demographics.find(person);
        if (demo == demographics.end() || demo->second.age < 40.0) {
            continue; // cohort rule: adults 40+ with known demographics
        }
        for (const auto &[month, comps] : months) { // earliest month first
            std::vector<double> row;
            row.reserve(required_components.size());
            bool complete = true;
            for (const auto &c : required_components) {
                auto it = comps.find(c);
                if (it == comps.end()) {
                    complete = false;
                    break;
                }
                row.push_back(it->second);
            }
            if (complete) {
                cs.person_ids.push_back(person);
                cs.months.push_back(month);
                cs.sex.push_back(demo->second.sex);
                rows.push_back(std::move(row));
                break;
            }
        }
    }
    if (rows.empty()) {
        throw EmptyCohortError("cross-section: no person has a complete month");
    }

    auto n = static_cast<Eigen::Index>(rows.size());
    auto m = static_cast<Eigen::Index>(required_components.size());
    cs.values.resize(n, m);
    cs.age.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        cs.age[i] = demographics.at(cs.person_ids[static_cast<std::size_t>(i)]).age;
        for (Eigen::Index j = 0; j < m; ++j) {
            cs.values(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        }
    }
    cs.validate();
    return cs;
}

Eigen::MatrixXd Scaler::transform(const Eigen::MatrixXd &x) const {
    return (x.rowwise() - mean.transpose()).array().rowwise() /
           stddev.transpose().array();
}

Eigen::MatrixXd Scaler::inverse(const Eigen::MatrixXd &x) const {
    return (x.array().rowwise() * stddev.transpose().array()).matrix().rowwise() +
           mean.transpose();
}

std::pair<CrossSection, Scaler> standard_scale(const CrossSection &cs) {
    Scaler scaler;
    scaler.component_ids = cs.component_ids;
    scaler.mean = cs.values.colwise().mean();
    Eigen::MatrixXd centered = cs.values.rowwise() - scaler.mean.transpose();
    scaler.stddev =
        (centered.array().square().colwise().mean()).sqrt().matrix().transpose();

    std::string constant;
    for (Eigen::Index j = 0; j < scaler.stddev.size(); ++j) {
        if (scaler.stddev[j] <= 0.0) {
            if (!constant.empty()) {
                constant += ", ";
            }
            constant += cs.component_ids[static_cast<std::size_t>(j)];
        }
    }
    if (!constant.empty()) {
        throw ZeroVarianceError("zero-variance component(s): " + constant);
    }

    CrossSection scaled = cs;
    scaled.values = scaler.transform(cs.values);
    return {std::move(scaled), std::move(scaler)};
}

// --- file formats -----------------------------------------------------------

namespace {

std::optional<double> opt_field(const std::string &s, const std::string &ctx) {
    if (s.empty()) {
        return std::nullopt;
    }
    return csv::parse_double(s, ctx);
}

bool parse_bool(const std::string &s, const std::string &ctx) {
    if (s == "1" || s == "true") {
        return true;
    }
    if (s == "0" || s == "false") {
        return false;
    }
    throw ValidationError(ctx + ": expected boolean 0/1, got '" + s + "'");
}

} // namespace

std::map<std::string, ComponentSpec> read_component_specs_csv(const std::string &path) {
    auto table = csv::read_file(path);
    int c_id = table.require_column("component_id");
    int c_unit = table.require_column("unit");
    int c_cl = table.require_column("critical_low");
    int c_ch = table.require_column("critical_high");
    int c_nl = table.require_column("normal_low");
    int c_nh = table.require_column("normal_high");
    int c_zero = table.require_column("zero_allowed");

    std::map<std::string, ComponentSpec> specs;
    for (const auto &row : table.rows) {
        ComponentSpec spec;
        spec.component_id = row[c_id];
        spec.unit = row[c_unit];
        spec.critical_low = opt_field(row[c_cl], "critical_low");
        spec.critical_high = opt_field(row[c_ch], "critical_high");
        spec.normal_low = opt_field(row[c_nl], "normal_low");
        spec.normal_high = opt_field(row[c_nh], "normal_high");
        spec.zero_allowed = parse_bool(row[c_zero], spec.component_id);
        spec.validate();
        if (!specs.emplace(spec.component_id, spec).second) {
            throw ValidationError("duplicate component spec: " + spec.component_id);
        }
    }
    return specs;
}

std::vector<LabObservation>
read_observations_csv(const std::string &path, const std::map<std::string, ComponentSpec> &specs) {
    auto table = csv::read_file(path);
    int c_person = table.require_column("person_id");
    int c_comp = table.require_column("component_id");
    int c_value = table.require_column("value");
    int c_unit = table.require_column("unit");
    int c_date = table.require_column("date");

    std::vector<LabObservation> obs;
    obs.reserve(table.rows.size());
    for (const auto &row : table.rows) {
        LabObservation o;
        o.person_id = row[c_person];
        o.component_id = row[c_comp];
        o.value = csv::parse_double(row[c_value], o.component_id);
        if (!std::isfinite(o.value)) {
            throw ValidationError("non-finite value for " + o.component_id);
        }
        o.observed_at = Date::parse(row[c_date]);
        auto it = specs.find(o.component_id);
        if (it == specs.end()) {
            throw UnknownComponentError(o.component_id);
        }
        if (row[c_unit] != it->second.unit) {
            throw ValidationError("unit_mismatch", "component " + o.component_id + ": got '" +
                                                       row[c_unit] + "', standard unit is '" +
                                                       it->second.unit + "'");
        }
        obs.push_back(std::move(o));
    }
    return obs;
}

std::map<std::string, Demographics> read_demographics_csv(const std::string &path) {
    auto table = csv::read_file(path);
    int c_person = table.require_column("person_id");
    int c_age = table.require_column("age");
    int c_sex = table.require_column("sex");
    std::map<std::string, Demographics> out;
    for (const auto &row : table.rows) {
        Demographics d;
        d.age = csv::parse_double(row[c_age], "age");
        d.sex = static_cast<int>(csv::parse_long(row[c_sex], "sex"));
        out[row[c_person]] = d;
    }
    return out;
}

void write_cross_section_csv(const std::string &path, const CrossSection &cs) {
    csv::Table table;
    table.header.push_back("person_id");
    for (const auto &c : cs.component_ids) {
        table.header.push_back(c);
    }
    table.header.insert(table.header.end(), {"age", "sex", "month"});
    for (Eigen::Index i = 0; i < cs.n_persons(); ++i) {
        std::vector<std::string> row;
        row.push_back(cs.person_ids[static_cast<std::size_t>(i)]);
        for (Eigen::Index j = 0; j < cs.n_components(); ++j) {
            row.push_back(csv::format_double(cs.values(i, j)));
        }
        row.push_back(csv::format_double(cs.age[i]));
        row.push_back(std::to_string(cs.sex[static_cast<std::size_t>(i)]));
        row.push_back(cs.months[static_cast<std::size_t>(i)].str());
        table.rows.push_back(std::move(row));
    }
    csv::write_file(path, table);
}

CrossSection read_cross_section_csv(const std::string &path) {
    auto table = csv::read_file(path);
    int c_person = table.require_column("person_id");
    int c_age = table.require_column("age");
    int c_sex = table.require_column("sex");
    int c_month = table.require_column("month");

    CrossSection cs;
    for (std::size_t j = 0; j < table.header.size(); ++j) {
        auto idx = static_cast<int>(j);
        if (idx != c_person && idx != c_age && idx != c_sex && idx != c_month) {
            cs.component_ids.push_back(table.header[j]);
        }
    }
    auto n = static_cast<Eigen::Index>(table.rows.size());
    auto m = static_cast<Eigen::Index>(cs.component_ids.size());
    cs.values.resize(n, m);
    cs.age.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto &row = table.rows[static_cast<std::size_t>(i)];
        cs.person_ids.push_back(row[c_person]);
        cs.age[i] = csv::parse_double(row[c_age], "age");
        cs.sex.push_back(static_cast<int>(csv::parse_long(row[c_sex], "sex")));
        cs.months.push_back(YearMonth::parse(row[c_month]));
        Eigen::Index j = 0;
        for (std::size_t col = 0; col < table.header.size(); ++col) {
            auto idx = static_cast<int>(col);
            if (idx == c_person || idx == c_age || idx == c_sex || idx == c_month) {
                continue;
            }
            cs.values(i, j++) = csv::parse_double(row[col], table.header[col]);
        }
    }
    cs.validate();
    return cs;
}

} // namespace agerate::ingest
