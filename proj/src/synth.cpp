#include "agerate/synth.hpp"

#include "agerate/csv.hpp"
#include "agerate/quantiles.hpp"
#include "agerate/timescale.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>

namespace agerate::synth {

using nlohmann::json;

namespace {

constexpr std::uint64_t kParamsStream = 1ULL << 32;

std::string person_name(long i) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "p%07ld", i);
    return buf;
}

std::string feature_name(int j) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "f%03d", j + 1);
    return buf;
}

double signed_power(double u, double s) {
    return u < 0.0 ? -std::pow(-u, s) : std::pow(u, s);
}

} // namespace

void SynthConfig::validate() const {
    if (n_persons <= 0 || n_dims <= 0 || n_features <= 0) {
        throw ValidationError("synth: sizes must be positive");
    }
    if (n_dims > n_features) {
        throw ValidationError("synth: n_dims must not exceed n_features");
    }
    if (frac_monotone < 0.0 || frac_monotone > 1.0) {
        throw ValidationError("synth: frac_monotone must be in [0,1]");
    }
    if (age_low < 40.0 || age_high <= age_low) {
        throw ValidationError("synth: age range must satisfy 40 <= low < high");
    }
    if (noise_std < 0.0 || rate_log_std <= 0.0) {
        throw ValidationError("synth: noise_std >= 0 and rate_log_std > 0 required");
    }
}

int SynthConfig::monotone_count() const {
    int m = static_cast<int>(std::lround(frac_monotone * n_features));
    return std::clamp(m, 0, n_features);
}

double feature_value(const GeneratorParams &params, int feature, const Eigen::VectorXd &rates,
                     double t_scaled) {
    auto mono_count = static_cast<int>(params.monotone.size());
    if (feature < mono_count) {
        const auto &g = params.monotone[static_cast<std::size_t>(feature)];
        double acc = 0.0;
        for (std::size_t k = 0; k < g.dims.size(); ++k) {
            double a = rates[g.dims[k]] * t_scaled;
            acc += g.weights[k] * signed_power(a, g.powers[k]);
        }
        return g.sign * acc + g.bias;
    }
    const auto &g = params.valley[static_cast<std::size_t>(feature - mono_count)];
    double u = 0.0;
    for (int k = 0; k < rates.size(); ++k) {
        u += g.mix[static_cast<std::size_t>(k)] * rates[k] * t_scaled;
    }
    double centered = (u - g.offset) / g.scale;
    double th = std::tanh(centered);
    return g.tilt * th + g.bowl * th * th + g.level;
}

SynthCohort generate(const SynthConfig &cfg) {
    cfg.validate();
    const auto n = cfg.n_persons;
    const int m = cfg.n_features;
    const int mono_count = cfg.monotone_count();
    const int valley_count = m - mono_count;

    SplitMix64 base(cfg.seed);

    // generator parameters
    GeneratorParams gp;
    {
        SplitMix64 rng = base.derive(kParamsStream);
        static constexpr double kPowers[] = {1.0 / 3.0, 0.5, 1.0, 2.0, 3.0};
        for (int j = 0; j < mono_count; ++j) {
            MonotoneFeatureGen g;
            if (j < cfg.n_dims) {
                // probe feature: the biological age of one dimension verbatim,
                // anchoring identifiability of that dimension
                g.sign = 1;
                g.dims = {j};
                g.powers = {1.0};
                g.weights = {1.0};
                g.bias = 0.0;
            } else {
                g.sign = rng.next_u64() & 1 ? 1 : -1;
                int used = cfg.n_dims == 1 ? 1 : (rng.next_u64() & 1 ? 1 : 2);
                std::vector<int> dims(static_cast<std::size_t>(cfg.n_dims));
                for (int k = 0; k < cfg.n_dims; ++k) {
                    dims[static_cast<std::size_t>(k)] = k;
                }
                rng.shuffle(dims);
                dims.resize(static_cast<std::size_t>(used));
                g.dims = dims;
                for (int k = 0; k < used; ++k) {
                    g.powers.push_back(kPowers[rng.bounded(5)]);
                    g.weights.push_back(rng.uniform(0.5, 1.5));
                }
                g.bias = rng.uniform(-0.5, 0.5);
            }
            gp.monotone.push_back(std::move(g));
        }
        for (int j = 0; j < valley_count; ++j) {
            ValleyFeatureGen g;
            for (int k = 0; k < cfg.n_dims; ++k) {
                g.mix.push_back(rng.next_normal());
            }
            g.tilt = rng.uniform(0.0, 0.1);
            g.bowl = rng.uniform(0.6, 1.0);
            g.level = rng.uniform(-0.2, 0.2);
            g.offset = 0.0; // set from the cohort below
            g.scale = 1.0;
            gp.valley.push_back(std::move(g));
        }
    }

    // person draws: age, sex, log-rates, feature noise
    Eigen::VectorXd age(n);
    std::vector<int> sex(static_cast<std::size_t>(n));
    Eigen::MatrixXd rates(n, cfg.n_dims);
    Eigen::MatrixXd noise(n, m);
    for (long i = 0; i < n; ++i) {
        SplitMix64 rng = base.derive(static_cast<std::uint64_t>(i));
        age[i] = rng.uniform(cfg.age_low, cfg.age_high);
        sex[static_cast<std::size_t>(i)] = static_cast<int>(rng.bounded(2));
        for (int k = 0; k < cfg.n_dims; ++k) {
            rates(i, k) = std::exp(cfg.rate_log_std * rng.next_normal());
        }
        for (int j = 0; j < m; ++j) {
            noise(i, j) = cfg.noise_std * rng.next_normal();
        }
    }

    // center/scale each valley mixture on the noise-free cohort
    for (int j = 0; j < valley_count; ++j) {
        auto &g = gp.valley[static_cast<std::size_t>(j)];
        std::vector<double> u(static_cast<std::size_t>(n));
        for (long i = 0; i < n; ++i) {
            double t = scaled_age(age[i]);
            double acc = 0.0;
            for (int k = 0; k < cfg.n_dims; ++k) {
                acc += g.mix[static_cast<std::size_t>(k)] * rates(i, k) * t;
            }
            u[static_cast<std::size_t>(i)] = acc;
        }
        g.offset = median(u);
        double mu = mean(u);
        double var = 0.0;
        for (double v : u) {
            var += (v - mu) * (v - mu);
        }
        g.scale = std::max(std::sqrt(var / static_cast<double>(n)), 1e-9);
    }

    SynthCohort cohort;
    cohort.params = gp;
    cohort.true_rates = rates;

    auto &cs = cohort.cross_section;
    cs.values.resize(n, m);
    cs.age = age;
    cs.sex = sex;
    for (long i = 0; i < n; ++i) {
        cs.person_ids.push_back(person_name(i));
        cs.months.push_back({2016, 1});
        Eigen::VectorXd r = rates.row(i);
        double t = scaled_age(age[i]);
        for (int j = 0; j < m; ++j) {
            cs.values(i, j) = feature_value(gp, j, r, t) + noise(i, j);
        }
    }
    for (int j = 0; j < m; ++j) {
        cs.component_ids.push_back(feature_name(j));
    }
    cs.validate();
    return cohort;
}

PlantedOutcomes plant_outcomes(const SynthCohort &cohort, int effect_dim, double strength,
                               double base_rate, std::uint64_t seed, double cost_location,
                               double cost_scale, double cost_noise_std) {
    const auto n = cohort.true_rates.rows();
    if (effect_dim < 0 || effect_dim >= cohort.true_rates.cols()) {
        throw ValidationError("plant_outcomes: effect dimension out of range");
    }
    if (base_rate <= 0.0 || base_rate >= 1.0) {
        throw ValidationError("plant_outcomes: base_rate must be in (0,1)");
    }

    Eigen::VectorXd r = cohort.true_rates.col(effect_dim);
    double mu = r.mean();
    double sd = std::sqrt((r.array() - mu).square().mean());
    if (sd <= 0.0) {
        throw ZeroVarianceError("plant_outcomes: constant rates on the effect dimension");
    }

    double logit_base = std::log(base_rate / (1.0 - base_rate));
    PlantedOutcomes out;
    out.base_rate = base_rate;
    out.effect_dim = effect_dim;
    out.outcome.resize(static_cast<std::size_t>(n));
    out.cost.resize(static_cast<std::size_t>(n));

    SplitMix64 rng(seed);
    for (Eigen::Index i = 0; i < n; ++i) {
        double z = (r[i] - mu) / sd;
        double p = 1.0 / (1.0 + std::exp(-(logit_base + strength * z)));
        out.outcome[static_cast<std::size_t>(i)] = rng.next_double() < p ? 1 : 0;
        out.cost[static_cast<std::size_t>(i)] =
            std::exp(cost_location + cost_scale * z + cost_noise_std * rng.next_normal());
    }
    return out;
}

// --- file formats -----------------------------------------------------------

void write_true_rates_csv(const std::string &path, const SynthCohort &cohort) {
    csv::Table table;
    table.header.push_back("person_id");
    for (int k = 0; k < cohort.true_rates.cols(); ++k) {
        table.header.push_back("r" + std::to_string(k + 1));
    }
    for (Eigen::Index i = 0; i < cohort.true_rates.rows(); ++i) {
        std::vector<std::string> row{cohort.cross_section.person_ids[static_cast<std::size_t>(i)]};
        for (Eigen::Index k = 0; k < cohort.true_rates.cols(); ++k) {
            row.push_back(csv::format_double(cohort.true_rates(i, k)));
        }
        table.rows.push_back(std::move(row));
    }
    csv::write_file(path, table);
}

void write_outcomes_csv(const std::string &path, const SynthCohort &cohort,
                        const PlantedOutcomes &planted) {
    csv::Table table;
    table.header = {"person_id", "outcome", "cost"};
    for (std::size_t i = 0; i < planted.outcome.size(); ++i) {
        table.rows.push_back({cohort.cross_section.person_ids[i],
                              std::to_string(planted.outcome[i]),
                              csv::format_double(planted.cost[i])});
    }
    csv::write_file(path, table);
}

void write_outcome_claims_csv(const std::string &path, const SynthCohort &cohort,
                              const PlantedOutcomes &planted, const std::string &outcome_id) {
    csv::Table table;
    table.header = {"person_id", "outcome_id", "first_diagnosis_month"};
    for (std::size_t i = 0; i < planted.outcome.size(); ++i) {
        if (planted.outcome[i]) {
            auto month = cohort.cross_section.months[i].plus_months(6);
            table.rows.push_back({cohort.cross_section.person_ids[i], outcome_id, month.str()});
        }
    }
    csv::write_file(path, table);
}

void write_cost_claims_csv(const std::string &path, const SynthCohort &cohort,
                           const PlantedOutcomes &planted, const std::string &cost_type) {
    csv::Table table;
    table.header = {"person_id", "cost_type", "year_offset", "amount"};
    for (std::size_t i = 0; i < planted.cost.size(); ++i) {
        table.rows.push_back({cohort.cross_section.person_ids[i], cost_type, "1",
                              csv::format_double(planted.cost[i])});
    }
    csv::write_file(path, table);
}

void write_generator_json(const std::string &path, const SynthConfig &cfg,
                          const GeneratorParams &params) {
    json doc;
    doc["config"] = {{"n_persons", cfg.n_persons},
                     {"n_dims", cfg.n_dims},
                     {"n_features", cfg.n_features},
                     {"frac_monotone", cfg.frac_monotone},
                     {"age_low", cfg.age_low},
                     {"age_high", cfg.age_high},
                     {"noise_std", cfg.noise_std},
                     {"rate_log_std", cfg.rate_log_std},
                     {"seed", cfg.seed}};
    doc["age_scale"] = kAgeScale;
    json mono = json::array();
    for (const auto &g : params.monotone) {
        mono.push_back({{"sign", g.sign},
                        {"dims", g.dims},
                        {"powers", g.powers},
                        {"weights", g.weights},
                        {"bias", g.bias}});
    }
    json valley = json::array();
    for (const auto &g : params.valley) {
        valley.push_back({{"mix", g.mix},
                          {"tilt", g.tilt},
                          {"bowl", g.bowl},
                          {"level", g.level},
                          {"offset", g.offset},
                          {"scale", g.scale}});
    }
    doc["monotone_features"] = std::move(mono);
    doc["valley_features"] = std::move(valley);

    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot open for writing: " + path);
    }
    out << doc.dump(2) << "\n";
}

void write_raw_observation_files(const std::string &obs_path, const std::string &specs_path,
                                 const std::string &demographics_path,
                                 const SynthCohort &cohort) {
    const auto &cs = cohort.cross_section;

    csv::Table specs;
    specs.header = {"component_id", "unit",       "critical_low", "critical_high",
                    "normal_low",   "normal_high", "zero_allowed"};
    for (const auto &c : cs.component_ids) {
        specs.rows.push_back({c, "synth", "", "", "", "", "1"});
    }
    csv::write_file(specs_path, specs);

    csv::Table demo;
    demo.header = {"person_id", "age", "sex"};
    for (Eigen::Index i = 0; i < cs.n_persons(); ++i) {
        demo.rows.push_back({cs.person_ids[static_cast<std::size_t>(i)],
                             csv::format_double(cs.age[i]),
                             std::to_string(cs.sex[static_cast<std::size_t>(i)])});
    }
    csv::write_file(demographics_path, demo);

    csv::Table obs;
    obs.header = {"person_id", "component_id", "value", "unit", "date"};
    for (Eigen::Index i = 0; i < cs.n_persons(); ++i) {
        Date date{cs.months[static_cast<std::size_t>(i)].year,
                  cs.months[static_cast<std::size_t>(i)].month, 15};
        for (Eigen::Index j = 0; j < cs.n_components(); ++j) {
            obs.rows.push_back({cs.person_ids[static_cast<std::size_t>(i)],
                                cs.component_ids[static_cast<std::size_t>(j)],
                                csv::format_double(cs.values(i, j)), "synth", date.str()});
        }
    }
    csv::write_file(obs_path, obs);
}

} // namespace agerate::synth
