#pragma once

#include "agerate/ingest.hpp"
#include "agerate/rng.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <string>
#include <vector>

namespace agerate::synth {

struct SynthConfig {
    long n_persons = 0;
    int n_dims = 1;
    int n_features = 1;
    double frac_monotone = 0.5;
    double age_low = 40.0;
    double age_high = 99.0;
    double noise_std = 0.0;
    double rate_log_std = 0.1;
    std::uint64_t seed = 0;

    void validate() const;
    int monotone_count() const;
};

/// Increasing (or decreasing) signed-power mixture of per-dimension
/// biological ages: sign * sum_k w_k * a_{dim_k}^{power_k} + bias, w_k >= 0.
struct MonotoneFeatureGen {
    int sign = 1;
    std::vector<int> dims;
    std::vector<double> powers;
    std::vector<double> weights;
    double bias = 0.0;
};

/// Bounded smooth non-monotone feature: a small tanh tilt plus a tanh^2
/// bowl of a centered linear mixture u of the biological ages. The bowl
/// dominates, keeping the rank correlation with age low.
struct ValleyFeatureGen {
    std::vector<double> mix; // one coefficient per dimension
    double tilt = 0.0;
    double bowl = 0.0;
    double level = 0.0;
    double offset = 0.0; // cohort median of u, fixed at generation time
    double scale = 1.0;  // cohort std of u
};

struct GeneratorParams {
    std::vector<MonotoneFeatureGen> monotone; // features 0..M-1
    std::vector<ValleyFeatureGen> valley;     // features M..m-1
};

struct SynthCohort {
    ingest::CrossSection cross_section;
    Eigen::MatrixXd true_rates; // n_persons x n_dims, strictly positive
    GeneratorParams params;
};

/// Noise-free value of feature `j` for rate vector `rates` at scaled age
/// `t_scaled`; the function the cohort samples from.
double feature_value(const GeneratorParams &params, int feature,
                     const Eigen::VectorXd &rates, double t_scaled);

/// Forward-simulates the cohort: ages uniform on the range, rates i.i.d.
/// log-normal with median 1 and log-std rate_log_std, features per the two
/// families above plus N(0, noise_std) noise. Deterministic in cfg.seed
/// (person i draws from SplitMix64 stream i; generator parameters from a
/// dedicated stream).
SynthCohort generate(const SynthConfig &cfg);

struct PlantedOutcomes {
    std::vector<int> outcome;       // per person, aligned with cross_section
    std::vector<double> cost;       // log-normal, increasing in the planted dim
    double base_rate = 0.0;
    int effect_dim = 0;
};

/// Plants a binary outcome Bernoulli(logistic(logit(base_rate) + strength*z))
/// and a log-normal cost exp(location + scale*z + noise), where z is the
/// cohort-standardized true rate on `effect_dim`.
PlantedOutcomes plant_outcomes(const SynthCohort &cohort, int effect_dim, double strength,
                               double base_rate, std::uint64_t seed,
                               double cost_location = 8.0, double cost_scale = 0.5,
                               double cost_noise_std = 1.0);

// --- file formats -----------------------------------------------------------

/// `person_id,r1..rn`
void write_true_rates_csv(const std::string &path, const SynthCohort &cohort);

/// `person_id,outcome,cost`
void write_outcomes_csv(const std::string &path, const SynthCohort &cohort,
                        const PlantedOutcomes &planted);

/// Claims-style files consumed by the associate/costs commands:
/// outcomes as `person_id,outcome_id,first_diagnosis_month` (positives only,
/// diagnosed six months after the cross-section month) and costs as
/// `person_id,cost_type,year_offset,amount`.
void write_outcome_claims_csv(const std::string &path, const SynthCohort &cohort,
                              const PlantedOutcomes &planted, const std::string &outcome_id);
void write_cost_claims_csv(const std::string &path, const SynthCohort &cohort,
                           const PlantedOutcomes &planted, const std::string &cost_type);

void write_generator_json(const std::string &path, const SynthConfig &cfg,
                          const GeneratorParams &params);

/// Explodes the cohort into raw-format inputs for the cleaning pipeline:
/// an observation CSV, a component spec CSV (no clinical ranges), and a
/// demographics CSV.
void write_raw_observation_files(const std::string &obs_path, const std::string &specs_path,
                                 const std::string &demographics_path, const SynthCohort &cohort);

} // namespace agerate::synth
