#pragma once

#include "agerate/ingest.hpp"
#include "agerate/rng.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <string>
#include <vector>

namespace agerate::vae {

/// Hyperparameters of the aging model (tuning search space dimensions plus
/// the fixed training knobs).
struct ModelConfig {
    int n_dims = 4;
    double sigma_r = 0.1; // prior scale of log aging rates
    int monotone_count = 0;
    std::vector<double> poly_degrees = {1.0 / 5.0, 1.0 / 4.0, 1.0 / 3.0, 1.0 / 2.0,
                                        1.0,       2.0,       3.0,       4.0,
                                        5.0};
    std::vector<int> encoder_widths = {64};
    std::vector<int> decoder_widths = {16};
    double learning_rate = 5e-4;
    int batch_size = 4096;
    int max_epochs = 300;
    std::uint64_t seed = 0;

    void validate() const;
};

/// One dense layer, y = x W^T + b.
struct DenseLayer {
    Eigen::MatrixXd w; // out x in
    Eigen::VectorXd b; // out
};

/// Learned weights. Monotone coefficients are stored materialized
/// (elementwise >= 0); the softplus reparameterization that keeps them
/// nonnegative lives in the trainer.
struct ModelParams {
    ModelConfig config;
    std::vector<std::string> component_ids; // training feature order
    std::vector<int> monotone_idx;          // into component_ids, ascending
    std::vector<int> monotone_sign;         // +-1 per monotone feature
    std::vector<int> network_idx;           // remaining features, ascending
    std::vector<DenseLayer> encoder;        // ReLU hiddens, linear 2*n_dims head
    std::vector<DenseLayer> decoder;        // ReLU hiddens, linear head; may be empty
    Eigen::MatrixXd mono_w;                 // |M| x (n_dims * |S|), (k,s) -> k*|S|+s
    Eigen::VectorXd mono_b;                 // |M|
    Eigen::VectorXd noise_log_var;          // per feature, training order
    ingest::Scaler scaler;

    int n_features() const { return static_cast<int>(component_ids.size()); }
    void validate() const;
};

/// Gradients in the same shapes as the parameters they correspond to.
struct ModelGradients {
    std::vector<DenseLayer> encoder;
    std::vector<DenseLayer> decoder;
    Eigen::MatrixXd mono_w;
    Eigen::VectorXd mono_b;
    Eigen::VectorXd noise_log_var;
};

/// Per-person aging rates; biological_age(i,k) = rates(i,k) * scaled age i.
struct RateMatrix {
    std::vector<std::string> person_ids;
    Eigen::MatrixXd rates;
    Eigen::MatrixXd biological_age;
    Eigen::VectorXd age; // chronological, years
};

struct LossBreakdown {
    double total = 0.0;
    double recon = 0.0;
    double kl = 0.0;
};

struct TrainLogEntry {
    int epoch = 0;
    double train_loss = 0.0;
    double train_recon = 0.0;
    double train_kl = 0.0;
    double val_loss = 0.0;
};

struct TrainLog {
    std::vector<TrainLogEntry> entries;
    int best_epoch = -1;
    int threads = 1;
};

struct TrainResult {
    ModelParams params;
    TrainLog log;
};

/// Raised when the loss goes non-finite; carries the last finite parameters
/// and the log up to the failure.
class TrainingDivergedError : public Error {
  public:
    TrainingDivergedError(const std::string &msg, ModelParams last_params, TrainLog log)
        : Error("training_diverged", msg), last_params_(std::move(last_params)),
          log_(std::move(log)) {}
    const ModelParams &last_params() const { return last_params_; }
    const TrainLog &log() const { return log_; }

  private:
    ModelParams last_params_;
    TrainLog log_;
};

/// Spearman's rank correlation (Pearson on mid-ranks).
double spearman_correlation(const std::vector<double> &feature, const std::vector<double> &age);

struct MonotoneSelection {
    std::vector<int> indices; // ascending feature index
    std::vector<int> signs;
};

/// Features whose |Spearman correlation with age| clears `threshold`, with
/// sign = sign of the correlation. Constant features are never selected.
MonotoneSelection select_monotone(const ingest::CrossSection &cs, double threshold);

/// Top `count` features by |Spearman correlation with age| (the Table-1
/// style "number of monotone features" knob).
MonotoneSelection select_monotone_top(const ingest::CrossSection &cs, int count);

/// Encoder forward pass (deterministic): ReLU hiddens, linear heads.
std::pair<Eigen::VectorXd, Eigen::VectorXd> encode(const ModelParams &params,
                                                   const Eigen::VectorXd &x);
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> encode_batch(const ModelParams &params,
                                                         const Eigen::MatrixXd &x);

/// r = exp(sigma_r * (mu + exp(log_var/2) * noise)); strictly positive.
Eigen::VectorXd sample_rates(const Eigen::VectorXd &mu, const Eigen::VectorXd &log_var,
                             double sigma_r, const Eigen::VectorXd &noise);

/// Decoder: monotone features through the signed-power basis of biological
/// ages with nonnegative weights (monotone in t by construction), the rest
/// through the network path.
Eigen::VectorXd decode(const ModelParams &params, const Eigen::VectorXd &rates, double t_scaled);
Eigen::MatrixXd decode_batch(const ModelParams &params, const Eigen::MatrixXd &rates,
                             const Eigen::VectorXd &t_scaled);

/// Negative ELBO on a batch of scaled rows: Gaussian reconstruction
/// likelihood with per-feature learned variance plus closed-form
/// KL(q(z|x) || N(0,I)), both averaged per row.
LossBreakdown loss(const ModelParams &params, const Eigen::MatrixXd &x,
                   const Eigen::VectorXd &t_scaled, const Eigen::MatrixXd &noise);

/// Analytic reverse-mode gradients of `loss` for every parameter.
LossBreakdown gradients(const ModelParams &params, const Eigen::MatrixXd &x,
                        const Eigen::VectorXd &t_scaled, const Eigen::MatrixXd &noise,
                        ModelGradients *out);

/// Adam with bias correction; exposed for the training loop and its tests.
class Adam {
  public:
    Adam(Eigen::Index size, double learning_rate, double beta1 = 0.9, double beta2 = 0.999,
         double epsilon = 1e-8);
    void step(const Eigen::VectorXd &grad, Eigen::VectorXd &theta);

  private:
    double lr_, beta1_, beta2_, eps_;
    long t_ = 0;
    Eigen::VectorXd m_, v_;
};

/// Trains on standard-scaled train data with shuffled mini-batches and
/// returns the parameters at the best validation loss (validation evaluated
/// at the posterior mean). Deterministic given cfg.seed.
TrainResult train(const ModelConfig &cfg, const ingest::CrossSection &train_cs,
                  const ingest::CrossSection &val_cs);

/// Posterior-mean rates for a raw (unscaled) cross-section whose features
/// match the training features; scaling uses the stored scaler.
RateMatrix infer_rates(const ModelParams &params, const ingest::CrossSection &cs);

// --- serialization ----------------------------------------------------------

/// Versioned model document (config + flattened parameter arrays + scaler).
void save_model_json(const std::string &path, const ModelParams &params);
ModelParams load_model_json(const std::string &path);

/// `person_id,r1..rn,bioage1..bioagen,age`
void write_rate_matrix_csv(const std::string &path, const RateMatrix &rates);
RateMatrix read_rate_matrix_csv(const std::string &path);

} // namespace agerate::vae
