#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lbnmobo/core.hpp"

namespace lbnmobo {

enum class Activation { Tanh, ReLU, CELU, LeakyReLU, ELU, Hardswish };

std::string_view to_string(Activation a);
Activation parse_activation(std::string_view s);

/// Member activations of the reference 10-network ensemble: Tanh x2, ReLU x2,
/// CELU x2, LeakyReLU x2, ELU, Hardswish. Other sizes cycle through this list.
std::vector<Activation> default_activation_roster(std::size_t members);

inline const std::vector<std::size_t> kBenchmarkHiddenWidths{100, 50, 100};
inline const std::vector<std::size_t> kAirfoilScaleHiddenWidths{150, 200, 200, 150};

struct MlpSpec {
    std::size_t input_dim = 0;
    std::size_t output_dim = 0;
    std::vector<std::size_t> hidden_widths = kBenchmarkHiddenWidths;
    Activation activation = Activation::Tanh;

    void validate() const;
    bool operator==(const MlpSpec&) const = default;
};

/// One spec per member, sharing widths, activations taken from `roster`.
std::vector<MlpSpec> ensemble_specs(std::size_t input_dim, std::size_t output_dim,
                                    const std::vector<std::size_t>& hidden_widths,
                                    const std::vector<Activation>& roster);

/// Dense feed-forward network with a linear output layer. Samples are columns.
class Mlp {
public:
    struct Layer {
        Eigen::MatrixXd weights;  // out x in
        Eigen::VectorXd bias;
        bool operator==(const Layer& o) const { return weights == o.weights && bias == o.bias; }
    };

    /// All parameters zero.
    explicit Mlp(MlpSpec spec);
    /// Glorot-uniform weights, zero biases.
    static Mlp glorot(MlpSpec spec, Rng& rng);

    const MlpSpec& spec() const { return spec_; }
    std::vector<Layer>& layers() { return layers_; }
    const std::vector<Layer>& layers() const { return layers_; }

    Vector forward(std::span<const double> x) const;
    Eigen::MatrixXd forward(const Eigen::MatrixXd& inputs) const;

    /// Parameter-shaped container for gradients and optimizer moments.
    using Gradient = std::vector<Layer>;
    Gradient zero_gradient() const;

    /// d/dtheta of mean((y - f(x))^2) over the M outputs of one sample.
    Gradient backward(std::span<const double> x, std::span<const double> target, double* loss = nullptr) const;

    /// Gradient of the mean squared error over all entries of a batch
    /// (columns of inputs/targets). Returns that loss.
    double backward_batch(const Eigen::MatrixXd& inputs, const Eigen::MatrixXd& targets, Gradient& grad) const;

    double mse(const Eigen::MatrixXd& inputs, const Eigen::MatrixXd& targets) const;

    std::size_t num_parameters() const;
    Vector parameters() const;
    void set_parameters(std::span<const double> theta);

    bool operator==(const Mlp& o) const { return spec_ == o.spec_ && layers_ == o.layers_; }

private:
    MlpSpec spec_;
    std::vector<Layer> layers_;
};

Eigen::ArrayXXd activate(Activation a, const Eigen::ArrayXXd& z);
Eigen::ArrayXXd activate_derivative(Activation a, const Eigen::ArrayXXd& z);

struct TrainConfig {
    int epochs = 60;
    int minibatch = 10;
    double learning_rate = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;

    void validate() const;
    bool operator==(const TrainConfig&) const = default;
};

/// Per-dimension affine map of the design box onto [0,1].
struct InputScaler {
    Vector lower;
    Vector upper;
    Vector scale(std::span<const double> x) const;
    Vector unscale(std::span<const double> u) const;
    bool operator==(const InputScaler&) const = default;
};

/// Per-objective standardization with the training targets' mean and std.
struct OutputScaler {
    Vector mean;
    Vector stddev;
    bool operator==(const OutputScaler&) const = default;
};

/// Ensemble mean (original units) and epistemic variance (standardized units).
struct EnsembleMoments {
    std::vector<Vector> mean;
    std::vector<Vector> variance;
};

class EnsembleSurrogate {
public:
    EnsembleSurrogate(std::vector<Mlp> members, InputScaler input, OutputScaler output);

    std::size_t size() const { return members_.size(); }
    std::size_t input_dim() const { return members_.front().spec().input_dim; }
    std::size_t output_dim() const { return members_.front().spec().output_dim; }
    const std::vector<Mlp>& members() const { return members_; }
    const InputScaler& input_scaler() const { return input_; }
    const OutputScaler& output_scaler() const { return output_; }

    /// Standardized-space output of every member: result[k] is M x N.
    std::vector<Eigen::MatrixXd> member_outputs(std::span<const Vector> xs) const;

    EnsembleMoments moments(std::span<const Vector> xs) const;
    /// (1/K) sum_k mu_k(x), de-standardized.
    std::vector<Vector> predict_mean(std::span<const Vector> xs) const;
    /// (1/K) sum_k mu_k(x)^2 - F_mu(x)^2 in standardized output space.
    std::vector<Vector> predict_epistemic_variance(std::span<const Vector> xs) const;

    void save(const std::filesystem::path& path) const;
    static EnsembleSurrogate load(const std::filesystem::path& path);
    std::string to_json() const;
    static EnsembleSurrogate from_json(const std::string& text);

    bool operator==(const EnsembleSurrogate& o) const {
        return members_ == o.members_ && input_ == o.input_ && output_ == o.output_;
    }

private:
    Eigen::MatrixXd scaled_inputs(std::span<const Vector> xs) const;

    std::vector<Mlp> members_;
    InputScaler input_;
    OutputScaler output_;
};

struct TrainReport {
    std::vector<double> initial_mse;  // standardized space, full dataset
    std::vector<double> final_mse;
};

/// Trains every member on the full dataset from its own Glorot init and
/// shuffling stream (member k draws from SeedTree(seed).rng("member", k)).
/// Members train in parallel; results do not depend on the worker count.
EnsembleSurrogate train_ensemble(const Dataset& ds, const DesignSpace& space, const std::vector<MlpSpec>& specs,
                                 const TrainConfig& cfg, std::uint64_t seed, TrainReport* report = nullptr);

}  // namespace lbnmobo
