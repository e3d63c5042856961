#include "lbnmobo/surrogate.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <numeric>
#include <optional>
#include <sstream>

namespace lbnmobo {

namespace {

constexpr double kLeakySlope = 0.01;
constexpr double kEluAlpha = 1.0;
constexpr double kCeluAlpha = 1.0;

struct ActivationName {
    Activation act;
    std::string_view name;
};
constexpr ActivationName kActivationNames[] = {
    {Activation::Tanh, "tanh"},       {Activation::ReLU, "relu"}, {Activation::CELU, "celu"},
    {Activation::LeakyReLU, "leaky_relu"}, {Activation::ELU, "elu"},  {Activation::Hardswish, "hardswish"},
};

}  // namespace

std::string_view to_string(Activation a) {
    for (const auto& e : kActivationNames)
        if (e.act == a) return e.name;
    return "?";
}

Activation parse_activation(std::string_view s) {
    for (const auto& e : kActivationNames)
        if (e.name == s) return e.act;
    throw ArgumentError("unknown activation '" + std::string(s) + "'");
}

std::vector<Activation> default_activation_roster(std::size_t members) {
    static constexpr Activation kReference[] = {
        Activation::Tanh,      Activation::Tanh,      Activation::ReLU, Activation::ReLU,
        Activation::CELU,      Activation::CELU,      Activation::LeakyReLU,
        Activation::LeakyReLU, Activation::ELU,       Activation::Hardswish,
    };
    std::vector<Activation> out(members);
    for (std::size_t k = 0; k < members; ++k) out[k] = kReference[k % std::size(kReference)];
    return out;
}

void MlpSpec::validate() const {
    if (input_dim == 0 || output_dim == 0) throw ArgumentError("MLP input/output dimensions must be positive");
    if (hidden_widths.empty()) throw ArgumentError("MLP needs at least one hidden layer");
    for (auto w : hidden_widths)
        if (w == 0) throw ArgumentError("MLP hidden widths must be positive");
}

std::vector<MlpSpec> ensemble_specs(std::size_t input_dim, std::size_t output_dim,
                                    const std::vector<std::size_t>& hidden_widths,
                                    const std::vector<Activation>& roster) {
    std::vector<MlpSpec> specs;
    for (auto a : roster) specs.push_back(MlpSpec{input_dim, output_dim, hidden_widths, a});
    return specs;
}

// ---------------------------------------------------------------------------

Eigen::ArrayXXd activate(Activation a, const Eigen::ArrayXXd& z) {
    switch (a) {
        case Activation::Tanh: return z.tanh();
        case Activation::ReLU: return z.max(0.0);
        case Activation::LeakyReLU: return (z > 0.0).select(z, kLeakySlope * z);
        case Activation::ELU: return (z > 0.0).select(z, kEluAlpha * ((z).exp() - 1.0));
        case Activation::CELU: return (z > 0.0).select(z, kCeluAlpha * ((z / kCeluAlpha).exp() - 1.0));
        case Activation::Hardswish: return z * (z + 3.0).max(0.0).min(6.0) / 6.0;
    }
    return z;
}

Eigen::ArrayXXd activate_derivative(Activation a, const Eigen::ArrayXXd& z) {
    switch (a) {
        case Activation::Tanh: {
            Eigen::ArrayXXd t = z.tanh();
            return 1.0 - t * t;
        }
        case Activation::ReLU: return (z > 0.0).cast<double>();
        case Activation::LeakyReLU: return (z > 0.0).select(Eigen::ArrayXXd::Ones(z.rows(), z.cols()), kLeakySlope);
        case Activation::ELU: return (z > 0.0).select(Eigen::ArrayXXd::Ones(z.rows(), z.cols()), kEluAlpha * z.exp());
        case Activation::CELU:
            return (z > 0.0).select(Eigen::ArrayXXd::Ones(z.rows(), z.cols()), (z / kCeluAlpha).exp());
        case Activation::Hardswish:
            return (z < -3.0).select(0.0, (z > 3.0).select(1.0, (2.0 * z + 3.0) / 6.0));
    }
    return Eigen::ArrayXXd::Ones(z.rows(), z.cols());
}

// ---------------------------------------------------------------------------

Mlp::Mlp(MlpSpec spec) : spec_(std::move(spec)) {
    spec_.validate();
    std::size_t in = spec_.input_dim;
    auto add = [&](std::size_t out) {
        layers_.push_back(Layer{Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(out), static_cast<Eigen::Index>(in)),
                                Eigen::VectorXd::Zero(static_cast<Eigen::Index>(out))});
        in = out;
    };
    for (auto w : spec_.hidden_widths) add(w);
    add(spec_.output_dim);
}

Mlp Mlp::glorot(MlpSpec spec, Rng& rng) {
    Mlp m(std::move(spec));
    for (auto& layer : m.layers_) {
        const double limit = std::sqrt(6.0 / static_cast<double>(layer.weights.rows() + layer.weights.cols()));
        std::uniform_real_distribution<double> dist(-limit, limit);
        // Row-major fill keeps the stream order independent of Eigen's storage.
        for (Eigen::Index r = 0; r < layer.weights.rows(); ++r)
            for (Eigen::Index c = 0; c < layer.weights.cols(); ++c) layer.weights(r, c) = dist(rng);
    }
    return m;
}

Eigen::MatrixXd Mlp::forward(const Eigen::MatrixXd& inputs) const {
    if (static_cast<std::size_t>(inputs.rows()) != spec_.input_dim) throw ArgumentError("MLP input shape mismatch");
    Eigen::MatrixXd a = inputs;
    for (std::size_t l = 0; l < layers_.size(); ++l) {
        Eigen::MatrixXd z = layers_[l].weights * a;
        z.colwise() += layers_[l].bias;
        if (l + 1 < layers_.size())
            a = activate(spec_.activation, z.array()).matrix();
        else
            a = std::move(z);
    }
    return a;
}

Vector Mlp::forward(std::span<const double> x) const {
    if (x.size() != spec_.input_dim) throw ArgumentError("MLP input shape mismatch");
    Eigen::MatrixXd in = Eigen::Map<const Eigen::VectorXd>(x.data(), static_cast<Eigen::Index>(x.size()));
    Eigen::MatrixXd out = forward(in);
    return Vector(out.data(), out.data() + out.size());
}

Mlp::Gradient Mlp::zero_gradient() const {
    Gradient g;
    for (const auto& l : layers_)
        g.push_back(Layer{Eigen::MatrixXd::Zero(l.weights.rows(), l.weights.cols()),
                          Eigen::VectorXd::Zero(l.bias.size())});
    return g;
}

double Mlp::backward_batch(const Eigen::MatrixXd& inputs, const Eigen::MatrixXd& targets, Gradient& grad) const {
    if (static_cast<std::size_t>(inputs.rows()) != spec_.input_dim ||
        static_cast<std::size_t>(targets.rows()) != spec_.output_dim || inputs.cols() != targets.cols())
        throw ArgumentError("MLP backward shape mismatch");
    if (grad.size() != layers_.size()) grad = zero_gradient();

    const std::size_t depth = layers_.size();
    // Reused across calls on the same thread; training calls this per minibatch.
    thread_local std::vector<Eigen::MatrixXd> pre, act;
    thread_local Eigen::MatrixXd delta, back;
    thread_local Eigen::ArrayXXd deriv;
    pre.resize(depth);
    act.resize(depth + 1);
    act[0] = inputs;
    for (std::size_t l = 0; l < depth; ++l) {
        pre[l].noalias() = layers_[l].weights * act[l];
        pre[l].colwise() += layers_[l].bias;
        if (l + 1 < depth)
            act[l + 1] = activate(spec_.activation, pre[l].array()).matrix();
        else
            act[l + 1] = pre[l];
    }
    delta = act[depth] - targets;
    const double count = static_cast<double>(delta.size());
    const double loss = delta.squaredNorm() / count;

    delta *= 2.0 / count;
    for (std::size_t l = depth; l-- > 0;) {
        grad[l].weights.noalias() = delta * act[l].transpose();
        grad[l].bias = delta.rowwise().sum();
        if (l > 0) {
            back.noalias() = layers_[l].weights.transpose() * delta;
            if (spec_.activation == Activation::Tanh)
                deriv = 1.0 - act[l].array().square();
            else
                deriv = activate_derivative(spec_.activation, pre[l - 1].array());
            delta = (back.array() * deriv).matrix();
        }
    }
    return loss;
}

Mlp::Gradient Mlp::backward(std::span<const double> x, std::span<const double> target, double* loss) const {
    if (x.size() != spec_.input_dim || target.size() != spec_.output_dim)
        throw ArgumentError("MLP backward shape mismatch");
    Eigen::MatrixXd in = Eigen::Map<const Eigen::VectorXd>(x.data(), static_cast<Eigen::Index>(x.size()));
    Eigen::MatrixXd tg = Eigen::Map<const Eigen::VectorXd>(target.data(), static_cast<Eigen::Index>(target.size()));
    Gradient g = zero_gradient();
    const double l = backward_batch(in, tg, g);
    if (loss) *loss = l;
    return g;
}

double Mlp::mse(const Eigen::MatrixXd& inputs, const Eigen::MatrixXd& targets) const {
    Eigen::MatrixXd out = forward(inputs);
    return (out - targets).squaredNorm() / static_cast<double>(out.size());
}

std::size_t Mlp::num_parameters() const {
    std::size_t n = 0;
    for (const auto& l : layers_) n += static_cast<std::size_t>(l.weights.size() + l.bias.size());
    return n;
}

Vector Mlp::parameters() const {
    Vector theta;
    theta.reserve(num_parameters());
    for (const auto& l : layers_) {
        theta.insert(theta.end(), l.weights.data(), l.weights.data() + l.weights.size());
        theta.insert(theta.end(), l.bias.data(), l.bias.data() + l.bias.size());
    }
    return theta;
}

void Mlp::set_parameters(std::span<const double> theta) {
    if (theta.size() != num_parameters()) throw ArgumentError("MLP parameter count mismatch");
    std::size_t off = 0;
    for (auto& l : layers_) {
        std::copy_n(theta.begin() + static_cast<std::ptrdiff_t>(off), l.weights.size(), l.weights.data());
        off += static_cast<std::size_t>(l.weights.size());
        std::copy_n(theta.begin() + static_cast<std::ptrdiff_t>(off), l.bias.size(), l.bias.data());
        off += static_cast<std::size_t>(l.bias.size());
    }
}

// ---------------------------------------------------------------------------

void TrainConfig::validate() const {
    if (epochs < 1) throw ConfigError("training epochs must be >= 1");
    if (minibatch < 1) throw ConfigError("training minibatch must be >= 1");
    if (!(learning_rate > 0.0)) throw ConfigError("learning rate must be positive");
    if (!(beta1 >= 0.0 && beta1 < 1.0 && beta2 >= 0.0 && beta2 < 1.0)) throw ConfigError("Adam betas must be in [0,1)");
    if (!(epsilon > 0.0)) throw ConfigError("Adam epsilon must be positive");
}

Vector InputScaler::scale(std::span<const double> x) const {
    Vector u(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) u[i] = (x[i] - lower[i]) / (upper[i] - lower[i]);
    return u;
}

Vector InputScaler::unscale(std::span<const double> u) const {
    Vector x(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) x[i] = lower[i] + u[i] * (upper[i] - lower[i]);
    return x;
}

// ---------------------------------------------------------------------------

EnsembleSurrogate::EnsembleSurrogate(std::vector<Mlp> members, InputScaler input, OutputScaler output)
    : members_(std::move(members)), input_(std::move(input)), output_(std::move(output)) {
    if (members_.size() < 2) throw ArgumentError("an ensemble needs at least two members");
    const auto& first = members_.front().spec();
    for (const auto& m : members_)
        if (m.spec().input_dim != first.input_dim || m.spec().output_dim != first.output_dim)
            throw ArgumentError("ensemble members disagree on input/output dimensions");
    if (input_.lower.size() != first.input_dim || input_.upper.size() != first.input_dim)
        throw ArgumentError("input scaler dimension mismatch");
    if (output_.mean.size() != first.output_dim || output_.stddev.size() != first.output_dim)
        throw ArgumentError("output scaler dimension mismatch");
    for (double s : output_.stddev)
        if (!(s > 0.0)) throw ConfigError("output scaler standard deviation must be positive");
}

Eigen::MatrixXd EnsembleSurrogate::scaled_inputs(std::span<const Vector> xs) const {
    const auto n = static_cast<Eigen::Index>(input_dim());
    Eigen::MatrixXd in(n, static_cast<Eigen::Index>(xs.size()));
    for (std::size_t j = 0; j < xs.size(); ++j) {
        if (xs[j].size() != input_dim()) throw ArgumentError("surrogate input dimension mismatch");
        for (Eigen::Index i = 0; i < n; ++i)
            in(i, static_cast<Eigen::Index>(j)) = (xs[j][static_cast<std::size_t>(i)] - input_.lower[static_cast<std::size_t>(i)]) /
                (input_.upper[static_cast<std::size_t>(i)] - input_.lower[static_cast<std::size_t>(i)]);
    }
    return in;
}

std::vector<Eigen::MatrixXd> EnsembleSurrogate::member_outputs(std::span<const Vector> xs) const {
    const Eigen::MatrixXd in = scaled_inputs(xs);
    std::vector<Eigen::MatrixXd> out(members_.size());
    for (std::size_t k = 0; k < members_.size(); ++k) out[k] = members_[k].forward(in);
    return out;
}

EnsembleMoments EnsembleSurrogate::moments(std::span<const Vector> xs) const {
    const auto outs = member_outputs(xs);
    const std::size_t m = output_dim();
    EnsembleMoments r{std::vector<Vector>(xs.size(), Vector(m)), std::vector<Vector>(xs.size(), Vector(m))};
    for (std::size_t j = 0; j < xs.size(); ++j) {
        for (std::size_t o = 0; o < m; ++o) {
            // Welford: identical members give exactly zero variance.
            double mean = 0.0, m2 = 0.0;
            for (std::size_t k = 0; k < outs.size(); ++k) {
                const double v = outs[k](static_cast<Eigen::Index>(o), static_cast<Eigen::Index>(j));
                const double delta = v - mean;
                mean += delta / static_cast<double>(k + 1);
                m2 += delta * (v - mean);
            }
            r.mean[j][o] = mean * output_.stddev[o] + output_.mean[o];
            r.variance[j][o] = m2 / static_cast<double>(outs.size());
        }
    }
    return r;
}

std::vector<Vector> EnsembleSurrogate::predict_mean(std::span<const Vector> xs) const { return moments(xs).mean; }

std::vector<Vector> EnsembleSurrogate::predict_epistemic_variance(std::span<const Vector> xs) const {
    return moments(xs).variance;
}

// ---------------------------------------------------------------------------

namespace {

using nlohmann::json;

json matrix_to_json(const Eigen::MatrixXd& w) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < w.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < w.cols(); ++c) row.push_back(w(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace

std::string EnsembleSurrogate::to_json() const {
    json j;
    j["format"] = "lbnmobo-ensemble";
    j["version"] = 1;
    j["input_lower"] = input_.lower;
    j["input_upper"] = input_.upper;
    j["output_mean"] = output_.mean;
    j["output_std"] = output_.stddev;
    json members = json::array();
    for (const auto& m : members_) {
        json jm;
        jm["input_dim"] = m.spec().input_dim;
        jm["output_dim"] = m.spec().output_dim;
        jm["hidden_widths"] = m.spec().hidden_widths;
        jm["activation"] = std::string(to_string(m.spec().activation));
        json layers = json::array();
        for (const auto& l : m.layers()) {
            layers.push_back({{"weights", matrix_to_json(l.weights)},
                              {"bias", std::vector<double>(l.bias.data(), l.bias.data() + l.bias.size())}});
        }
        jm["layers"] = std::move(layers);
        members.push_back(std::move(jm));
    }
    j["members"] = std::move(members);
    return j.dump();
}

EnsembleSurrogate EnsembleSurrogate::from_json(const std::string& text) {
    try {
        const json j = json::parse(text);
        if (j.at("format") != "lbnmobo-ensemble" || j.at("version") != 1)
            throw LoadError("not an ensemble checkpoint");
        std::vector<Mlp> members;
        for (const auto& jm : j.at("members")) {
            MlpSpec spec{jm.at("input_dim").get<std::size_t>(), jm.at("output_dim").get<std::size_t>(),
                         jm.at("hidden_widths").get<std::vector<std::size_t>>(),
                         parse_activation(jm.at("activation").get<std::string>())};
            Mlp m(spec);
            const auto& layers = jm.at("layers");
            if (layers.size() != m.layers().size()) throw LoadError("checkpoint layer count mismatch");
            for (std::size_t l = 0; l < layers.size(); ++l) {
                auto& dst = m.layers()[l];
                const auto& w = layers[l].at("weights");
                const auto bias = layers[l].at("bias").get<std::vector<double>>();
                if (w.size() != static_cast<std::size_t>(dst.weights.rows()) ||
                    bias.size() != static_cast<std::size_t>(dst.bias.size()))
                    throw LoadError("checkpoint layer shape mismatch");
                for (Eigen::Index r = 0; r < dst.weights.rows(); ++r) {
                    const auto row = w[static_cast<std::size_t>(r)].get<std::vector<double>>();
                    if (row.size() != static_cast<std::size_t>(dst.weights.cols()))
                        throw LoadError("checkpoint layer shape mismatch");
                    for (Eigen::Index c = 0; c < dst.weights.cols(); ++c) dst.weights(r, c) = row[static_cast<std::size_t>(c)];
                }
                for (std::size_t b = 0; b < bias.size(); ++b) dst.bias(static_cast<Eigen::Index>(b)) = bias[b];
            }
            members.push_back(std::move(m));
        }
        return EnsembleSurrogate(std::move(members),
                                 InputScaler{j.at("input_lower").get<Vector>(), j.at("input_upper").get<Vector>()},
                                 OutputScaler{j.at("output_mean").get<Vector>(), j.at("output_std").get<Vector>()});
    } catch (const json::exception& e) {
        throw LoadError(std::string("malformed ensemble checkpoint: ") + e.what());
    } catch (const ArgumentError& e) {
        throw LoadError(std::string("invalid ensemble checkpoint: ") + e.what());
    }
}

void EnsembleSurrogate::save(const std::filesystem::path& path) const {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + path.string());
    os << to_json();
}

EnsembleSurrogate EnsembleSurrogate::load(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw LoadError("cannot open " + path.string());
    std::ostringstream ss;
    ss << is.rdbuf();
    return from_json(ss.str());
}

// ---------------------------------------------------------------------------

namespace {

struct AdamState {
    Mlp::Gradient m;
    Mlp::Gradient v;
    long step = 0;
};

void adam_step(Mlp& net, const Mlp::Gradient& g, AdamState& s, const TrainConfig& cfg) {
    ++s.step;
    const double c1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(s.step));
    const double c2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(s.step));
    const double lr = cfg.learning_rate;
    auto update = [&](auto& param, const auto& grad, auto& m, auto& v) {
        m.array() = cfg.beta1 * m.array() + (1.0 - cfg.beta1) * grad.array();
        v.array() = cfg.beta2 * v.array() + (1.0 - cfg.beta2) * grad.array().square();
        param.array() -= lr * (m.array() / c1) / ((v.array() / c2).sqrt() + cfg.epsilon);
    };
    for (std::size_t l = 0; l < net.layers().size(); ++l) {
        update(net.layers()[l].weights, g[l].weights, s.m[l].weights, s.v[l].weights);
        update(net.layers()[l].bias, g[l].bias, s.m[l].bias, s.v[l].bias);
    }
}

}  // namespace

EnsembleSurrogate train_ensemble(const Dataset& ds, const DesignSpace& space, const std::vector<MlpSpec>& specs,
                                 const TrainConfig& cfg, std::uint64_t seed, TrainReport* report) {
    cfg.validate();
    if (specs.size() < 2) throw ConfigError("an ensemble needs at least two members");
    if (ds.dim() != space.dim()) throw ArgumentError("dataset and design space dimensions differ");
    if (ds.size() < static_cast<std::size_t>(cfg.minibatch))
        throw ConfigError("dataset has " + std::to_string(ds.size()) + " rows, fewer than the minibatch size " +
                          std::to_string(cfg.minibatch));
    const std::size_t n = ds.dim(), m = ds.num_objectives(), rows = ds.size();
    for (const auto& s : specs) {
        s.validate();
        if (s.input_dim != n || s.output_dim != m) throw ArgumentError("member spec does not match dataset shape");
    }

    OutputScaler out{Vector(m, 0.0), Vector(m, 0.0)};
    for (std::size_t o = 0; o < m; ++o) {
        double mean = 0.0;
        for (const auto& y : ds.performances()) mean += y[o];
        mean /= static_cast<double>(rows);
        double var = 0.0;
        for (const auto& y : ds.performances()) var += (y[o] - mean) * (y[o] - mean);
        const double sd = std::sqrt(var / static_cast<double>(rows));
        if (!(sd > 1e-12 * std::max(1.0, std::abs(mean))))
            throw ConfigError("objective " + std::to_string(o) + " is constant across the dataset; cannot standardize");
        out.mean[o] = mean;
        out.stddev[o] = sd;
    }
    InputScaler in{space.lower(), space.upper()};

    Eigen::MatrixXd inputs(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(rows));
    Eigen::MatrixXd targets(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(rows));
    for (std::size_t r = 0; r < rows; ++r) {
        const Vector u = in.scale(ds.designs()[r]);
        for (std::size_t i = 0; i < n; ++i) inputs(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(r)) = u[i];
        for (std::size_t o = 0; o < m; ++o)
            targets(static_cast<Eigen::Index>(o), static_cast<Eigen::Index>(r)) =
                (ds.performances()[r][o] - out.mean[o]) / out.stddev[o];
    }

    const SeedTree tree(seed);
    std::vector<std::optional<Mlp>> trained(specs.size());
    std::vector<double> initial(specs.size()), final_mse(specs.size());
    parallel_for(specs.size(), [&](std::size_t k) {
        Rng rng = tree.rng("member", k);
        Mlp net = Mlp::glorot(specs[k], rng);
        initial[k] = net.mse(inputs, targets);
        AdamState adam{net.zero_gradient(), net.zero_gradient(), 0};
        Mlp::Gradient grad = net.zero_gradient();
        std::vector<std::size_t> order(rows);
        std::iota(order.begin(), order.end(), 0);
        const auto batch = static_cast<std::size_t>(cfg.minibatch);
        Eigen::MatrixXd bx, by;
        for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
            std::shuffle(order.begin(), order.end(), rng);
            double epoch_loss = 0.0;
            for (std::size_t start = 0; start < rows; start += batch) {
                const std::size_t len = std::min(batch, rows - start);
                bx.resize(inputs.rows(), static_cast<Eigen::Index>(len));
                by.resize(targets.rows(), static_cast<Eigen::Index>(len));
                for (std::size_t c = 0; c < len; ++c) {
                    bx.col(static_cast<Eigen::Index>(c)) = inputs.col(static_cast<Eigen::Index>(order[start + c]));
                    by.col(static_cast<Eigen::Index>(c)) = targets.col(static_cast<Eigen::Index>(order[start + c]));
                }
                epoch_loss += net.backward_batch(bx, by, grad);
                adam_step(net, grad, adam, cfg);
            }
            if (!std::isfinite(epoch_loss))
                throw TrainingError("ensemble member " + std::to_string(k) + " (" +
                                    std::string(to_string(specs[k].activation)) + ") diverged in epoch " +
                                    std::to_string(epoch));
        }
        final_mse[k] = net.mse(inputs, targets);
        trained[k].emplace(std::move(net));
    });

    std::vector<Mlp> members;
    members.reserve(specs.size());
    for (auto& t : trained) members.push_back(std::move(*t));
    if (report) *report = TrainReport{std::move(initial), std::move(final_mse)};
    return EnsembleSurrogate(std::move(members), std::move(in), std::move(out));
}

}  // namespace lbnmobo
