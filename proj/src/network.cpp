#include "dvs/network.hpp"

#include <cmath>
#include <string_view>

#include <json.hpp>

#include "dvs/errors.hpp"
#include "dvs/rng.hpp"

namespace dvs {

namespace {

std::size_t layer_param_count(const LayerSpec& spec) {
    switch (spec.kind) {
        case LayerKind::Conv1d:
            return static_cast<std::size_t>(spec.out_channels) * spec.in_channels * spec.kernel_size +
                   spec.out_channels;
        case LayerKind::Dense:
            return static_cast<std::size_t>(spec.out_features) * spec.in_features + spec.out_features;
        default:
            return 0;
    }
}

std::string_view kind_name(LayerKind kind) {
    switch (kind) {
        case LayerKind::Conv1d: return "conv1d";
        case LayerKind::MaxPool1d: return "maxpool1d";
        case LayerKind::Relu: return "relu";
        case LayerKind::Flatten: return "flatten";
        case LayerKind::Dense: return "dense";
    }
    return "?";
}

LayerKind kind_from_name(const std::string& name) {
    if (name == "conv1d") return LayerKind::Conv1d;
    if (name == "maxpool1d") return LayerKind::MaxPool1d;
    if (name == "relu") return LayerKind::Relu;
    if (name == "flatten") return LayerKind::Flatten;
    if (name == "dense") return LayerKind::Dense;
    throw ConfigError("unknown layer kind '" + name + "'");
}

}  // namespace

LayerSpec LayerSpec::conv1d(int in_ch, int out_ch, int k) {
    LayerSpec s;
    s.kind = LayerKind::Conv1d;
    s.in_channels = in_ch;
    s.out_channels = out_ch;
    s.kernel_size = k;
    return s;
}

LayerSpec LayerSpec::maxpool1d(int pool) {
    LayerSpec s;
    s.kind = LayerKind::MaxPool1d;
    s.pool_size = pool;
    return s;
}

LayerSpec LayerSpec::relu() {
    LayerSpec s;
    s.kind = LayerKind::Relu;
    return s;
}

LayerSpec LayerSpec::flatten() {
    LayerSpec s;
    s.kind = LayerKind::Flatten;
    return s;
}

LayerSpec LayerSpec::dense(int out_features) { return dense(0, out_features); }

LayerSpec LayerSpec::dense(int in_features, int out_features) {
    LayerSpec s;
    s.kind = LayerKind::Dense;
    s.in_features = in_features;
    s.out_features = out_features;
    return s;
}

LayerStack::LayerStack(std::vector<LayerSpec> layers, int input_len)
    : layers_(std::move(layers)), input_len_(input_len) {
    if (input_len_ < 1) throw ShapeError("input length must be >= 1");
    if (layers_.empty()) throw ShapeError("layer stack is empty");

    Shape shape{1, input_len_};
    shapes_.push_back(shape);
    offsets_.push_back(0);
    for (std::size_t l = 0; l < layers_.size(); ++l) {
        LayerSpec& spec = layers_[l];
        switch (spec.kind) {
            case LayerKind::Conv1d: {
                if (spec.in_channels < 1 || spec.out_channels < 1 || spec.kernel_size < 1) {
                    throw ShapeError("conv1d layer " + std::to_string(l) + " has non-positive dimensions");
                }
                if (spec.in_channels != shape.channels) {
                    throw ShapeError("conv1d layer " + std::to_string(l) + " expects " +
                                     std::to_string(spec.in_channels) + " channels, got " +
                                     std::to_string(shape.channels));
                }
                int out_len = shape.length - spec.kernel_size + 1;
                if (out_len < 1) {
                    throw ShapeError("conv1d layer " + std::to_string(l) + " output length " +
                                     std::to_string(out_len) + " < 1");
                }
                shape = {spec.out_channels, out_len};
                break;
            }
            case LayerKind::MaxPool1d: {
                if (spec.pool_size < 1) {
                    throw ShapeError("maxpool1d layer " + std::to_string(l) + " pool size < 1");
                }
                int out_len = shape.length / spec.pool_size;
                if (out_len < 1) {
                    throw ShapeError("maxpool1d layer " + std::to_string(l) + " would be empty (input length " +
                                     std::to_string(shape.length) + ")");
                }
                shape = {shape.channels, out_len};
                break;
            }
            case LayerKind::Relu:
                break;
            case LayerKind::Flatten:
                shape = {1, shape.features()};
                break;
            case LayerKind::Dense: {
                if (spec.out_features < 1) {
                    throw ShapeError("dense layer " + std::to_string(l) + " output features < 1");
                }
                if (spec.in_features == 0) spec.in_features = shape.features();
                if (spec.in_features != shape.features()) {
                    throw ShapeError("dense layer " + std::to_string(l) + " expects " +
                                     std::to_string(spec.in_features) + " features, got " +
                                     std::to_string(shape.features()));
                }
                shape = {1, spec.out_features};
                break;
            }
        }
        shapes_.push_back(shape);
        offsets_.push_back(offsets_.back() + layer_param_count(spec));
    }
    params_.assign(offsets_.back(), 0.0);
}

void LayerStack::initialize_params(std::uint64_t seed) {
    Rng rng(seed);
    init_seed_ = seed;
    for (std::size_t l = 0; l < layers_.size(); ++l) {
        const LayerSpec& spec = layers_[l];
        double* p = params_.data() + offsets_[l];
        if (spec.kind == LayerKind::Conv1d) {
            int fan_in = spec.in_channels * spec.kernel_size;
            int fan_out = spec.out_channels * spec.kernel_size;
            double r = std::sqrt(6.0 / (fan_in + fan_out));
            std::size_t weights = static_cast<std::size_t>(spec.out_channels) * spec.in_channels * spec.kernel_size;
            for (std::size_t i = 0; i < weights; ++i) p[i] = rng.uniform(-r, r);
            for (int i = 0; i < spec.out_channels; ++i) p[weights + i] = 0.0;
        } else if (spec.kind == LayerKind::Dense) {
            double r = std::sqrt(6.0 / (spec.in_features + spec.out_features));
            std::size_t weights = static_cast<std::size_t>(spec.out_features) * spec.in_features;
            for (std::size_t i = 0; i < weights; ++i) p[i] = rng.uniform(-r, r);
            for (int i = 0; i < spec.out_features; ++i) p[weights + i] = 0.0;
        }
    }
}

namespace {

// One layer forward; returns output activation, optionally recording pool argmax.
std::vector<double> apply_layer(const LayerSpec& spec, const Shape& in_shape, const Shape& out_shape,
                                const double* params, const std::vector<double>& in,
                                std::vector<int>* argmax_out) {
    std::vector<double> out;
    switch (spec.kind) {
        case LayerKind::Conv1d: {
            const int lin = in_shape.length, lout = out_shape.length;
            const int cin = spec.in_channels, cout = spec.out_channels, k = spec.kernel_size;
            const double* bias = params + static_cast<std::size_t>(cout) * cin * k;
            out.assign(static_cast<std::size_t>(cout) * lout, 0.0);
            for (int oc = 0; oc < cout; ++oc) {
                for (int t = 0; t < lout; ++t) {
                    double acc = bias[oc];
                    for (int ic = 0; ic < cin; ++ic) {
                        const double* w = params + (static_cast<std::size_t>(oc) * cin + ic) * k;
                        const double* x = in.data() + static_cast<std::size_t>(ic) * lin + t;
                        for (int kk = 0; kk < k; ++kk) acc += w[kk] * x[kk];
                    }
                    out[static_cast<std::size_t>(oc) * lout + t] = acc;
                }
            }
            break;
        }
        case LayerKind::MaxPool1d: {
            const int lin = in_shape.length, lout = out_shape.length, p = spec.pool_size;
            out.resize(static_cast<std::size_t>(in_shape.channels) * lout);
            if (argmax_out) argmax_out->resize(out.size());
            for (int c = 0; c < in_shape.channels; ++c) {
                for (int t = 0; t < lout; ++t) {
                    int base = c * lin + t * p;
                    int best = base;
                    for (int i = 1; i < p; ++i) {
                        if (in[base + i] > in[best]) best = base + i;
                    }
                    out[static_cast<std::size_t>(c) * lout + t] = in[best];
                    if (argmax_out) (*argmax_out)[static_cast<std::size_t>(c) * lout + t] = best;
                }
            }
            break;
        }
        case LayerKind::Relu:
            out.resize(in.size());
            for (std::size_t i = 0; i < in.size(); ++i) out[i] = in[i] > 0.0 ? in[i] : 0.0;
            break;
        case LayerKind::Flatten:
            out = in;  // layout is already channel-major
            break;
        case LayerKind::Dense: {
            const int fin = spec.in_features, fout = spec.out_features;
            const double* bias = params + static_cast<std::size_t>(fout) * fin;
            out.assign(fout, 0.0);
            for (int o = 0; o < fout; ++o) {
                const double* w = params + static_cast<std::size_t>(o) * fin;
                double acc = bias[o];
                for (int f = 0; f < fin; ++f) acc += w[f] * in[f];
                out[o] = acc;
            }
            break;
        }
    }
    return out;
}

}  // namespace

std::vector<double> forward_vector(const LayerStack& stack, const std::vector<double>& input) {
    if (static_cast<int>(input.size()) != stack.input_len()) {
        throw ShapeError("input has " + std::to_string(input.size()) + " entries, stack expects " +
                         std::to_string(stack.input_len()));
    }
    std::vector<double> act = input;
    for (std::size_t l = 0; l < stack.layers().size(); ++l) {
        act = apply_layer(stack.layers()[l], stack.shapes()[l], stack.shapes()[l + 1],
                          stack.params().data() + stack.param_offset(l), act, nullptr);
    }
    return act;
}

std::pair<double, ForwardTape> forward(const LayerStack& stack, const std::vector<double>& input) {
    if (static_cast<int>(input.size()) != stack.input_len()) {
        throw ShapeError("input has " + std::to_string(input.size()) + " entries, stack expects " +
                         std::to_string(stack.input_len()));
    }
    if (stack.output_shape().features() != 1) {
        throw ShapeError("stack output is not scalar");
    }
    ForwardTape tape;
    tape.input_len = stack.input_len();
    tape.layer_count = stack.layers().size();
    tape.inputs.resize(tape.layer_count);
    tape.pool_argmax.resize(tape.layer_count);

    std::vector<double> act = input;
    for (std::size_t l = 0; l < stack.layers().size(); ++l) {
        tape.inputs[l] = act;
        const LayerSpec& spec = stack.layers()[l];
        std::vector<int>* argmax = spec.kind == LayerKind::MaxPool1d ? &tape.pool_argmax[l] : nullptr;
        act = apply_layer(spec, stack.shapes()[l], stack.shapes()[l + 1],
                          stack.params().data() + stack.param_offset(l), act, argmax);
    }
    double pred = act[0];
    if (!std::isfinite(pred)) throw NonFiniteError("forward pass produced a non-finite prediction");
    return {pred, std::move(tape)};
}

std::vector<double> backward(const LayerStack& stack, const ForwardTape& tape, double upstream_grad) {
    if (tape.layer_count != stack.layers().size() || tape.input_len != stack.input_len()) {
        throw TapeMismatchError("tape does not match this stack");
    }
    for (std::size_t l = 0; l < tape.layer_count; ++l) {
        if (tape.inputs[l].size() !=
            static_cast<std::size_t>(stack.shapes()[l].channels) * stack.shapes()[l].length) {
            throw TapeMismatchError("tape activation " + std::to_string(l) + " has wrong size");
        }
    }

    std::vector<double> grads(stack.param_count(), 0.0);
    std::vector<double> g(1, upstream_grad);  // gradient w.r.t. current layer output

    for (std::size_t l = stack.layers().size(); l-- > 0;) {
        const LayerSpec& spec = stack.layers()[l];
        const Shape& in_shape = stack.shapes()[l];
        const Shape& out_shape = stack.shapes()[l + 1];
        const std::vector<double>& in = tape.inputs[l];
        const double* params = stack.params().data() + stack.param_offset(l);
        double* pg = grads.data() + stack.param_offset(l);
        std::vector<double> gin;

        switch (spec.kind) {
            case LayerKind::Conv1d: {
                const int lin = in_shape.length, lout = out_shape.length;
                const int cin = spec.in_channels, cout = spec.out_channels, k = spec.kernel_size;
                const std::size_t wcount = static_cast<std::size_t>(cout) * cin * k;
                gin.assign(in.size(), 0.0);
                for (int oc = 0; oc < cout; ++oc) {
                    for (int t = 0; t < lout; ++t) {
                        const double go = g[static_cast<std::size_t>(oc) * lout + t];
                        if (go == 0.0) continue;
                        pg[wcount + oc] += go;
                        for (int ic = 0; ic < cin; ++ic) {
                            const std::size_t wbase = (static_cast<std::size_t>(oc) * cin + ic) * k;
                            const std::size_t xbase = static_cast<std::size_t>(ic) * lin + t;
                            for (int kk = 0; kk < k; ++kk) {
                                pg[wbase + kk] += go * in[xbase + kk];
                                gin[xbase + kk] += go * params[wbase + kk];
                            }
                        }
                    }
                }
                break;
            }
            case LayerKind::MaxPool1d: {
                gin.assign(in.size(), 0.0);
                const std::vector<int>& argmax = tape.pool_argmax[l];
                for (std::size_t t = 0; t < g.size(); ++t) gin[argmax[t]] += g[t];
                break;
            }
            case LayerKind::Relu:
                gin.resize(in.size());
                for (std::size_t i = 0; i < in.size(); ++i) gin[i] = in[i] > 0.0 ? g[i] : 0.0;
                break;
            case LayerKind::Flatten:
                gin = g;
                break;
            case LayerKind::Dense: {
                const int fin = spec.in_features, fout = spec.out_features;
                gin.assign(fin, 0.0);
                for (int o = 0; o < fout; ++o) {
                    const double go = g[o];
                    const double* w = params + static_cast<std::size_t>(o) * fin;
                    double* wg = pg + static_cast<std::size_t>(o) * fin;
                    pg[static_cast<std::size_t>(fout) * fin + o] += go;
                    for (int f = 0; f < fin; ++f) {
                        wg[f] += go * in[f];
                        gin[f] += go * w[f];
                    }
                }
                break;
            }
        }
        g = std::move(gin);
    }
    return grads;
}

LayerStack build_dvs_cnn(int input_len) {
    return LayerStack({LayerSpec::conv1d(1, 8, 3), LayerSpec::relu(), LayerSpec::maxpool1d(2),
                       LayerSpec::conv1d(8, 16, 3), LayerSpec::relu(), LayerSpec::maxpool1d(2),
                       LayerSpec::flatten(), LayerSpec::dense(1)},
                      input_len);
}

LayerStack build_ablation_ann(int input_len) {
    return LayerStack({LayerSpec::dense(100), LayerSpec::relu(), LayerSpec::dense(100, 1)}, input_len);
}

LayerStack build_ablation_cnn(int input_len) {
    return LayerStack({LayerSpec::conv1d(1, 64, 2), LayerSpec::relu(), LayerSpec::maxpool1d(2),
                       LayerSpec::flatten(), LayerSpec::dense(100), LayerSpec::relu(),
                       LayerSpec::dense(100, 1)},
                      input_len);
}

std::string stack_to_json(const LayerStack& stack) {
    nlohmann::json arch = nlohmann::json::array();
    for (const LayerSpec& spec : stack.layers()) {
        nlohmann::json layer;
        layer["kind"] = kind_name(spec.kind);
        switch (spec.kind) {
            case LayerKind::Conv1d:
                layer["in_channels"] = spec.in_channels;
                layer["out_channels"] = spec.out_channels;
                layer["kernel_size"] = spec.kernel_size;
                break;
            case LayerKind::MaxPool1d:
                layer["pool_size"] = spec.pool_size;
                break;
            case LayerKind::Dense:
                layer["in_features"] = spec.in_features;
                layer["out_features"] = spec.out_features;
                break;
            default:
                break;
        }
        arch.push_back(std::move(layer));
    }
    nlohmann::json j;
    j["arch"] = std::move(arch);
    j["input_len"] = stack.input_len();
    j["params"] = stack.params();
    j["seed"] = stack.init_seed();
    return j.dump(2);
}

LayerStack stack_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    std::vector<LayerSpec> specs;
    for (const auto& layer : j.at("arch")) {
        LayerKind kind = kind_from_name(layer.at("kind").get<std::string>());
        switch (kind) {
            case LayerKind::Conv1d:
                specs.push_back(LayerSpec::conv1d(layer.at("in_channels").get<int>(),
                                                  layer.at("out_channels").get<int>(),
                                                  layer.at("kernel_size").get<int>()));
                break;
            case LayerKind::MaxPool1d:
                specs.push_back(LayerSpec::maxpool1d(layer.at("pool_size").get<int>()));
                break;
            case LayerKind::Relu:
                specs.push_back(LayerSpec::relu());
                break;
            case LayerKind::Flatten:
                specs.push_back(LayerSpec::flatten());
                break;
            case LayerKind::Dense:
                specs.push_back(LayerSpec::dense(layer.at("in_features").get<int>(),
                                                 layer.at("out_features").get<int>()));
                break;
        }
    }
    LayerStack stack(std::move(specs), j.at("input_len").get<int>());
    auto params = j.at("params").get<std::vector<double>>();
    if (params.size() != stack.param_count()) {
        throw ConfigError("model file has " + std::to_string(params.size()) + " parameters, stack needs " +
                          std::to_string(stack.param_count()));
    }
    stack.params() = std::move(params);
    stack.set_init_seed(j.at("seed").get<std::uint64_t>());
    return stack;
}

}  // namespace dvs
