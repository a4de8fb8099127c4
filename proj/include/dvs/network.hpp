#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace dvs {

enum class LayerKind { Conv1d, MaxPool1d, Relu, Flatten, Dense };

struct LayerSpec {
    LayerKind kind = LayerKind::Relu;
    int in_channels = 0, out_channels = 0, kernel_size = 0;  // conv1d
    int pool_size = 0;                                       // maxpool1d
    int in_features = 0, out_features = 0;                   // dense; in_features 0 = infer

    static LayerSpec conv1d(int in_ch, int out_ch, int k);
    static LayerSpec maxpool1d(int pool);
    static LayerSpec relu();
    static LayerSpec flatten();
    static LayerSpec dense(int out_features);
    static LayerSpec dense(int in_features, int out_features);
};

// Activation shape between layers; dense layers see features = channels * length.
struct Shape {
    int channels = 1;
    int length = 0;

    int features() const { return channels * length; }
    bool operator==(const Shape&) const = default;
};

// An ordered layer list with one flat parameter store. Shapes are composed
// and checked at construction: conv is valid-padding stride 1, max pooling
// truncates a trailing partial window, and a stack fails to build exactly
// when some intermediate length would drop below 1.
class LayerStack {
public:
    LayerStack(std::vector<LayerSpec> layers, int input_len);

    const std::vector<LayerSpec>& layers() const { return layers_; }
    const std::vector<Shape>& shapes() const { return shapes_; }  // shapes_[l] enters layer l
    Shape output_shape() const { return shapes_.back(); }
    int input_len() const { return input_len_; }

    std::size_t param_count() const { return params_.size(); }
    std::size_t param_offset(std::size_t layer) const { return offsets_[layer]; }
    std::vector<double>& params() { return params_; }
    const std::vector<double>& params() const { return params_; }

    std::uint64_t init_seed() const { return init_seed_; }
    void set_init_seed(std::uint64_t seed) { init_seed_ = seed; }

    // Glorot-uniform weights, zero biases, drawn layer by layer from the seed.
    void initialize_params(std::uint64_t seed);

private:
    std::vector<LayerSpec> layers_;
    std::vector<Shape> shapes_;        // size layers_.size() + 1
    std::vector<std::size_t> offsets_; // size layers_.size() + 1, last = param_count
    std::vector<double> params_;
    int input_len_ = 0;
    std::uint64_t init_seed_ = 0;
};

// Cached per-layer inputs and pooling argmax indices from one forward pass.
struct ForwardTape {
    std::vector<std::vector<double>> inputs;      // activation entering each layer
    std::vector<std::vector<int>> pool_argmax;    // flat input indices, empty for non-pool layers
    int input_len = 0;
    std::size_t layer_count = 0;
};

// Full final activation, no tape. Kept separate so non-scalar stacks can be
// probed layer by layer.
std::vector<double> forward_vector(const LayerStack& stack, const std::vector<double>& input);

// Scalar prediction plus the tape backward() consumes. The stack must end
// in a single feature.
std::pair<double, ForwardTape> forward(const LayerStack& stack, const std::vector<double>& input);

// Exact gradients of prediction * upstream_grad with respect to every
// parameter. Max pooling routes to the recorded argmax (first occurrence on
// ties); the ReLU derivative at exactly 0 is 0.
std::vector<double> backward(const LayerStack& stack, const ForwardTape& tape, double upstream_grad);

// conv(1->8,k3) relu pool2 conv(8->16,k3) relu pool2 flatten dense(->1)
LayerStack build_dvs_cnn(int input_len);
// dense(len->100) relu dense(100->1)
LayerStack build_ablation_ann(int input_len);
// conv(1->64,k2) relu pool2 flatten dense(->100) relu dense(100->1)
LayerStack build_ablation_cnn(int input_len);

std::string stack_to_json(const LayerStack& stack);
LayerStack stack_from_json(const std::string& text);

}  // namespace dvs
