#include <doctest.h>

#include <cmath>

#include "dvs/errors.hpp"
#include "dvs/network.hpp"
#include "dvs/rng.hpp"
#include "oracles.hpp"

using namespace dvs;

TEST_CASE("dvs cnn shape arithmetic at window 30") {
    LayerStack stack = build_dvs_cnn(30);
    CHECK(stack.param_count() == 529);
    const auto& shapes = stack.shapes();
    CHECK(shapes[1] == Shape{8, 28});   // conv1
    CHECK(shapes[3] == Shape{8, 14});   // pool1
    CHECK(shapes[4] == Shape{16, 12});  // conv2
    CHECK(shapes[6] == Shape{16, 6});   // pool2
    CHECK(shapes[7] == Shape{1, 96});   // flatten
    CHECK(stack.output_shape() == Shape{1, 1});
    CHECK(stack.layers().back().in_features == 96);
}

TEST_CASE("dvs cnn minimum input length") {
    LayerStack eleven = build_dvs_cnn(11);
    CHECK(eleven.layers().back().in_features == 16);
    CHECK(eleven.output_shape() == Shape{1, 1});

    // 10 -> 8 -> 4 -> 2 -> 1 still leaves one sample everywhere
    LayerStack ten = build_dvs_cnn(10);
    CHECK(ten.layers().back().in_features == 16);

    CHECK_THROWS_AS(build_dvs_cnn(9), ShapeError);
}

TEST_CASE("ablation ann parameter counts") {
    CHECK(build_ablation_ann(30).param_count() == 3201);
    CHECK(build_ablation_ann(1).param_count() == 301);
}

TEST_CASE("ablation ann with zero parameters outputs zero") {
    LayerStack stack = build_ablation_ann(4);
    auto [pred, tape] = forward(stack, {1.5, -2.0, 3.0, 0.25});
    CHECK(pred == 0.0);
}

TEST_CASE("ablation cnn shape arithmetic") {
    LayerStack stack = build_ablation_cnn(30);
    const auto& shapes = stack.shapes();
    CHECK(shapes[1] == Shape{64, 29});
    CHECK(shapes[3] == Shape{64, 14});
    CHECK(shapes[4] == Shape{1, 896});
    CHECK(shapes[5] == Shape{1, 100});
    CHECK(stack.output_shape() == Shape{1, 1});

    LayerStack three = build_ablation_cnn(3);
    CHECK(three.shapes()[3] == Shape{64, 1});
    CHECK(three.shapes()[4] == Shape{1, 64});

    CHECK_THROWS_AS(build_ablation_cnn(2), ShapeError);
}

TEST_CASE("dense identity") {
    LayerStack stack({LayerSpec::dense(1, 1)}, 1);
    stack.params() = {1.0, 0.0};
    auto [pred, tape] = forward(stack, {42.0});
    CHECK(pred == 42.0);
}

TEST_CASE("hand convolution and pooling") {
    LayerStack conv({LayerSpec::conv1d(1, 1, 2)}, 3);
    conv.params() = {1.0, 1.0, 0.0};  // kernel [1,1], bias 0
    CHECK(forward_vector(conv, {1, 2, 3}) == std::vector<double>{3, 5});

    LayerStack stack({LayerSpec::conv1d(1, 1, 2), LayerSpec::maxpool1d(2)}, 3);
    stack.params() = {1.0, 1.0, 0.0};
    auto [pred, tape] = forward(stack, {1, 2, 3});
    CHECK(pred == 5.0);
}

TEST_CASE("relu clamps negatives") {
    LayerStack stack({LayerSpec::relu()}, 2);
    CHECK(forward_vector(stack, {-1, 2}) == std::vector<double>{0, 2});
}

TEST_CASE("max pooling truncates a trailing odd element") {
    LayerStack stack({LayerSpec::maxpool1d(2)}, 5);
    CHECK(stack.output_shape() == Shape{1, 2});
    CHECK(forward_vector(stack, {1, 9, 2, 3, 100}) == std::vector<double>{9, 3});
}

TEST_CASE("forward rejects wrong input sizes") {
    LayerStack stack = build_ablation_ann(4);
    CHECK_THROWS_AS(forward(stack, {1.0, 2.0}), ShapeError);
}

TEST_CASE("dense gradient by hand") {
    LayerStack stack({LayerSpec::dense(1, 1)}, 1);
    stack.params() = {0.5, 0.25};
    auto [pred, tape] = forward(stack, {3.0});
    CHECK(pred == doctest::Approx(1.75));
    std::vector<double> g = backward(stack, tape, 1.0);
    CHECK(g[0] == 3.0);  // d/dweight
    CHECK(g[1] == 1.0);  // d/dbias
}

TEST_CASE("relu pinned at exactly zero passes no gradient") {
    LayerStack stack({LayerSpec::dense(1, 1), LayerSpec::relu(), LayerSpec::dense(1, 1)}, 1);
    stack.params() = {0.0, 0.0, 2.0, 0.0};  // first dense outputs exactly 0
    auto [pred, tape] = forward(stack, {5.0});
    CHECK(pred == 0.0);
    std::vector<double> g = backward(stack, tape, 1.0);
    CHECK(g[0] == 0.0);
    CHECK(g[1] == 0.0);
    CHECK(g[2] == 0.0);  // second dense weight sees a zero activation
    CHECK(g[3] == 1.0);  // its bias still moves
}

TEST_CASE("backward rejects a tape from another stack") {
    LayerStack a = build_ablation_ann(4);
    LayerStack b = build_ablation_ann(5);
    a.initialize_params(1);
    b.initialize_params(1);
    auto [pred, tape] = forward(a, {1, 2, 3, 4});
    CHECK_THROWS_AS(backward(b, tape, 1.0), TapeMismatchError);
}

TEST_CASE("gradients match central finite differences") {
    Rng rng(4242);
    auto probe_stack = [&rng](LayerStack stack, int probes) {
        stack.initialize_params(rng.next_u64());
        int checked = 0;
        while (checked < probes) {
            std::vector<double> input(static_cast<std::size_t>(stack.input_len()));
            for (double& x : input) x = rng.uniform(-2, 2);
            auto [pred, tape] = forward(stack, input);
            if (oracle::near_kink(stack, tape, 1e-7)) continue;
            std::vector<double> analytic = backward(stack, tape, 1.0);
            const std::size_t p = rng.below(stack.param_count());
            const double fd = oracle::finite_diff(stack, input, p);
            CHECK(oracle::rel_err(analytic[p], fd) < 1e-4);
            ++checked;
        }
    };

    probe_stack(LayerStack({LayerSpec::dense(6, 1)}, 6), 10);
    probe_stack(LayerStack({LayerSpec::conv1d(1, 2, 3), LayerSpec::flatten(), LayerSpec::dense(1)}, 8), 15);
    probe_stack(LayerStack({LayerSpec::maxpool1d(2), LayerSpec::dense(1)}, 6), 10);
    probe_stack(LayerStack({LayerSpec::relu(), LayerSpec::dense(1)}, 5), 10);
    probe_stack(build_dvs_cnn(30), 40);
    probe_stack(build_ablation_cnn(30), 40);
    probe_stack(build_ablation_ann(30), 40);
}

TEST_CASE("stacks without nonlinearities respond affinely") {
    Rng rng(77);
    auto check_affine = [&rng](LayerStack stack) {
        stack.initialize_params(rng.next_u64());
        std::vector<double> x(static_cast<std::size_t>(stack.input_len()));
        std::vector<double> y(x.size()), mix(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) {
            x[i] = rng.uniform(-3, 3);
            y[i] = rng.uniform(-3, 3);
        }
        const double alpha = rng.uniform(0, 1);
        for (std::size_t i = 0; i < x.size(); ++i) mix[i] = alpha * x[i] + (1 - alpha) * y[i];
        const double fx = forward_vector(stack, x)[0];
        const double fy = forward_vector(stack, y)[0];
        const double fmix = forward_vector(stack, mix)[0];
        CHECK(std::fabs(fmix - (alpha * fx + (1 - alpha) * fy)) < 1e-9);
    };

    check_affine(LayerStack({LayerSpec::dense(10), LayerSpec::dense(10, 1)}, 12));
    check_affine(LayerStack({LayerSpec::conv1d(1, 3, 3), LayerSpec::flatten(), LayerSpec::dense(1)}, 9));
}

TEST_CASE("forward is deterministic") {
    LayerStack stack = build_dvs_cnn(30);
    stack.initialize_params(9);
    std::vector<double> input(30);
    Rng rng(3);
    for (double& x : input) x = rng.uniform(-1, 1);
    auto [a, ta] = forward(stack, input);
    auto [b, tb] = forward(stack, input);
    CHECK(a == b);
}

TEST_CASE("serialization round-trips parameters bit-exactly") {
    LayerStack stack = build_dvs_cnn(30);
    stack.initialize_params(123);
    LayerStack back = stack_from_json(stack_to_json(stack));
    CHECK(back.params() == stack.params());
    CHECK(back.input_len() == stack.input_len());
    CHECK(back.init_seed() == 123);
    CHECK(back.layers().size() == stack.layers().size());

    std::vector<double> input(30);
    Rng rng(5);
    for (double& x : input) x = rng.uniform(-1, 1);
    CHECK(forward(stack, input).first == forward(back, input).first);
}
