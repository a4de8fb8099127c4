#pragma once

#include <string>

#include "dvs/training.hpp"

namespace dvs {

// Flat run configuration consumed by the CLI: the training protocol plus
// the windowing and split parameters. Unknown keys are rejected and every
// problem is reported in one error.
struct RunConfig {
    TrainConfig train;
    int window_len = 30;
    double train_fraction = 0.8;
    bool drop_last = false;  // drop the final window; see README on window counts

    void validate() const;
};

RunConfig run_config_from_json(const std::string& text);
std::string run_config_to_json(const RunConfig& cfg);

}  // namespace dvs
