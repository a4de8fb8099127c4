#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace dvs {

// Ordered (time, value) pairs. Times strictly increasing, length >= 2,
// values finite; validate() enforces all three.
struct TimeSeries {
    std::vector<double> times;
    std::vector<double> values;

    std::size_t size() const { return values.size(); }
    void validate() const;
};

struct Window {
    std::vector<double> input;
    double target = 0.0;
};

// Sliding windows of length w over a source series; window k holds
// values[k .. k+w-1] with values[k+w] as its target.
struct WindowSet {
    std::size_t window_len = 0;
    std::size_t source_len = 0;
    std::vector<Window> windows;

    std::size_t size() const { return windows.size(); }
    bool empty() const { return windows.empty(); }
};

// Deterministic trend + season + noise generator, stand-in for series that
// cannot be redistributed.
struct SynthSpec {
    std::size_t length = 0;
    double trend_slope = 0.0;
    double seasonal_amplitude = 0.0;
    double seasonal_period = 1.0;
    double noise_sigma = 0.0;
    double base_level = 0.0;
    std::uint64_t seed = 0;
};

// CSV with header exactly `t,value`; throws ParseError / OrderError /
// TooShortError with the offending 1-based line number where applicable.
TimeSeries load_series(const std::string& csv_text);

std::string series_to_csv(const TimeSeries& series);

WindowSet make_windows(const TimeSeries& series, std::size_t w);
WindowSet make_windows(const std::vector<double>& values, std::size_t w);

// Chronological split: first floor(count * train_fraction) windows train,
// the rest test. Never shuffles.
std::pair<WindowSet, WindowSet> split_train_test(const WindowSet& ws, double train_fraction);

TimeSeries synth_series(const SynthSpec& spec);

std::string windowset_to_json(const WindowSet& ws);

}  // namespace dvs
