#include "dvs/series.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

#include <json.hpp>

#include "dvs/errors.hpp"
#include "dvs/rng.hpp"

namespace dvs {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

double parse_real(std::string_view field, std::size_t line, const char* what) {
    field = trim(field);
    double out = 0.0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), out);
    if (ec != std::errc{} || ptr != field.data() + field.size()) {
        throw ParseError(line, std::string("cannot parse ") + what + " '" + std::string(field) + "'");
    }
    if (!std::isfinite(out)) {
        throw ParseError(line, std::string("non-finite ") + what);
    }
    return out;
}

std::string format_real(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

}  // namespace

void TimeSeries::validate() const {
    if (times.size() != values.size()) {
        throw DimensionMismatchError("times and values differ in length");
    }
    if (size() < 2) {
        throw TooShortError("series needs at least 2 points, got " + std::to_string(size()));
    }
    for (std::size_t i = 0; i < size(); ++i) {
        if (!std::isfinite(times[i]) || !std::isfinite(values[i])) {
            throw NonFiniteError("non-finite entry at index " + std::to_string(i));
        }
        if (i > 0 && times[i] <= times[i - 1]) {
            throw OrderError(i + 2, "times not strictly increasing");
        }
    }
}

TimeSeries load_series(const std::string& csv_text) {
    TimeSeries series;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= csv_text.size()) {
        std::size_t eol = csv_text.find('\n', pos);
        std::string_view line(csv_text.data() + pos,
                              (eol == std::string::npos ? csv_text.size() : eol) - pos);
        pos = (eol == std::string::npos) ? csv_text.size() + 1 : eol + 1;
        ++line_no;

        std::string_view trimmed = trim(line);
        if (line_no == 1) {
            if (trimmed != "t,value") {
                throw ParseError(1, "expected header 't,value', got '" + std::string(trimmed) + "'");
            }
            continue;
        }
        if (trimmed.empty()) continue;  // trailing blank line

        std::size_t comma = trimmed.find(',');
        if (comma == std::string_view::npos) {
            throw ParseError(line_no, "expected 't,value' record");
        }
        double t = parse_real(trimmed.substr(0, comma), line_no, "time");
        double v = parse_real(trimmed.substr(comma + 1), line_no, "value");
        if (!series.times.empty() && t <= series.times.back()) {
            throw OrderError(line_no, "time " + format_real(t) + " does not increase");
        }
        series.times.push_back(t);
        series.values.push_back(v);
    }
    if (series.size() < 2) {
        throw TooShortError("series needs at least 2 rows, got " + std::to_string(series.size()));
    }
    return series;
}

std::string series_to_csv(const TimeSeries& series) {
    std::string out = "t,value\n";
    for (std::size_t i = 0; i < series.size(); ++i) {
        out += format_real(series.times[i]);
        out += ',';
        out += format_real(series.values[i]);
        out += '\n';
    }
    return out;
}

WindowSet make_windows(const std::vector<double>& values, std::size_t w) {
    if (w == 0) throw LengthError("window length must be positive");
    std::size_t n = values.size();
    if (n < w + 1) {
        throw TooShortError("need at least " + std::to_string(w + 1) + " points for window length " +
                            std::to_string(w) + ", got " + std::to_string(n));
    }
    WindowSet ws;
    ws.window_len = w;
    ws.source_len = n;
    ws.windows.reserve(n - w);
    for (std::size_t k = 0; k + w < n; ++k) {
        Window win;
        win.input.assign(values.begin() + static_cast<std::ptrdiff_t>(k),
                         values.begin() + static_cast<std::ptrdiff_t>(k + w));
        win.target = values[k + w];
        ws.windows.push_back(std::move(win));
    }
    return ws;
}

WindowSet make_windows(const TimeSeries& series, std::size_t w) {
    series.validate();
    return make_windows(series.values, w);
}

std::pair<WindowSet, WindowSet> split_train_test(const WindowSet& ws, double train_fraction) {
    if (ws.empty()) throw DegenerateSplitError("cannot split an empty window set");
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
        throw ConfigError("train_fraction must lie in (0,1)");
    }
    std::size_t cut = static_cast<std::size_t>(std::floor(static_cast<double>(ws.size()) * train_fraction));
    if (cut == 0 || cut == ws.size()) {
        throw DegenerateSplitError("split " + std::to_string(cut) + "/" +
                                   std::to_string(ws.size() - cut) + " leaves one side empty");
    }
    WindowSet train{ws.window_len, ws.source_len, {ws.windows.begin(), ws.windows.begin() + static_cast<std::ptrdiff_t>(cut)}};
    WindowSet test{ws.window_len, ws.source_len, {ws.windows.begin() + static_cast<std::ptrdiff_t>(cut), ws.windows.end()}};
    return {std::move(train), std::move(test)};
}

TimeSeries synth_series(const SynthSpec& spec) {
    if (spec.length < 2) throw ConfigError("synth length must be >= 2");
    if (spec.seasonal_period <= 0.0) throw ConfigError("seasonal_period must be positive");
    if (spec.noise_sigma < 0.0) throw ConfigError("noise_sigma must be non-negative");

    constexpr double two_pi = 2.0 * 3.141592653589793238462643383279502884;
    Rng rng(spec.seed);
    TimeSeries series;
    series.times.reserve(spec.length);
    series.values.reserve(spec.length);
    for (std::size_t i = 0; i < spec.length; ++i) {
        double x = static_cast<double>(i);
        double v = spec.base_level + spec.trend_slope * x +
                   spec.seasonal_amplitude * std::sin(two_pi * x / spec.seasonal_period);
        if (spec.noise_sigma > 0.0) v += rng.normal(0.0, spec.noise_sigma);
        series.times.push_back(x);
        series.values.push_back(v);
    }
    return series;
}

std::string windowset_to_json(const WindowSet& ws) {
    nlohmann::json j;
    j["window_len"] = ws.window_len;
    j["windows"] = nlohmann::json::array();
    for (const Window& w : ws.windows) {
        j["windows"].push_back({{"input", w.input}, {"target", w.target}});
    }
    return j.dump(2);
}

}  // namespace dvs
