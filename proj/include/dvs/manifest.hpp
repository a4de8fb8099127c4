#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace dvs {

inline constexpr std::string_view kToolVersion = "dvs 0.1.0";

// FNV-1a, 64 bit; stable across platforms.
std::uint64_t fnv1a64(std::string_view bytes);
std::string fnv1a64_hex(std::string_view bytes);

std::string iso8601_utc_now();

// Written alongside every command's output so a run can be reproduced from
// the manifest alone.
struct RunManifest {
    std::string command_line;
    std::string tool_version{kToolVersion};
    std::uint64_t seed = 0;
    std::string config_hash;
    std::string input_digest;
    std::string started_at;
    std::string finished_at;

    std::string to_json() const;
};

}  // namespace dvs
