#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "epfano/model.hpp"

namespace epfano {

/// Shortest round-trip-safe text for CSV/JSON: 17 significant digits.
std::string format_number(double x);

/// Flat JSON object with keys omega1, omega2, k1, k2, g, f, c1_re, c1_im,
/// c2_re, c2_im. All keys are required and no others are accepted; violations
/// raise SchemaError naming the key.
OscillatorParams params_from_json(std::string_view text);
OscillatorParams load_params(const std::filesystem::path& path);
std::string params_to_json(const OscillatorParams& params);

void write_text_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace epfano
