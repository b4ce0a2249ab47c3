#pragma once

#include <stdexcept>
#include <string>

#include "ifs/construct.hpp"

namespace ifs {

// Raised on any schema or validation problem; the CLI maps it to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

SystemSpec parse_config_text(const std::string& json_text);
SystemSpec parse_config(const std::string& path);

std::string emit_config_text(const SystemSpec& spec);
void emit_config(const SystemSpec& spec, const std::string& path);

}  // namespace ifs
