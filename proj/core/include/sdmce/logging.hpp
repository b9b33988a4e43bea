#pragma once

#include <string_view>

namespace sdmce::log
{

/// Sets the library log level from a name ("trace", "debug", "info", "warn",
/// "error", "off"). Unknown names leave the level unchanged.
void set_level(std::string_view level);

/// Reads SDMCE_LOG from the environment and applies it. Default level is "warn".
void init_from_env();

void debug(std::string_view msg);
void info(std::string_view msg);
void warn(std::string_view msg);

}  // namespace sdmce::log
