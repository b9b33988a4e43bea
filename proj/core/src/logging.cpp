#include "sdmce/logging.hpp"

#include <cstdlib>
#include <memory>
#include <mutex>

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

namespace sdmce::log
{

namespace
{
std::shared_ptr<spdlog::logger> logger()
{
    static std::once_flag once;
    static std::shared_ptr<spdlog::logger> instance;
    std::call_once(once, [] {
        instance = spdlog::stderr_color_mt("sdmce");
        instance->set_level(spdlog::level::warn);
        instance->set_pattern("[%l] %v");
    });
    return instance;
}
}  // namespace

void set_level(std::string_view level)
{
    auto lvl = spdlog::level::from_str(std::string(level));
    if (lvl == spdlog::level::off && level != "off") {
        return;
    }
    logger()->set_level(lvl);
}

void init_from_env()
{
    if (const char* env = std::getenv("SDMCE_LOG")) {
        set_level(env);
    }
}

void debug(std::string_view msg) { logger()->debug(msg); }
void info(std::string_view msg) { logger()->info(msg); }
void warn(std::string_view msg) { logger()->warn(msg); }

}  // namespace sdmce::log
