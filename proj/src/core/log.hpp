#pragma once

#include <string>

namespace csf {

enum class LogLevel { Error = 0, Info = 1, Debug = 2 };

// Initial level comes from the CSF_LOG environment variable
// (error|info|debug); defaults to error.
LogLevel log_level();
void set_log_level(LogLevel level);

void log_error(const std::string &message);
void log_info(const std::string &message);
void log_debug(const std::string &message);

} // namespace csf
