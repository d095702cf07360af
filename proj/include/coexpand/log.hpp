#pragma once

#include <iostream>
#include <string_view>

namespace coexpand::log {

inline void warn(std::string_view msg) { std::cerr << "warning: " << msg << '\n'; }
inline void info(std::string_view msg) { std::cerr << msg << '\n'; }

}  // namespace coexpand::log
