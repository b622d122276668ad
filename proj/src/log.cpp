#include "imbal/log.hpp"

#include <atomic>
#include <iostream>

namespace imbal {

namespace {
std::atomic<bool> g_enabled{true};
}

void set_notices_enabled(bool enabled) { g_enabled = enabled; }

void notice(std::string_view message) {
  if (g_enabled) std::clog << "imbal: " << message << '\n';
}

}  // namespace imbal
