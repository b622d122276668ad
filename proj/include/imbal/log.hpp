#pragma once

#include <string_view>

namespace imbal {

// Informational messages go to stderr unless silenced.
void set_notices_enabled(bool enabled);
void notice(std::string_view message);

}  // namespace imbal
