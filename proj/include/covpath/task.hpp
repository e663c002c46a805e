#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace covpath {

enum class Task { Mowing, Exploration };

inline const char* to_string(Task t) { return t == Task::Mowing ? "mowing" : "exploration"; }

inline std::optional<Task> parse_task(std::string_view s) {
  if (s == "mowing") return Task::Mowing;
  if (s == "exploration") return Task::Exploration;
  return std::nullopt;
}

}  // namespace covpath
