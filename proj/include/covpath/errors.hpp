#pragma once

#include <stdexcept>
#include <string>

namespace covpath {

class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error("parse error: " + what) {}
};

class GeometryError : public std::runtime_error {
 public:
  explicit GeometryError(const std::string& what) : std::runtime_error("geometry error: " + what) {}
};

class StartInObstacle : public std::runtime_error {
 public:
  explicit StartInObstacle(const std::string& what) : std::runtime_error("start in obstacle: " + what) {}
};

class PoseOutsideMap : public std::runtime_error {
 public:
  explicit PoseOutsideMap(const std::string& what) : std::runtime_error("pose outside map: " + what) {}
};

class SteppingFinishedEpisode : public std::logic_error {
 public:
  SteppingFinishedEpisode() : std::logic_error("step() called on a finished episode") {}
};

}  // namespace covpath
