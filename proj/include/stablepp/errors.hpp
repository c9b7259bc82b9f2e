#pragma once

#include <stdexcept>
#include <string>

namespace stablepp {

// The change of measure needed by the certified-path construction does not
// exist for the requested model (no positive root of the tilted cumulant).
class NoTiltRootError : public std::runtime_error {
 public:
  explicit NoTiltRootError(const std::string& what) : std::runtime_error(what) {}
};

// A sampler exceeded its hard iteration ceiling.  Hitting this indicates a
// misconfigured model (e.g. acceptance probability near zero), never a
// legitimate long run: the ceilings are astronomically above typical costs.
class SimulationLimitError : public std::runtime_error {
 public:
  explicit SimulationLimitError(const std::string& what)
      : std::runtime_error(what) {}
};

}  // namespace stablepp
