// Copyright 2026 The qwgasket Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qwg {

/// Base class for everything this library throws on its own account.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A vertex or port that is not part of the graph was requested.
class UnknownVertex : public Error {
 public:
  using Error::Error;
};

/// Amplitude found on a port that does not exist, or a state bound to
/// a different graph.
class StateError : public Error {
 public:
  using Error::Error;
};

/// Two fields/states over gaskets of different generation were combined.
class GraphMismatch : public Error {
 public:
  using Error::Error;
};

/// Dense construction refused because the port count is above the cap.
class CapExceeded : public Error {
 public:
  CapExceeded(std::size_t requested, std::size_t cap)
      : Error("dense dimension " + std::to_string(requested) +
              " exceeds the configured cap of " + std::to_string(cap)),
        requested_(requested),
        cap_(cap) {}
  std::size_t requested() const { return requested_; }
  std::size_t cap() const { return cap_; }

 private:
  std::size_t requested_;
  std::size_t cap_;
};

/// Power-law fit could not be performed on the given data.
class FitError : public Error {
 public:
  using Error::Error;
};

/// Invalid experiment configuration; the message names the field.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Observer callback failed during evolve(); carries the step index.
class EvolutionAborted : public Error {
 public:
  EvolutionAborted(std::size_t step, const std::string& what)
      : Error("observer failed at step " + std::to_string(step) + ": " + what),
        step_(step) {}
  std::size_t step() const { return step_; }

 private:
  std::size_t step_;
};

}  // namespace qwg
