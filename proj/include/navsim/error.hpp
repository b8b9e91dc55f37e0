#pragma once

#include <stdexcept>
#include <string>

namespace navsim {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed scene file, config document or protocol message.
class ParseError : public Error {
 public:
  using Error::Error;
};

// Semantically invalid configuration (bad sensor spec, agent parameters, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

class GenerationError : public Error {
 public:
  using Error::Error;
};

// No start/goal pair could be produced for the requested goal.
class GoalError : public Error {
 public:
  using Error::Error;
};

// Episode API misuse, e.g. stepping a finished episode.
class EpisodeError : public Error {
 public:
  using Error::Error;
};

}  // namespace navsim
