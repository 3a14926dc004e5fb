#pragma once

#include <stdexcept>
#include <string>

namespace tablesem {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// table loading
struct EmptyTable : Error {
  using Error::Error;
};
struct RaggedRows : Error {
  using Error::Error;
};

// execution
struct TypeError : Error {
  using Error::Error;
};
struct NonNumeric : Error {
  using Error::Error;
};
struct NonSingleton : Error {
  using Error::Error;
};
struct ExecutionTooLarge : Error {
  using Error::Error;
};

// parsing / search
struct InvalidBeam : Error {
  using Error::Error;
};
struct SpaceExplosion : Error {
  using Error::Error;
};

// learning
struct EmptyCandidates : Error {
  using Error::Error;
};

// configuration / io
struct ConfigError : Error {
  using Error::Error;
};
struct MissingModel : Error {
  using Error::Error;
};
struct MissingStore : Error {
  using Error::Error;
};
struct SyntaxError : Error {
  using Error::Error;
};

}  // namespace tablesem
