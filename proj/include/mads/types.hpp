#pragma once

#include <stdexcept>
#include <string>

namespace mads {

// Bad arguments to an operation (wrong n, malformed cluster layout, ...).
struct ParameterError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A run configuration that cannot work (missing knowledge flags, ...).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The simulation itself hit an impossible state (move through a port that
// does not exist, two settlers on one node). Always a bug in a protocol.
struct SimulationFault : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Colour { White, Grey, Black };

inline const char* to_string(Colour c) {
  switch (c) {
    case Colour::White: return "white";
    case Colour::Grey: return "grey";
    case Colour::Black: return "black";
  }
  return "?";
}

Colour colour_from_string(const std::string& s);

// Span of a robot in the greedy protocol: number of white robots in its
// closed neighbourhood, together with the owner id. Ordering is
// lexicographic on (count desc, owner_id asc); equal ids never occur.
struct SpanRecord {
  int count = 0;
  int owner_id = 0;

  friend bool operator==(const SpanRecord&, const SpanRecord&) = default;
};

// True if a should be preferred over b as the 2-hop winner.
inline bool span_beats(const SpanRecord& a, const SpanRecord& b) {
  if (a.count != b.count) return a.count > b.count;
  return a.owner_id < b.owner_id;
}

inline SpanRecord span_max(const SpanRecord& a, const SpanRecord& b) {
  return span_beats(a, b) ? a : b;
}

}  // namespace mads
