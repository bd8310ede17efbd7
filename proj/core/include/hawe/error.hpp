#pragma once

#include <stdexcept>
#include <string>

namespace hawe {

/// Raised when an input file or user-supplied data set is malformed or
/// inconsistent (bad TSV line, unknown node id, corrupt corpus file).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised by the walk and corpus layers when the graph cannot support the
/// requested operation (isolated start node, enumeration budget exceeded).
class GraphError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hawe
