#pragma once

#include <stdexcept>
#include <string>

namespace qring {

// N < 2
class invalid_lattice : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// nonpositive lattice constant, mass, perimeter, ...
class invalid_parameter : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class index_error : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

class normalization_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Raised when two independent evaluation routes disagree beyond tolerance.
class consistency_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qring
