#pragma once

#include <stdexcept>
#include <string>

namespace coexpand {

// Bad input data: unreadable files, malformed records, violated invariants of
// loaded structures. The CLI maps this to exit code 2.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Entity id not present in a store or catalog.
class LookupError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

}  // namespace coexpand
