#pragma once

#include <stdexcept>
#include <string>

namespace dcit {

// All library failures surface as Error. Messages are meant for end users:
// they name the offending file/line/indicator where one exists.
class Error : public std::runtime_error {
  public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace dcit
