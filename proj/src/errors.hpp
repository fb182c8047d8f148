#ifndef CHAINBREAK_ERRORS_HPP
#define CHAINBREAK_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace chainbreak {

struct IoError : std::runtime_error {
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace chainbreak

#endif
