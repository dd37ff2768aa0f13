#pragma once

#include <stdexcept>
#include <string>

namespace streamqe {

// Input errors map to CLI exit code 2, internal errors to 1.
enum class ErrorKind { Input, Internal };

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& msg)
        : std::runtime_error(msg), kind_(kind) {}

    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void throw_input(const std::string& msg) {
    throw Error(ErrorKind::Input, msg);
}

[[noreturn]] inline void throw_internal(const std::string& msg) {
    throw Error(ErrorKind::Internal, msg);
}

}  // namespace streamqe
