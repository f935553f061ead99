#include "mwk/error.hpp"

namespace mwk {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::input:
        return "input_error";
    case ErrorKind::length:
        return "length_error";
    case ErrorKind::parse:
        return "parse_error";
    case ErrorKind::io:
        return "io_error";
    }
    return "error";
}

Error::Error(ErrorKind kind, const std::string& detail)
    : std::runtime_error(std::string(to_string(kind)) + ": " + detail), kind_(kind), detail_(detail) {}

void fail(ErrorKind kind, const std::string& detail) {
    throw Error(kind, detail);
}

}  // namespace mwk
