#ifndef MWK_ERROR_HPP
#define MWK_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace mwk {

/// Broad failure categories; the CLI prints these as the machine-parsable prefix.
enum class ErrorKind { input, length, parse, io };

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& detail);

    ErrorKind kind() const noexcept { return kind_; }
    const std::string& detail() const noexcept { return detail_; }

private:
    ErrorKind kind_;
    std::string detail_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& detail);

}  // namespace mwk

#endif
