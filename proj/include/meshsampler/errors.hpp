#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace meshsampler {

/// Malformed OBJ/MTL/PLY input. `line()` is 0 when the error is not tied to a line.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t line = 0)
        : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

class TextureError : public std::runtime_error {
public:
    TextureError(const std::string& path, const std::string& why)
        : std::runtime_error(path + ": " + why), path_(path) {}
    const std::string& path() const { return path_; }

private:
    std::string path_;
};

class DegenerateGeometryError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

class EmptySurfaceError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

class EmptyInputError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace meshsampler
