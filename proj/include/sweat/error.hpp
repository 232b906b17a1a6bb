#ifndef SWEAT_ERROR_HPP
#define SWEAT_ERROR_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace sweat {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad configuration or arguments (CLI exit code 1).
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Input data violates a contract: malformed files, missing words (exit code 2).
class DataError : public Error {
public:
    using Error::Error;
};

/// Filesystem failure (exit code 3).
class IoError : public Error {
public:
    using Error::Error;
};

struct MissingWords {
    std::string space;
    std::vector<std::string> words;
};

/// Vocabulary lookups failed; carries every missing word grouped per space.
class MissingWordsError : public DataError {
public:
    explicit MissingWordsError(std::vector<MissingWords> missing);

    const std::vector<MissingWords>& missing() const noexcept { return missing_; }

private:
    std::vector<MissingWords> missing_;
};

} // namespace sweat

#endif
