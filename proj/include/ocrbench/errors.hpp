#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ocrbench {

/// Base of every error the toolkit raises.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input was readable but violates a contract. Maps to CLI exit status 1.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// A file or directory could not be read or written. Maps to CLI exit status 2.
class IoError : public Error {
public:
    using Error::Error;
};

class EmptyNameError : public ValidationError {
public:
    EmptyNameError() : ValidationError("name is empty after trimming") {}
};

class ParseError : public ValidationError {
public:
    ParseError(const std::string& what, std::size_t byte_offset)
        : ValidationError(what + " (at byte " + std::to_string(byte_offset) + ")"),
          byte_offset_(byte_offset) {}
    explicit ParseError(const std::string& what) : ValidationError(what) {}

    std::size_t byte_offset() const noexcept { return byte_offset_; }

private:
    std::size_t byte_offset_ = 0;
};

class ReferentialIntegrityError : public ValidationError {
public:
    explicit ReferentialIntegrityError(std::vector<std::int64_t> ids)
        : ValidationError(describe(ids)), ids_(std::move(ids)) {}

    const std::vector<std::int64_t>& dangling_ids() const noexcept { return ids_; }

private:
    static std::string describe(const std::vector<std::int64_t>& ids) {
        std::string s = "annotations reference unknown image ids:";
        for (auto id : ids) s += " " + std::to_string(id);
        return s;
    }

    std::vector<std::int64_t> ids_;
};

class MixedGranularityError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class ConfigError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// Raised for samples with no ground truth; those never enter evaluation.
class ExcludedSampleError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

} // namespace ocrbench
