#pragma once

#include <stdexcept>
#include <string>

namespace reviewpulse {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DecodeError : public Error {
public:
    DecodeError(const std::string& what, std::string key)
        : Error(what + " (key: " + key + ")")
        , key_(std::move(key))
    {
    }

    const std::string& key() const { return key_; }

private:
    std::string key_;
};

class PRNotFound : public Error {
public:
    using Error::Error;
};

class UnsupportedContent : public Error {
public:
    using Error::Error;
};

class CompareError : public Error {
public:
    using Error::Error;
};

class InvalidPath : public Error {
public:
    using Error::Error;
};

class FixtureMiss : public Error {
public:
    using Error::Error;
};

class RateLimitExhausted : public Error {
public:
    using Error::Error;
};

class HunkParseError : public Error {
public:
    using Error::Error;
};

class SliceError : public Error {
public:
    using Error::Error;
};

class ApproximationError : public Error {
public:
    using Error::Error;
};

class ReconstructionError : public Error {
public:
    using Error::Error;
};

class BackendFormatError : public Error {
public:
    using Error::Error;
};

class BackendUnavailable : public Error {
public:
    using Error::Error;
};

class FeatureError : public Error {
public:
    using Error::Error;
};

class SplitError : public Error {
public:
    using Error::Error;
};

class OracleTooLarge : public Error {
public:
    using Error::Error;
};

} // namespace reviewpulse
