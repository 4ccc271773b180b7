#pragma once

#include <stdexcept>
#include <string>

namespace hyperqif {

/// Base class of every error raised by the library. The CLI maps any
/// subclass to exit code 2 with a one-line diagnostic.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class NegativeProbability : public Error { public: using Error::Error; };
class NotNormalized : public Error { public: using Error::Error; };
class LengthMismatch : public Error { public: using Error::Error; };
class UnknownLabel : public Error { public: using Error::Error; };
class SpaceMismatch : public Error { public: using Error::Error; };
class NotStochastic : public Error { public: using Error::Error; };
class DimensionMismatch : public Error { public: using Error::Error; };
class InvalidGainFunction : public Error { public: using Error::Error; };
class ZeroEnvironmentalVulnerability : public Error { public: using Error::Error; };
class NotAnAbstraction : public Error { public: using Error::Error; };
class DepthTooSmall : public Error { public: using Error::Error; };
class InvalidFormat : public Error { public: using Error::Error; };
class IoError : public Error { public: using Error::Error; };
class SchemaMismatch : public Error { public: using Error::Error; };
class TooManyMalformed : public Error { public: using Error::Error; };
class EmptyCorpus : public Error { public: using Error::Error; };
class UnknownAttribute : public Error { public: using Error::Error; };

}  // namespace hyperqif
