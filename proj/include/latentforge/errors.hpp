#pragma once

#include <stdexcept>
#include <string>

namespace latentforge {

// Thrown when a linear-algebra or optimization routine cannot produce a
// finite/valid result (e.g. Cholesky fails after jitter escalation).
class NumericFailure : public std::runtime_error {
public:
    explicit NumericFailure(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when persisted data cannot be read back (bad manifest, short file, ...).
class LoadFailure : public std::runtime_error {
public:
    explicit LoadFailure(const std::string& what) : std::runtime_error(what) {}
};

} // namespace latentforge
