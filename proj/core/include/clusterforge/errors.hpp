#ifndef CLUSTERFORGE_ERRORS_HPP
#define CLUSTERFORGE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace clusterforge {

// Requested size exceeds the hard cap of an exhaustive enumeration.
class capacity_error : public std::runtime_error {
public:
    explicit capacity_error(const std::string& what) : std::runtime_error(what) {}
};

// The model violates a structural precondition (stability, summability, ...).
class model_error : public std::runtime_error {
public:
    explicit model_error(const std::string& what) : std::runtime_error(what) {}
};

// A rigorous bound was violated numerically; signals a bug or a
// miscertified assumption, never a routine failure.
class inconsistency_error : public std::runtime_error {
public:
    explicit inconsistency_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace clusterforge

#endif
