#pragma once

#include <stdexcept>
#include <string>

namespace mobsig {

struct SingularTransform : std::runtime_error {
    explicit SingularTransform(const std::string& what) : std::runtime_error(what) {}
};

struct DegenerateConfiguration : std::runtime_error {
    explicit DegenerateConfiguration(const std::string& what) : std::runtime_error(what) {}
};

struct DegenerateTriple : std::runtime_error {
    explicit DegenerateTriple(const std::string& what) : std::runtime_error(what) {}
};

struct SampleCountTooSmall : std::runtime_error {
    explicit SampleCountTooSmall(const std::string& what) : std::runtime_error(what) {}
};

struct MalformedCsv : std::runtime_error {
    explicit MalformedCsv(const std::string& what) : std::runtime_error(what) {}
};

struct NonUniformGrid : std::runtime_error {
    explicit NonUniformGrid(const std::string& what) : std::runtime_error(what) {}
};

struct ShapeMismatch : std::runtime_error {
    explicit ShapeMismatch(const std::string& what) : std::runtime_error(what) {}
};

struct AtVertex : std::runtime_error {
    explicit AtVertex(const std::string& what) : std::runtime_error(what) {}
};

struct PoleInDomain : std::runtime_error {
    explicit PoleInDomain(const std::string& what) : std::runtime_error(what) {}
};

struct EmptyLevelSet : std::runtime_error {
    explicit EmptyLevelSet(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace mobsig
