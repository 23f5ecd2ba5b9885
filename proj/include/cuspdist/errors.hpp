#pragma once

#include <stdexcept>
#include <string>

namespace cuspdist {

/// An interval refinement hit its precision cap without resolving a floor/sign.
struct undecidable_floor : std::runtime_error {
    explicit undecidable_floor(const std::string& what) : std::runtime_error(what) {}
};

/// (p, q) admits no determinant-one completion in the group.
struct not_completable : std::runtime_error {
    explicit not_completable(const std::string& what) : std::runtime_error(what) {}
};

/// A finite continued fraction prefix evaluates through a zero denominator.
struct degenerate_prefix : std::runtime_error {
    explicit degenerate_prefix(const std::string& what) : std::runtime_error(what) {}
};

/// Input on the singular set of a coordinate change (1 + xy = 0 and friends).
struct singular_input : std::runtime_error {
    explicit singular_input(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace cuspdist
