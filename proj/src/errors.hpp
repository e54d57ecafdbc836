#pragma once

#include <stdexcept>
#include <string>

namespace subdiff {

// Thrown when a numerical routine cannot certify its result to the
// accuracy it promises.  `achieved` is the routine's own estimate of
// the relative error it did reach.
class AccuracyError : public std::runtime_error {
public:
    AccuracyError(const std::string& what, double achieved)
        : std::runtime_error(what), achieved_(achieved) {}

    double achieved() const noexcept { return achieved_; }

private:
    double achieved_;
};

} // namespace subdiff
