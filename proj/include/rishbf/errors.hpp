#ifndef RISHBF_ERRORS_HPP
#define RISHBF_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace rishbf {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidConfig : public Error {
public:
    using Error::Error;
};

/// The paraxial expansion was requested where its small-correction premise fails.
class ParaxialInvalid : public Error {
public:
    using Error::Error;
};

/// F lost row rank; the RIS configuration cannot separate the users.
class RankDeficient : public Error {
public:
    RankDeficient(double sigma_min, double sigma_max)
        : Error("transmission matrix is rank deficient (sigma_min=" + std::to_string(sigma_min) +
                ", sigma_max=" + std::to_string(sigma_max) + ")"),
          sigma_min_(sigma_min) {}

    double sigma_min() const noexcept { return sigma_min_; }

private:
    double sigma_min_;
};

class Singular : public Error {
public:
    using Error::Error;
};

class NotInCodebook : public Error {
public:
    using Error::Error;
};

class InconsistentPair : public Error {
public:
    using Error::Error;
};

class DegenerateOrientation : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

}  // namespace rishbf

#endif  // RISHBF_ERRORS_HPP
