#pragma once

#include <stdexcept>
#include <string>

namespace freelevy {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NonConvergent : public Error {
public:
    NonConvergent(const std::string& what, double partial, double estimate)
        : Error(what), partial_(partial), estimate_(estimate) {}
    double partial() const { return partial_; }
    double estimate() const { return estimate_; }

private:
    double partial_;
    double estimate_;
};

class BracketFailure : public Error { using Error::Error; };
class WindowUnresolved : public Error { using Error::Error; };
class Unclassifiable : public Error { using Error::Error; };
class InvalidParams : public Error { using Error::Error; };
class UnknownFamily : public Error { using Error::Error; };
class UnknownReference : public Error { using Error::Error; };
class DivergentCompensator : public Error { using Error::Error; };
class PointMassError : public Error { using Error::Error; };
class InsufficientResolution : public Error { using Error::Error; };
class UnsupportedShape : public Error { using Error::Error; };
class UnknownCase : public Error { using Error::Error; };
class SpecError : public Error { using Error::Error; };

}  // namespace freelevy
