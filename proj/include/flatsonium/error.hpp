#pragma once

#include <stdexcept>
#include <string>

namespace flatsonium {

/// Raised when an eigensolver or finite-difference step cannot produce a
/// trustworthy number. Carries the Phi_2 / Phi_0 bias it failed at, when known.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what, double phi2_over_phi0 = 0.0,
                            bool has_location = false)
        : std::runtime_error(has_location ? what + " (at phi2/phi0 = " + std::to_string(phi2_over_phi0) + ")"
                                          : what),
          phi2_(phi2_over_phi0),
          has_location_(has_location) {}

    double phi2_over_phi0() const noexcept { return phi2_; }
    bool has_location() const noexcept { return has_location_; }

private:
    double phi2_;
    bool has_location_;
};

/// The phase offset of the combined SQUID term is undefined (E_J,eff == 0).
class DegenerateOffsetError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// The phase-grid window clips the requested eigenfunctions.
class WindowTooSmallError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// The sweet-spot scan saw sign changes in adjacent intervals.
class GridTooCoarseError : public NumericalError {
public:
    GridTooCoarseError(const std::string& what, std::size_t suggested_grid_n)
        : NumericalError(what), suggested_grid_n_(suggested_grid_n) {}

    std::size_t suggested_grid_n() const noexcept { return suggested_grid_n_; }

private:
    std::size_t suggested_grid_n_;
};

/// Malformed or out-of-range configuration input.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace flatsonium
