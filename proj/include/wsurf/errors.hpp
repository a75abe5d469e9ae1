#pragma once

#include <stdexcept>
#include <string>

namespace wsurf {

// Base of every library error. `kind()` gives a stable tag for reports.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(kind + ": " + what), kind_(std::move(kind)) {}
    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

#define WSURF_ERROR(Name)                                                   \
    class Name : public Error {                                             \
    public:                                                                 \
        explicit Name(const std::string& what) : Error(#Name, what) {}      \
    }

WSURF_ERROR(PunctureViolation);
WSURF_ERROR(BranchCutAmbiguity);
WSURF_ERROR(StencilOutOfDomain);
WSURF_ERROR(DegenerateData);
WSURF_ERROR(DivisionByZero);
WSURF_ERROR(GaugeZero);
WSURF_ERROR(ZeroHopf);
WSURF_ERROR(ToleranceNotMet);
WSURF_ERROR(PunctureOnPath);
WSURF_ERROR(NotHolomorphic);
WSURF_ERROR(NonRealResult);
WSURF_ERROR(EndpointMismatch);
WSURF_ERROR(GridTooCoarse);
WSURF_ERROR(UnknownName);
WSURF_ERROR(DegenerateTriple);
WSURF_ERROR(SpecParse);

#undef WSURF_ERROR

}  // namespace wsurf
