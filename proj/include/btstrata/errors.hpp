#ifndef BTSTRATA_ERRORS_HPP
#define BTSTRATA_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace btstrata {

struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

#define BTSTRATA_DEFINE_ERROR(Name)                                   \
    struct Name : Error {                                             \
        explicit Name(const std::string& what = #Name) : Error(what) {} \
    }

BTSTRATA_DEFINE_ERROR(DescriptorMismatch);
BTSTRATA_DEFINE_ERROR(DivisionByZero);
BTSTRATA_DEFINE_ERROR(BoundExceeded);
BTSTRATA_DEFINE_ERROR(WindowOverflow);
BTSTRATA_DEFINE_ERROR(NotIntegral);
BTSTRATA_DEFINE_ERROR(NotVertex);
BTSTRATA_DEFINE_ERROR(ZeroType);
BTSTRATA_DEFINE_ERROR(ZeroDim);
BTSTRATA_DEFINE_ERROR(SpaceMismatch);
BTSTRATA_DEFINE_ERROR(NotSandwiched);
BTSTRATA_DEFINE_ERROR(BadParameters);
BTSTRATA_DEFINE_ERROR(PiModularExcluded);
BTSTRATA_DEFINE_ERROR(WittIndexTooSmall);
BTSTRATA_DEFINE_ERROR(NotRational);
BTSTRATA_DEFINE_ERROR(InsufficientData);
BTSTRATA_DEFINE_ERROR(NotStable);

#undef BTSTRATA_DEFINE_ERROR

}  // namespace btstrata

#endif
