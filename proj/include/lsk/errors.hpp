#pragma once

#include <stdexcept>
#include <string>

namespace lsk {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

#define LSK_DEFINE_ERROR(Name)                                                \
    struct Name : Error {                                                     \
        explicit Name(const std::string& what = #Name) : Error(what) {}       \
    }

LSK_DEFINE_ERROR(DomainError);
LSK_DEFINE_ERROR(TimelikeSeparation);
LSK_DEFINE_ERROR(NotTimelikeSeparated);
LSK_DEFINE_ERROR(EmptyInput);
LSK_DEFINE_ERROR(Unbounded);
LSK_DEFINE_ERROR(DerivativeUndefined);
LSK_DEFINE_ERROR(SingularSystem);
LSK_DEFINE_ERROR(FlatOrDegenerate);
LSK_DEFINE_ERROR(DegenerateMetric);
LSK_DEFINE_ERROR(ChartExhausted);
LSK_DEFINE_ERROR(NotTangent);
LSK_DEFINE_ERROR(NotContracting);
LSK_DEFINE_ERROR(InfiniteBase);
LSK_DEFINE_ERROR(BoundaryOrderViolated);
LSK_DEFINE_ERROR(PreconditionFailed);
LSK_DEFINE_ERROR(DeltaTooLarge);
LSK_DEFINE_ERROR(NotInFuture);
LSK_DEFINE_ERROR(ConfigError);

#undef LSK_DEFINE_ERROR

} // namespace lsk
